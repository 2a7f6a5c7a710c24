import io
import json
import subprocess
import sys

import pytest

from conftest import SAMPLE_CARDS, SAMPLE_DOMAINS
from genfactor.cli import run
from genfactor.egcc import model
from genfactor.gadgets import partitioned_graph, serialize_pclique
from genfactor.instance import parse_factor, parse_instance, serialize_instance, verify_factor
from genfactor.families import random_instance

SINGLE = "p genfactor 1 1 1\nu 1 1\nv 1 1\ne 1 1 1\n"
STAR_NO = "p genfactor 2 1 2\nu 1 1\nu 2 1\nv 1 0,3\ne 1 1 1\ne 2 1 1\n"


def call(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return p

    return write


def test_solve_single_edge(files):
    code, out = call("solve", files("single.gf", SINGLE))
    assert code == 0
    assert "w 1 1 1" in out.splitlines()


def test_solve_no(files):
    code, out = call("solve", files("star.gf", STAR_NO))
    assert code == 1 and out.strip() == "NO"


def test_verify_zero_factor(files):
    inst = files("single.gf", SINGLE)
    zero = files("zero.factor", "f genfactor 0\n")
    code, out = call("verify", inst, zero)
    assert code == 1 and "u 1" in out


def test_verify_structural_error(files, capsys):
    inst = files("single.gf", SINGLE)
    bad = files("bad.factor", "f genfactor 1\nw 1 2 1\n")
    code, _ = call("verify", inst, bad)
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_solve_then_verify(files, tmp_path):
    rng = __import__("random").Random(1)
    for n in range(25):
        inst = random_instance(rng)
        path = files(f"r{n}.gf", serialize_instance(inst))
        wit = tmp_path / f"r{n}.factor"
        code, out = call("solve", path, "--out", wit)
        if code == 0:
            assert out.strip() == "YES"
            assert call("verify", path, wit)[0] == 0
            assert verify_factor(inst, parse_factor(wit.read_text()))
        else:
            assert code == 1


def test_parallel_keeps_exit_code(files):
    rng = __import__("random").Random(2)
    for n in range(6):
        path = files(f"p{n}.gf", serialize_instance(random_instance(rng)))
        assert call("solve", path)[0] == call("solve", path, "--parallel", 2, "--deterministic")[0]


def test_stats_on_stderr(files, capsys):
    code, out = call("solve", files("single.gf", SINGLE), "--stats", "--fast-path", "off")
    err = capsys.readouterr().err
    assert code == 0 and "x_subsets_explored=" in err and "fast_path=False" in err
    assert "x_subsets_explored" not in out


def test_fast_path_on_rejects_weighted_lists(files):
    text = "p genfactor 1 1 1\nu 1 2\nv 1 2\ne 1 1 2\n"
    assert call("solve", files("w.gf", text), "--fast-path", "on")[0] == 2


def test_oracle_and_enumerate(files):
    path = files("single.gf", SINGLE)
    assert call("oracle", path) == (0, "f genfactor 1\nw 1 1 1\n")
    code, out = call("oracle", path, "--enumerate")
    assert code == 0 and out.startswith("# 1 factors")
    assert call("oracle", files("star.gf", STAR_NO))[0] == 1


def test_oracle_budget(files):
    out = io.StringIO()
    run(["gen", "gadget", "--A", "1,2,3", "--r", "2"], out)
    path = files("g.gf", out.getvalue())
    assert call("oracle", path, "--enumerate", "--budget", 3)[0] == 3


def test_egcc_sample_model(files):
    doc = {"variables": SAMPLE_DOMAINS, "cards": SAMPLE_CARDS}
    code, out = call("egcc", files("sample.json", json.dumps(doc)))
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 6 and all(line.startswith("assign ") for line in lines)
    alpha = dict(line.split()[1:] for line in lines)
    m = model(SAMPLE_DOMAINS, SAMPLE_CARDS)
    counts = {d: list(alpha.values()).count(d) for d in "abcde"}
    assert all(alpha[x] in SAMPLE_DOMAINS[x] for x in alpha)
    assert all(counts[d] in m.cards[d] for d in "abcde")


def test_egcc_inconsistent_and_bad(files):
    doc = {"variables": {"x": ["a"], "y": ["a"]}, "cards": {"a": [1]}}
    assert call("egcc", files("m.json", json.dumps(doc))) == (1, "inconsistent\n")
    assert call("egcc", files("bad.json", '{"variables": {"x": ["a"], "x": ["b"]}}'))[0] == 2


def test_gen_gadgets():
    code, out = call("gen", "gadget", "--A", "1,2", "--r", 1)
    assert code == 0
    inst = parse_instance(out)
    assert len(inst.edges) == 4
    code, out = call("gen", "gadget", "--A", "1,2", "--r", 0, "--rprime", 1)
    assert code == 0 and len(parse_instance(out).v_vertices) == 4
    assert call("gen", "gadget", "--A", "", "--r", 1)[0] == 2


def test_reduce_clique(files):
    G = partitioned_graph(2, 1, [((1, 1), (2, 1))])
    code, out = call("reduce", "clique", files("g.pclique", serialize_pclique(G)))
    assert code == 0
    inst = parse_instance(out)
    assert len(inst.v_vertices) == 7
    assert "# h_1,2 = v" in out


def test_bench(files, tmp_path):
    files("a.gf", SINGLE)
    files("b.gf", STAR_NO)
    code, out = call("bench", tmp_path)
    lines = out.splitlines()
    assert code == 0 and len(lines) == 2
    assert lines[0].startswith("a.gf YES time=") and lines[1].startswith("b.gf NO time=")
    assert "forest_solves=" in lines[0]


@pytest.mark.parametrize(
    "argv",
    [["nope"], ["solve"], ["solve", "/no/such/file"], ["solve", "x", "--fast-path", "maybe"]],
    ids=["unknown-command", "missing-arg", "missing-file", "bad-flag"],
)
def test_usage_errors(argv):
    assert call(*argv)[0] == 2


def test_module_entry_point(files):
    path = files("single.gf", SINGLE)
    proc = subprocess.run([sys.executable, "-m", "genfactor", "solve", str(path)], capture_output=True, text=True)
    assert proc.returncode == 0 and "w 1 1 1" in proc.stdout
