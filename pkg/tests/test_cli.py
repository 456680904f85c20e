import math
import subprocess
import sys

import pytest

from gsp_euler import cli
from gsp_euler.gamma import GammaTable

from conftest import DIGON, DOUBLE_DIGON, FOUR_PARALLEL, TRIANGLE

K4_TEXT = """terminals 0 1
edge 1 0 1
edge 2 0 2
edge 3 0 3
edge 4 1 2
edge 5 1 3
edge 6 2 3
"""


@pytest.fixture
def write(tmp_path):
    def _write(text, name="in.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


def run(argv, capsys, **kw):
    code = cli.run(argv, **kw)
    out, err = capsys.readouterr()
    return code, out, err


def test_count(write, capsys):
    assert run(["count", write(DIGON)], capsys)[:2] == (0, "1\n")
    assert run(["count", write(FOUR_PARALLEL)], capsys)[:2] == (0, "6\n")


def test_count_not_eulerian(write, capsys):
    code, out, err = run(["count", write("B")], capsys)
    assert code == cli.EXIT_LEGALITY and out == "" and "not Eulerian" in err


def test_count_illegal(write, capsys):
    assert run(["count", write("S(B,P(B,B))")], capsys)[0] == cli.EXIT_LEGALITY


def test_count_syntax_error(write, capsys):
    code, _, err = run(["count", write("S(B)")], capsys)
    assert code == cli.EXIT_INPUT and "position" in err


def test_missing_file(capsys, tmp_path):
    assert run(["count", str(tmp_path / "nope")], capsys)[0] == cli.EXIT_INPUT


def test_usage_errors(write, capsys):
    f = write(DIGON)
    with pytest.raises(SystemExit) as info:
        cli.run(["frobnicate"])
    assert info.value.code == cli.EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        cli.run(["sample", f, "--emit", "dots", "--seed", "1"])
    assert info.value.code == cli.EXIT_USAGE
    assert run(["sample", f], capsys)[0] == cli.EXIT_USAGE
    assert run(["sample", f, "--seed", "-1"], capsys)[0] == cli.EXIT_USAGE
    assert run(["sample", f, "--seed", str(2**64)], capsys)[0] == cli.EXIT_USAGE
    assert run(["sample", f, "--seed", "1", "--samples", "0"], capsys)[0] == cli.EXIT_USAGE
    assert run(["verify", f, "--max-edges", "15"], capsys)[0] == cli.EXIT_USAGE


def test_sample_digon(write, capsys):
    code, out, _ = run(["sample", write(DIGON), "--seed", "123"], capsys)
    assert code == 0 and out == "1:+,2:-\n"


def test_sample_deterministic(write, capsys):
    f = write(DOUBLE_DIGON)
    a = run(["sample", f, "--seed", str(2**64 - 1), "--samples", "2"], capsys)
    b = run(["sample", f, "--seed", str(2**64 - 1), "--samples", "2"], capsys)
    assert a == b and len(a[1].splitlines()) == 2


def test_sample_double_digon_both_tours(write, capsys):
    code, out, _ = run(["sample", write(DOUBLE_DIGON), "--seed", "5", "--samples", "10000"], capsys)
    assert code == 0
    assert set(out.splitlines()) == {"1:+,3:+,4:-,2:-", "1:+,4:+,3:-,2:-"}


def test_sample_vertices(write, capsys):
    code, out, _ = run(["sample", write(TRIANGLE), "--seed", "0", "--emit", "vertices"], capsys)
    walk = out.split()
    assert code == 0 and walk[0] == walk[-1] and len(walk) == 4


def test_verify_pass(write, capsys):
    code, out, _ = run(["verify", write(DOUBLE_DIGON)], capsys)
    assert code == 0
    assert out.splitlines() == [
        "PASS count 2=2", "PASS gamma(0) 1=1", "PASS gamma(2) 2=2", "PASS 3/3 checks",
    ]
    code, out, _ = run(["verify", write(TRIANGLE)], capsys)
    assert code == 0 and "PASS count 1=1" in out


def test_verify_detects_corrupted_table(write, capsys):
    def corrupt(tables):
        root = tables[-1]
        tables[-1] = GammaTable(root.d_s, root.d_t, [v + 1 for v in root.values])
        return tables

    code, out, _ = run(["verify", write(DOUBLE_DIGON)], capsys, table_hook=corrupt)
    assert code == cli.EXIT_INTERNAL
    assert "FAIL count" in out and out.splitlines()[-1].startswith("FAIL")


def test_verify_refuses_large(write, capsys):
    text = "P(" * 5 + "B" + ",B)" * 5
    code, _, err = run(["verify", write(text), "--max-edges", "4"], capsys)
    assert code == cli.EXIT_USAGE and "--max-edges" in err


def test_realize(write, capsys):
    code, out, _ = run(["realize", write(DIGON)], capsys)
    assert code == 0 and out == "terminals 0 1\nedge 1 0 1\nedge 2 0 1\n"


def test_recognize(write, capsys):
    g = write("terminals 0 1\nedge 1 0 1\nedge 2 0 1\n")
    assert run(["recognize", g], capsys)[:2] == (0, "P(B,B)\n")
    code, _, err = run(["recognize", write(K4_TEXT)], capsys)
    assert code == cli.EXIT_RECOGNITION and "recognition failed" in err
    assert run(["recognize", write("terminals 0 1\nedge 2 0 1\n")], capsys)[0] == cli.EXIT_INPUT


def test_round_trip(write, capsys):
    text = "D(S(P(B,B),S(B,P(B,B))),P(B,S(P(B,B),B)))"
    _, g1, _ = run(["realize", write(text)], capsys)
    _, t1, _ = run(["recognize", write(g1, "g.txt")], capsys)
    _, g2, _ = run(["realize", write(t1, "t.txt")], capsys)
    assert g1 == g2


def test_comment_lines(write, capsys):
    assert run(["count", write("# four edges\n" + FOUR_PARALLEL + "\n")], capsys)[1] == "6\n"


def test_internal_assertion_exit(write, capsys, monkeypatch):
    from gsp_euler.errors import ArithmeticIntegrityError

    def boom(*a, **k):
        raise ArithmeticIntegrityError("non-integral term")

    monkeypatch.setattr(cli, "count_tours", boom)
    assert run(["count", write(DIGON)], capsys)[0] == cli.EXIT_INTERNAL


def test_console_script_entry(write):
    proc = subprocess.run([sys.executable, "-m", "gsp_euler.cli", "count", write(DOUBLE_DIGON)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "2\n"


def test_huge_count_has_no_separators(write, capsys):
    # a bundle of 2n parallel edges has (2n-1)! tours: fix edge 1, order the rest
    text = "P(" * 31 + "B" + ",B)" * 31
    code, out, _ = run(["count", write(text)], capsys)
    assert code == 0 and out == f"{math.factorial(31)}\n"
