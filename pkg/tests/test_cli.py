import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quiverdmod.cli import parse_chain, run
from quiverdmod.exactlin import Matrix
from quiverdmod.corpus import concurrent_lines, corpus, two_lines
from quiverdmod.jsonio import (InputError, arrangement_from_json, arrangement_to_json, rat_from_json, rat_to_json,
                               rep_from_json, rep_to_json, weights_to_json)
from quiverdmod.quiver import Rep
from quiverdmod.weights import Weights


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)
    return write


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


@pytest.fixture
def a2(files):
    return files("a2.json", arrangement_to_json(two_lines())), files("w.json", weights_to_json(
        Weights([Fraction(1, 2), Fraction(1, 3)])))


@given(st.fractions(max_denominator=50))
def test_rational_round_trip(q):
    assert rat_from_json(rat_to_json(q)) == q


def test_bad_rationals():
    for v in ("1/0", "x", 1.5, True, None):
        with pytest.raises(InputError):
            rat_from_json(v)


@pytest.mark.parametrize("name", list(corpus()))
def test_rep_round_trip(name, corpus_vermas):
    arr, w, M = corpus_vermas[name]
    arr2 = arrangement_from_json(json.loads(json.dumps(arrangement_to_json(arr))))
    assert arr2.graph == arr.graph
    M2 = rep_from_json(json.loads(json.dumps(rep_to_json(M))), arr.graph)
    assert M2 == M


def test_check_zero_rep(files, a2, capsys):
    arr, _ = a2
    rep = files("zero.json", rep_to_json(Rep.zero(two_lines().graph)))
    code, out, _ = call(capsys, "check", "-a", arr, "-r", rep)
    assert code == 0 and out["passed"] is True and out["schema"] == "1"


def test_nonres_integer_weights(files, a2, capsys):
    arr, _ = a2
    w = files("w10.json", {"weights": ["1", "0"]})
    code, out, _ = call(capsys, "nonres", "-a", arr, "-w", w)
    assert code == 1 and not out["passed"]
    assert {"kind": "arrow", "arrow": [[], [0]], "value": "1"} in out["witnesses"]


def test_verma_a3(files, capsys):
    arr = files("a3.json", arrangement_to_json(concurrent_lines(3)))
    w = files("w3.json", {"weights": ["1/2", "1/3", "1/5"]})
    code, out, _ = call(capsys, "verma", "-a", arr, "-w", w)
    assert code == 0 and out["dims"]["[0,1,2]"] == 2
    assert len(out["flag_bases"]["[0,1,2]"]) == 2


def test_emitted_rep_reverifies(files, a2, capsys):
    arr, w = a2
    code, out, _ = call(capsys, "verma", "-a", arr, "-w", w)
    rep = files("m.json", out["rep"])
    code2, first, _ = call(capsys, "check", "-a", arr, "-r", rep)
    code3, second, _ = call(capsys, "check", "-a", arr, "-w", w)
    assert code == code2 == code3 == 0 and first == second


def test_determinism(a2, capsys):
    arr, w = a2
    run(["koszul", "-a", arr, "-w", w])
    one = capsys.readouterr().out
    run(["koszul", "-a", arr, "-w", w])
    assert one == capsys.readouterr().out


@pytest.mark.parametrize("cmd", [["poset"], ["dual"], ["incat"], ["koszul"], ["model", "--cutoff", "3"],
                                 ["grcheck", "--flat", "[0]", "--cutoff", "3"],
                                 ["theta", "--flat", "[0,1]", "--cutoff", "4"],
                                 ["specialize", "--flat", "[0],[0,1]"]])
def test_commands_pass_on_a2(cmd, a2, capsys):
    arr, w = a2
    code, out, err = call(capsys, cmd[0], "-a", arr, "-w", w, *cmd[1:])
    assert code == 0, err
    assert out["command"] == cmd[0]


def test_theta_reports_eigenvalues(a2, capsys):
    arr, w = a2
    code, out, _ = call(capsys, "theta", "-a", arr, "-w", w, "--flat", "[0,1]", "--cutoff", "4")
    assert code == 0 and out["lambda_alpha"] == "5/6"
    assert all(s["eigenvalue"] == s["expected"] for s in out["slices"])


def test_violating_rep_exits_one(files, a2, capsys):
    arr, w = a2
    g = two_lines().graph
    one = Matrix.from_rows([[1]], 1)
    bad = Rep(g, {v: 1 for v in g.vertices},
              {((0,), ()): one, ((), (1,)): one, ((0,), (0, 1)): one, ((0, 1), (1,)): one})
    rep = files("bad.json", rep_to_json(bad))
    for cmd in ("check", "koszul", "model"):
        code, out, _ = call(capsys, cmd, "-a", arr, "-r", rep)
        assert code == 1 and out["passed"] is False


@pytest.mark.parametrize("argv", [
    ["poset", "-a", "missing.json"],
    ["grcheck", "-a", "{arr}", "-w", "{w}", "--flat", "[7]"],
    ["grcheck", "-a", "{arr}", "-w", "{w}", "--flat", "0,1"],
    ["verma", "-a", "{arr}"],
    ["model", "-a", "{arr}", "-w", "{w}", "--cutoff", "-1"],
    ["verma", "-a", "{arr}", "-w", "{bad}"],
    ["check", "-a", "{arr}", "-r", "{shape}"],
])
def test_input_errors_exit_two(argv, a2, files, capsys):
    arr, w = a2
    bad = files("bad_w.json", {"weights": ["1/2"]})
    shape = files("shape.json", {"dims": {"[]": 1, "[0]": 1},
                                 "maps": [{"from": [0], "to": [], "matrix": [["1", "2"]]}]})
    argv = [a.format(arr=arr, w=w, bad=bad, shape=shape) for a in argv]
    code, out, err = call(capsys, *argv)
    assert code == 2 and out is None and err.startswith("error:")


def test_parse_chain():
    assert parse_chain("[0],[0,1]") == [(0,), (0, 1)]
    assert parse_chain("[]") == [()]
    with pytest.raises(InputError):
        parse_chain("0,1")


def test_console_entry_point(a2):
    arr, w = a2
    proc = subprocess.run([sys.executable, "-m", "quiverdmod.cli", "poset", "-a", arr],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)["vertices"]) == 4
