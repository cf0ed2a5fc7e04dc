import json

import pytest

from mfcalc import dsl
from mfcalc.cli import main
from mfcalc.runner import RunOptions, run

XY = """ring x, y weights 1, 1 degree 2;
potential W = x*y;
mf E = koszul([x], [y]);
mf F = shift(E);
print chern(E);
print euler(E, F);
check rrh(E, E);
"""


def _write(tmp_path, text, name="s.mf"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_run_ok(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["run", _write(tmp_path, XY), "--json", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["ok"] and len(rep["records"]) == 3
    assert rep["records"][0]["outputs"]["class"]["coefficients"] == {"1": "-1"}
    assert rep["records"][1]["outputs"]["euler"] == -1
    assert "[ok  ]" in capsys.readouterr().out


def test_input_errors_exit_2(tmp_path, capsys):
    assert main(["run", _write(tmp_path, "ring x; potential W = x^2")]) == 2
    assert main(["run", _write(tmp_path, "mf E = koszul([x],[y]);")]) == 2
    assert main(["run", str(tmp_path / "missing.mf")]) == 2
    assert main(["corpus", "no-such-corpus"]) == 2
    assert main(["hkr-check", "--vars", "2", "--names", "x", "--potential", "x"]) == 2
    assert "error:" in capsys.readouterr().err


def test_failed_check_exit_1(tmp_path):
    # d1*d0 has an off-diagonal entry, so this is not a factorization at all
    src = "ring x, y; potential W = x*y; mf E = factorization([[x, 0], [0, y]], [[y, 1], [0, x]]); check valid(E);"
    out = tmp_path / "r.json"
    assert main(["run", _write(tmp_path, src), "--json", str(out)]) == 1
    rec = json.loads(out.read_text())["records"][0]
    assert rec["ok"] is False and rec["command"] == "define" and "d1*d0" in rec["error"]


def test_strict_turns_warnings_into_failures(tmp_path):
    src = "ring x, y, z weights 1, 1, 1 degree 2; potential W = x*y + z^2; mf E = koszul([x, z], [y, z]); check rrh(E, E);"
    path = _write(tmp_path, src)
    assert main(["run", path]) == 0
    assert main(["run", path, "--strict"]) == 1


def test_json_is_deterministic(tmp_path):
    path = _write(tmp_path, XY + "check gauge(E);\ncheck closed(E);\n")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["run", path, "--json", str(a), "--seed", "4"]) == 0
    assert main(["run", path, "--json", str(b), "--seed", "4"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_corpus_calibration(tmp_path):
    out = tmp_path / "c.json"
    assert main(["corpus", "calibration", "--check", "all", "--trials", "1", "--json", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["ok"] and rep["reports"][0]["corpus_item"] == "xy"


def test_hkr_check(tmp_path):
    out = tmp_path / "h.json"
    assert main(["hkr-check", "--vars", "2", "--names", "x,y", "--potential", "x^3 + y^3", "--trials", "15", "--json", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["potential"] == "x^3 + y^3"
    assert rep["passed"]["chain_map"] == 15


def test_runner_record_errors_do_not_abort():
    s = dsl.parse("ring x, y weights 1, 1 degree 2; potential W = x*y; mf E = koszul([x],[y]); print bb(E, 7); print chern(E);")
    rep = run(s, RunOptions())
    assert [r["ok"] for r in rep.records] == [False, True]
    assert "out of range" in rep.records[0]["error"]


def test_trials_default_differs_per_verb():
    from mfcalc.cli import build_parser

    p = build_parser()
    assert p.parse_args(["run", "f"]).trials is None
    assert p.parse_args(["hkr-check", "--vars", "1", "--potential", "x1^3"]).trials is None


@pytest.mark.parametrize("verb", ["run", "corpus"])
def test_seed_changes_nothing_for_deterministic_prints(tmp_path, verb):
    if verb == "run":
        path = _write(tmp_path, XY)
        args = lambda s, o: ["run", path, "--seed", s, "--json", o]
    else:
        args = lambda s, o: ["corpus", "calibration", "--trials", "0", "--seed", s, "--json", o]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(args("1", str(a)))
    main(args("2", str(b)))
    ja, jb = json.loads(a.read_text()), json.loads(b.read_text())
    strip = lambda d: json.dumps(d, sort_keys=True).replace('"seed": 1', "").replace('"seed": 2', "")
    assert strip(ja) == strip(jb)
