import json

import pytest

from cil.cli import EXIT_ERROR, EXIT_NO, EXIT_OK, run
from cil.demo import DEMO_CONFIG

MARY = ("prim K : 2. prim L : 2. prim M : -1. "
        "comb[0](link[{1,2}](comb[*,1](K, link[{1,2}](L))), M).")
CL = "prim A : 1. prim B : 2. comb[1](link[{1,2}](B), A)."
CL_NF = "prim A : 1. prim B : 2. link[{1,2}](comb[1,1](B, A, A))."


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sort(capsys):
    assert call(capsys, "sort", MARY)[:2] == (EXIT_OK, "0\n")


def test_parse_round_trip(capsys, tmp_path):
    code, out, _ = call(capsys, "parse", MARY)
    assert code == EXIT_OK
    f = tmp_path / "t.cil"
    f.write_text(out)
    assert call(capsys, "parse", str(f))[1] == out


def test_parse_json_then_load(capsys, tmp_path):
    code, out, _ = call(capsys, "parse", "--format", "json", CL)
    assert code == EXIT_OK and json.loads(out)["kind"] == "cil"
    f = tmp_path / "t.json"
    f.write_text(out)
    assert call(capsys, "sort", str(f))[1] == "1\n"


def test_equiv_exit_codes(capsys):
    assert call(capsys, "equiv", CL, CL_NF)[0] == EXIT_OK
    assert call(capsys, "equiv", CL, "prim A : 1. prim B : 2. comb[1](link[{1,2}](B), B).")[0] in (EXIT_NO, EXIT_ERROR)
    assert call(capsys, "equiv", "prim P : 1. P.", "prim Q : 1. Q.")[0] == EXIT_NO


def test_parse_errors_exit_2(capsys):
    code, _, err = call(capsys, "sort", "comb[](K).")
    assert code == EXIT_ERROR and "empty comb-sequence" in err
    assert call(capsys, "sort", "prim P : 1. Q.")[0] == EXIT_ERROR
    assert call(capsys, "sort", '{"version": 1, "kind": "cil", "term": {"op": "frob"}}')[0] == EXIT_ERROR
    assert call(capsys, "nonsense")[0] == EXIT_ERROR


def test_normalize_trace(capsys):
    code, out, _ = call(capsys, "normalize", "--trace", CL)
    lines = out.strip().splitlines()
    assert code == EXIT_OK and "R22" in lines[0]
    assert lines[-1] == "link[{1,2}](comb[1,1](B, A, A))"
    code, out, _ = call(capsys, "normalize", "--random", "--seed", "3", CL)
    assert out.strip() == lines[-1]
    code, out, _ = call(capsys, "normalize", "--trace", "--format", "json", CL)
    assert json.loads(out)["steps"][0]["rule"] == "R22"


def test_fuel_flag(capsys):
    assert call(capsys, "normalize", "--fuel", "0", CL)[0] == EXIT_ERROR


def test_bl_commands(capsys):
    code, out, _ = call(capsys, "to-bl", MARY)
    assert code == EXIT_OK and out.strip() == "[K(M, [L(M, M)])]"
    code, out, _ = call(capsys, "from-bl", "prim m : -1. [K(m,[L(m,m)])]")
    assert out.strip().endswith("comb[0,0](K, m, comb[0,0](L, m, m)).")
    code, out, _ = call(capsys, "decompose", "--bl", "[P(x,[Q(x)])]_x")
    assert code == EXIT_OK and out.splitlines()[0].startswith("link[{1,2}]")


def test_graph(capsys):
    code, out, _ = call(capsys, "graph", "--dot", MARY)
    assert code == EXIT_OK and out.startswith("digraph")
    assert call(capsys, "graph", "--dot", MARY)[1] == out


def test_model_commands(capsys, tmp_path):
    cfg = tmp_path / "m.json"
    cfg.write_text(json.dumps(DEMO_CONFIG))
    assert call(capsys, "model", "check", "--config", str(cfg))[0] == EXIT_OK
    code, out, _ = call(capsys, "model", "valid", "--config", str(cfg), "--suite", "fol", "--format", "json")
    assert code == EXIT_OK and json.loads(out)
    assert call(capsys, "model", "check")[0] == EXIT_ERROR
    assert call(capsys, "model", "check", "--config", str(tmp_path / "missing.json"))[0] == EXIT_ERROR


def test_demo(capsys, tmp_path):
    code, out, _ = call(capsys, "demo")
    assert code == EXIT_OK and "FAIL" not in out
    code, out, _ = call(capsys, "demo", "--dump-config")
    f = tmp_path / "d.json"
    f.write_text(out)
    assert call(capsys, "demo", "--config", str(f))[0] == EXIT_OK


@pytest.mark.parametrize("flag", ["--help"])
def test_help(capsys, flag):
    assert call(capsys, flag)[0] == EXIT_OK
