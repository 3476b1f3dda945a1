"""End-to-end CLI tests: verbs, exit codes, determinism, fan files."""

import json

from toriclg.cli import main
from toriclg.fan import BUILTIN_NAMES

F2_TOML = """\
[fan]
dim = 2
rays = [[0, 1], [0, -1], [1, 0], [-1, -2]]
max_cones = [[1, 3], [3, 2], [2, 4], [4, 1]]

[basis]
divisor_matrix = [[0, -2, 1, 1], [1, 1, 0, 0]]

[options]
order = 5
"""

F3_TOML = """\
[fan]
dim = 2
rays = [[0, 1], [0, -1], [1, 0], [-1, -3]]
max_cones = [[1, 3], [3, 2], [2, 4], [4, 1]]
"""

P2_NO_BASIS_TOML = """\
[fan]
dim = 2
rays = [[1, 0], [0, 1], [-1, -1]]
max_cones = [[1, 2], [2, 3], [3, 1]]
"""


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_examples_verb(capsys):
    code, out, _ = run(capsys, "examples")
    assert code == 0
    for name in BUILTIN_NAMES:
        assert name in out


def test_corrections_text(capsys):
    code, out, _ = run(capsys, "corrections", "--fan", "f2", "--order", "6")
    assert code == 0
    assert "f_2 = 1 + q1" in out
    assert out.count("= 1\n") == 3


def test_corrections_p2_all_one(capsys):
    code, out, _ = run(capsys, "corrections", "--fan", "p2")
    assert code == 0
    assert out.splitlines() == ["f_1 = 1", "f_2 = 1", "f_3 = 1"]


def test_verify_every_builtin_both_orders(capsys):
    for name in BUILTIN_NAMES:
        for order in ("6", "8"):
            code, out, _ = run(capsys, "verify", "--fan", name, "--order", order)
            assert code == 0, (name, order, out)
            assert "all checks passed" in out


def test_json_output_is_deterministic(capsys):
    code1, out1, _ = run(capsys, "lifts", "--fan", "f2", "--order", "6",
                         "--format", "json")
    code2, out2, _ = run(capsys, "lifts", "--fan", "f2", "--order", "6",
                         "--format", "json")
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["routes_agree"] is True


def test_order_8_truncates_to_order_6(capsys):
    """Exponent records of the N=6 run are exactly the N=8 records of degree <= 6."""
    for name in BUILTIN_NAMES:
        _, out6, _ = run(capsys, "corrections", "--fan", name, "--order", "6",
                         "--format", "json")
        _, out8, _ = run(capsys, "corrections", "--fan", name, "--order", "8",
                         "--format", "json")
        f6 = json.loads(out6)["f"]
        f8 = json.loads(out8)["f"]
        truncated = [[t for t in series if sum(t["exp"]) <= 6] for series in f8]
        assert truncated == f6, name


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "--fan", "p1xf2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["order"] == 6  # 3-fold default
    names = [c["name"] for c in payload["checks"]]
    assert names == ["degeneration", "w_relations", "linear_relations",
                     "frks_identity", "route_agreement", "vertex_vanishing",
                     "fano_triviality"]
    assert all(c["pass"] for c in payload["checks"])


def test_open_gw_verb(capsys):
    code, out, _ = run(capsys, "open-gw", "--fan", "f2", "--i", "2", "--d", "1,0")
    assert code == 0 and out.strip() == "1"
    code, _, err = run(capsys, "open-gw", "--fan", "f2", "--i", "2", "--d", "0,1")
    assert code == 2 and "out of model" in err


def test_fan_file_round_trip(tmp_path, capsys):
    path = tmp_path / "f2.toml"
    path.write_text(F2_TOML)
    code, out, _ = run(capsys, "corrections", "--fan", str(path))
    assert code == 0
    assert "f_2 = 1 + q1" in out
    # [options] order = 5 is respected
    code, out, _ = run(capsys, "corrections", "--fan", str(path), "--format", "json")
    payload = json.loads(out)
    assert payload["order"] == 5


def test_fan_file_without_basis_uses_autoderivation(tmp_path, capsys):
    path = tmp_path / "p2.toml"
    path.write_text(P2_NO_BASIS_TOML)
    code, out, _ = run(capsys, "corrections", "--fan", str(path))
    assert code == 0
    assert out.splitlines() == ["f_1 = 1", "f_2 = 1", "f_3 = 1"]


def test_parse_errors_exit_2(tmp_path, capsys):
    code, _, err = run(capsys, "validate", "--fan", str(tmp_path / "missing.toml"))
    assert code == 2 and "cannot read" in err

    bad_syntax = tmp_path / "bad.toml"
    bad_syntax.write_text("[fan\ndim = 2\n")
    code, _, err = run(capsys, "validate", "--fan", str(bad_syntax))
    assert code == 2 and "syntax" in err.lower()

    bad_ray = tmp_path / "ray.toml"
    bad_ray.write_text("[fan]\ndim = 2\nrays = [[2, 0], [0, 1], [-1, -1]]\n"
                       "max_cones = [[1, 2], [2, 3], [3, 1]]\n")
    code, _, err = run(capsys, "validate", "--fan", str(bad_ray))
    assert code == 2 and "not primitive" in err


def test_gate_failure_exit_3(tmp_path, capsys):
    path = tmp_path / "f3.toml"
    path.write_text(F3_TOML)
    code, _, err = run(capsys, "mirror-map", "--fan", str(path))
    assert code == 3 and "semi-positive" in err
    # validate itself only reports
    code, out, _ = run(capsys, "validate", "--fan", str(path))
    assert code == 0 and "semi_positive: NO" in out


def test_order_env_variable(monkeypatch, capsys):
    monkeypatch.setenv("ORDER", "3")
    code, out, _ = run(capsys, "corrections", "--fan", "f2", "--format", "json")
    assert code == 0 and json.loads(out)["order"] == 3
    # explicit flag wins over the environment
    code, out, _ = run(capsys, "corrections", "--fan", "f2", "--order", "4",
                       "--format", "json")
    assert code == 0 and json.loads(out)["order"] == 4
    monkeypatch.setenv("ORDER", "zero")
    code, _, err = run(capsys, "corrections", "--fan", "f2")
    assert code == 2


def test_potential_and_seidel_and_g0_and_mirror_map_verbs(capsys):
    code, out, _ = run(capsys, "potential", "--fan", "f2", "--order", "4")
    assert code == 0 and "W = (1)*z1 + (1 + q1)*z2 + (1)*z3 + (1)*z4" in out
    code, out, _ = run(capsys, "g0", "--fan", "f2", "--order", "3")
    assert code == 0 and "g0^(2) = y1 + 3/2*y1^2 + 10/3*y1^3" in out
    code, out, _ = run(capsys, "seidel", "--fan", "f2", "--order", "3")
    assert code == 0 and "Stilde_" in out and "Dtilde_" in out
    code, out, _ = run(capsys, "mirror-map", "--fan", "f2", "--order", "3")
    assert code == 0 and "y_1 = q_1 * (1 - 2*q1 + 3*q1^2 - 4*q1^3)" in out


def test_lifts_text_golden(capsys):
    code, out, _ = run(capsys, "lifts", "--fan", "f2", "--order", "3")
    assert code == 0
    assert "Shat_2 = (1 + q1 + q1^2 + q1^3)*D2" in out
    assert "routes agree" in out


def test_unknown_builtin_is_treated_as_path(capsys):
    code, _, err = run(capsys, "validate", "--fan", "nosuchfan")
    assert code == 2
