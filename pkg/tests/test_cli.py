import json

import numpy as np
import pytest

from macregion import __version__
from macregion.cli import main
from macregion.io import (SpecError, dump_policy, dump_spec, fixture_text, format_polygon, parse_policy,
                          parse_polygon, parse_spec)
from macregion.model import uniform_policy


@pytest.fixture
def specs(tmp_path):
    paths = {}
    for name in ("adder", "xorstate"):
        path = tmp_path / f"{name}.json"
        assert main(["fixture", name, "--out", str(path)]) == 0
        paths[name] = str(path)
    return paths


# ---------------------------------------------------------------- spec documents

def test_parse_fixtures(adder, xorstate):
    assert (adder.n_states, adder.n_outputs) == (1, 3)
    assert (len(xorstate.obs_a_labels), len(xorstate.obs_b_labels)) == (2, 1)


def test_bad_kernel_row_named_by_index():
    doc = json.loads(fixture_text("adder"))
    doc["kernel"][0][1][0] = [0.0, 0.9, 0.0]
    with pytest.raises(SpecError, match=r"\(0, 1, 0\)"):
        parse_spec(json.dumps(doc))


@pytest.mark.parametrize("mutate, pattern", [
    (lambda d: d.pop("prior"), "missing fields: prior"),
    (lambda d: d.update(extra=1), "unknown fields: extra"),
    (lambda d: d.update(prior=[0.5, 0.5]), "field 'prior'"),
    (lambda d: d.update(quantizer_a=[0, 1]), "field 'quantizer_a'"),
    (lambda d: d.update(outputs=2), "field 'kernel'"),
    (lambda d: d.update(inputs_a=0), "field 'inputs_a'"),
])
def test_malformed_documents(mutate, pattern):
    doc = json.loads(fixture_text("adder"))
    mutate(doc)
    with pytest.raises(SpecError, match=pattern):
        parse_spec(json.dumps(doc))


def test_json_syntax_error_has_position():
    with pytest.raises(SpecError, match="line 1, column"):
        parse_spec("{")


def test_spec_round_trip(xorstate):
    again = parse_spec(dump_spec(xorstate))
    assert again.identical_to(xorstate)


def test_policy_round_trip(xorstate):
    policy = uniform_policy(xorstate)
    again = parse_policy(dump_policy(policy), xorstate)
    np.testing.assert_array_equal(again.pi_a, policy.pi_a)
    with pytest.raises(SpecError):
        parse_policy('{"pi_a": [[0.5, 0.5]], "pi_b": [[0.5, 0.5]]}', xorstate)


def test_polygon_round_trip():
    from macregion.region import Pentagon, hull_union
    poly = hull_union([Pentagon(1.0, 1.0, 1.5)])
    text = format_polygon(poly, __version__, 7)
    assert text.splitlines()[0] == f"# macregion {__version__} seed=7"
    assert parse_polygon(text) == poly


# ---------------------------------------------------------------- commands

def test_pentagon_uniform_xorstate(specs, capsys):
    assert main(["pentagon", "--spec", specs["xorstate"]]) == 0
    assert capsys.readouterr().out.strip() == "0.5 0.5 0.5"


def test_pentagon_with_policy_file(specs, tmp_path, capsys):
    path = tmp_path / "p.json"
    path.write_text('{"pi_a": [[1, 0]], "pi_b": [[0.5, 0.5]]}')
    assert main(["pentagon", "--spec", specs["adder"], "--policy", str(path)]) == 0
    assert capsys.readouterr().out.split() == ["0", "1", "1"]


def test_region_adder_and_reproducibility(specs, tmp_path, capsys):
    out1, out2 = tmp_path / "a.txt", tmp_path / "b.txt"
    args = ["region", "--spec", specs["adder"], "--grid", "4", "--restarts", "2", "--seed", "3"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    poly = parse_polygon(out1.read_text())
    assert any(abs(v.r_a - 1) <= 1e-2 and abs(v.r_b - 0.5) <= 1e-2 for v in poly.vertices)
    diag = capsys.readouterr().out
    assert "policies evaluated" in diag and diag.count("direction (") == 2 * 17


def test_equiv_check(specs, capsys):
    assert main(["equiv-check", "--spec", specs["xorstate"], "--samples", "20"]) == 0
    out = capsys.readouterr().out
    assert "policies checked: 21" in out
    assert out.strip().endswith("PASS (tol 1e-09)")


def test_oracle_check_xorstate(specs, capsys):
    code = main(["oracle-check", "--spec", specs["xorstate"], "--block-n", "2", "--samples", "10",
                 "--sweep-cap", "300"])
    assert code == 0
    last = capsys.readouterr().out.strip().splitlines()[-1]
    assert last == "factorization max dev <= 1e-12; Lemma 1 violations: 0"


def test_best_code_and_simulate(specs, tmp_path, capsys):
    code_path = tmp_path / "code.json"
    assert main(["best-code", "--spec", specs["adder"], "--messages", "2,1", "--out", str(code_path)]) == 0
    assert "eps*=0.0" in capsys.readouterr().out
    assert json.loads(code_path.read_text())["eps"] == 0.0
    assert main(["simulate", "--spec", specs["adder"], "--code", str(code_path), "--trials", "500"]) == 0
    assert "empirical=0.0 exact=0.0" in capsys.readouterr().out


def test_invalid_input_exit_codes(specs, tmp_path, capsys):
    assert main(["pentagon", "--spec", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    assert main(["pentagon", "--spec", str(bad)]) == 2
    assert "error:" in capsys.readouterr().err
    assert main(["region", "--spec", specs["adder"], "--seed", "-1"]) == 2
    assert main(["best-code", "--spec", specs["adder"], "--messages", "2"]) == 2
    assert main(["nonsense"]) == 2


def test_cap_exit_code(specs, capsys):
    assert main(["best-code", "--spec", specs["xorstate"], "--block-n", "2", "--messages", "4,4"]) == 3
    assert "exceeds cap" in capsys.readouterr().err


def test_version(capsys):
    assert main(["--version"]) == 0
    assert __version__ in capsys.readouterr().out
