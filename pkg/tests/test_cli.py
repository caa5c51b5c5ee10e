import csv
import json

import numpy as np
import pytest

from discofield import __version__
from discofield.checks import EQ_REGISTRY, SUITES
from discofield.cli import main
from discofield.errors import ParseError, ValidationError
from discofield.reports import (build_run_config, checks_csv, default_config, dispatch, dumps, fmt_float,
                                load_config, write_report)


def write(tmp_path, obj, name="cfg.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return p


MINIMAL = {"B": {"diag": [4, 1, 1, 1]}, "M": 1, "dm": 1, "Pvec": [0, 0, 0]}


def test_minimal_config_fills_on_shell_energy(tmp_path):
    run = load_config(write(tmp_path, MINIMAL))
    assert run.model.means.P == (1.0, 0.0, 0.0, 0.0)
    echo = run.echo()
    assert echo["P"] == [1.0, 0.0, 0.0, 0.0]
    assert echo["cutoffs"]["scalar"] == [3, 3, 3, 3, 6]
    assert echo["tolerances"]["clifford"] == 1e-13


def test_negative_diagonal_rejected(tmp_path):
    with pytest.raises(ValidationError, match="positive"):
        load_config(write(tmp_path, {**MINIMAL, "B": [4, -1, 1, 1]}))


def test_not_positive_definite_rejected(tmp_path):
    B = [[1, 2, 0, 0], [2, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    with pytest.raises(ValidationError, match="B not positive definite|B is not positive definite"):
        load_config(write(tmp_path, {**MINIMAL, "B": B}))


def test_unknown_key_listed(tmp_path):
    with pytest.raises(ValidationError, match="foo"):
        load_config(write(tmp_path, {**MINIMAL, "foo": 1}))
    with pytest.raises(ValidationError, match="bar"):
        load_config(write(tmp_path, {**MINIMAL, "cutoffs": {"bar": [2]}}))


def test_off_shell_momentum_rejected(tmp_path):
    with pytest.raises(ValidationError, match="mass shell"):
        load_config(write(tmp_path, {**{k: v for k, v in MINIMAL.items() if k != "Pvec"}, "P": [2, 0, 0, 0]}))


def test_parse_error_has_position(tmp_path):
    with pytest.raises(ParseError) as exc:
        load_config(write(tmp_path, '{\n  "B": [4, 1, 1, 1],\n  "M": ,\n}'))
    assert exc.value.line == 3
    assert "line 3" in str(exc.value)


def test_seed_override(tmp_path):
    run = load_config(write(tmp_path, {**MINIMAL, "seed": 5}), seed=9)
    assert run.seed == 9


def test_verify_algebra_has_ten_passing_rows():
    rep = dispatch("verify-algebra", default_config())
    assert len(rep.checks) == 10
    assert all(c.passed for c in rep.checks)
    assert rep.exit_code == 0


def test_resonance_csv_contains_ground_tuple(tmp_path):
    rep = dispatch("resonance", default_config(output_dir=str(tmp_path)))
    paths = write_report(rep, tmp_path)
    rows = list(csv.DictReader(paths["checks"].open()))
    assert list(rows[0]) == ["check_id", "eq_ref", "value", "tolerance", "pass"]
    ground = [r for r in rows if r["check_id"] == "resonance/tuple/0-0-0-0-0"]
    assert len(ground) == 1 and ground[0]["pass"] == "true"


def test_every_eq_ref_is_registered():
    for name in ("verify-algebra", "constraint", "baselines", "resonance"):
        for c in dispatch(name, default_config()).checks:
            assert c.eq_ref in EQ_REGISTRY


def test_report_is_byte_stable(tmp_path):
    run = default_config()
    a = write_report(dispatch("constraint", run), tmp_path / "a")
    first = a["report"].read_bytes(), a["checks"].read_bytes()
    b = write_report(dispatch("constraint", run), tmp_path / "a")
    assert (b["report"].read_bytes(), b["checks"].read_bytes()) == first
    doc = json.loads(first[0])
    assert doc["tool_version"] == __version__
    assert "wall_time_s" in json.loads(a["timing"].read_text())


def test_floats_round_trip_with_17_digits():
    for x in [0.1, 1 / 3, np.pi * 1e-300, 2.0 ** 0.5 * 1e17, 5e-324]:
        assert float(fmt_float(x)) == x
    assert json.loads(dumps({"x": 1 / 3}))["x"] == 1 / 3
    assert fmt_float(float("nan")) == "null"


def test_csv_header_only_when_empty():
    assert checks_csv([]) == "check_id,eq_ref,value,tolerance,pass\n"


def test_exit_code_zero(tmp_path):
    assert main(["verify-algebra", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "verify-algebra.report.json").exists()
    assert (tmp_path / "verify-algebra.checks.csv").exists()


def test_exit_code_one_on_check_failure(tmp_path):
    # the constraint map has a strictly positive smallest singular value, so a vanishing
    # tolerance on the other rows makes them fail
    code = main(["constraint", "--out", str(tmp_path), "--tolerance-scale", "1e-300"])
    doc = json.loads((tmp_path / "constraint.report.json").read_text())
    assert code == 1
    assert doc["summary"]["failed"]


def test_exit_code_two_on_computation_error(tmp_path):
    cfg = {**MINIMAL, "B": [[4, 0.5, 0, 0], [0.5, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]}
    code = main(["resonance", "--config", str(write(tmp_path, cfg)), "--out", str(tmp_path)])
    doc = json.loads((tmp_path / "resonance.report.json").read_text())
    assert code == 2
    assert doc["errors"][0]["type"] == "NonDiagonalUnsupported"
    assert doc["checks"][0]["pass"] is False


def test_exit_code_two_on_bad_config(tmp_path, capsys):
    assert main(["baselines", "--config", str(write(tmp_path, {**MINIMAL, "foo": 1}))]) == 2
    assert "foo" in capsys.readouterr().err


def test_env_output_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("DISCOFIELD_OUT", str(tmp_path / "env"))
    assert main(["verify-algebra"]) == 0
    assert (tmp_path / "env" / "verify-algebra.report.json").exists()


def test_literal_exponent_is_reported_not_asserted(tmp_path):
    run = build_run_config(dict(MINIMAL, sampling={"random_families": 1, "hermite_nmax": 2}),
                           exponent_variant="literal")
    rep = dispatch("verify-hermite", run)
    assert rep.exit_code == 0
    lit = rep.info["literal_exponent"]
    assert lit["norm"] == pytest.approx(2 ** -0.5, abs=1e-12)
    assert lit["disp_x_over_dx2"] == pytest.approx(0.5, abs=1e-12)


def test_commands_cover_every_suite():
    assert set(SUITES) == {"verify-hermite", "spectrum-1d", "verify-algebra", "constraint", "resonance",
                           "scalar-residual", "factorization", "fermion-svd", "baselines"}
