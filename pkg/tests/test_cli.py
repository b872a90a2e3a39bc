import json
import math

import numpy as np
import pytest

from lightcone import cli
from lightcone import config as cfgmod


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_physical_scenario(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, text, _ = run(["validate", "--config", "eq_t_planewave", "--out", str(out)], capsys)
    assert code == 0
    assert "verdict: PHYSICAL" in text
    assert json.loads(out.read_text())["report"]["verdict"] == "PHYSICAL"


def test_validate_nonphysical_scenario(capsys):
    code, text, _ = run(["validate", "--config", "eq_x_nonphysical"], capsys)
    assert code == 2
    assert "verdict: UNPHYSICAL" in text
    failing = text.split("failing checks:")[1]
    for name in ("phase_only_dependence", "spacelike_character", "quadratic_invariant"):
        assert name in failing


@pytest.mark.parametrize("name, code", [
    ("lightcone_shift", 0),
    ("planewave_plus_coulomb", 0),
    ("lightcone_shift_coulomb", 2),
])
def test_other_bundled_verdicts(capsys, name, code):
    assert run(["validate", "--config", name], capsys)[0] == code


def test_validate_missing_file(capsys, tmp_path):
    code, _, err = run(["validate", "--config", str(tmp_path / "nope.json")], capsys)
    assert code == 1
    assert "cannot read config" in err


def test_validate_malformed_json_reports_line(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "name": "x",\n  "potential": {,}\n}\n')
    code, _, err = run(["validate", "--config", str(bad)], capsys)
    assert code == 1
    assert "line 3" in err


def test_validate_unknown_key(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "x", "potential": {"kind": "plane_wave", "colour": 1}}))
    code, _, err = run(["validate", "--config", str(bad)], capsys)
    assert code == 1
    assert "config.potential" in err and "colour" in err


def test_validate_non_transverse_amplitude_is_an_error(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"potential": {"amplitude": [1, 0, 0, 0]}}))
    code, _, err = run(["validate", "--config", str(bad)], capsys)
    assert code == 1 and "transverse" in err


def test_machine_report_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        run(["validate", "--config", "eq_x_nonphysical", "--seed", "11", "--out", str(out)], capsys)
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["report"]["sampled_events"]["seed"] == 11


def test_jobs_do_not_change_report(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["validate", "--config", "lightcone_shift_coulomb", "--out", str(a)], capsys)
    run(["validate", "--config", "lightcone_shift_coulomb", "--jobs", "4", "--out", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_tolerance_override(capsys):
    code, text, _ = run(["validate", "--config", "eq_x_nonphysical", "--format", "machine",
                         "--tolerance", "quadratic_invariant=5", "--tolerance", "phase_only_dependence=1e3",
                         "--tolerance", "spacelike_character=1"], capsys)
    assert json.loads(text)["report"]["verdict"] == "PHYSICAL"
    assert code == 0
    assert run(["validate", "--config", "eq_t_planewave", "--tolerance", "nope=1"], capsys)[0] == 1


def table(text):
    rows = [line for line in text.splitlines()[1:] if not line.startswith("#")]
    return np.array([[float(v) for v in r.split(",")] for r in rows]) if rows else np.empty((0, 10))


def test_fields_plane_wave(capsys):
    code, text, _ = run(["fields", "--config", "eq_t_planewave", "--axis", "z",
                         "--start", "0", "--stop", "4", "--count", "5"], capsys)
    assert code == 0
    assert text.splitlines()[0] == "ct,x,y,z,Ex,Ey,Ez,Bx,By,Bz"
    data = table(text)
    assert data.shape == (5, 10)
    assert np.allclose(np.linalg.norm(data[:, 4:7], axis=1), np.linalg.norm(data[:, 7:10], axis=1), atol=1e-8)


def test_fields_coulomb_inverse_square(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"name": "coulomb", "potential": {"kind": "coulomb", "charge": 1.0}}))
    out = tmp_path / "fields.csv"
    code, _, _ = run(["fields", "--config", str(cfg), "--axis", "x", "--start", "1", "--stop", "4",
                      "--count", "4", "--out", str(out)], capsys)
    data = table(out.read_text())
    mags = np.linalg.norm(data[:, 4:7], axis=1)
    assert code == 0
    assert mags[[0, 1, 3]] == pytest.approx([1.0, 0.25, 0.0625], rel=1e-8)


def test_fields_skip_singular_rows(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"potential": {"kind": "coulomb"}}))
    code, text, err = run(["fields", "--config", str(cfg), "--axis", "x", "--start", "-1", "--stop", "1",
                           "--count", "3"], capsys)
    assert code == 0
    assert "# singular" in text and "warning" in err
    assert table(text).shape == (2, 10)


def test_fields_empty_grid(capsys):
    code, text, _ = run(["fields", "--config", "eq_t_planewave", "--count", "0"], capsys)
    assert code == 0 and text == "ct,x,y,z,Ex,Ey,Ez,Bx,By,Bz\n"


def test_transform_emits_both_potentials(capsys):
    code, text, _ = run(["transform", "--config", "eq_x_nonphysical"], capsys)
    assert code == 0
    data = np.array([[float(v) for v in r.split(",")] for r in text.splitlines()[1:]])
    assert data.shape == (200, 12)
    after = data[:, 8:12]
    null = after[:, 0] ** 2 - np.sum(after[:, 1:] ** 2, axis=1)
    assert np.max(np.abs(null)) < 1e-10
    before = data[:, 4:8]
    assert np.allclose(before[:, 1], np.cos(data[:, 0] - data[:, 3]))


def test_transform_needs_gauge(capsys):
    assert run(["transform", "--config", "eq_t_planewave"], capsys)[0] == 1


def test_simulate_radiation_pressure(capsys, tmp_path):
    out = tmp_path / "traj.csv"
    code, text, _ = run(["simulate", "--config", "radiation_pressure_circular", "--format", "machine",
                         "--out", str(out)], capsys)
    assert code == 0
    summary = json.loads(text)
    assert summary["ratio_drift_c_over_U_p"] == pytest.approx(1.0, abs=0.02)
    header = out.read_text().splitlines()[0]
    assert header == "t,x,y,z,px,py,pz,gamma"


def test_simulate_dipole(capsys):
    code, text, _ = run(["simulate", "--config", "radiation_pressure_dipole", "--format", "machine"], capsys)
    assert code == 0
    assert abs(json.loads(text)["ratio_drift_c_over_U_p"]) < 0.01


def test_validate_dipole_is_not_a_plane_wave(capsys):
    code, text, _ = run(["validate", "--config", "radiation_pressure_dipole"], capsys)
    assert code == 2
    assert "phase_only_dependence" in text.splitlines()[-1]


def test_simulate_too_short(capsys, tmp_path):
    data = json.loads(cfgmod.resolve("radiation_pressure_circular").read_text())
    data["run"]["t_end"] = 5.0
    cfg = tmp_path / "short.json"
    cfg.write_text(json.dumps(data))
    code, _, err = run(["simulate", "--config", str(cfg)], capsys)
    assert code == 1 and "too short" in err


def test_scenarios_listing(capsys):
    code, text, _ = run(["scenarios", "--format", "machine"], capsys)
    names = json.loads(text)
    assert code == 0
    for name in ("eq_t_planewave", "eq_x_nonphysical", "lightcone_shift", "planewave_plus_coulomb",
                 "radiation_pressure_circular", "radiation_pressure_dipole"):
        assert name in names


def test_scenario_dir_override(capsys, tmp_path, monkeypatch):
    (tmp_path / "only.json").write_text(json.dumps({"name": "only", "description": "d"}))
    monkeypatch.setenv(cfgmod.SCENARIO_ENV, str(tmp_path))
    code, text, _ = run(["scenarios"], capsys)
    assert text == "only: d\n"
    assert run(["validate", "--config", "only"], capsys)[0] == 0


@pytest.mark.parametrize("name", cfgmod.list_scenarios())
def test_bundled_scenarios_round_trip(name):
    cfg = cfgmod.load(name)
    again = cfgmod.ScenarioConfig.from_dict(json.loads(cfg.to_json()))
    assert again.to_dict() == cfg.to_dict()


def test_direction_normalized_on_load():
    cfg = cfgmod.ScenarioConfig.from_dict({"potential": {"direction": [0, 0, 2]}})
    assert cfg.potential.direction == [0.0, 0.0, 1.0]


def test_non_finite_parameter_rejected():
    with pytest.raises(cfgmod.ConfigError):
        cfgmod.ScenarioConfig.from_dict({"potential": {"omega": math.inf}})


def test_atomic_write_leaves_no_temp_files(tmp_path):
    target = tmp_path / "x.txt"
    cli.write_atomic(str(target), "hello")
    assert target.read_text() == "hello"
    assert [p.name for p in tmp_path.iterdir()] == ["x.txt"]
