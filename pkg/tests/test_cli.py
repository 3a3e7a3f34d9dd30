import json

import pytest

from bolab.cli import ConfigError, load_config, main


def write_config(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def solve_config(tmp_path):
    return write_config(
        tmp_path / "solve.json",
        {
            "grid": {"n_modes": 64},
            "solver": {"dt": 0.01, "t_end": 0.5, "record_every": 10,
                       "conservation_tolerance": 1e-6},
            "data": {"kind": "single_mode", "target_norm": 1.0},
        },
    )


def test_solve_smoke(tmp_path, solve_config):
    out = tmp_path / "out"
    assert main(["solve", "--config", solve_config, "--out", str(out)]) == 0
    assert (out / "conservation.csv").exists()
    assert (out / "trajectory.bot").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "solve"
    assert "wall_time_s" in manifest


def test_validation_error_cites_range(tmp_path):
    cfg = write_config(
        tmp_path / "bad.json",
        {
            "solver": {"dt": 0.01, "t_end": 0.5},
            "data": {"kind": "random_sobolev", "s_target": 0.4},
            "experiment": {"kind": "smoothing", "s": 0.4, "a_grid": [0.35],
                           "n_grid": [64]},
        },
    )
    out = tmp_path / "out"
    assert main(["smoothing", "--config", cfg, "--out", str(out)]) == 1
    err = json.loads((out / "error.json").read_text())
    assert err["exit_code"] == 1
    assert "admissible range" in err["message"]


def test_unknown_key_is_hard_error(tmp_path, solve_config):
    out = tmp_path / "out"
    rc = main(["solve", "--config", solve_config, "--out", str(out),
               "--set", "solver.dtt=0.01"])
    assert rc == 1
    assert "dtt" in json.loads((out / "error.json").read_text())["message"]


def test_unknown_section_rejected(tmp_path):
    cfg = write_config(tmp_path / "c.json", {"solvr": {"dt": 0.01}})
    with pytest.raises(ConfigError):
        load_config(cfg)


def test_numerical_failure_exit_code(tmp_path):
    cfg = write_config(
        tmp_path / "blow.json",
        {
            "grid": {"n_modes": 64},
            "solver": {"dt": 0.1, "t_end": 2.0, "record_every": 1,
                       "conservation_action": "off"},
            "data": {"kind": "single_mode", "target_norm": 30.0},
        },
    )
    out = tmp_path / "out"
    assert main(["solve", "--config", cfg, "--out", str(out)]) == 2
    err = json.loads((out / "error.json").read_text())
    assert err["exit_code"] == 2


def test_override_changes_behavior(tmp_path, solve_config):
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert main(["solve", "--config", solve_config, "--out", str(out1)]) == 0
    assert main(["solve", "--config", solve_config, "--out", str(out2),
                 "--set", "solver.record_every=25"]) == 0
    n1 = len((out1 / "conservation.csv").read_text().splitlines())
    n2 = len((out2 / "conservation.csv").read_text().splitlines())
    assert n1 > n2


def test_gauge_check_and_norms(tmp_path, solve_config):
    for cmd, name in (("gauge-check", "gauge_residuals.csv"), ("norms", "norms.csv")):
        out = tmp_path / cmd
        assert main([cmd, "--config", solve_config, "--out", str(out)]) == 0
        assert (out / name).exists()


def test_csv_bodies_reproducible(tmp_path, solve_config):
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    for out in (out1, out2):
        assert main(["gauge-check", "--config", solve_config, "--out", str(out)]) == 0
    a = (out1 / "gauge_residuals.csv").read_bytes()
    b = (out2 / "gauge_residuals.csv").read_bytes()
    assert a == b


def test_selftest_passes():
    assert main(["selftest"]) == 0


def test_bilinear_subcommand(tmp_path):
    cfg = write_config(
        tmp_path / "bl.json",
        {"bilinear": {"mj_pairs": [[4, 2]], "k_values": [4, 5], "ensemble": 2,
                      "n_tau": 256, "dtau": 0.5}},
    )
    out = tmp_path / "out"
    assert main(["bilinear", "--config", cfg, "--out", str(out)]) == 0
    header = (out / "bilinear_ratios.csv").read_text().splitlines()[0]
    assert header == "k,m,j,seed,ratio"
    summary = json.loads((out / "bilinear_summary.json").read_text())
    assert "m4_j2" in summary["per_mj"]
