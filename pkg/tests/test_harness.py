"""Report encoding, config validation and the command line front end."""

import json
import os

import numpy as np
import pytest

from reldiff import cli
from reldiff import report as R
from reldiff.config import ConfigError, default_config, load_config, \
    validate_config
from reldiff.experiments import EXPERIMENTS, run_experiment


# ---------------------------------------------------------------------------
# canonical report encoding

def test_dumps_report_sorts_keys_and_is_stable():
    a = R.dumps_report({"b": 1, "a": {"y": 2.0, "x": [1, 2]}})
    b = R.dumps_report({"a": {"x": [1, 2], "y": 2.0}, "b": 1})
    assert a == b
    assert a.index('"a"') < a.index('"b"')
    assert a.endswith("\n")


def test_dumps_report_float_repr_roundtrips():
    vals = [0.1, 1.0 / 3.0, 2.0 ** -52, 4.4816890703380645, -1e300]
    text = R.dumps_report({"v": vals})
    back = json.loads(text)
    assert back["v"] == vals


def test_dumps_report_converts_numpy_and_rejects_nan():
    text = R.dumps_report({"a": np.float64(0.5), "b": np.int32(3),
                           "c": np.arange(3.0)})
    assert json.loads(text) == {"a": 0.5, "b": 3, "c": [0.0, 1.0, 2.0]}
    text = R.dumps_report({"t": True, "f": np.bool_(False)})
    assert '"t":true' in text and '"f":false' in text
    with pytest.raises(ValueError):
        R.dumps_report({"bad": float("nan")})
    with pytest.raises(ValueError):
        R.dumps_report({"bad": np.inf})


def test_make_check_ops():
    c = R.make_check("stat", 0.5, 1.0)
    assert c["pass"] and c["op"] == "le"
    assert not R.make_check("stat", 2.0, 1.0)["pass"]
    assert R.make_check("p", 0.3, 0.01, op="ge")["pass"]
    assert not R.make_check("p", 0.001, 0.01, op="ge")["pass"]
    c = R.make_check("z", 1.2, 3.0, stderr=0.25, detail={"target": 7.0})
    assert c["stderr"] == 0.25 and c["detail"]["target"] == 7.0


def test_make_report_overall_pass():
    good = R.make_check("a", 0.0, 1.0)
    bad = R.make_check("b", 2.0, 1.0)
    rep = R.make_report("demo", 5, {"n": 2}, [good, bad], "0.0test")
    assert rep["schema_version"] == R.SCHEMA_VERSION
    assert rep["pass"] is False
    rep = R.make_report("demo", 5, {"n": 2}, [good], "0.0test")
    assert rep["pass"] is True


def test_write_and_load_report_roundtrip(tmp_path):
    rep = R.make_report("demo", 1, {"x": 0.5}, [R.make_check("a", 0, 1)], "v")
    path = tmp_path / "r.json"
    R.write_report(path, rep)
    assert R.load_report(path) == json.loads(R.dumps_report(rep))


def test_trajectory_csv_shape_and_cap(tmp_path):
    K, n = 4, 3
    traj = {"s": np.linspace(0, 1, K),
            "m": np.zeros((K, n, 4)), "g0": np.ones((K, n, 4)),
            "defect": np.full((K, n), 1e-12)}
    path = tmp_path / "t.csv"
    rows = R.write_trajectory_csv(path, traj)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == ("path_id,step,s,m0,m1,m2,m3,"
                        "g0_0,g0_1,g0_2,g0_3,defect")
    assert rows == K * n and len(lines) == 1 + K * n
    rows = R.write_trajectory_csv(path, traj, max_rows=5)
    assert rows == 5
    assert len(path.read_text().strip().split("\n")) == 6


def test_hits_csv_format(tmp_path):
    hits = {"ids": np.arange(3, dtype=np.uint64), "s": np.ones(3),
            "m": np.zeros((3, 4)), "g0": np.ones((3, 4)),
            "lam": np.full(3, 2.0)}
    path = tmp_path / "h.csv"
    rows = R.write_hits_csv(path, hits)
    lines = path.read_text().strip().split("\n")
    assert rows == 3
    assert lines[0] == "path_id,s,m0,m1,m2,m3,g0_0,g0_1,g0_2,g0_3,lam"
    assert lines[1].split(",")[0] == "0"


# ---------------------------------------------------------------------------
# config validation: errors must name the offending field

def test_default_config_validates():
    cfg = default_config()
    cfg["experiment"] = "frame_integrity"
    validate_config(cfg)


def test_config_rejects_unknown_top_level_key():
    with pytest.raises(ConfigError, match="pathz"):
        validate_config({"schema_version": 1,
                         "experiment": "frame_integrity", "pathz": 3})


def test_config_rejects_unknown_experiment():
    with pytest.raises(ConfigError, match="experiment"):
        validate_config({"schema_version": 1, "experiment": "nope"})


def test_config_rejects_unknown_param_with_name():
    with pytest.raises(ConfigError, match=r"params\.sigmaz"):
        validate_config({"schema_version": 1, "experiment": "frame_integrity",
                         "params": {"sigmaz": 1.0}})


def test_config_rejects_bad_types():
    with pytest.raises(ConfigError, match="seed"):
        validate_config({"schema_version": 1, "experiment": "frame_integrity",
                         "seed": True})
    with pytest.raises(ConfigError, match="workers"):
        validate_config({"schema_version": 1, "experiment": "frame_integrity",
                         "workers": 0})
    with pytest.raises(ConfigError, match="schema_version"):
        validate_config({"experiment": "frame_integrity"})
    with pytest.raises(ConfigError, match=r"csv\.max_rows"):
        validate_config({"schema_version": 1, "experiment": "frame_integrity",
                         "csv": {"max_rows": -2}})


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError, match="file not found"):
        load_config(tmp_path / "missing.yaml")
    bad = tmp_path / "bad.yaml"
    bad.write_text("experiment: [unclosed\n")
    with pytest.raises(ConfigError):
        load_config(bad)


# ---------------------------------------------------------------------------
# experiment registry plumbing

def test_run_experiment_rejects_unknown():
    with pytest.raises(ValueError, match="unknown experiment"):
        run_experiment("nope")
    with pytest.raises(ValueError, match="no parameter 'bogus'"):
        run_experiment("frame_integrity", overrides={"bogus": 1}, smoke=True)


def test_run_experiment_uses_registry_seed_and_params():
    rep, art = run_experiment("flux_divergence_identity")
    assert rep["seed"] == EXPERIMENTS["flux_divergence_identity"].seed
    assert rep["experiment"] == "flux_divergence_identity"
    assert rep["pass"] and len(rep["checks"]) == 3
    rep2, _ = run_experiment("flux_divergence_identity", seed=999)
    assert rep2["seed"] == 999


def test_smoke_params_are_subset_of_defaults():
    for name, ent in EXPERIMENTS.items():
        unknown = set(ent.smoke) - set(ent.defaults)
        assert not unknown, "%s smoke keys %s" % (name, unknown)


# ---------------------------------------------------------------------------
# command line

def test_cli_list(capsys):
    assert cli.main(["list"]) == 0
    out = capsys.readouterr().out
    for name in EXPERIMENTS:
        assert name in out


def test_cli_validate(tmp_path, capsys):
    good = tmp_path / "good.yaml"
    good.write_text("schema_version: 1\n"
                    "experiment: frame_integrity\n"
                    "params: {steps: 100}\n")
    assert cli.main(["validate", "--config", str(good)]) == 0
    bad = tmp_path / "bad.yaml"
    bad.write_text("schema_version: 1\n"
                   "experiment: frame_integrity\n"
                   "params: {stepz: 100}\n")
    assert cli.main(["validate", "--config", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "params.stepz" in err


def test_cli_requires_subcommand_and_experiment(capsys):
    assert cli.main([]) == 2
    assert cli.main(["run"]) == 2
    assert "experiment" in capsys.readouterr().err


def test_cli_unknown_experiment(capsys):
    assert cli.main(["run", "--experiment", "nope"]) == 2
    assert "unknown experiment" in capsys.readouterr().err


def test_cli_run_writes_report(tmp_path, capsys):
    out = tmp_path / "res"
    rc = cli.main(["run", "--experiment", "flux_divergence_identity",
                   "--out", str(out)])
    assert rc == 0
    rep = R.load_report(out / "flux_divergence_identity_report.json")
    assert rep["pass"] is True
    text = capsys.readouterr().out
    assert "PASS: flux_divergence_identity" in text
    # this experiment has no trajectory or hit artifacts
    rc = cli.main(["run", "--experiment", "flux_divergence_identity",
                   "--out", str(out), "--csv-trajectories", "--csv-hits"])
    assert rc == 0
    text = capsys.readouterr().out
    assert "no trajectory table" in text and "no hit table" in text


def test_cli_config_with_overrides(tmp_path, capsys):
    cfgfile = tmp_path / "run.yaml"
    cfgfile.write_text("schema_version: 1\n"
                       "experiment: frame_integrity\n"
                       "seed: 7\n"
                       "smoke: true\n"
                       "params: {steps: 60, record_every: 20}\n"
                       "csv: {trajectories: true, max_rows: 40}\n"
                       "out: %s\n" % (tmp_path / "res"))
    assert cli.main(["run", "--config", str(cfgfile), "--seed", "9"]) == 0
    rep = R.load_report(tmp_path / "res" / "frame_integrity_report.json")
    assert rep["seed"] == 9  # the flag wins over the config file
    assert rep["params"]["steps"] == 60
    csv = (tmp_path / "res" / "frame_integrity_trajectory.csv").read_text()
    assert len(csv.strip().split("\n")) == 41  # header + max_rows
    capsys.readouterr()


def test_cli_series_csv(tmp_path, capsys):
    out = tmp_path / "res"
    rc = cli.main(["run", "--experiment", "entropy_decay", "--smoke",
                   "--out", str(out), "--csv-series"])
    assert rc == 0
    lines = (out / "entropy_decay_series.csv").read_text().strip().split("\n")
    assert lines[0] == "t,bimodal,bimodal_se,wide,wide_se"
    assert len(lines) == 5  # header + one row per checkpoint
    capsys.readouterr()


def test_cli_hits_csv(tmp_path, capsys):
    out = tmp_path / "res"
    rc = cli.main(["run", "--experiment", "hitting_density_relation",
                   "--smoke", "--paths", "300", "--out", str(out),
                   "--csv-hits"])
    assert rc == 0
    lines = (out / "hitting_density_relation_hits.csv").read_text()
    lines = lines.strip().split("\n")
    assert lines[0].startswith("path_id,s,m0")
    assert len(lines) == 301  # every smoke path crosses the plane once
    capsys.readouterr()
