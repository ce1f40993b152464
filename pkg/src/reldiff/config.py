"""Run configuration files.

YAML, schema_version 1. Every validation failure names the offending
field, so a typo in a batch config dies with a usable message instead
of a stack trace halfway through a run.

    schema_version: 1
    experiment: roup_juttner
    seed: 42              # optional, experiment default otherwise
    workers: 2            # optional
    smoke: false          # optional
    out: results          # optional output directory
    params:               # optional per-experiment overrides
      paths: 10000
    csv:                  # optional table export
      trajectories: false
      hits: false
      series: false
      max_rows: 100000
"""

import yaml

from .experiments import EXPERIMENTS


class ConfigError(ValueError):
    pass


_CSV_DEFAULTS = {"trajectories": False, "hits": False, "series": False,
                 "max_rows": 100000}


def default_config():
    return {"schema_version": 1, "experiment": None, "seed": None,
            "workers": 1, "smoke": False, "out": "results", "params": {},
            "csv": dict(_CSV_DEFAULTS)}


def _require(cond, field, message):
    if not cond:
        raise ConfigError("%s: %s" % (field, message))


def validate_config(raw):
    """Normalize a parsed config dict; raise ConfigError naming fields."""
    _require(isinstance(raw, dict), "config", "must be a mapping")
    cfg = default_config()
    known = set(cfg)
    for key in raw:
        _require(key in known, key, "unknown field (known: %s)"
                 % ", ".join(sorted(known)))

    _require("schema_version" in raw, "schema_version", "is required")
    _require(raw["schema_version"] == 1, "schema_version",
             "must be 1, got %r" % (raw["schema_version"],))

    if raw.get("experiment") is not None:
        exp = raw["experiment"]
        _require(isinstance(exp, str) and exp in EXPERIMENTS, "experiment",
                 "must be one of: %s" % ", ".join(sorted(EXPERIMENTS)))
        cfg["experiment"] = exp

    if raw.get("seed") is not None:
        _require(isinstance(raw["seed"], int) and not isinstance(raw["seed"], bool)
                 and raw["seed"] >= 0, "seed", "must be a non-negative integer")
        cfg["seed"] = raw["seed"]

    if "workers" in raw:
        _require(isinstance(raw["workers"], int)
                 and not isinstance(raw["workers"], bool)
                 and raw["workers"] >= 1, "workers",
                 "must be a positive integer")
        cfg["workers"] = raw["workers"]

    if "smoke" in raw:
        _require(isinstance(raw["smoke"], bool), "smoke", "must be a boolean")
        cfg["smoke"] = raw["smoke"]

    if "out" in raw:
        _require(isinstance(raw["out"], str) and raw["out"], "out",
                 "must be a non-empty string")
        cfg["out"] = raw["out"]

    if "params" in raw and raw["params"] is not None:
        _require(isinstance(raw["params"], dict), "params",
                 "must be a mapping")
        if cfg["experiment"] is not None:
            allowed = set(EXPERIMENTS[cfg["experiment"]].defaults)
            for key in raw["params"]:
                _require(key in allowed, "params.%s" % key,
                         "not a parameter of %s (has: %s)"
                         % (cfg["experiment"], ", ".join(sorted(allowed))))
        for key, val in raw["params"].items():
            _require(isinstance(val, (int, float, list, bool, str)),
                     "params.%s" % key,
                     "must be a number, string, list or boolean")
        cfg["params"] = dict(raw["params"])

    if "csv" in raw and raw["csv"] is not None:
        _require(isinstance(raw["csv"], dict), "csv", "must be a mapping")
        for key, val in raw["csv"].items():
            _require(key in _CSV_DEFAULTS, "csv.%s" % key,
                     "unknown field (known: %s)"
                     % ", ".join(sorted(_CSV_DEFAULTS)))
            if key == "max_rows":
                _require(isinstance(val, int) and not isinstance(val, bool)
                         and val > 0, "csv.max_rows",
                         "must be a positive integer")
            else:
                _require(isinstance(val, bool), "csv.%s" % key,
                         "must be a boolean")
            cfg["csv"][key] = val
    return cfg


def load_config(path):
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except FileNotFoundError:
        raise ConfigError("config: file not found: %s" % path)
    except yaml.YAMLError as exc:
        raise ConfigError("config: invalid yaml: %s" % exc)
    return validate_config(raw)
