"""Deterministic report and table serialization.

Reports are JSON with sorted keys and floats printed through %.17g, so
a run is byte-reproducible across worker counts and machines with the
same numerics. Wall-clock times and hostnames deliberately never enter
a report.
"""

import json
import math

import numpy as np

SCHEMA_VERSION = 1


def _canon(x):
    if isinstance(x, dict):
        return {str(k): _canon(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_canon(v) for v in x]
    # bool before int: isinstance(True, int) holds and would turn flags
    # into 0/1
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        v = float(x)
        if math.isnan(v) or math.isinf(v):
            raise ValueError("non-finite value in report: %r" % (x,))
        return v
    if isinstance(x, np.ndarray):
        return [_canon(v) for v in x.tolist()]
    if isinstance(x, (str, bool)) or x is None:
        return x
    raise TypeError("cannot serialize %r" % (type(x),))


class _Canonical(json.JSONEncoder):
    def iterencode(self, o, _one_shot=False):
        for chunk in super().iterencode(o, _one_shot=_one_shot):
            yield chunk


def _format_float(v):
    s = "%.17g" % v
    return s


def dumps_report(report):
    """Canonical JSON text for a report dict."""
    canon = _canon(report)

    def encode(x):
        if isinstance(x, dict):
            items = sorted(x.items())
            return "{" + ",".join(
                json.dumps(k) + ":" + encode(v) for k, v in items) + "}"
        if isinstance(x, list):
            return "[" + ",".join(encode(v) for v in x) + "]"
        if isinstance(x, float):
            return _format_float(x)
        return json.dumps(x)

    return encode(canon) + "\n"


def write_report(path, report):
    text = dumps_report(report)
    with open(path, "w") as fh:
        fh.write(text)
    return text


def load_report(path):
    with open(path) as fh:
        return json.load(fh)


def make_check(statistic, value, tolerance, op="le", stderr=None,
               detail=None):
    """One named pass/fail line of a report."""
    value = float(value)
    tolerance = float(tolerance)
    ok = value <= tolerance if op == "le" else value >= tolerance
    out = {"statistic": statistic, "value": value, "tolerance": tolerance,
           "op": op, "pass": bool(ok)}
    if stderr is not None:
        out["stderr"] = float(stderr)
    if detail is not None:
        out["detail"] = detail
    return out


def make_report(experiment, seed, params, checks, code_version):
    return {
        "schema_version": SCHEMA_VERSION,
        "experiment": experiment,
        "seed": int(seed),
        "code_version": code_version,
        "params": params,
        "checks": checks,
        "pass": bool(all(c["pass"] for c in checks)),
    }


def format_check_line(c):
    mark = "PASS" if c["pass"] else "FAIL"
    rel = "<=" if c["op"] == "le" else ">="
    se = ("  se=%.3g" % c["stderr"]) if "stderr" in c else ""
    return "[%s] %-42s %.6g %s %.6g%s" % (
        mark, c["statistic"], c["value"], rel, c["tolerance"], se)


# ---------------------------------------------------------------------------
# CSV tables

def _fmt_row(vals):
    out = []
    for v in vals:
        if isinstance(v, (int, np.integer)):
            out.append(str(int(v)))
        else:
            out.append("%.17g" % float(v))
    return ",".join(out)


def write_trajectory_csv(path, traj, max_rows=None):
    """Long-format trajectory table.

    Columns: path_id, step, s, then coordinates m0..md, velocity
    g0_0..g0_d, and the frame orthonormality defect.
    """
    s = traj["s"]
    m = traj["m"]
    g0 = traj["g0"]
    defect = traj["defect"]
    n_frames, n_paths, dim = m.shape
    header = (["path_id", "step", "s"]
              + ["m%d" % i for i in range(dim)]
              + ["g0_%d" % i for i in range(dim)]
              + ["defect"])
    rows = 0
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for k in range(n_frames):
            for p in range(n_paths):
                if max_rows is not None and rows >= max_rows:
                    return rows
                fh.write(_fmt_row([p, k, s[k]] + list(m[k, p])
                                  + list(g0[k, p]) + [defect[k, p]]) + "\n")
                rows += 1
    return rows


def write_hits_csv(path, hits, max_rows=None):
    """Hyperplane crossing table.

    Columns: path_id, s, crossing point m0..md, velocity g0_0..g0_d,
    and the transversality factor lambda = q(n, g0).
    """
    n, dim = hits["m"].shape
    header = (["path_id", "s"] + ["m%d" % i for i in range(dim)]
              + ["g0_%d" % i for i in range(dim)] + ["lam"])
    rows = 0
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(n):
            if max_rows is not None and rows >= max_rows:
                return rows
            fh.write(_fmt_row([hits["ids"][i], hits["s"][i]]
                              + list(hits["m"][i]) + list(hits["g0"][i])
                              + [hits["lam"][i]]) + "\n")
            rows += 1
    return rows


def write_series_csv(path, columns, names):
    """Small generic table: columns is a list of equal-length arrays."""
    with open(path, "w") as fh:
        fh.write(",".join(names) + "\n")
        for row in zip(*columns):
            fh.write(_fmt_row(row) + "\n")
    return len(columns[0])
