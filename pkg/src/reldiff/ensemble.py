"""Vectorized path ensembles for the frame-bundle dynamics.

The march keeps every path in flat numpy arrays and harvests along the
way: hyperplane crossings (with linear interpolation inside the step),
state snapshots at fixed step indices, and the running quadratic
variation of the timelike leg. Paths that leave the chart domain or
blow past the velocity/coordinate caps are flagged dead and dropped
from the working arrays once enough of them accumulate.

Work is split into fixed-size blocks of paths. Block boundaries, and
therefore every random number, are independent of the worker count, so
a run with 8 processes is bit-identical to a serial one.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import multiprocessing as mp

import numpy as np

from . import linalg as la
from . import rng
from .bundle import sde_step

BLOCK_SIZE = 25000


@dataclass(frozen=True)
class Hyperplane:
    """Level surface {q(n, m) = c} of a future-timelike unit normal.

    Timelike paths cross it exactly once and transversally, since
    q(n, g0) >= 1 for any unit timelike pair.
    """
    normal: np.ndarray
    offset: float
    name: str = "plane"

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        qn = la.q_inner(n, n)
        if not (qn > 0 and n[0] > 0):
            raise ValueError("hyperplane normal must be future timelike")
        object.__setattr__(self, "normal", n / np.sqrt(qn))

    def value(self, m):
        return la.q_inner(np.broadcast_to(self.normal, m.shape), m) - self.offset


@dataclass
class HitBuffer:
    ids: list = field(default_factory=list)
    s: list = field(default_factory=list)
    m: list = field(default_factory=list)
    g0: list = field(default_factory=list)
    lam: list = field(default_factory=list)

    def harvest(self):
        if not self.ids:
            return {"ids": np.zeros(0, dtype=np.uint64), "s": np.zeros(0),
                    "m": np.zeros((0, 0)), "g0": np.zeros((0, 0)),
                    "lam": np.zeros(0)}
        return {"ids": np.concatenate(self.ids), "s": np.concatenate(self.s),
                "m": np.concatenate(self.m), "g0": np.concatenate(self.g0),
                "lam": np.concatenate(self.lam)}


def identity_init(spec, n, boost=None):
    """Start every path at the chart origin with the canonical frame.

    For Robertson-Walker charts the origin sits at t = 1. An optional
    boost coefficient vector tilts the initial timelike leg.
    """
    d = spec.d
    m0 = np.zeros((n, 1 + d))
    if not spec.spacetime.flat():
        m0[:, 0] = 1.0
    G0 = np.array(spec.spacetime.canonical_frame(m0))
    if boost is not None:
        G0 = G0 @ la.boost_from_coeffs(np.asarray(boost, dtype=float))
    return m0, G0


def random_velocity_init(spec, ids, seed, scale=1.0):
    """Boost the canonical frame by iid normal coefficients per path."""
    d = spec.d
    z = rng.normals(seed, ids, step=0, count=d, stream=rng.STREAM_INIT)
    m0 = np.zeros((len(ids), 1 + d))
    if not spec.spacetime.flat():
        m0[:, 0] = 1.0
    G0 = np.array(spec.spacetime.canonical_frame(m0)) @ la.boost_from_coeffs(scale * z)
    return m0, G0


class EvolveResult:
    def __init__(self):
        self.ids = None
        self.m = None
        self.G = None
        self.alive = None
        self.hits = {}
        self.snapshots = {}
        self.qv = None
        self.qv_compensator = None
        self.max_defect = 0.0
        self.n_repaired = 0
        self.n_killed = 0


def evolve(spec, ids, m, G, dt, n_steps, seed, *, planes=(), snapshot_steps=(),
           track_qv=False, defect_every=25, gs_tol=1e-10, gamma_cap=1e6,
           coord_cap=1e12, record=None, record_every=1):
    """March the bundle SDE and harvest hits, snapshots and QV.

    ids are global path identifiers feeding the counter RNG, so results
    do not depend on how paths are grouped into calls. Returns an
    EvolveResult whose per-path arrays follow the surviving paths (dead
    paths keep their last state and stay in the output with
    alive=False).
    """
    d = spec.d
    ids = np.asarray(ids, dtype=np.uint64)
    n = len(ids)
    m = np.array(m, dtype=float)
    G = np.array(G, dtype=float)
    res = EvolveResult()
    snapshot_steps = set(int(k) for k in snapshot_steps)
    buffers = {p.name: HitBuffer() for p in planes}
    plane_val = {p.name: p.value(m) for p in planes}
    crossed = {p.name: plane_val[p.name] >= 0 for p in planes}

    # dead paths are parked here and reattached at the end
    dead_ids, dead_m, dead_G = [], [], []

    if track_qv:
        qv = np.zeros((n, 1 + d, 1 + d))
        comp = np.zeros((n, 1 + d, 1 + d))
    if 0 in snapshot_steps:
        res.snapshots[0] = (ids.copy(), m.copy(), G.copy())

    live_ids, live_m, live_G = ids, m, G
    live_qv = qv if track_qv else None
    live_comp = comp if track_qv else None
    live_val = plane_val
    live_crossed = crossed

    for k in range(n_steps):
        z1 = rng.normals(seed, live_ids, step=2 * k, count=d)
        z2 = rng.normals(seed, live_ids, step=2 * k + 1, count=d)
        g0_pre = live_G[..., :, 0].copy()
        m_pre = live_m
        if track_qv:
            Qinv = np.linalg.inv(spec.spacetime.metric_at(live_m)) \
                if not spec.spacetime.flat() else la.eta(d)
            live_comp += dt * (g0_pre[:, :, None] * g0_pre[:, None, :] - Qinv)
        live_m, live_G = sde_step(spec, live_m, live_G, z1, z2, dt)
        if track_qv:
            dg = live_G[..., :, 0] - g0_pre
            live_qv += dg[:, :, None] * dg[:, None, :]

        for p in planes:
            f_new = p.value(live_m)
            buf = buffers[p.name]
            was = live_crossed[p.name]
            hit = (~was) & (f_new >= 0)
            if np.any(hit):
                f0 = live_val[p.name][hit]
                f1 = f_new[hit]
                th = f0 / (f0 - f1)
                th = np.clip(th, 0.0, 1.0)[:, None]
                m_star = m_pre[hit] + th * (live_m[hit] - m_pre[hit])
                g_star = g0_pre[hit] + th * (live_G[hit][:, :, 0] - g0_pre[hit])
                g_star = g_star / np.sqrt(la.q_inner(g_star, g_star))[:, None]
                buf.ids.append(live_ids[hit])
                buf.s.append((k + th[:, 0]) * dt)
                buf.m.append(m_star)
                buf.g0.append(g_star)
                buf.lam.append(la.q_inner(
                    np.broadcast_to(p.normal, g_star.shape), g_star))
            live_val[p.name] = f_new
            live_crossed[p.name] = was | hit

        if (k + 1) % defect_every == 0:
            Q = spec.spacetime.metric_at(live_m)
            defect = la.orthonormality_defect(live_G, Q)
            res.max_defect = max(res.max_defect, float(defect.max(initial=0.0)))
            bad = defect > gs_tol
            if np.any(bad):
                live_G[bad] = la.gram_schmidt_lorentz(
                    live_G[bad], Q[bad] if Q.ndim == 3 else Q)
                res.n_repaired += int(bad.sum())

        ok = spec.spacetime.in_domain(live_m)
        ok &= live_G[..., 0, 0] < gamma_cap
        ok &= np.max(np.abs(live_m), axis=-1) < coord_cap
        if not np.all(ok):
            res.n_killed += int((~ok).sum())
            dead_ids.append(live_ids[~ok])
            dead_m.append(live_m[~ok])
            dead_G.append(live_G[~ok])
            live_ids, live_m, live_G = live_ids[ok], live_m[ok], live_G[ok]
            if track_qv:
                live_qv, live_comp = live_qv[ok], live_comp[ok]
            for p in planes:
                live_val[p.name] = live_val[p.name][ok]
                live_crossed[p.name] = live_crossed[p.name][ok]

        if (k + 1) in snapshot_steps:
            res.snapshots[k + 1] = (live_ids.copy(), live_m.copy(), live_G.copy())
        if record is not None and (k + 1) % record_every == 0:
            record(k + 1, (k + 1) * dt, live_ids, live_m, live_G)

    res.hits = {name: buf.harvest() for name, buf in buffers.items()}
    if dead_ids:
        all_ids = np.concatenate([live_ids] + dead_ids)
        all_m = np.concatenate([live_m] + dead_m)
        all_G = np.concatenate([live_G] + dead_G)
        alive = np.zeros(len(all_ids), dtype=bool)
        alive[:len(live_ids)] = True
        order = np.argsort(all_ids, kind="stable")
        res.ids, res.m, res.G, res.alive = (all_ids[order], all_m[order],
                                            all_G[order], alive[order])
    else:
        res.ids, res.m, res.G = live_ids, live_m, live_G
        res.alive = np.ones(len(live_ids), dtype=bool)
    if track_qv:
        res.qv, res.qv_compensator = live_qv, live_comp
    return res


def _call(args):
    fn, params, lo, hi = args
    return fn(params, lo, hi)


def run_blocks(n_paths, fn, params, workers=1, block_size=BLOCK_SIZE):
    """Apply fn(params, lo, hi) over fixed path-id blocks, in order.

    fn must be a module-level function (it crosses a process boundary
    when workers > 1). The block layout depends only on n_paths and
    block_size, never on workers, and results come back in block order.
    """
    edges = list(range(0, n_paths, block_size)) + [n_paths]
    jobs = [(fn, params, edges[i], edges[i + 1]) for i in range(len(edges) - 1)]
    if workers <= 1:
        return [_call(j) for j in jobs]
    ctx = mp.get_context("fork")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as ex:
        return list(ex.map(_call, jobs, chunksize=1))


def merge_hits(results, key):
    """Concatenate one plane's hit dicts from a list of block results."""
    parts = [r[key] for r in results]
    out = {}
    for fieldname in parts[0]:
        arrs = [p[fieldname] for p in parts if len(p[fieldname])]
        out[fieldname] = (np.concatenate(arrs) if arrs
                          else parts[0][fieldname])
    return out


def simulate_recorded(spec, n, dt, n_steps, seed, *, boost=None, record_every=1):
    """Small-ensemble convenience run that keeps the whole trajectory.

    Returns dict with s (K,), m (K, n, 1+d), g0, defect (K, n). Meant
    for plots and file export, not for large ensembles.
    """
    ids = np.arange(n, dtype=np.uint64)
    m, G = identity_init(spec, n, boost=boost)
    frames_m, frames_g0, frames_defect, svals = [], [], [], []

    def grab(k, s, ids_, m_, G_):
        Q = spec.spacetime.metric_at(m_)
        frames_m.append(m_.copy())
        frames_g0.append(G_[..., :, 0].copy())
        frames_defect.append(np.array(la.orthonormality_defect(G_, Q)))
        svals.append(s)

    grab(0, 0.0, ids, m, G)
    evolve(spec, ids, m, G, dt, n_steps, seed, record=grab,
           record_every=record_every)
    return {"s": np.array(svals), "m": np.stack(frames_m),
            "g0": np.stack(frames_g0), "defect": np.stack(frames_defect)}
