"""Named process presets and reduced integrators.

make_process builds the bundle-level ProcessSpec for the standard
models. Alongside it live two cheaper integrators used as independent
cross-checks and samplers:

  * flj_chart_run: Euler-Maruyama on the Ito chart equations for the
    isotropic frame diffusion, a discretization of the same law that
    shares no code with the bundle stepper;
  * roup_reduced_run: the lab-time velocity-coordinate reduction of the
    lab-frame Ornstein-Uhlenbeck style process,
    dq = -2 alpha (q / gamma) dt + M dW, whose invariant law is the
    Juttner density exp(-4 alpha gamma(q)) dq.
"""

import numpy as np

from . import rng
from .bundle import ProcessSpec, RoupForcing, COMOVING, LAB
from .spacetime import (Minkowski, RobertsonWalker, PowerLaw,
                        ExponentialScale, ConstantScale)


def _rw(scale, d, t_min):
    kinds = {"powerlaw": PowerLaw, "exponential": ExponentialScale,
             "constant": ConstantScale}
    kind, param = scale
    return RobertsonWalker(kinds[kind](param), d=d, t_min=t_min)


def make_process(name, d=3, sigma=1.0, noise=None, alpha=1.0,
                 scale=("powerlaw", 1.0), t_min=1e-6, horizontal_sign=1.0):
    """Build a ProcessSpec by preset name.

    dudley      isotropic comoving noise in a flat chart
    flj_rw      the same dynamics in a Robertson-Walker chart
    roup_lab    lab-frame noise plus drag toward the inertial observer
    roup_rw     lab-frame noise plus drag, Robertson-Walker chart
    """
    M = sigma if noise is None else np.asarray(noise, dtype=float)
    if name == "dudley":
        return ProcessSpec(Minkowski(d=d), rest_frame=COMOVING, noise=M,
                           horizontal_sign=horizontal_sign)
    if name == "flj_rw":
        return ProcessSpec(_rw(scale, d, t_min), rest_frame=COMOVING,
                           noise=M, horizontal_sign=horizontal_sign)
    if name == "roup_lab":
        return ProcessSpec(Minkowski(d=d), rest_frame=LAB, noise=M,
                           forcing=RoupForcing(alpha),
                           horizontal_sign=horizontal_sign)
    if name == "roup_rw":
        return ProcessSpec(_rw(scale, d, t_min), rest_frame=LAB, noise=M,
                           forcing=RoupForcing(alpha),
                           horizontal_sign=horizontal_sign)
    raise ValueError("unknown process %r" % (name,))


def flj_chart_step(st, m, G, z, dt, sigma=1.0):
    """One Euler-Maruyama step of the Ito chart equations.

    dm   = g0 ds
    dg0  = (-Gamma(g0, g0) + sigma^2 (d/2) g0) ds + sigma sum_j g_j dw_j
    dg_j = (-Gamma(g0, g_j) + sigma^2 (1/2) g_j) ds + sigma g0 dw_j

    The frame is NOT projected back to the orthonormal bundle; this
    scheme is kept deliberately independent of the group-level stepper.
    """
    d = st.d
    g0 = G[..., :, 0]
    dw = np.sqrt(dt) * z
    dG = np.empty_like(G)
    flat = st.flat()
    gam0 = 0.0 if flat else st.christoffel(m, g0, g0)
    dG[..., :, 0] = (-gam0 + 0.5 * d * sigma ** 2 * g0) * dt \
        + sigma * np.einsum("...aj,...j->...a", G[..., :, 1:], dw)
    for j in range(1, d + 1):
        gj = G[..., :, j]
        gamj = 0.0 if flat else st.christoffel(m, g0, gj)
        dG[..., :, j] = (-gamj + 0.5 * sigma ** 2 * gj) * dt \
            + sigma * g0 * dw[..., j - 1:j]
    return m + dt * g0, G + dG


def flj_chart_run(st, ids, m0, G0, dt, n_steps, seed, sigma=1.0):
    ids = np.asarray(ids, dtype=np.uint64)
    m, G = np.array(m0, dtype=float), np.array(G0, dtype=float)
    d = st.d
    for k in range(n_steps):
        z = rng.normals(seed, ids, step=k, count=d)
        m, G = flj_chart_step(st, m, G, z, dt, sigma=sigma)
    return m, G


def roup_reduced_step(q, z, alpha, dt, noise=None):
    """dq = -2 alpha (q / gamma) dt + M dW in lab time."""
    gam = np.sqrt(1.0 + np.sum(q * q, axis=-1))
    dw = np.sqrt(dt) * (z if noise is None else z @ np.asarray(noise).T)
    return q - 2.0 * alpha * dt * q / gam[..., None] + dw


def roup_reduced_run(alpha, q0, dt, n_steps, seed, noise=None,
                     snapshot_steps=(), path_ids=None, step_offset=0):
    """March the reduced velocity process; snapshot at given steps.

    Returns (q_final, snapshots) with snapshots a dict step -> copy of
    the q array. path_ids default to 0..n-1; step_offset shifts the
    RNG step index so consecutive runs can continue a stream.
    """
    q = np.array(q0, dtype=float)
    n, d = q.shape
    ids = (np.arange(n, dtype=np.uint64) if path_ids is None
           else np.asarray(path_ids, dtype=np.uint64))
    snaps = {}
    want = set(int(s) for s in snapshot_steps)
    if 0 in want:
        snaps[0] = q.copy()
    for k in range(n_steps):
        z = rng.normals(seed, ids, step=step_offset + k, count=d)
        q = roup_reduced_step(q, z, alpha, dt, noise=noise)
        if (k + 1) in want:
            snaps[k + 1] = q.copy()
    return q, snaps
