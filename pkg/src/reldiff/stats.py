"""Estimators and reference laws for the diffusion experiments.

Conventions. Velocity coordinates q are the spatial components of the
unit timelike vector g0 = (gamma, q), gamma = sqrt(1 + |q|^2). The
invariant volume on the velocity hyperboloid is dvol = dq / gamma, so a
density w.r.t. dvol equals gamma times the density w.r.t. dq. The
Juttner family used throughout is

    p(q) dq = exp(-4 alpha gamma(q)) / Z(alpha, d) dq.
"""

import numpy as np
from scipy import integrate, special
from scipy.spatial import cKDTree

from . import linalg as la
from . import rng


# ---------------------------------------------------------------------------
# Juttner reference law

def juttner_log_norm(alpha, d):
    """log Z for int exp(-4 alpha gamma(q)) dq over R^d.

    Closed forms via modified Bessel functions for d = 1 and d = 3,
    quadrature otherwise.
    """
    b = 4.0 * alpha
    if d == 1:
        return np.log(2.0 * special.kv(1, b))
    if d == 3:
        return np.log(4.0 * np.pi * special.kv(2, b) / b)
    val, _ = integrate.quad(
        lambda r: r ** (d - 1) * np.exp(-b * np.sqrt(1 + r * r)), 0, np.inf)
    sphere = 2.0 * np.pi ** (d / 2.0) / special.gamma(d / 2.0)
    return np.log(sphere * val)


def juttner_radial_pdf(r, alpha, d=3):
    """Density of |q| under the Juttner law (unnormalized shape made proper)."""
    r = np.asarray(r, dtype=float)
    b = 4.0 * alpha
    sphere = 2.0 * np.pi ** (d / 2.0) / special.gamma(d / 2.0)
    return sphere * r ** (d - 1) * np.exp(-b * np.sqrt(1 + r * r)
                                          - juttner_log_norm(alpha, d))


def juttner_mean_gamma(alpha, d=3):
    b = 4.0 * alpha
    num, _ = integrate.quad(
        lambda r: r ** (d - 1) * np.sqrt(1 + r * r) * np.exp(-b * np.sqrt(1 + r * r)),
        0, np.inf)
    den, _ = integrate.quad(
        lambda r: r ** (d - 1) * np.exp(-b * np.sqrt(1 + r * r)), 0, np.inf)
    return num / den


class JuttnerRadialLaw:
    """Grid-based CDF of |q|, for quantile bin edges and sampling."""

    def __init__(self, alpha, d=3, r_max=None, n_grid=20001):
        self.alpha = float(alpha)
        self.d = int(d)
        if r_max is None:
            # far enough that the tail mass is below double precision
            r_max = max(10.0, 60.0 / (4.0 * alpha))
        self.r = np.linspace(0.0, r_max, n_grid)
        pdf = juttner_radial_pdf(self.r, alpha, d)
        cdf = integrate.cumulative_trapezoid(pdf, self.r, initial=0.0)
        self.cdf = cdf / cdf[-1]

    def quantile(self, u):
        return np.interp(u, self.cdf, self.r)

    def cdf_at(self, r):
        return np.interp(r, self.r, self.cdf)

    def equal_mass_edges(self, k):
        u = np.linspace(0.0, 1.0, k + 1)
        edges = self.quantile(u)
        edges[0], edges[-1] = 0.0, np.inf
        return edges

    def sample(self, n, seed, stream=rng.STREAM_SAMPLER):
        """Draw q vectors: inverse-CDF radius times a uniform direction."""
        ids = np.arange(n, dtype=np.uint64)
        u = rng.uniforms(seed, ids, step=0, count=1, stream=stream)[:, 0]
        radius = self.quantile(u)
        z = rng.normals(seed, ids, step=1, count=self.d, stream=stream)
        nz = np.linalg.norm(z, axis=1)
        nz[nz == 0] = 1.0
        return radius[:, None] * z / nz[:, None]


def tv_binned(values, edges, probs=None):
    """Total variation between binned data and reference bin masses."""
    counts, _ = np.histogram(values, bins=edges)
    emp = counts / counts.sum()
    if probs is None:
        probs = np.full(len(edges) - 1, 1.0 / (len(edges) - 1))
    return 0.5 * np.sum(np.abs(emp - probs))


# ---------------------------------------------------------------------------
# density estimation

class ProductKde:
    """Product Gaussian kernel estimator with Silverman bandwidths."""

    def __init__(self, points):
        pts = np.asarray(points, dtype=float)
        n, dim = pts.shape
        sig = pts.std(axis=0, ddof=1)
        self.h = sig * (4.0 / ((dim + 2.0) * n)) ** (1.0 / (dim + 4.0))
        self.points = pts

    def evaluate(self, x):
        """Density and standard error at one point x (dim,)."""
        x = np.asarray(x, dtype=float)
        u = (self.points - x) / self.h
        logk = -0.5 * np.sum(u * u, axis=1) \
            - np.sum(np.log(self.h)) \
            - 0.5 * len(self.h) * np.log(2.0 * np.pi)
        k = np.exp(logk)
        n = len(k)
        return k.mean(), k.std(ddof=1) / np.sqrt(n)


def frame_from_normal(n_vec):
    """A Lorentz matrix whose time column is the given unit normal.

    Columns 1..d span the orthogonal hyperplane. Pure boost, so for
    n = e0 this is the identity.
    """
    n_vec = np.asarray(n_vec, dtype=float)
    d = len(n_vec) - 1
    if abs(n_vec[0] - 1.0) < 1e-15:
        return np.eye(1 + d)
    r = np.arccosh(n_vec[0])
    direction = n_vec[1:] / np.linalg.norm(n_vec[1:])
    return la.boost_from_coeffs(r * direction)


def plane_coordinates(plane, origin, m):
    """Orthonormal in-plane coordinates of points m relative to origin."""
    B = frame_from_normal(plane.normal)
    v = np.asarray(m, dtype=float) - np.asarray(origin, dtype=float)
    # spacelike legs have q(b, b) = -1, so coordinates pick up a sign
    return -np.einsum("ai,ab,...b->...i", B[:, 1:], la.eta(B.shape[0] - 1), v)


def one_particle_from_hits(hits, plane, origin, q_star):
    """Estimate the phase-space density f at (origin, q_star) from hits.

    The hit density per unit plane volume and unit dvol on the velocity
    hyperboloid is q(n, g0) f, so f = h_hat * gamma(q_star) / lambda*
    where h_hat is the kernel estimate in (plane coords, q) variables.
    Returns (f, standard error).
    """
    y = plane_coordinates(plane, origin, hits["m"])
    _, qv = la.velocity_coords(hits["g0"])
    kde = ProductKde(np.concatenate([y, qv], axis=1))
    q_star = np.asarray(q_star, dtype=float)
    x = np.concatenate([np.zeros(y.shape[1]), q_star])
    h_hat, h_se = kde.evaluate(x)
    gamma_star = np.sqrt(1.0 + np.sum(q_star ** 2))
    g0_star = np.concatenate([[gamma_star], q_star])
    lam_star = la.q_inner(plane.normal, g0_star)
    scale = gamma_star / lam_star
    return h_hat * scale, h_se * scale


def binned_mass(values, edges):
    """Cell probabilities of 1- or 2-dim samples on a rectangular grid."""
    if isinstance(edges, (tuple, list)) and len(edges) == 2:
        counts, _, _ = np.histogram2d(values[:, 0], values[:, 1],
                                      bins=list(edges))
    else:
        counts, _ = np.histogram(values, bins=edges)
    return counts / counts.sum()


def quad_against_mass(psi, mass, edges):
    """Sum of psi at cell centers against cell masses."""
    if isinstance(edges, (tuple, list)) and len(edges) == 2:
        c0 = 0.5 * (edges[0][:-1] + edges[0][1:])
        c1 = 0.5 * (edges[1][:-1] + edges[1][1:])
        vals = psi(c0[:, None], c1[None, :])
        return float(np.sum(vals * mass))
    centers = 0.5 * (edges[:-1] + edges[1:])
    return float(np.sum(psi(centers) * mass))


# ---------------------------------------------------------------------------
# entropy

def knn_entropy(samples, k=5):
    """Kozachenko-Leonenko differential entropy (nats)."""
    pts = np.asarray(samples, dtype=float)
    n, dim = pts.shape
    tree = cKDTree(pts)
    dist, _ = tree.query(pts, k=k + 1)
    eps = dist[:, k]
    eps = np.maximum(eps, 1e-300)
    vol_unit = np.pi ** (dim / 2.0) / special.gamma(dim / 2.0 + 1.0)
    return (dim * np.mean(np.log(eps)) + np.log(vol_unit)
            + special.digamma(n) - special.digamma(k))


def relative_entropy_to_juttner(q_samples, alpha):
    """KL divergence of the sample law from the Juttner law (nats)."""
    q = np.asarray(q_samples, dtype=float)
    d = q.shape[1]
    gam = np.sqrt(1.0 + np.sum(q * q, axis=1))
    cross = 4.0 * alpha * np.mean(gam) + juttner_log_norm(alpha, d)
    return -knn_entropy(q) + cross


def folded_estimate(fn, samples, folds=10):
    """Mean and standard error of fn over equal sample folds."""
    n = len(samples) // folds * folds
    parts = np.split(np.asarray(samples)[:n], folds)
    vals = np.array([fn(p) for p in parts])
    return vals.mean(), vals.std(ddof=1) / np.sqrt(folds)


# ---------------------------------------------------------------------------
# fiber quadrature and the transport identity

def fiber_grid(R=12.0, n_r=64, n_theta=24, n_phi=48):
    """Nodes and weights for integrals over the d=3 unit hyperboloid.

    Rapidity-polar coordinates: dvol = sinh^2(r) dr dOmega. Returns
    (g0 nodes (M, 4), weights (M,)).
    """
    xr, wr = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * R * (xr + 1.0)
    wr = 0.5 * R * wr * np.sinh(r) ** 2
    xc, wc = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    wphi = 2.0 * np.pi / n_phi
    st = np.sqrt(1.0 - xc ** 2)
    dirs = np.stack([
        np.outer(st, np.cos(phi)).ravel(),
        np.outer(st, np.sin(phi)).ravel(),
        np.repeat(xc, n_phi),
    ], axis=1)
    wdir = np.repeat(wc, n_phi) * wphi
    g0 = np.concatenate([
        np.repeat(np.cosh(r), len(dirs))[:, None],
        (np.sinh(r)[:, None, None] * dirs[None, :, :]).reshape(-1, 3),
    ], axis=1)
    w = (wr[:, None] * wdir[None, :]).ravel()
    return g0, w


def fiber_integral(f, g0, w):
    return float(np.sum(f(g0) * w))


def flux_divergence_check(st, h, m, fd_m=1e-2, fd_s=1e-2, grid=None):
    """Compare the divergence of the velocity average with the flow term.

    J^mu(m) = int g0^mu h(m, g0) dvol over the fiber at m satisfies
    div J = int (H0 h) dvol, where H0 is the geodesic-flow derivative
    and div the metric divergence (1/sqrt|g|) d_mu (sqrt|g| J^mu).
    Returns (lhs, rhs).
    """
    from .spacetime import geodesic_step

    if grid is None:
        grid = fiber_grid()
    gnodes, w = grid
    m = np.asarray(m, dtype=float)
    dim = len(m)

    def sqrtg(mm):
        Q = st.metric_at(mm)
        return np.sqrt(np.abs(np.linalg.det(Q)))

    def current(mm):
        # fiber nodes live in the orthonormal canonical frame at mm
        F = np.asarray(st.canonical_frame(mm))
        g0 = gnodes @ F.T
        mm_b = np.broadcast_to(mm, g0.shape)
        return sqrtg(mm) * np.sum(g0 * (h(mm_b, g0) * w)[:, None], axis=0)

    offs = (-2.0, -1.0, 1.0, 2.0)
    wgts = (1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0)
    lhs = 0.0
    for mu in range(dim):
        acc = 0.0
        for off, wgt in zip(offs, wgts):
            mm = m.copy()
            mm[mu] += off * fd_m
            acc += wgt * current(mm)[mu]
        lhs += acc / fd_m
    lhs /= sqrtg(m)

    F = np.asarray(st.canonical_frame(m))
    g0 = gnodes @ F.T
    m_b = np.broadcast_to(m, g0.shape)
    # per-node step keyed to the node's time dilation, otherwise fast
    # fiber nodes fly across the chart inside the stencil
    eps = fd_s / g0[:, 0]
    flow = 0.0
    for off, wgt in zip(offs, wgts):
        m2, g2 = geodesic_step(st, m_b, g0, off * eps, substeps=2)
        flow = flow + wgt * h(m2, g2)
    rhs = float(np.sum(flow / eps * w))
    return lhs, rhs
