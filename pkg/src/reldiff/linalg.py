"""Minkowski linear algebra: the quadratic form q, boosts, frames.

Conventions used throughout the package:
  * signature (+, -, ..., -) with d spatial dimensions,
  * index 0 is time; a frame is a matrix whose COLUMNS are the frame
    vectors (g^0, ..., g^d), with g^0 future timelike,
  * "defect" of a frame G means max |G^T Q G - eta| over entries.

All functions broadcast over leading batch axes.
"""

import numpy as np
import scipy.linalg


def eta(d):
    """Minkowski metric matrix diag(1, -1, ..., -1) in dimension 1+d."""
    return np.diag([1.0] + [-1.0] * d)


def q_inner(u, v):
    """Minkowski inner product u^0 v^0 - sum_i u^i v^i, batched."""
    u = np.asarray(u)
    v = np.asarray(v)
    return u[..., 0] * v[..., 0] - np.sum(u[..., 1:] * v[..., 1:], axis=-1)


def form_inner(Q, u, v):
    """Inner product u^T Q v for a (batched) metric matrix Q."""
    return np.einsum("...i,...ij,...j->...", u, Q, v)


def basis_vector(d, mu):
    e = np.zeros(1 + d)
    e[mu] = 1.0
    return e


def boost_generator(d, i):
    """Generator of boosts in the (e^0, e^i) plane, 1 <= i <= d."""
    if not 1 <= i <= d:
        raise ValueError("boost index out of range")
    X = np.zeros((1 + d, 1 + d))
    X[0, i] = 1.0
    X[i, 0] = 1.0
    return X


def boost_generators(d):
    """All d boost generators stacked, shape (d, 1+d, 1+d)."""
    return np.stack([boost_generator(d, i) for i in range(1, d + 1)])


def boost_exp(d, i, t):
    """exp(t E_i): hyperbolic rotation by rapidity t in the (0, i) plane."""
    c = np.zeros(d)
    c[i - 1] = t
    return boost_from_coeffs(c)


def boost_from_coeffs(c):
    """Closed-form exp(sum_i c_i E_i) for boost coefficients c, batched.

    For X = sum c_i E_i one has X^3 = |c|^2 X, so
    exp(X) = I + X sinh(t)/t + X^2 (cosh(t)-1)/t^2 with t = |c|.
    Small |c| uses the series for sinh(t)/t and (cosh(t)-1)/t^2.
    """
    c = np.asarray(c, dtype=float)
    d = c.shape[-1]
    t2 = np.sum(c * c, axis=-1)
    t = np.sqrt(t2)
    small = t < 1e-4
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(small, 1.0 + t2 / 6.0 + t2 * t2 / 120.0, np.sinh(t) / np.where(small, 1.0, t))
        k = np.where(small, 0.5 + t2 / 24.0 + t2 * t2 / 720.0,
                     (np.cosh(t) - 1.0) / np.where(small, 1.0, t2))
    out = np.zeros(c.shape[:-1] + (1 + d, 1 + d))
    out[..., 0, 0] = np.cosh(t)
    out[..., 0, 1:] = c * s[..., None]
    out[..., 1:, 0] = c * s[..., None]
    outer = c[..., :, None] * c[..., None, :]
    out[..., 1:, 1:] = np.eye(d) + outer * k[..., None, None]
    return out


def lie_defect(X):
    """How far X is from so(1,d): max |X eta + eta X^T|."""
    X = np.asarray(X, dtype=float)
    d = X.shape[-1] - 1
    e = eta(d)
    return np.max(np.abs(X @ e + e @ np.swapaxes(X, -1, -2)))


def group_exp(X, lie_tol=1e-10):
    """Matrix exponential of an so(1,d) element (Pade, scaling-and-squaring).

    Rejects input whose Lie-algebra defect exceeds lie_tol, since exp of
    anything else would silently leave the isometry group.
    """
    X = np.asarray(X, dtype=float)
    dft = lie_defect(X)
    if dft > lie_tol:
        raise ValueError(f"not in so(1,d): defect {dft:.3e} exceeds {lie_tol:.1e}")
    return scipy.linalg.expm(X)


def rotation_embed(R):
    """Embed a spatial rotation R in SO(d) as diag(1, R)."""
    R = np.asarray(R, dtype=float)
    d = R.shape[-1]
    out = np.zeros(R.shape[:-2] + (1 + d, 1 + d))
    out[..., 0, 0] = 1.0
    out[..., 1:, 1:] = R
    return out


def orthonormality_defect(G, Q=None):
    """max |G^T Q G - eta| entrywise; Q defaults to the Minkowski metric."""
    G = np.asarray(G, dtype=float)
    d = G.shape[-1] - 1
    if Q is None:
        gram = np.swapaxes(G, -1, -2) @ (eta(d) @ G)
    else:
        gram = np.swapaxes(G, -1, -2) @ (Q @ G)
    return np.max(np.abs(gram - eta(d)), axis=(-1, -2))


def hyperbolic_distance(u, v):
    """Geodesic distance on the unit hyperboloid: arccosh q(u, v).

    Both arguments must be future unit timelike (q = 1, positive time
    component); raises ValueError otherwise.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    for w in (u, v):
        if np.any(np.abs(q_inner(w, w) - 1.0) > 1e-8) or np.any(w[..., 0] <= 0):
            raise ValueError("argument is not a future unit timelike vector")
    inner = q_inner(u, v)
    if np.any(inner < 1.0 - 1e-8):
        raise ValueError("q(u, v) < 1 for unit timelike vectors: invalid input")
    return np.arccosh(np.clip(inner, 1.0, None))


def velocity_coords(g0):
    """Split a unit timelike vector into (gamma, spatial velocity q)."""
    g0 = np.asarray(g0, dtype=float)
    return g0[..., 0], g0[..., 1:]


def velocity_point(qvec):
    """Unit timelike vector (sqrt(1+|q|^2), q) from spatial velocity q."""
    qvec = np.asarray(qvec, dtype=float)
    gam = np.sqrt(1.0 + np.sum(qvec * qvec, axis=-1))
    return np.concatenate([gam[..., None], qvec], axis=-1)


def gram_schmidt_lorentz(G, Q=None):
    """Re-orthonormalize frame columns wrt Q, timelike column first.

    Column 0 is normalized to q-norm +1; each spatial column has the
    projections onto the already-fixed columns removed (with signature
    signs) and is normalized to q-norm -1. Batched.
    """
    G = np.array(G, dtype=float, copy=True)
    d = G.shape[-1] - 1
    if Q is None:
        Q = eta(d)
    Q = np.broadcast_to(Q, G.shape)

    def inner(a, b):
        return np.einsum("...i,...ij,...j->...", a, Q[..., :, :], b)

    v0 = G[..., :, 0]
    n0 = inner(v0, v0)
    G[..., :, 0] = v0 / np.sqrt(n0)[..., None]
    for j in range(1, 1 + d):
        v = G[..., :, j]
        v = v - inner(v, G[..., :, 0])[..., None] * G[..., :, 0]
        for k in range(1, j):
            # spatial columns have q-norm -1, so the projection gets a + sign
            v = v + inner(v, G[..., :, k])[..., None] * G[..., :, k]
        n = -inner(v, v)
        G[..., :, j] = v / np.sqrt(n)[..., None]
    return G
