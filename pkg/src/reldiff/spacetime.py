"""Spacetime charts: metric, Christoffel symbols, geodesics, transport.

Two chart families are provided: Minkowski space in inertial coordinates
and spatially flat Robertson-Walker metrics ds^2 = dt^2 - a(t)^2 dx^2 in
comoving coordinates. Everything is batched over leading axes; points,
vectors and frames are plain numpy arrays in chart coordinates.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import eta


@dataclass(frozen=True)
class PowerLaw:
    """Scale factor a(t) = t^p (needs t > 0)."""
    p: float = 1.0

    def a(self, t):
        return np.power(t, self.p)

    def aprime(self, t):
        return self.p * np.power(t, self.p - 1.0)


@dataclass(frozen=True)
class ExponentialScale:
    """Scale factor a(t) = exp(H t)."""
    H: float = 1.0

    def a(self, t):
        return np.exp(self.H * t)

    def aprime(self, t):
        return self.H * np.exp(self.H * t)


@dataclass(frozen=True)
class ConstantScale:
    """Scale factor a(t) = c (static, Minkowski up to spatial rescaling)."""
    c: float = 1.0

    def a(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.c)

    def aprime(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class Minkowski:
    """Flat spacetime R^{1,d} in inertial coordinates."""
    d: int = 3

    @property
    def name(self):
        return f"minkowski{self.d}"

    def metric_at(self, m):
        m = np.asarray(m, dtype=float)
        return np.broadcast_to(eta(self.d), m.shape[:-1] + (1 + self.d, 1 + self.d))

    def christoffel(self, m, u, v):
        u = np.asarray(u, dtype=float)
        return np.zeros(np.broadcast(np.asarray(m), u).shape)

    def in_domain(self, m):
        m = np.asarray(m)
        return np.ones(m.shape[:-1], dtype=bool)

    def canonical_frame(self, m):
        m = np.asarray(m, dtype=float)
        return np.broadcast_to(np.eye(1 + self.d), m.shape[:-1] + (1 + self.d, 1 + self.d))

    def flat(self):
        return True


@dataclass(frozen=True)
class RobertsonWalker:
    """Spatially flat Robertson-Walker chart, metric diag(1, -a(t)^2 I).

    Christoffel contraction Gamma(u, v):
      time component      a a' <u_x, v_x>  (Euclidean spatial dot),
      spatial components  (a'/a)(u^0 v_x + v^0 u_x).
    The chart domain is t > t_min (power-law scale factors are singular
    at t = 0; paths leaving the domain are terminated, not extrapolated).
    """
    scale: object
    d: int = 3
    t_min: float = 1e-9

    @property
    def name(self):
        return f"rw{self.d}"

    def metric_at(self, m):
        m = np.asarray(m, dtype=float)
        a2 = self.scale.a(m[..., 0]) ** 2
        Q = np.zeros(m.shape[:-1] + (1 + self.d, 1 + self.d))
        Q[..., 0, 0] = 1.0
        for i in range(1, 1 + self.d):
            Q[..., i, i] = -a2
        return Q

    def christoffel(self, m, u, v):
        m = np.asarray(m, dtype=float)
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        t = m[..., 0]
        a = self.scale.a(t)
        ap = self.scale.aprime(t)
        out = np.zeros(np.broadcast(u, v).shape)
        out[..., 0] = a * ap * np.sum(u[..., 1:] * v[..., 1:], axis=-1)
        h = (ap / a)[..., None]
        out[..., 1:] = h * (u[..., :1] * v[..., 1:] + v[..., :1] * u[..., 1:])
        return out

    def in_domain(self, m):
        m = np.asarray(m)
        return m[..., 0] > self.t_min

    def canonical_frame(self, m):
        """Comoving-observer orthonormal frame (d_t, a^-1 d_i)."""
        m = np.asarray(m, dtype=float)
        inv_a = 1.0 / self.scale.a(m[..., 0])
        G = np.zeros(m.shape[:-1] + (1 + self.d, 1 + self.d))
        G[..., 0, 0] = 1.0
        for i in range(1, 1 + self.d):
            G[..., i, i] = inv_a
        return G

    def flat(self):
        return False


def geodesic_step(st, m, u, ds, substeps=1):
    """One RK4 step of the geodesic equation (m' = u, u' = -Gamma(u, u)).

    ds may be an array broadcasting against the batch shape, giving each
    point its own step length.
    """
    ds = np.asarray(ds, dtype=float)
    if ds.ndim:
        ds = ds[..., None]
    h = ds / substeps
    for _ in range(substeps):
        k1m, k1u = u, -st.christoffel(m, u, u)
        m2, u2 = m + 0.5 * h * k1m, u + 0.5 * h * k1u
        k2m, k2u = u2, -st.christoffel(m2, u2, u2)
        m3, u3 = m + 0.5 * h * k2m, u + 0.5 * h * k2u
        k3m, k3u = u3, -st.christoffel(m3, u3, u3)
        m4, u4 = m + h * k3m, u + h * k3u
        k4m, k4u = u4, -st.christoffel(m4, u4, u4)
        m = m + (h / 6.0) * (k1m + 2 * k2m + 2 * k3m + k4m)
        u = u + (h / 6.0) * (k1u + 2 * k2u + 2 * k3u + k4u)
    return m, u


def _frame_rhs(st, m, G, sign):
    """Velocity of (m, G) under geodesic flow along sign * (column 0)."""
    u = sign * G[..., :, 0]
    dm = u
    dG = -st.christoffel(m[..., None, :], u[..., None, :], np.swapaxes(G, -1, -2))
    return dm, np.swapaxes(dG, -1, -2)


def transport_frame_step(st, m, G, ds, sign=1.0):
    """RK4 step moving the full frame along the geodesic of its time leg.

    Column 0 follows its own geodesic; every column is parallel
    transported along it (column 0's transport IS the geodesic equation).
    With sign = -1 the base point runs backwards along the time leg while
    the frame stays future-oriented.
    """
    if st.flat():
        return m + ds * sign * G[..., :, 0], G
    h = ds
    k1m, k1G = _frame_rhs(st, m, G, sign)
    k2m, k2G = _frame_rhs(st, m + 0.5 * h * k1m, G + 0.5 * h * k1G, sign)
    k3m, k3G = _frame_rhs(st, m + 0.5 * h * k2m, G + 0.5 * h * k2G, sign)
    k4m, k4G = _frame_rhs(st, m + h * k3m, G + h * k3G, sign)
    m2 = m + (h / 6.0) * (k1m + 2 * k2m + 2 * k3m + k4m)
    G2 = G + (h / 6.0) * (k1G + 2 * k2G + 2 * k3G + k4G)
    return m2, G2


def parallel_transport_step(st, m, u, w, ds):
    """Transport w one RK4 step along the geodesic with velocity u.

    Returns (m', u', w').
    """
    G = np.stack([u, w], axis=-1)

    def rhs(m_, G_):
        uu = G_[..., :, 0]
        dm = uu
        du = -st.christoffel(m_, uu, uu)
        dw = -st.christoffel(m_, uu, G_[..., :, 1])
        return dm, np.stack([du, dw], axis=-1)

    h = ds
    k1m, k1G = rhs(m, G)
    k2m, k2G = rhs(m + 0.5 * h * k1m, G + 0.5 * h * k1G)
    k3m, k3G = rhs(m + 0.5 * h * k2m, G + 0.5 * h * k2G)
    k4m, k4G = rhs(m + h * k3m, G + h * k3G)
    m2 = m + (h / 6.0) * (k1m + 2 * k2m + 2 * k3m + k4m)
    G2 = G + (h / 6.0) * (k1G + 2 * k2G + 2 * k3G + k4G)
    return m2, G2[..., :, 0], G2[..., :, 1]
