"""Frame-bundle stochastic dynamics.

State: a base point m (chart coordinates, shape (..., 1+d)) and a frame
matrix G (shape (..., 1+d, 1+d)) whose columns are the frame legs,
orthonormal for the metric at m with signature (+, -, ..., -). Column 0
is the timelike leg, i.e. the instantaneous velocity.

The base point runs along the geodesic of the timelike leg (proper time
parametrization) while the frame receives vertical kicks: right
multiplication by boost exponentials. The noise is shaped by a rest
frame field F(e). With lambda = q(f0, g0) and A_ij = -q(f_i, g_j), the
boost coefficients accumulated over ds are

    db = A^{-1} M dw + c(e) ds,    dw ~ N(0, lambda ds I_d),

where M is a fixed d x d shaping matrix and c the forcing coefficients.
The amplitude lambda is frozen at the start of each substep and the
state dependence of A^{-1} is handled by a Heun predictor-corrector
average, so the vertical generator is

    sum_i c_i V_i + (lambda / 2) sum_k S_k^2,
    S_k = sum_i (A^{-1} M)_{ik} V_i,

with V_i the vertical field of the i-th boost generator. The comoving
choice F = G collapses to A = I, lambda = 1 and constant coefficients.
"""

import numpy as np

from . import linalg as la
from .spacetime import transport_frame_step

COMOVING = "comoving"
LAB = "lab"


class RoupForcing:
    """Drag toward an observer field, linear in the frame.

    Acts on the timelike leg as 2 alpha (u / gamma - g0) with
    gamma = q(u, g0), which in vertical coordinates means the V_i
    coefficient -(2 alpha / gamma) q(u, g_i). By default u is the time
    leg of the chart's canonical frame.
    """

    def __init__(self, alpha, observer=None):
        self.alpha = float(alpha)
        self.observer = observer

    def coeffs(self, st, m, G):
        if self.observer is None:
            u = st.canonical_frame(m)[..., :, 0]
        else:
            u = self.observer(m)
        Q = st.metric_at(m)
        p = np.einsum("...a,...ab,...bi->...i", u, Q, G)
        gam = p[..., 0]
        return -(2.0 * self.alpha / gam)[..., None] * p[..., 1:]


class ProcessSpec:
    """Recipe for one frame-bundle diffusion.

    rest_frame: "comoving" (the moving frame itself), "lab" (the chart's
    canonical frame field), or a callable (m, G) -> frame matrices.
    noise: scalar sigma or a d x d shaping matrix M.
    forcing: None or an object with coeffs(spacetime, m, G) -> (..., d).
    horizontal_sign: -1 runs the base point backward along the timelike
    leg while keeping the vertical dynamics unchanged.
    """

    def __init__(self, spacetime, rest_frame=COMOVING, noise=1.0,
                 forcing=None, horizontal_sign=1.0):
        self.spacetime = spacetime
        self.d = spacetime.d
        self.rest_frame = rest_frame
        M = np.asarray(noise, dtype=float)
        if M.ndim == 0:
            M = float(M) * np.eye(self.d)
        if M.shape != (self.d, self.d):
            raise ValueError("noise must be a scalar or a d x d matrix")
        self.noise_matrix = M
        self.forcing = forcing
        self.horizontal_sign = float(horizontal_sign)
        # comoving coupling is state independent; only the forcing can
        # then make the predictor and corrector differ
        self.trivial_coupling = rest_frame == COMOVING

    def frame_field(self, m, G):
        if self.rest_frame == COMOVING:
            return G
        if self.rest_frame == LAB:
            return self.spacetime.canonical_frame(m)
        return self.rest_frame(m, G)

    def coupling(self, m, G):
        """Return (lambda, K) with K = A^{-1} M, batched."""
        if self.rest_frame == COMOVING:
            lam = np.ones(G.shape[:-2])
            K = np.broadcast_to(self.noise_matrix, G.shape[:-2] + self.noise_matrix.shape)
            return lam, K
        F = self.frame_field(m, G)
        Q = self.spacetime.metric_at(m)
        P = np.swapaxes(F, -1, -2) @ Q @ G
        lam = P[..., 0, 0]
        A = -P[..., 1:, 1:]
        K = np.linalg.solve(A, np.broadcast_to(self.noise_matrix, A.shape))
        return lam, K

    def lam(self, m, G):
        return self.coupling(m, G)[0]

    def force_coeffs(self, m, G):
        if self.forcing is None:
            return np.zeros(G.shape[:-2] + (self.d,))
        return self.forcing.coeffs(self.spacetime, m, G)


def vertical_half_step(spec, m, G, z, dt_half):
    """Vertical kick over dt_half driven by standard normals z (..., d)."""
    lam0, K0 = spec.coupling(m, G)
    # the amplitude sqrt(lambda) is frozen here for the whole substep;
    # only K = A^{-1} M is re-evaluated in the corrector
    zw = np.sqrt(lam0 * dt_half)[..., None] * z
    b0 = np.einsum("...ik,...k->...i", K0, zw) + dt_half * spec.force_coeffs(m, G)
    if spec.trivial_coupling and spec.forcing is None:
        return G @ la.boost_from_coeffs(b0)
    G1 = G @ la.boost_from_coeffs(b0)
    _, K1 = spec.coupling(m, G1)
    b1 = np.einsum("...ik,...k->...i", K1, zw) + dt_half * spec.force_coeffs(m, G1)
    return G @ la.boost_from_coeffs(0.5 * (b0 + b1))


def sde_step(spec, m, G, z1, z2, dt):
    """One Strang step: half vertical, full horizontal, half vertical."""
    G = vertical_half_step(spec, m, G, z1, 0.5 * dt)
    m, G = transport_frame_step(spec.spacetime, m, G, dt,
                                sign=spec.horizontal_sign)
    G = vertical_half_step(spec, m, G, z2, 0.5 * dt)
    return m, G


# ---------------------------------------------------------------------------
# differential operators, applied by finite differences along flows

_OFFS = (-2.0, -1.0, 1.0, 2.0)
_WGTS = (1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0)


def vertical_derivative(f, spec, m, G, i, fd=1e-3):
    """(V_i f)(m, G) by a 4th-order stencil along G exp(t E_i)."""
    acc = 0.0
    for off, wgt in zip(_OFFS, _WGTS):
        B = la.boost_exp(spec.d, i + 1, off * fd)
        acc = acc + wgt * f(m, G @ B)
    return acc / fd


def horizontal_derivative(f, spec, m, G, fd=1e-4):
    """(H0 f)(m, G), the derivative along the frame's geodesic flow."""
    acc = 0.0
    for off, wgt in zip(_OFFS, _WGTS):
        m2, G2 = transport_frame_step(spec.spacetime, m, G, off * fd)
        acc = acc + wgt * f(m2, G2)
    return acc / fd


def apply_generator(spec, h, m, G, fd=1e-3):
    """Evaluate (L h)(m, G) for a batched scalar field h(m, G).

    L = sign * H0 + sum_i c_i V_i + (lambda/2) sum_k S_k^2 with
    S_k = sum_i K_ik V_i and K = A^{-1} M.
    """
    d = spec.d
    out = spec.horizontal_sign * horizontal_derivative(h, spec, m, G)
    c = spec.force_coeffs(m, G)
    for i in range(d):
        out = out + c[..., i] * vertical_derivative(h, spec, m, G, i, fd)
    lam, _ = spec.coupling(m, G)

    def s_apply(k, f):
        # (S_k f), itself a scalar field usable at displaced states
        def g(mm, GG):
            _, K = spec.coupling(mm, GG)
            acc = 0.0
            for j in range(d):
                acc = acc + K[..., j, k] * vertical_derivative(f, spec, mm, GG, j, fd)
            return acc
        return g

    for k in range(d):
        sk_h = s_apply(k, h)
        out = out + 0.5 * lam * s_apply(k, sk_h)(m, G)
    return out


def apply_adjoint(spec, rho, m, G, fd=1e-3):
    """Evaluate (L* rho)(m, G), the formal adjoint acting on densities.

    Densities are taken with respect to chart volume on the base times
    Haar measure on the fiber; both H0 and the vertical fields V_i are
    divergence free for that reference measure, so only the coefficient
    functions contribute divergences:

        L* rho = -sign * H0 rho - sum_i V_i(c_i rho)
                 + 1/2 sum_k sum_i V_i(K_ik sum_j V_j(K_jk lambda rho)).
    """
    d = spec.d
    out = -spec.horizontal_sign * horizontal_derivative(rho, spec, m, G)

    def forced(mm, GG):
        return spec.force_coeffs(mm, GG), rho(mm, GG)

    for i in range(d):
        def ci_rho(mm, GG, _i=i):
            c, r = forced(mm, GG)
            return c[..., _i] * r
        out = out - vertical_derivative(ci_rho, spec, m, G, i, fd)

    for k in range(d):
        def inner(mm, GG, _k=k):
            acc = 0.0
            for j in range(d):
                def kj_lam_rho(m3, G3, _j=j, _k2=_k):
                    lam3, K3 = spec.coupling(m3, G3)
                    return K3[..., _j, _k2] * lam3 * rho(m3, G3)
                acc = acc + vertical_derivative(kj_lam_rho, spec, mm, GG, j, fd)
            return acc

        for i in range(d):
            def ki_inner(mm, GG, _i=i, _k=k):
                _, K2 = spec.coupling(mm, GG)
                return K2[..., _i, _k] * inner(mm, GG)
            out = out + 0.5 * vertical_derivative(ki_inner, spec, m, G, i, fd)
    return out
