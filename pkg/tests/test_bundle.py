import numpy as np
import pytest

from reldiff import linalg as la
from reldiff import rng
from reldiff.spacetime import Minkowski, RobertsonWalker, PowerLaw
from reldiff.bundle import (ProcessSpec, RoupForcing, sde_step,
                            vertical_half_step, apply_generator,
                            apply_adjoint, COMOVING, LAB)


def test_lab_coupling_matches_frame_blocks():
    # in an inertial chart the lab coupling is the spatial block of G
    st = Minkowski(d=3)
    spec = ProcessSpec(st, rest_frame=LAB)
    G = la.boost_from_coeffs(np.array([0.5, -0.3, 0.2]))[None]
    m = np.zeros((1, 4))
    lam, K = spec.coupling(m, G)
    assert lam[0] == pytest.approx(G[0, 0, 0], abs=1e-14)
    S = G[0, 1:, 1:]
    assert np.max(np.abs(K[0] - np.linalg.inv(S))) < 1e-12


def test_comoving_coupling_trivial():
    st = Minkowski(d=3)
    M = np.diag([1.0, 1.0, 2.0])
    spec = ProcessSpec(st, rest_frame=COMOVING, noise=M)
    G = la.boost_from_coeffs(np.random.default_rng(1).normal(size=(6, 3)))
    lam, K = spec.coupling(np.zeros((6, 4)), G)
    assert np.all(lam == 1.0)
    assert np.max(np.abs(K - M)) == 0.0


def test_roup_coeffs_one_dim():
    st = Minkowski(d=1)
    f = RoupForcing(alpha=0.7)
    phi = 0.9
    G = la.boost_exp(1, 1, phi)[None]
    c = f.coeffs(st, np.zeros((1, 2)), G)
    assert c[0, 0] == pytest.approx(-2 * 0.7 * np.tanh(phi), abs=1e-14)


def test_isotropic_step_exact_in_one_dim():
    # comoving noise in d=1: the rapidity is exactly a Brownian motion,
    # and the splitting composes the two half kicks around the transport
    st = Minkowski(d=1)
    sigma = 0.8
    spec = ProcessSpec(st, rest_frame=COMOVING, noise=sigma)
    phi0 = 0.4
    G0 = la.boost_exp(1, 1, phi0)[None]
    m0 = np.zeros((1, 2))
    z1 = np.array([[0.7]])
    z2 = np.array([[-1.1]])
    dt = 0.02
    m1, G1 = sde_step(spec, m0, G0, z1, z2, dt)
    half = sigma * np.sqrt(dt / 2)
    phi_mid = phi0 + half * 0.7
    phi_end = phi_mid + half * (-1.1)
    assert np.arctanh(G1[0, 1, 0] / G1[0, 0, 0]) == pytest.approx(phi_end, abs=1e-13)
    assert m1[0, 0] == pytest.approx(dt * np.cosh(phi_mid), abs=1e-14)
    assert m1[0, 1] == pytest.approx(dt * np.sinh(phi_mid), abs=1e-14)


def test_generator_radial_eigenfunction():
    # isotropic comoving noise: h = q(v0, g0) satisfies L h = (d/2) s^2 h
    st = Minkowski(d=3)
    sigma = 0.8
    spec = ProcessSpec(st, rest_frame=COMOVING, noise=sigma)
    v0 = la.boost_from_coeffs(np.array([0.3, 0.1, -0.2])) @ la.basis_vector(3, 0)

    def h(m, G):
        return la.q_inner(np.broadcast_to(v0, G[..., 0].shape), G[..., :, 0])

    G = la.boost_from_coeffs(np.random.default_rng(0).normal(size=(20, 3)) * 0.6)
    m = np.zeros((20, 4))
    Lh = apply_generator(spec, h, m, G, fd=1e-3)
    target = 1.5 * sigma ** 2 * h(m, G)
    assert np.max(np.abs(Lh - target) / np.abs(target)) < 1e-8


def test_one_step_drift_selects_the_right_reading():
    # lab-frame noise in d=1 reduces to
    #   dphi = -(1/2) sech(phi) tanh(phi) ds + sqrt(sech(phi)) dW.
    # Treating the state-dependent amplitude as a literal Stratonovich
    # coefficient would give -1/4, applying the vertical fields in the
    # other ordering -1; both must be rejected by the measured mean.
    st = Minkowski(d=1)
    spec = ProcessSpec(st, rest_frame=LAB)
    phi0 = 1.0
    n = 200_000
    dt = 1e-2
    ids = np.arange(n, dtype=np.uint64)
    z1 = rng.normals(77, ids, step=0, count=1)
    z2 = rng.normals(77, ids, step=1, count=1)
    G = np.broadcast_to(la.boost_exp(1, 1, phi0), (n, 2, 2)).copy()
    _, G1 = sde_step(spec, np.zeros((n, 2)), G, z1, z2, dt)
    dphi = np.arctanh(G1[:, 1, 0] / G1[:, 0, 0]) - phi0
    sech, tanh = 1 / np.cosh(phi0), np.tanh(phi0)
    mean, se = dphi.mean() / dt, dphi.std() / np.sqrt(n) / dt
    assert abs(mean - (-0.5 * sech * tanh)) < 4 * se
    assert abs(mean - (-1.0 * sech * tanh)) > 6 * se
    assert abs(mean - (-0.25 * sech * tanh)) > 5 * se
    assert abs(dphi.var() / dt - sech) < 0.02 * sech


def test_adjoint_annihilates_boltzmann_weight_one_dim():
    alpha = 0.7
    st = Minkowski(d=1)
    spec = ProcessSpec(st, rest_frame=LAB, forcing=RoupForcing(alpha))

    def rho(m, G):
        return np.exp(-4.0 * alpha * G[..., 0, 0])

    phis = np.linspace(-1.5, 1.5, 11)
    G = np.stack([la.boost_exp(1, 1, p) for p in phis])
    m = np.zeros((11, 2))
    res = apply_adjoint(spec, rho, m, G, fd=1e-3)
    assert np.max(np.abs(res)) / np.abs(rho(m, G)).max() < 1e-8


def test_adjoint_stationary_weight_three_dim():
    alpha = 0.5
    st = Minkowski(d=3)
    spec = ProcessSpec(st, rest_frame=LAB, forcing=RoupForcing(alpha))
    G = la.boost_from_coeffs(np.random.default_rng(4).normal(size=(12, 3)) * 0.7)
    m = np.zeros((12, 4))

    def make_rho(k):
        def rho(mm, GG):
            g = GG[..., 0, 0]
            return g ** k * np.exp(-4.0 * alpha * g)
        return rho

    res0 = apply_adjoint(spec, make_rho(0), m, G, fd=1e-3)
    rel0 = np.max(np.abs(res0) / make_rho(0)(m, G))
    assert rel0 < 1e-7
    # perturbing the weight by gamma^{+-1} must break stationarity
    for k in (-1, 1):
        resk = apply_adjoint(spec, make_rho(k), m, G, fd=1e-3)
        relk = np.max(np.abs(resk) / make_rho(k)(m, G))
        assert relk > 0.1


def test_frames_stay_orthonormal_many_steps():
    st = Minkowski(d=3)
    spec = ProcessSpec(st, rest_frame=COMOVING, noise=1.0)
    n = 64
    ids = np.arange(n, dtype=np.uint64)
    m = np.zeros((n, 4))
    G = np.broadcast_to(np.eye(4), (n, 4, 4)).copy()
    for k in range(1000):
        z1 = rng.normals(5, ids, step=2 * k, count=3)
        z2 = rng.normals(5, ids, step=2 * k + 1, count=3)
        m, G = sde_step(spec, m, G, z1, z2, 1e-3)
    assert np.max(la.orthonormality_defect(G)) < 1e-10


def test_backward_horizontal_inverts_forward():
    st = RobertsonWalker(PowerLaw(p=1.0), d=3, t_min=1e-6)
    fwd = ProcessSpec(st, rest_frame=COMOVING, noise=1.0)
    bwd = ProcessSpec(st, rest_frame=COMOVING, noise=1.0, horizontal_sign=-1.0)
    m0 = np.array([[1.0, 0.2, 0.0, -0.1]])
    G0 = st.canonical_frame(m0) @ la.boost_from_coeffs(np.array([0.3, 0.0, 0.2]))
    z = np.zeros((1, 3))
    # the residual is the symmetric part of the RK4 truncation error,
    # which scales like dt^5
    m1, G1 = sde_step(fwd, m0, G0, z, z, 0.05)
    m2, G2 = sde_step(bwd, m1, G1, z, z, 0.05)
    assert np.max(np.abs(m2 - m0)) < 1e-7
    assert np.max(np.abs(G2 - G0)) < 1e-7
    m1, G1 = sde_step(fwd, m0, G0, z, z, 0.002)
    m2, G2 = sde_step(bwd, m1, G1, z, z, 0.002)
    assert np.max(np.abs(m2 - m0)) < 1e-13
    assert np.max(np.abs(G2 - G0)) < 1e-13


def test_vertical_half_step_respects_noise_matrix():
    # anisotropic comoving noise: deterministic mapping of the z draw
    st = Minkowski(d=3)
    M = np.diag([1.0, 1.0, 2.0])
    spec = ProcessSpec(st, rest_frame=COMOVING, noise=M)
    G0 = np.eye(4)[None]
    z = np.array([[0.3, -0.5, 0.2]])
    dt_half = 0.01
    G1 = vertical_half_step(spec, np.zeros((1, 4)), G0, z, dt_half)
    b = np.sqrt(dt_half) * (M @ z[0])
    expect = la.boost_from_coeffs(b)
    assert np.max(np.abs(G1[0] - expect)) < 1e-14
