import numpy as np
import pytest

from reldiff import linalg as la
from reldiff.spacetime import (Minkowski, RobertsonWalker, PowerLaw,
                               ExponentialScale, ConstantScale,
                               geodesic_step, transport_frame_step,
                               parallel_transport_step)


def test_minkowski_metric_and_christoffel():
    st = Minkowski(d=3)
    m = np.zeros((5, 4))
    Q = st.metric_at(m)
    assert Q.shape == (5, 4, 4)
    assert np.array_equal(Q[0], la.eta(3))
    u = np.ones((5, 4))
    assert np.count_nonzero(st.christoffel(m, u, u)) == 0


def test_minkowski_geodesics_are_straight():
    st = Minkowski(d=3)
    m = np.array([0.0, 1.0, 2.0, 3.0])
    u = np.array([np.cosh(0.4), np.sinh(0.4), 0.0, 0.0])
    m2, u2 = geodesic_step(st, m, u, 0.7)
    assert np.max(np.abs(m2 - (m + 0.7 * u))) < 1e-14
    assert np.array_equal(u2, u)


def test_rw_metric_values():
    st = RobertsonWalker(PowerLaw(p=2.0), d=3)
    m = np.array([1.5, 0.0, 0.0, 0.0])
    Q = st.metric_at(m)
    a2 = 1.5 ** 4
    assert Q[0, 0] == 1.0
    assert Q[1, 1] == pytest.approx(-a2, rel=1e-15)
    assert np.count_nonzero(Q - np.diag(np.diag(Q))) == 0


def test_rw_christoffel_hand_values():
    # a(t) = t: at t = 2, a = 2, a' = 1.
    st = RobertsonWalker(PowerLaw(p=1.0), d=3)
    m = np.array([2.0, 0.3, -0.1, 0.0])
    u = np.array([1.0, 0.5, 0.0, 0.0])
    v = np.array([2.0, 1.0, -1.0, 0.0])
    out = st.christoffel(m, u, v)
    # time: a a' <u_x, v_x> = 2 * (0.5*1 + 0 + 0) = 1
    assert out[0] == pytest.approx(1.0)
    # space: (a'/a)(u0 v_i + v0 u_i) = 0.5 * (1*1 + 2*0.5, 1*(-1), 0)
    assert out[1] == pytest.approx(0.5 * 2.0)
    assert out[2] == pytest.approx(-0.5)
    assert out[3] == 0.0
    # symmetric in (u, v)
    assert np.max(np.abs(out - st.christoffel(m, v, u))) < 1e-15


def test_rw_christoffel_batched():
    st = RobertsonWalker(ExponentialScale(H=0.3), d=3)
    rng = np.random.default_rng(2)
    m = np.column_stack([rng.uniform(0.5, 2.0, 6), rng.normal(size=(6, 3))])
    u = rng.normal(size=(6, 4))
    out = st.christoffel(m, u, u)
    for k in range(6):
        ref = st.christoffel(m[k], u[k], u[k])
        assert np.max(np.abs(out[k] - ref)) < 1e-15


def test_comoving_observer_is_geodesic():
    st = RobertsonWalker(PowerLaw(p=0.5), d=3)
    m = np.array([1.0, 0.2, 0.0, -0.4])
    u = np.array([1.0, 0.0, 0.0, 0.0])
    m2, u2 = geodesic_step(st, m, u, 0.5)
    assert np.max(np.abs(u2 - u)) < 1e-14
    assert m2[0] == pytest.approx(1.5)
    assert np.max(np.abs(m2[1:] - m[1:])) < 1e-14


def test_rw_geodesic_norm_and_momentum_conservation():
    # exact law: a(t)^2 * u_x is conserved along geodesics
    st = RobertsonWalker(ExponentialScale(H=0.5), d=3, t_min=1e-6)
    m = np.array([1.0, 0.2, -0.1, 0.3])
    C = 0.8
    a0 = st.scale.a(m[0])
    u = np.array([np.sqrt(1.0 + C ** 2 / a0 ** 2), C / a0 ** 2, 0.0, 0.0])
    for _ in range(1000):
        m, u = geodesic_step(st, m, u, 1e-2)
    Q = st.metric_at(m)
    assert abs(u @ Q @ u - 1.0) < 1e-9
    assert abs(st.scale.a(m[0]) ** 2 * u[1] - C) < 1e-8


def test_rw_geodesic_matches_fine_oracle():
    st = RobertsonWalker(ExponentialScale(H=0.5), d=3, t_min=1e-6)
    m0 = np.array([1.0, 0.2, -0.1, 0.3])
    u0 = np.array([np.sqrt(1.0 + 0.64 / np.exp(1.0)), 0.8 / np.exp(1.0), 0.0, 0.0])
    mc, uc = m0.copy(), u0.copy()
    mf, uf = m0.copy(), u0.copy()
    for _ in range(1000):
        mc, uc = geodesic_step(st, mc, uc, 1e-2)
        mf, uf = geodesic_step(st, mf, uf, 1e-2, substeps=100)
    assert np.max(np.abs(mc - mf)) < 1e-9
    assert np.max(np.abs(uc - uf)) < 1e-9


def test_powerlaw_geodesic_momentum_decay():
    st = RobertsonWalker(PowerLaw(p=0.5), d=3, t_min=1e-6)
    m = np.array([1.0, 0.0, 0.0, 0.0])
    u = np.array([np.sqrt(1.36), 0.6, 0.0, 0.0])
    for _ in range(1000):
        m, u = geodesic_step(st, m, u, 1e-2)
    assert abs(st.scale.a(m[0]) ** 2 * u[1] - 0.6) < 1e-8


def test_canonical_frame_orthonormal():
    st = RobertsonWalker(PowerLaw(p=2.0 / 3.0), d=3)
    m = np.column_stack([np.array([0.5, 1.0, 2.5]), np.zeros((3, 3))])
    G = st.canonical_frame(m)
    Q = st.metric_at(m)
    assert np.max(la.orthonormality_defect(G, Q)) < 1e-14


def test_frame_transport_preserves_orthonormality():
    st = RobertsonWalker(ExponentialScale(H=0.5), d=3, t_min=1e-6)
    m = np.array([1.0, 0.2, -0.1, 0.3])
    G = st.canonical_frame(m) @ la.boost_from_coeffs(np.array([0.4, -0.2, 0.1]))
    for _ in range(10000):
        m, G = transport_frame_step(st, m, G, 1e-3)
    assert la.orthonormality_defect(G, st.metric_at(m)) < 1e-12


def test_frame_transport_reverses():
    st = RobertsonWalker(ExponentialScale(H=0.5), d=3, t_min=1e-6)
    m0 = np.array([1.0, 0.2, -0.1, 0.3])
    G0 = st.canonical_frame(m0) @ la.boost_from_coeffs(np.array([0.4, -0.2, 0.1]))
    m, G = m0.copy(), G0.copy()
    for _ in range(500):
        m, G = transport_frame_step(st, m, G, 1e-3)
    for _ in range(500):
        m, G = transport_frame_step(st, m, G, 1e-3, sign=-1.0)
    assert np.max(np.abs(m - m0)) < 1e-12
    assert np.max(np.abs(G - G0)) < 1e-12


def test_parallel_transport_preserves_inner_products():
    st = RobertsonWalker(PowerLaw(p=1.0), d=3, t_min=1e-6)
    m = np.array([1.0, 0.0, 0.0, 0.0])
    u = np.array([np.sqrt(1.25), 0.5, 0.0, 0.0])
    w = np.array([0.3, 0.0, 1.0, 0.0])
    Q = st.metric_at(m)
    qu_w = w @ Q @ u
    qw_w = w @ Q @ w
    for _ in range(2000):
        m, u, w = parallel_transport_step(st, m, u, w, 1e-3)
    Q2 = st.metric_at(m)
    assert abs(w @ Q2 @ u - qu_w) < 1e-10
    assert abs(w @ Q2 @ w - qw_w) < 1e-10


def test_domain_guard():
    st = RobertsonWalker(PowerLaw(p=0.5), d=3, t_min=0.01)
    assert st.in_domain(np.array([1.0, 0, 0, 0]))
    assert not st.in_domain(np.array([0.005, 0, 0, 0]))
    flags = st.in_domain(np.array([[1.0, 0, 0, 0], [0.0, 0, 0, 0]]))
    assert flags.tolist() == [True, False]


def test_constant_scale_is_flat():
    st = RobertsonWalker(ConstantScale(c=2.0), d=3)
    m = np.array([1.0, 0.3, 0.0, 0.0])
    u = np.array([1.5, 0.2, 0.1, 0.0])
    assert np.count_nonzero(st.christoffel(m, u, u)) == 0
    assert st.metric_at(m)[1, 1] == -4.0
