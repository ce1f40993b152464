"""Experiment registry: every quantitative claim as a runnable check.

Each experiment is a deterministic function of (params, seed). All
randomness comes from the counter RNG keyed by global path ids and the
work is split into fixed blocks, so the worker count never changes a
single bit of the output. Runners return a list of pass/fail checks
plus optional artifact tables (trajectories, hyperplane hits) for CSV
export.

Conventions for checks: statistical comparisons are expressed as
|measured - target| / stderr with the tolerance in standard errors;
deterministic identities use absolute or relative bounds;
distributional comparisons use a KS p-value (op "ge") or a binned total
variation distance.
"""

from dataclasses import dataclass
import numpy as np
from scipy.stats import ks_2samp

from . import __version__
from . import linalg as la
from . import rng
from . import stats as st
from .bundle import ProcessSpec, RoupForcing, apply_adjoint, LAB
from .ensemble import (BLOCK_SIZE, Hyperplane, evolve, identity_init,
                       merge_hits, run_blocks)
from .processes import make_process, flj_chart_run, roup_reduced_run
from .report import make_check, make_report, dumps_report
from .spacetime import ExponentialScale, Minkowski, RobertsonWalker
from .stats import (JuttnerRadialLaw, binned_mass, folded_estimate,
                    fiber_grid, flux_divergence_check, juttner_mean_gamma,
                    one_particle_from_hits, plane_coordinates,
                    quad_against_mass, relative_entropy_to_juttner, tv_binned)

_MASK = (1 << 64) - 1


def _sub(seed, k):
    """Derive an independent sub-seed for the k-th ensemble of a run."""
    return (int(seed) * 1009 + k) & _MASK


def _zcheck(name, measured, target, se, tol):
    z = abs(measured - target) / se
    return make_check(name, z, tol, stderr=se,
                      detail={"measured": float(measured),
                              "target": float(target)})


# ---------------------------------------------------------------------------
# 1. frame integrity: no reprojection, defect stays tiny over long runs

def _frame_integrity(params, seed, workers):
    checks = []
    artifacts = {}
    # the noise scale is kept moderate so rapidity excursions over 1e4
    # steps stay bounded; the fp floor of the defect grows like
    # gamma^2 * eps and must sit far below the tolerance
    cases = [("minkowski", make_process("dudley", d=3, sigma=params["sigma"])),
             ("robertson-walker",
              make_process("flj_rw", d=3, sigma=params["sigma_rw"],
                           scale=("exponential", params["hubble"])))]
    for j, (label, spec) in enumerate(cases):
        n = params["paths"]
        ids = np.arange(n, dtype=np.uint64)
        m, G = identity_init(spec, n)
        frames = {"s": [], "m": [], "g0": [], "defect": []}
        g0_err = [0.0]

        def grab(k, s, ids_, m_, G_, _spec=spec, _f=frames, _e=g0_err):
            Q = _spec.spacetime.metric_at(m_)
            g0 = G_[..., :, 0]
            nrm = np.einsum("ni,nij,nj->n", g0, Q, g0)
            _e[0] = max(_e[0], float(np.abs(nrm - 1.0).max(initial=0.0)))
            _f["s"].append(s)
            _f["m"].append(m_.copy())
            _f["g0"].append(g0.copy())
            _f["defect"].append(np.array(la.orthonormality_defect(G_, Q)))

        grab(0, 0.0, ids, m, G)
        res = evolve(spec, ids, m, G, params["dt"], params["steps"],
                     _sub(seed, j), gs_tol=np.inf, defect_every=50,
                     record=grab, record_every=params["record_every"])
        checks.append(make_check("max frame defect (%s)" % label,
                                 res.max_defect, params["defect_tol"]))
        checks.append(make_check("max |q(g0,g0)-1| (%s)" % label,
                                 g0_err[0], params["defect_tol"]))
        checks.append(make_check("paths lost (%s)" % label,
                                 res.n_killed, 0.0))
        if label == "minkowski":
            artifacts["trajectory"] = {
                "s": np.array(frames["s"]), "m": np.stack(frames["m"]),
                "g0": np.stack(frames["g0"]),
                "defect": np.stack(frames["defect"])}
    return checks, artifacts


# ---------------------------------------------------------------------------
# 2. radial moment: E[cosh dist] grows exactly exponentially

def _radial_moment_block(p, lo, hi):
    spec = make_process("dudley", d=3, sigma=p["sigma"])
    ids = np.arange(lo, hi, dtype=np.uint64)
    m, G = identity_init(spec, hi - lo)
    res = evolve(spec, ids, m, G, p["dt"], p["steps"], p["seed_run"])
    gam = res.G[..., 0, 0]
    return {"n": int(gam.size), "s1": float(gam.sum()),
            "s2": float(gam @ gam), "defect": res.max_defect}


def _dudley_radial_moment(params, seed, workers):
    p = {"sigma": params["sigma"], "dt": params["dt"],
         "steps": params["steps"], "seed_run": _sub(seed, 0)}
    out = run_blocks(params["paths"], _radial_moment_block, p, workers,
                     params["block_size"])
    n = sum(r["n"] for r in out)
    s1 = sum(r["s1"] for r in out)
    s2 = sum(r["s2"] for r in out)
    mean = s1 / n
    var = s2 / n - mean * mean
    se = np.sqrt(var / n)
    s_final = params["steps"] * params["dt"]
    target = np.exp(0.5 * 3 * params["sigma"] ** 2 * s_final)
    checks = [
        _zcheck("mean cosh distance vs exp(3 s/2), se units",
                mean, target, se, params["z_tol"]),
        make_check("max frame defect", max(r["defect"] for r in out), 1e-8),
    ]
    return checks, {}


# ---------------------------------------------------------------------------
# 3. scheme equivalence: group stepper vs independent chart scheme

def _scheme_equivalence(params, seed, workers):
    n, dt, steps = params["paths"], params["dt"], params["steps"]
    spec = make_process("dudley", d=3, sigma=params["sigma"])
    ids = np.arange(n, dtype=np.uint64)
    m, G = identity_init(spec, n)
    res = evolve(spec, ids, m, G, dt, steps, _sub(seed, 0))
    m0, G0 = identity_init(spec, n)
    m_b, G_b = flj_chart_run(Minkowski(d=3), ids, m0, G0, dt, steps,
                             _sub(seed, 1), sigma=params["sigma"])
    p_gam = ks_2samp(res.G[..., 0, 0], G_b[..., 0, 0]).pvalue
    p_x = ks_2samp(res.m[:, 1], m_b[:, 1]).pvalue
    checks = [
        make_check("ks p-value, gamma marginal", p_gam, params["p_min"], op="ge"),
        make_check("ks p-value, x marginal", p_x, params["p_min"], op="ge"),
    ]
    return checks, {}


# ---------------------------------------------------------------------------
# 4. martingale covariance: QV of the velocity matches its compensator

def _martingale_covariance(params, seed, workers):
    checks = []
    cases = [("minkowski", make_process("dudley", d=3, sigma=1.0)),
             ("robertson-walker",
              make_process("flj_rw", d=3, sigma=1.0,
                           scale=("powerlaw", 1.0)))]
    for j, (label, spec) in enumerate(cases):
        n = params["paths"]
        ids = np.arange(n, dtype=np.uint64)
        m, G = identity_init(spec, n)
        res = evolve(spec, ids, m, G, params["dt"], params["steps"],
                     _sub(seed, j), track_qv=True)
        D = res.qv - res.qv_compensator
        mean = D.mean(axis=0)
        se = D.std(axis=0, ddof=1) / np.sqrt(D.shape[0])
        zmax = float(np.max(np.abs(mean) / se))
        checks.append(make_check(
            "max |qv - compensator| entry, se units (%s)" % label,
            zmax, params["z_tol"]))
    return checks, {}


# ---------------------------------------------------------------------------
# 5. rotation invariance: statistics do not see the boost axis

def _rotation_invariance(params, seed, workers):
    spec = make_process("dudley", d=3, sigma=params["sigma"])
    n, dt, steps, r = (params["paths"], params["dt"], params["steps"],
                       params["rapidity"])
    ids = np.arange(n, dtype=np.uint64)
    out = []
    for j, axis in enumerate((0, 1)):
        boost = np.zeros(3)
        boost[axis] = r
        m, G = identity_init(spec, n, boost=boost)
        out.append(evolve(spec, ids, m, G, dt, steps, _sub(seed, j)))
    p_gam = ks_2samp(out[0].G[..., 0, 0], out[1].G[..., 0, 0]).pvalue
    p_axis = ks_2samp(out[0].m[:, 1], out[1].m[:, 2]).pvalue
    checks = [
        make_check("ks p-value, gamma across boost axes", p_gam,
                   params["p_min"], op="ge"),
        make_check("ks p-value, drift along boost axis", p_axis,
                   params["p_min"], op="ge"),
    ]
    return checks, {}


# ---------------------------------------------------------------------------
# 6. relaxation to the Juttner law

def _roup_juttner(params, seed, workers):
    alpha = params["alpha"]
    n = params["paths"]
    snaps_at = [params["burn_steps"] + (j + 1) * params["thin_steps"]
                for j in range(params["snapshots"])]
    q0 = np.zeros((n, 3))
    _, snaps = roup_reduced_run(alpha, q0, params["dt"], snaps_at[-1],
                                _sub(seed, 0), snapshot_steps=snaps_at)
    pool = np.stack([snaps[k] for k in snaps_at])  # (snaps, n, 3)
    radii = np.linalg.norm(pool, axis=2).ravel()
    law = JuttnerRadialLaw(alpha, 3)
    edges = law.equal_mass_edges(params["bins"])
    tv = tv_binned(radii, edges)
    gam = np.sqrt(1.0 + np.sum(pool * pool, axis=2))
    per_path = gam.mean(axis=0)  # paths are independent, snapshots are not
    se = per_path.std(ddof=1) / np.sqrt(n)
    checks = [
        make_check("tv distance to Juttner radial law", tv, params["tv_tol"]),
        _zcheck("mean gamma vs Juttner, se units", per_path.mean(),
                juttner_mean_gamma(alpha, 3), se, params["z_gamma"]),
    ]
    # fixed-width histogram table for plotting: per-bin empirical mass
    # with a binomial error bar next to the quadrature-normalized law
    # mass (the equal-mass edges above stay internal to the TV check)
    lo = np.linspace(0.0, params["plot_rmax"], params["plot_bins"] + 1)
    counts, _ = np.histogram(radii, bins=lo)
    mass = counts / radii.size
    mass_se = np.sqrt(np.maximum(mass * (1.0 - mass), 0.0) / radii.size)
    law_cdf = np.concatenate([[0.0], law.cdf_at(lo[1:])])
    series = {"names": ["r_lo", "r_hi", "mass", "mass_se", "law_mass"],
              "columns": [lo[:-1], lo[1:], mass, mass_se,
                          np.diff(law_cdf)]}
    return checks, {"series": series}


# ---------------------------------------------------------------------------
# 7. stationarity through the adjoint generator

def _adjoint_stationarity(params, seed, workers):
    alpha = params["alpha"]
    spec = make_process("roup_lab", d=3, alpha=alpha)
    n = params["points"]
    z = rng.normals(_sub(seed, 0), np.arange(n, dtype=np.uint64), step=0,
                    count=3, stream=rng.STREAM_ORACLE)
    G = la.boost_from_coeffs(params["spread"] * z)
    m = np.zeros((n, 4))

    def resid(k):
        def rho(mm, GG):
            g = GG[..., 0, 0]
            return g ** k * np.exp(-4.0 * alpha * g)
        r = apply_adjoint(spec, rho, m, G, fd=params["fd"])
        return float(np.max(np.abs(r) / rho(m, G)))

    checks = [
        make_check("adjoint residual of exp(-4 alpha gamma)", resid(0),
                   params["rel_tol"]),
        make_check("residual of gamma * weight (must break)", resid(1),
                   params["break_min"], op="ge"),
        make_check("residual of weight / gamma (must break)", resid(-1),
                   params["break_min"], op="ge"),
    ]
    return checks, {}


# ---------------------------------------------------------------------------
# 8. one-particle density from hyperplane hits

def _hit_block(p, lo, hi):
    spec = make_process("dudley", d=3, sigma=p["sigma"])
    planes = [Hyperplane(np.array(p["n1"]), p["c1"], name="flat"),
              Hyperplane(np.array(p["n2"]), p["c2"], name="tilted")]
    ids = np.arange(lo, hi, dtype=np.uint64)
    m, G = identity_init(spec, hi - lo)
    res = evolve(spec, ids, m, G, p["dt"], p["steps"], p["seed_run"],
                 planes=planes)
    return {"flat": res.hits["flat"], "tilted": res.hits["tilted"],
            "n": hi - lo}


def _hitting_density_relation(params, seed, workers):
    p = {"sigma": params["sigma"], "dt": params["dt"],
         "steps": params["steps"], "n1": params["n1"], "c1": params["c1"],
         "n2": params["n2"], "c2": params["c2"], "seed_run": _sub(seed, 0)}
    out = run_blocks(params["paths"], _hit_block, p, workers,
                     params["block_size"])
    hits1 = merge_hits(out, "flat")
    hits2 = merge_hits(out, "tilted")
    plane1 = Hyperplane(np.array(params["n1"]), params["c1"], name="flat")
    plane2 = Hyperplane(np.array(params["n2"]), params["c2"], name="tilted")
    origin = np.array(params["target_point"])
    q_star = np.array(params["target_velocity"])
    f1, se1 = one_particle_from_hits(hits1, plane1, origin, q_star)
    f2, se2 = one_particle_from_hits(hits2, plane2, origin, q_star)
    misses = 2 * params["paths"] - len(hits1["ids"]) - len(hits2["ids"])
    checks = [
        make_check("relative density gap across plane pair",
                   abs(f1 - f2) / f1, params["rel_tol"],
                   detail={"flat": float(f1), "tilted": float(f2)}),
        make_check("density gap in combined se units",
                   abs(f1 - f2) / (se1 + se2), params["overlap_se"],
                   stderr=float(se1 + se2)),
        make_check("paths missing a crossing", misses, 0.0),
    ]
    return checks, {"hits": hits1}


# ---------------------------------------------------------------------------
# 9. weak form: hit averages vs quadrature against binned hit mass

def _weak_block(p, lo, hi):
    spec = make_process("dudley", d=3, sigma=p["sigma"])
    plane = Hyperplane(np.array([1.0, 0, 0, 0]), p["c"], name="plane")
    ids = np.arange(lo, hi, dtype=np.uint64)
    m, G = identity_init(spec, hi - lo)
    res = evolve(spec, ids, m, G, p["dt"], p["steps"], p["seed_run"],
                 planes=[plane])
    return {"plane": res.hits["plane"]}


def _center_vals_1d(x, edges, psi):
    centers = 0.5 * (edges[:-1] + edges[1:])
    idx = np.digitize(x, edges) - 1
    ok = (idx >= 0) & (idx < len(centers))
    v = np.zeros(len(x))
    v[ok] = psi(centers[idx[ok]])
    return v


def _center_vals_2d(x, ycol, edges, psi):
    c0 = 0.5 * (edges[0][:-1] + edges[0][1:])
    c1 = 0.5 * (edges[1][:-1] + edges[1][1:])
    i0 = np.digitize(x, edges[0]) - 1
    i1 = np.digitize(ycol, edges[1]) - 1
    ok = (i0 >= 0) & (i0 < len(c0)) & (i1 >= 0) & (i1 < len(c1))
    v = np.zeros(len(x))
    v[ok] = (psi(c0[:, None], c1[None, :]))[i0[ok], i1[ok]]
    return v


def _hitting_weak_form(params, seed, workers):
    plane = Hyperplane(np.array([1.0, 0, 0, 0]), params["c"], name="plane")
    origin = np.array([params["c"], 0.0, 0.0, 0.0])
    sets = []
    hits_a = None
    for j in range(2):
        p = {"sigma": params["sigma"], "dt": params["dt"],
             "steps": params["steps"], "c": params["c"],
             "seed_run": _sub(seed, j)}
        out = run_blocks(params["paths"], _weak_block, p, workers,
                         params["block_size"])
        hits = merge_hits(out, "plane")
        if j == 0:
            hits_a = hits
        y1 = plane_coordinates(plane, origin, hits["m"])[:, 0]
        gam = hits["g0"][:, 0]
        sets.append((y1, gam))
    (y_a, g_a), (y_b, g_b) = sets

    def psi_y(y):
        return np.exp(-0.5 * y * y)

    def psi_g(g):
        return np.exp(-0.5 * (g - 1.0))

    def psi_yg(y, g):
        return np.exp(-0.5 * y * y) * np.exp(-0.5 * (g - 1.0))

    ey = np.linspace(*params["y_range"], params["y_bins"] + 1)
    eg = np.linspace(*params["gamma_range"], params["gamma_bins"] + 1)
    ej = (np.linspace(*params["y_range"], params["joint_bins"][0] + 1),
          np.linspace(*params["gamma_range"], params["joint_bins"][1] + 1))
    n_b = len(y_b)

    tests = [
        ("gaussian of in-plane coordinate", psi_y(y_a),
         _center_vals_1d(y_b, ey, psi_y),
         quad_against_mass(psi_y, binned_mass(y_b, ey), ey)
         * np.mean((y_b >= ey[0]) & (y_b < ey[-1]))),
        ("exponential of gamma", psi_g(g_a),
         _center_vals_1d(g_b, eg, psi_g),
         quad_against_mass(psi_g, binned_mass(g_b, eg), eg)
         * np.mean((g_b >= eg[0]) & (g_b < eg[-1]))),
        ("joint coordinate-gamma observable", psi_yg(y_a, g_a),
         _center_vals_2d(y_b, g_b, ej, psi_yg),
         None),
    ]
    checks = []
    for name, va, vb, quad in tests:
        mc, se_a = va.mean(), va.std(ddof=1) / np.sqrt(len(va))
        qv, se_b = vb.mean(), vb.std(ddof=1) / np.sqrt(len(vb))
        if quad is not None:
            # the per-hit cell-center mean is exactly the quadrature of
            # psi against the binned mass; keep both routes honest
            assert abs(qv - quad) < 1e-12 * max(1.0, abs(quad))
        se = np.sqrt(se_a ** 2 + se_b ** 2)
        checks.append(_zcheck("mc mean vs binned quadrature (%s)" % name,
                              mc, qv, se, params["se_tol"]))
    return checks, {"hits": hits_a}


# ---------------------------------------------------------------------------
# 10. flux-divergence identity in a curved chart

def _flux_divergence_identity(params, seed, workers):
    sp = RobertsonWalker(ExponentialScale(params["hubble"]), d=3,
                         t_min=1e-6)
    m = np.array(params["point"])
    grid = fiber_grid()

    def h1(mm, g0):
        return np.exp(1.0 - g0[..., 0]) * (1.0 + 0.3 * np.sin(mm[..., 1]))

    def h2(mm, g0):
        a = sp.scale.a(mm[..., 0])
        return np.exp(1.0 - g0[..., 0]) * (1.0 + 0.25 * a * g0[..., 1]
                                           + 0.1 * np.cos(mm[..., 2]))

    def h3(mm, g0):
        a = sp.scale.a(mm[..., 0])
        return (np.exp(2.0 * (1.0 - g0[..., 0])) * np.cos(0.5 * mm[..., 0])
                * (1.0 + 0.1 * (a * g0[..., 2]) ** 2))

    checks = []
    for name, h in (("isotropic", h1), ("dipole", h2), ("quadratic", h3)):
        lhs, rhs = flux_divergence_check(sp, h, m, fd_m=params["fd_m"],
                                         fd_s=params["fd_s"], grid=grid)
        rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
        checks.append(make_check(
            "flux divergence vs flow quadrature (%s)" % name, rel,
            params["rel_tol"], detail={"div": float(lhs), "flow": float(rhs)}))
    return checks, {}


# ---------------------------------------------------------------------------
# 11. entropy decay toward the Juttner law

def _entropy_decay(params, seed, workers):
    alpha = params["alpha"]
    n = params["paths"]
    steps = params["checkpoint_steps"]
    checks = []
    names = ["t"]
    columns = [np.array([k * params["dt"] for k in steps])]
    for j, label in enumerate(("bimodal", "wide")):
        seed_run = _sub(seed, j)
        ids = np.arange(n, dtype=np.uint64)
        z = rng.normals(seed_run, ids, step=0, count=3,
                        stream=rng.STREAM_INIT)
        if label == "bimodal":
            u = rng.uniforms(seed_run, ids, step=1, count=1,
                             stream=rng.STREAM_INIT)[:, 0]
            q0 = params["mix_sigma"] * z
            q0[:, 0] += np.where(u < 0.5, 1.0, -1.0) * params["mix_offset"]
        else:
            q0 = params["wide_sigma"] * z
        _, snaps = roup_reduced_run(alpha, q0, params["dt"], max(steps),
                                    seed_run, snapshot_steps=steps)
        div, ses = [], []
        for k in steps:
            q = snaps[k]
            div.append(relative_entropy_to_juttner(q, alpha))
            ses.append(folded_estimate(
                lambda p: relative_entropy_to_juttner(p, alpha), q,
                folds=params["folds"])[1])
        for i in range(len(steps) - 1):
            tol = 2.0 * np.sqrt(ses[i] ** 2 + ses[i + 1] ** 2)
            checks.append(make_check(
                "divergence increment t=%g -> t=%g (%s)" % (
                    steps[i] * params["dt"], steps[i + 1] * params["dt"],
                    label),
                div[i + 1] - div[i], tol, stderr=ses[i + 1]))
        checks.append(make_check(
            "final/initial divergence ratio (%s)" % label,
            div[-1] / div[0], params["final_ratio"],
            detail={"divergences": [float(v) for v in div]}))
        names += [label, label + "_se"]
        columns += [np.array(div), np.array(ses)]
    return checks, {"series": {"names": names, "columns": columns}}


# ---------------------------------------------------------------------------
# 12. bit determinism across worker counts

def _determinism(params, seed, workers):
    checks = []
    subjects = params["subjects"]
    if subjects == "all":
        subjects = [n for n in EXPERIMENTS if n != "determinism"]
    for name in subjects:
        texts = []
        for w in params["workers_list"]:
            rep, _ = run_experiment(name, seed=seed, workers=w, smoke=True)
            texts.append(dumps_report(rep))
        same = all(t == texts[0] for t in texts)
        checks.append(make_check(
            "identical report bytes across workers (%s)" % name,
            1.0 if same else 0.0, 1.0, op="ge"))
    return checks, {}


# ---------------------------------------------------------------------------
# 13. anisotropic noise: lab-time QV rates reproduce M M^T

def _aniso_block(p, lo, hi):
    spec = make_process("roup_lab", d=3, alpha=p["alpha"],
                        noise=np.diag(p["noise_diag"]))
    ids = np.arange(lo, hi, dtype=np.uint64)
    m, G = identity_init(spec, hi - lo)
    res = evolve(spec, ids, m, G, p["dt"], p["steps"], p["seed_run"],
                 track_qv=True)
    if res.n_killed:
        # qv rows track surviving paths; a kill would misalign them
        # with the coordinate array below
        raise RuntimeError("paths died while accumulating lab-time qv")
    qv = np.einsum("nii->ni", res.qv[:, 1:, 1:])
    t_lab = res.m[:, 0]
    return {"n": qv.shape[0], "qv": qv.sum(axis=0), "t": float(t_lab.sum()),
            "qv2": (qv * qv).sum(axis=0), "t2": float(t_lab @ t_lab),
            "qvt": (qv * t_lab[:, None]).sum(axis=0)}


def _anisotropy_qv(params, seed, workers):
    p = {"alpha": params["alpha"], "noise_diag": params["noise_diag"],
         "dt": params["dt"], "steps": params["steps"],
         "seed_run": _sub(seed, 0)}
    out = run_blocks(params["paths"], _aniso_block, p, workers,
                     params["block_size"])
    n = sum(r["n"] for r in out)
    s_qv = np.sum([r["qv"] for r in out], axis=0)
    s_t = sum(r["t"] for r in out)
    s_qv2 = np.sum([r["qv2"] for r in out], axis=0)
    s_t2 = sum(r["t2"] for r in out)
    s_qvt = np.sum([r["qvt"] for r in out], axis=0)
    # self-normalized rate estimator R = sum(qv) / sum(t_lab) with the
    # delta-method standard error; the naive mean of per-path ratios
    # carries an O(1) Jensen bias from the random lab-time horizon
    t_bar = s_t / n
    rate = s_qv / s_t
    var_qv = s_qv2 / n - (s_qv / n) ** 2
    var_t = s_t2 / n - t_bar ** 2
    cov = s_qvt / n - (s_qv / n) * t_bar
    se = np.sqrt((var_qv - 2 * rate * cov + rate ** 2 * var_t)
                 / n) / t_bar
    target = np.asarray(params["noise_diag"], dtype=float) ** 2
    checks = []
    for k in range(3):
        checks.append(_zcheck(
            "lab-time qv rate of q%d vs (MM^T)_%d%d, se units"
            % (k + 1, k + 1, k + 1),
            rate[k], target[k], se[k], params["z_tol"]))
    return checks, {}


# ---------------------------------------------------------------------------
# registry

@dataclass(frozen=True)
class Entry:
    fn: object
    seed: int
    defaults: dict
    smoke: dict
    summary: str


_COSH_HALF = float(np.cosh(0.5))
_SINH_HALF = float(np.sinh(0.5))

EXPERIMENTS = {
    "frame_integrity": Entry(
        _frame_integrity, 101,
        {"paths": 100, "steps": 10000, "dt": 1e-3,
         "sigma": 0.3, "sigma_rw": 0.3, "hubble": 0.5, "defect_tol": 1e-8,
         "record_every": 500},
        {"steps": 500, "record_every": 50},
        "frames stay orthonormal over 1e4 steps without reprojection"),
    "dudley_radial_moment": Entry(
        _dudley_radial_moment, 102,
        {"paths": 100000, "steps": 500, "dt": 2e-3, "sigma": 1.0,
         "z_tol": 3.0, "block_size": BLOCK_SIZE},
        {"paths": 3000, "steps": 50, "block_size": 1000, "z_tol": 4.0},
        "mean hyperbolic cosh-distance grows as exp(d sigma^2 s / 2)"),
    "scheme_equivalence": Entry(
        _scheme_equivalence, 103,
        {"paths": 10000, "steps": 500, "dt": 2e-3, "sigma": 1.0,
         "p_min": 0.01},
        {"paths": 2000, "steps": 60},
        "group stepper and independent chart scheme agree in law"),
    "martingale_covariance": Entry(
        _martingale_covariance, 104,
        {"paths": 3000, "steps": 500, "dt": 1e-3, "z_tol": 3.0},
        {"paths": 500, "steps": 200, "z_tol": 4.0},
        "velocity quadratic variation matches its compensator"),
    "rotation_invariance": Entry(
        _rotation_invariance, 105,
        {"paths": 10000, "steps": 500, "dt": 2e-3, "sigma": 1.0,
         "rapidity": 0.7, "p_min": 0.01},
        {"paths": 2000, "steps": 100},
        "boosted initial data along different axes give one law"),
    "roup_juttner": Entry(
        _roup_juttner, 106,
        {"paths": 25000, "dt": 5e-3, "alpha": 0.5, "burn_steps": 4000,
         "thin_steps": 1000, "snapshots": 4, "bins": 24, "tv_tol": 0.02,
         "z_gamma": 5.0, "plot_rmax": 5.0, "plot_bins": 40},
        {"paths": 4000, "burn_steps": 2000, "thin_steps": 200,
         "snapshots": 2, "tv_tol": 0.08, "z_gamma": 6.0},
        "velocity process relaxes to the Juttner law"),
    "adjoint_stationarity": Entry(
        _adjoint_stationarity, 107,
        {"alpha": 0.5, "points": 100, "spread": 0.7, "fd": 1e-3,
         "rel_tol": 1e-5, "break_min": 0.01},
        {"points": 16},
        "adjoint generator annihilates exp(-4 alpha gamma) and only it"),
    "hitting_density_relation": Entry(
        _hitting_density_relation, 108,
        {"paths": 1000000, "steps": 200, "dt": 5e-3, "sigma": 1.0,
         "n1": [1.0, 0.0, 0.0, 0.0], "c1": 0.8,
         "n2": [_COSH_HALF, _SINH_HALF, 0.0, 0.0], "c2": 0.8 * _COSH_HALF,
         "target_point": [0.8, 0.0, 0.0, 0.0],
         "target_velocity": [0.0, 0.0, 0.0],
         "rel_tol": 0.10, "overlap_se": 2.0, "block_size": BLOCK_SIZE},
        {"paths": 4000, "steps": 40, "c1": 0.1, "c2": 0.1 * _COSH_HALF,
         "target_point": [0.1, 0.0, 0.0, 0.0], "rel_tol": 0.5,
         "overlap_se": 3.0, "block_size": 1000},
        "one-particle density agrees between two hyperplanes through a point"),
    "hitting_weak_form": Entry(
        _hitting_weak_form, 109,
        {"paths": 50000, "steps": 170, "dt": 5e-3, "sigma": 1.0, "c": 0.8,
         "y_range": [-1.0, 1.0], "y_bins": 200,
         "gamma_range": [1.0, 31.0], "gamma_bins": 300,
         "joint_bins": [100, 150], "se_tol": 3.0,
         "block_size": BLOCK_SIZE},
        {"paths": 5000, "steps": 50, "c": 0.2, "se_tol": 4.0,
         "block_size": 1000},
        "hit-measure averages match quadrature against binned hit mass"),
    "flux_divergence_identity": Entry(
        _flux_divergence_identity, 110,
        {"hubble": 0.4, "point": [1.0, 0.4, -0.2, 0.1], "fd_m": 1e-2,
         "fd_s": 1e-2, "rel_tol": 1e-3},
        {},
        "divergence of the velocity average equals the flow quadrature"),
    "entropy_decay": Entry(
        _entropy_decay, 111,
        {"paths": 20000, "alpha": 0.5, "dt": 5e-3,
         "checkpoint_steps": [0, 200, 400, 800, 1600],
         "mix_offset": 1.5, "mix_sigma": 0.8, "wide_sigma": 2.0,
         "folds": 10, "final_ratio": 0.1},
        {"paths": 4000, "checkpoint_steps": [0, 200, 400, 800],
         "folds": 5, "final_ratio": 0.3},
        "relative entropy to the Juttner law decays monotonically"),
    "determinism": Entry(
        _determinism, 112,
        {"subjects": "all", "workers_list": [1, 4, 8]},
        {"workers_list": [1, 2]},
        "reports are byte-identical for any worker count"),
    "anisotropy_qv": Entry(
        _anisotropy_qv, 113,
        {"paths": 2500, "steps": 4000, "dt": 1.25e-4, "alpha": 0.3,
         "noise_diag": [1.0, 1.0, 2.0], "z_tol": 3.0,
         "block_size": BLOCK_SIZE},
        {"paths": 2000, "steps": 50, "dt": 2e-3, "z_tol": 6.0,
         "block_size": 500},
        "anisotropic shaping matrix shows up as lab-time qv rates MM^T"),
}


def list_experiments():
    return [(name, ent.summary) for name, ent in EXPERIMENTS.items()]


def run_experiment(name, seed=None, workers=1, overrides=None, smoke=False):
    """Resolve parameters and run one experiment.

    Returns (report, artifacts). Unknown parameter names in overrides
    raise ValueError so config typos fail loudly.
    """
    if name not in EXPERIMENTS:
        raise ValueError("unknown experiment %r; see list_experiments()"
                         % (name,))
    ent = EXPERIMENTS[name]
    params = dict(ent.defaults)
    if smoke:
        params.update(ent.smoke)
    for key, val in (overrides or {}).items():
        if val is None:
            continue
        if key not in ent.defaults:
            raise ValueError("experiment %s has no parameter %r"
                             % (name, key))
        params[key] = val
    seed = ent.seed if seed is None else int(seed)
    checks, artifacts = ent.fn(params, seed, workers)
    report = make_report(name, seed, params, checks, __version__)
    return report, artifacts
