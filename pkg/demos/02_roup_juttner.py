"""Relaxation of the relativistic Ornstein-Uhlenbeck velocity to the
Juttner law.

Integrates the reduced lab-time velocity process from a cold start and
prints how the mean gamma factor and the binned total variation
distance to the exact stationary law evolve. Finishes with a crude
text histogram of |q| against the analytic radial density.
"""

import numpy as np

from reldiff.processes import roup_reduced_run
from reldiff.stats import JuttnerRadialLaw, juttner_mean_gamma, tv_binned


def main():
    alpha, paths, dt = 0.5, 20000, 5e-3
    snaps = (200, 500, 1000, 2000, 4000)
    q0 = np.zeros((paths, 3))
    q, snap_list = roup_reduced_run(alpha, q0, dt, snaps[-1], seed=7,
                                    snapshot_steps=snaps)

    law = JuttnerRadialLaw(alpha, 3)
    edges = law.equal_mass_edges(24)
    g_exact = juttner_mean_gamma(alpha)

    print("ROUP relaxation, alpha=%.2f, %d paths, dt=%g" % (alpha, paths, dt))
    print("%8s  %10s  %10s" % ("t", "mean gamma", "tv(24 bins)"))
    for step in snaps:
        qk = snap_list[step]
        gam = np.sqrt(1 + (qk ** 2).sum(axis=1))
        tv = tv_binned(np.linalg.norm(qk, axis=1), edges)
        print("%8.1f  %10.4f  %10.4f" % (step * dt, gam.mean(), tv))
    print("exact stationary mean gamma: %.4f" % g_exact)

    # final snapshot vs the analytic radial pdf
    r = np.linalg.norm(q, axis=1)
    bins = np.linspace(0, 4, 17)
    hist, _ = np.histogram(r, bins=bins, density=True)
    centers = 0.5 * (bins[1:] + bins[:-1])
    from reldiff.stats import juttner_radial_pdf
    pdf = juttner_radial_pdf(centers, alpha, 3)
    print("\n   |q|    simulated vs exact (# = 0.02)")
    for c, h, p in zip(centers, hist, pdf):
        bar = "#" * int(round(h / 0.02))
        print("  %4.2f  %6.3f %6.3f  %s" % (c, h, p, bar))


if __name__ == "__main__":
    main()
