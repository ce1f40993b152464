"""Transport identity for velocity averages in an expanding spacetime.

For any smooth phase-space function h, the spacetime divergence of the
fiber average J^mu = int g0^mu h dvol equals the fiber average of the
geodesic-flow derivative of h. This is the bookkeeping identity behind
every continuity and entropy-flux statement, and it holds to finite
difference accuracy, not just statistically.
"""

import numpy as np

from reldiff.spacetime import ExponentialScale, RobertsonWalker
from reldiff.stats import fiber_grid, flux_divergence_check


def main():
    st = RobertsonWalker(ExponentialScale(0.4), t_min=1e-6)
    m = np.array([1.0, 0.4, -0.2, 0.1])
    grid = fiber_grid()

    def h_iso(mm, g0):
        return np.exp(1.0 - g0[..., 0]) * (1.0 + 0.3 * np.sin(mm[..., 1]))

    def h_dipole(mm, g0):
        a = st.scale.a(mm[..., 0])
        return np.exp(1.0 - g0[..., 0]) * (1.0 + 0.25 * a * g0[..., 1])

    def h_quad(mm, g0):
        a = st.scale.a(mm[..., 0])
        return (np.exp(2.0 * (1.0 - g0[..., 0])) * np.cos(0.5 * mm[..., 0])
                * (1.0 + 0.1 * (a * g0[..., 2]) ** 2))

    print("flux identity at m =", m)
    print("%-10s %16s %16s %12s" % ("h", "div J", "flow average", "rel err"))
    for label, h in (("isotropic", h_iso), ("dipole", h_dipole),
                     ("quadratic", h_quad)):
        lhs, rhs = flux_divergence_check(st, h, m, grid=grid)
        rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
        print("%-10s %16.9f %16.9f %12.2e" % (label, lhs, rhs, rel))


if __name__ == "__main__":
    main()
