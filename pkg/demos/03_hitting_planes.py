"""One-particle distribution read off two different hyperplanes.

The density of hits on a spacelike hyperplane with unit normal n is
q(n, g0) f, so after dividing out the flux factor the two planes must
see the same f at a shared event. This script sends Dudley paths
through a lab-time slice and a boosted slice through the same point
and compares the two estimates.
"""

import numpy as np

from reldiff.ensemble import Hyperplane, evolve, identity_init
from reldiff.processes import make_process
from reldiff.report import write_hits_csv
from reldiff.stats import one_particle_from_hits


def main():
    paths, dt, steps = 50000, 5e-3, 200
    c, tilt = 0.8, 0.5
    n1 = np.array([1.0, 0.0, 0.0, 0.0])
    n2 = np.array([np.cosh(tilt), np.sinh(tilt), 0.0, 0.0])
    event = np.array([c, 0.0, 0.0, 0.0])
    planes = (Hyperplane(n1, c, name="flat"),
              Hyperplane(n2, c * np.cosh(tilt), name="tilted"))

    spec = make_process("dudley", d=3, sigma=1.0)
    ids = np.arange(paths, dtype=np.uint64)
    m, G = identity_init(spec, paths)
    res = evolve(spec, ids, m, G, dt, steps, seed=2024, planes=planes)

    q_star = np.zeros(3)
    print("%d paths, planes through t=%.1f, tilt rapidity %.1f"
          % (paths, c, tilt))
    vals = []
    for plane in planes:
        hits = res.hits[plane.name]
        f, se = one_particle_from_hits(hits, plane, event, q_star)
        vals.append((f, se))
        print("  %-7s %7d hits   f = %.4f +- %.4f"
              % (plane.name, len(hits["ids"]), f, se))
    gap = abs(vals[0][0] - vals[1][0])
    print("relative gap %.2f%%, %.2f combined-se units"
          % (100 * gap / vals[0][0], gap / (vals[0][1] + vals[1][1])))

    rows = write_hits_csv("plane_hits.csv", res.hits["flat"], max_rows=20000)
    print("wrote %d rows -> plane_hits.csv" % rows)


if __name__ == "__main__":
    main()
