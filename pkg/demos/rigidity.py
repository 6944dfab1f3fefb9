"""Two patterns with the same angles: how far apart are their radii?

Scaling every radius by 2 is a similarity, so the ratio is constant.
Changing the boundary data instead gives a ratio that varies, with its
extremes on the boundary.
"""

import math

from icp import ConformalState, develop, generate_lattice, solve_dirichlet
from icp.kernel import EUCLIDEAN
from icp.rigidity import max_principle_audit, rigidity_diagnostic

c, a = generate_lattice("square", 8)
base, _ = solve_dirichlet(c, a, 1.0)
double = ConformalState(EUCLIDEAN, {v: u + math.log(2) for v, u in base.u.items()})
rep = rigidity_diagnostic(c, a, develop(c, a, base), develop(c, a, double))
print(f"doubled: ratio in [{rep.ratio_inf:.12f}, {rep.ratio_sup:.12f}], similar={rep.similar}")

bumped = {v: 1.0 + 0.2 * (v % 3 == 0) for v in c.boundary_vertices}
other, _ = solve_dirichlet(c, a, bumped)
rep = rigidity_diagnostic(c, a, base, other)
print(f"bumped:  ratio in [{rep.ratio_inf:.6f}, {rep.ratio_sup:.6f}], similar={rep.similar}")
verdict = max_principle_audit(c, a, base, other)
print(f"log-ratio extremes on the boundary: {verdict.holds}, harmonic residual {verdict.harmonic_residual:.1e}")
