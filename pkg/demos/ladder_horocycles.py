"""Grow the ladder example and push its boundary circles out to horocycles.

For each level the boundary radii are doubled until the interior stops
moving; the final pattern is drawn in the Poincaré disk.
"""

import sys
from pathlib import Path

from icp import develop, export_svg, generate_keyexample, horocycle_limit
from icp.layout import boundary_tangency_gap

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo-out")
out.mkdir(exist_ok=True)

for level in range(3):
    c, a = generate_keyexample(level)
    res = horocycle_limit(c, a)
    p = develop(c, a, res.state)
    print(
        f"level {level}: {len(c.vertices):5d} vertices, {res.stages:2d} doubling stages, "
        f"last step {res.cauchy[-1]:.1e}, hub radius {p.euclid_radii[0]:.3e}, "
        f"gap to unit circle {boundary_tangency_gap(p):.1e}"
    )
    export_svg(p, out / f"ladder{level}.svg")
