"""Square lattice against the degree-7 triangulation.

On the lattice the vertex extremal length from the root to the level
boundary keeps growing like log(level) and walkers stop escaping; on
the degree-7 triangulation it levels off and a fixed share of walkers
escapes every time.
"""

from icp import Deg7Generator, SquareLatticeGenerator
from icp.vel import type_detect

for name, gen in (("square", SquareLatticeGenerator()), ("deg7", Deg7Generator())):
    ev = type_detect(gen, None, range(2, 8), walks=5000, seed=1)
    print(f"{name}: {ev.verdict}")
    for lv, v, pe, pm in zip(ev.levels, ev.vel, ev.escape_exact, ev.escape_mc):
        print(f"  level {lv}: VEL {v:.5f}  escape {pe:.4f} (walks {pm:.4f})")
