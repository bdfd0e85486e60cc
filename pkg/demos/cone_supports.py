"""Support geometry of the two cones and the slope invariant.

Writes ``supports.svg`` to the current directory.
"""
from pathlib import Path

import numpy as np

from shearcert.independence import cone_slope_diagnostic, exact_edge_slope
from shearcert.shearlet2d import (
    Cone,
    Rectangle,
    ShearletIndex,
    ShearletSystem,
    ShearletSystemSpec,
    enumerate_system,
    polygons_svg,
)

spec = ShearletSystemSpec(2, "1/3", "1/3", 3, Rectangle.square(0, 2), "inside")
system = ShearletSystem(spec)
indices = system.indices
print(len(indices), "elements with support inside [0,2]^2 up to j=3")

# Edge slopes of sheared elements are exact rationals: at most 1 in PSI, above 1 in PSI_TILDE.
for ix in (ShearletIndex(Cone.PSI, 2, 1, (4, 2)), ShearletIndex(Cone.PSI_TILDE, 3, -1, (2, 8))):
    print(ix.label(), "exact edge slope", exact_edge_slope(ix, spec))
    print("  measured:", cone_slope_diagnostic(system.evaluate(ix, 7)).verdict)

# A random combination inside PSI keeps a lower support bound with slope at most 1.
rng = np.random.default_rng(1)
pool = [ix for ix in indices if ix.cone is Cone.PSI and ix.k != 0]
pick = [pool[i] for i in rng.choice(len(pool), 3, replace=False)]
combo = system.combination(pick, rng.uniform(0.5, 1.5, 3), 6)
res = cone_slope_diagnostic(combo)
print("combination", res.label)
print("  slope near the support minimum", round(res.slope_at_minimum, 3), "->", res.verdict)

j1 = [ix for ix in enumerate_system(ShearletSystemSpec(2, "1/3", "1/3", 2, Rectangle.square(0, 1)))
      if ix.j == 2 and ix.m[0] % 3 == 0 and ix.m[1] % 3 == 0]
Path("supports.svg").write_text(polygons_svg([(ix, system.polygon(ix)) for ix in j1], spec.domain))
print("wrote supports.svg with", len(j1), "polygons")
