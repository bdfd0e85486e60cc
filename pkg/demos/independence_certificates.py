"""Finite independence certificates and the oversampling counterexample."""
from fractions import Fraction

from shearcert.independence import (
    ShearletElements,
    gram,
    oversampling_containment,
    verify_min_support_lemma,
    verify_prop33,
)
from shearcert.mra1d import daubechies_filter
from shearcert.shearlet2d import Rectangle, ShearletSystem, ShearletSystemSpec

db2 = daubechies_filter(2)

# Sparse wavelet sums start on the dyadic lattice 2^-(J+1) Z.
rep = verify_min_support_lemma(db2, 2, trials=100)
print(f"support minima on the lattice: {rep.passed}/{rep.trials}, worst distance {float(rep.worst_distance):.1e}")

# Wavelets translated by 0, 1/3, 2/3 stay independent; 1/4 collides with the dyadic lattice.
thirds = verify_prop33(db2, 1, [Fraction(i, 3) for i in range(3)])
print("offsets i/3:", thirds.verdict, f"sigma_rel={thirds.report.sigma_rel:.2e}")
print("offsets (0, 1/4):", verify_prop33(db2, 1, [0, Fraction(1, 4)]).verdict)

# Gram certificate for a whole system, with a duplicate as negative control.
spec = ShearletSystemSpec(2, "1/3", "1/3", 1, Rectangle.square(0, 3), "inside")
src = ShearletElements(ShearletSystem(spec), ShearletSystem(spec).indices)
for name, s in (("system", src), ("with duplicate", src.with_duplicate(0))):
    r = gram(s, (5, 6, 7))
    print(f"{name}: {len(s.indices)} elements, {r.verdict}, sigma_rel={r.sigma_rel:.2e}")
    print("   sigma history", [(lv, f"{v:.3e}") for lv, v in r.sigma_history])

# Halving the sampling constants embeds SH(c) into a strictly larger frame.
print(oversampling_containment(spec, 2).conclusion)
