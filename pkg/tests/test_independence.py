from fractions import Fraction

import numpy as np
import pytest
import scipy.sparse as sparse
from hypothesis import given, settings, strategies as st

from shearcert.independence import (
    Element1D,
    Elements1D,
    GramConvergenceError,
    ShearletElements,
    admissibility_check,
    cone_slope_diagnostic,
    frame_bound_sequence,
    gram,
    oversampling_containment,
    staggered_support_certificate,
    verify_min_support_lemma,
    verify_prop33,
)
from shearcert.independence import classify_slopes, exact_edge_slope, expected_cone
from shearcert.mra1d import MRA, daubechies_filter
from shearcert.shearlet2d import (
    Cone,
    Rectangle,
    ShearletIndex,
    ShearletSystem,
    ShearletSystemSpec,
    enumerate_system,
)

F = Fraction


@pytest.fixture(scope="module")
def haar():
    return MRA(daubechies_filter(1))


@pytest.fixture(scope="module")
def db2():
    return MRA(daubechies_filter(2))


@pytest.fixture(scope="module")
def small_system():
    sp = ShearletSystemSpec(2, "1/3", "1/3", 1, Rectangle.square(0, 3), "inside")
    return ShearletSystem(sp)


def haar_wavelets(mra):
    return Elements1D(mra, [Element1D("psi", j, m, 2 ** (j / 2)) for j in range(3) for m in range(-2, 3)])


# -- gram -------------------------------------------------------------------


def test_haar_wavelets_are_orthonormal(haar):
    rep = gram(haar_wavelets(haar), (6, 7, 8))
    np.testing.assert_allclose(rep.gram, np.eye(len(rep.labels)), atol=1e-8)
    assert rep.verdict == "independent"
    assert rep.converged


def test_duplicate_is_dependent(haar):
    rep = gram(haar_wavelets(haar).with_duplicate(3), (6, 7, 8))
    assert rep.sigma_min < 1e-10
    assert rep.verdict == "dependent"


def test_report_invariants(db2):
    src = Elements1D(db2, [Element1D("phi", 0, F(m, 3)) for m in range(-3, 4)])
    rep = gram(src, (8, 9, 10))
    assert np.max(np.abs(rep.gram - rep.gram.T)) <= 1e-12
    assert rep.min_eigenvalue >= -1e-10
    assert rep.verdict == "independent"
    assert rep.sigma_rel > rep.tolerance
    d = rep.to_dict(include_matrix=True)
    assert d["verdict"] == "independent" and len(d["gram"]) == 7
    assert rep.to_csv().count("\n") == 8


def test_gram_needs_three_levels(haar):
    with pytest.raises(ValueError):
        gram(haar_wavelets(haar), (6, 7))


class _Drifting:
    """Two functions whose inner product never settles."""

    labels = ["a", "b"]

    def sample_matrix(self, level):
        eps = 0.5 if level % 2 else 0.1
        return sparse.csr_matrix(np.array([[1.0, 0.0], [eps, 1.0]])), 1.0


def test_unconverged_history_is_inconclusive():
    rep = gram(_Drifting(), (3, 4, 5, 6))
    assert not rep.converged
    assert rep.verdict == "inconclusive"
    assert rep.notes


def test_enumerated_system_is_independent(small_system):
    ix = enumerate_system(small_system.spec)
    rep = gram(ShearletElements(small_system, ix), (5, 6, 7))
    assert rep.sigma_min > 0
    assert rep.verdict == "independent"
    dup = gram(ShearletElements(small_system, ix).with_duplicate(4), (5, 6, 7))
    assert dup.verdict == "dependent" and dup.sigma_min < 1e-10


def test_entry_deltas_decrease(small_system):
    ix = enumerate_system(small_system.spec)
    rep = gram(ShearletElements(small_system, ix), (5, 6, 7, 8))
    deltas = [d for _, d in rep.convergence]
    assert all(b < a for a, b in zip(deltas, deltas[1:]))


# -- staggered supports -----------------------------------------------------


def test_staggered_translates_pass(db2):
    src = Elements1D(db2, [Element1D("phi", 0, F(m, 3)) for m in range(3)])
    cert = staggered_support_certificate([src.sample(i, 9) for i in range(3)])
    assert cert.passed
    assert cert.witness["minima"] == ["0", "1/3", "2/3"]


def test_colliding_minima_fail(db2):
    src = Elements1D(db2, [Element1D("phi", 0, 0), Element1D("phi", 0, 0)])
    cert = staggered_support_certificate([src.sample(i, 9) for i in range(2)])
    assert not cert.passed
    assert cert.witness["collision"] == [0, 1]


def test_haar_combination_minimum(haar):
    src = Elements1D(haar, [Element1D("phi", 0, F(m, 3)) for m in range(3)])
    cert = staggered_support_certificate([src.sample(i, 8) for i in range(3)], combinations=50)
    assert cert.passed
    assert F(cert.witness["worst_distance"]) <= F(cert.witness["grid_step"])


def test_staggered_implies_not_dependent(db2):
    rng = np.random.default_rng(7)
    for _ in range(50):
        size = int(rng.integers(2, 6))
        shifts = sorted(rng.choice(12, size=size, replace=False))
        kinds = rng.choice(["phi", "psi"], size=size)
        src = Elements1D(db2, [Element1D(str(k), 0, F(int(s), 3)) for k, s in zip(kinds, shifts)])
        cert = staggered_support_certificate([src.sample(i, 7) for i in range(size)], combinations=5)
        assert cert.passed
        assert gram(src, (6, 7, 8)).verdict != "dependent"


# -- support minima lattice -------------------------------------------------


@pytest.mark.parametrize("j, shift, expected", [(0, 0, F(0)), (1, 3, F(3, 2))])
def test_haar_wavelet_support_start(haar, j, shift, expected):
    src = Elements1D(haar, [Element1D("psi", j, shift)])
    f = src.sample(0, 10)
    lo, _ = f.numerical_support(1e-8)
    assert abs(lo - float(expected)) <= float(f.step)
    assert (expected * 2 ** (j + 1)).denominator == 1


def test_random_sums_start_on_lattice():
    rep = verify_min_support_lemma(daubechies_filter(2), 2, trials=100)
    assert rep.ok
    assert rep.worst_distance < F(2, 1 << rep.level)
    assert rep.to_dict()["seed"] == rep.seed


def test_lemma_report_is_seeded():
    f = daubechies_filter(1)
    a = verify_min_support_lemma(f, 1, trials=10, seed=3).to_dict()
    assert a == verify_min_support_lemma(f, 1, trials=10, seed=3).to_dict()


def test_lemma_preconditions():
    with pytest.raises(ValueError):
        verify_min_support_lemma(daubechies_filter(2), 3, level=10)


# -- oversampled wavelets ---------------------------------------------------


def test_prop33_thirds(db2):
    res = verify_prop33(db2.filter, 1, [F(i, 3) for i in range(3)], range(-2, 3), mra=db2)
    assert res.hypothesis_ok
    assert res.verdict == "independent"


def test_prop33_rejects_lattice_offsets(db2):
    res = verify_prop33(db2.filter, 1, [F(0), F(1, 4)], mra=db2)
    assert res.verdict == "hypothesis_failed"
    assert res.report is None


@pytest.mark.parametrize("t", [F(0), F(1, 3), F(2, 7)])
def test_prop33_single_offset(db2, t):
    res = verify_prop33(db2.filter, 1, [t], range(-2, 3), mra=db2)
    assert res.verdict == "independent"
    # fixed shift, distinct (j, l): orthonormal up to quadrature error
    np.testing.assert_allclose(res.report.gram, np.eye(len(res.report.labels)), atol=1e-4)


# -- cone slopes ------------------------------------------------------------


@pytest.fixture(scope="module")
def cone_system():
    return ShearletSystem(ShearletSystemSpec(2, "1/3", "1/3", 3, Rectangle.square(0, 2), "inside"))


def test_phi_is_unsheared(cone_system):
    f = cone_system.evaluate(ShearletIndex(Cone.PHI, 0, 0, (2, 2)), 6)
    assert cone_slope_diagnostic(f).verdict == "unsheared"


def test_psi_j2_k1(cone_system):
    ix = ShearletIndex(Cone.PSI, 2, 1, (4, 2))
    assert exact_edge_slope(ix, cone_system.spec) == F(1, 2)
    res = cone_slope_diagnostic(cone_system.evaluate(ix, 7))
    assert res.verdict == "cone1"
    assert all(abs(s + 0.5) < 0.1 for s in res.kept)


@pytest.mark.parametrize(
    "ix",
    [
        ShearletIndex(Cone.PSI, 0, 0, (2, 2)),
        ShearletIndex(Cone.PSI, 1, -1, (5, 2)),
        ShearletIndex(Cone.PSI, 3, 2, (8, 3)),
        ShearletIndex(Cone.PSI_TILDE, 2, 1, (3, 6)),
        ShearletIndex(Cone.PSI_TILDE, 3, -1, (2, 8)),
    ],
)
def test_representatives_classified(cone_system, ix):
    assert cone_slope_diagnostic(cone_system.evaluate(ix, 6)).verdict == expected_cone(ix)


def test_random_psi_combination_is_cone1(cone_system):
    pool = [ix for ix in enumerate_system(cone_system.spec) if ix.cone is Cone.PSI and ix.k != 0]
    rng = np.random.default_rng(11)
    for _ in range(5):
        pick = [pool[i] for i in rng.choice(len(pool), 3, replace=False)]
        coeffs = rng.uniform(0.5, 1.5, 3) * rng.choice([-1.0, 1.0], 3)
        f = cone_system.combination(pick, coeffs, 6)
        res = cone_slope_diagnostic(f)
        assert res.slope_at_minimum is not None
        assert classify_slopes([res.slope_at_minimum]) == "cone1"


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.06, 1.1), min_size=1, max_size=5), st.lists(st.floats(1.11, 50), min_size=1, max_size=5))
def test_classify_slopes_rules(low, high):
    assert classify_slopes(low) == "cone1"
    assert classify_slopes([-v for v in high]) == "cone2"
    assert classify_slopes(low + high) == "mixed"
    assert classify_slopes([0.0, 0.01, -0.04]) == "unsheared"


# -- frame bounds -----------------------------------------------------------


def test_orthonormal_nesting_has_unit_bounds(haar):
    src = haar_wavelets(haar)
    rep = frame_bound_sequence(src, [range(3), range(7), range(15)], (6, 7, 8))
    np.testing.assert_allclose(rep.bounds, 1.0, atol=1e-8)
    assert rep.nonincreasing


def test_shearlet_bounds_interlace():
    sp = ShearletSystemSpec(2, "1/3", "1/3", 2, Rectangle.square(0, 3), "inside")
    system = ShearletSystem(sp)
    ix = enumerate_system(sp)[:60]
    rep = frame_bound_sequence(ShearletElements(system, ix), [range(n) for n in (10, 20, 40, 60)], (5, 6, 7))
    assert rep.nonincreasing
    assert rep.infimum > 0


@settings(max_examples=10, deadline=None)
@given(st.permutations(range(7)))
def test_interlacing_for_any_nesting(perm):
    mra = MRA(daubechies_filter(2))
    src = Elements1D(mra, [Element1D("phi", 0, F(m, 3)) for m in range(7)])
    rep = frame_bound_sequence(src, [perm[:n] for n in range(1, 8)], (7, 8, 9))
    assert rep.nonincreasing


def test_frame_bounds_validate_nesting(haar):
    with pytest.raises(ValueError):
        frame_bound_sequence(haar_wavelets(haar), [[0, 1], [1, 2]], (6, 7, 8))


def test_frame_bounds_propagate_convergence_failure():
    with pytest.raises(GramConvergenceError):
        frame_bound_sequence(_Drifting(), [[0], [0, 1]], (3, 4, 5, 6))


# -- oversampling -----------------------------------------------------------


@pytest.fixture(scope="module")
def tiny_spec():
    return ShearletSystemSpec(2, "1/3", "1/5", 0, Rectangle.square(0, 1))


def test_oversampling_identity(tiny_spec):
    rep = oversampling_containment(tiny_spec, 1)
    assert rep.contained and rep.equal and rep.witness is None


@pytest.mark.parametrize("n", [2, 3])
def test_oversampling_is_strict(tiny_spec, n):
    rep = oversampling_containment(tiny_spec, n)
    assert rep.contained and not rep.equal
    assert rep.checked == len(enumerate_system(tiny_spec))
    assert any(v % n for v in rep.witness.m)
    assert "not omega-independent" in rep.conclusion


def test_oversampling_rejects_zero(tiny_spec):
    with pytest.raises(ValueError):
        oversampling_containment(tiny_spec, 0)


# -- admissibility ----------------------------------------------------------


def test_odd_denominators_are_format_admissible():
    rep = admissibility_check(2, ("1/3", "1/5"), J=0, window=2, levels=(7, 8, 9))
    assert rep.format_ok and rep.passed
    assert "not a proof" in rep.note


def test_even_denominator_rejected():
    rep = admissibility_check(2, ("1/2", "1/2"))
    assert not rep.format_ok and not rep.passed


def test_two_thirds_is_admissible(db2):
    rep = admissibility_check(2, ("2/3", "2/3"), J=1, window=4, mra=db2)
    assert rep.passed
    assert all(r.verdict == "independent" for r in rep.reports)
