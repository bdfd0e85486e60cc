"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run alone with ``pytest tests/test_acceptance.py`` (lines are printed even
without ``-s``).  Criterion 5 at ``j_max = 2`` dominates the runtime.
"""
import time
from fractions import Fraction
from math import ceil, pi

import numpy as np
import pytest

from shearcert.cli import main
from shearcert.independence import (
    Element1D,
    Elements1D,
    ShearletElements,
    cone_slope_diagnostic,
    exact_edge_slope,
    expected_cone,
    frame_bound_sequence,
    gram,
    oversampling_containment,
    verify_min_support_lemma,
    verify_prop33,
)
from shearcert.mra1d import (
    MRA,
    FrameHypothesisParams,
    cascade,
    check_decay,
    check_inf_phi,
    daubechies_filter,
    find_beta,
    m0_positive_on_interval,
    psi_hat,
    wavelet_from_filter,
)
from shearcert.shearlet2d import Cone, Rectangle, ShearletSystem, ShearletSystemSpec, enumerate_system

F = Fraction


@pytest.fixture
def line(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n:>2}] {'PASS' if ok else 'FAIL'}: {detail}")
        return ok

    return emit


def spec(j_max, dom=(0, 3), selection="inside"):
    return ShearletSystemSpec(2, "1/3", "1/3", j_max, Rectangle.square(*dom), selection)


# 1 -------------------------------------------------------------------------


def test_criterion_1_filter_validity(line):
    t = time.perf_counter()
    worst_sum, worst_qmf = 0.0, 0.0
    for N in range(1, 9):
        f = daubechies_filter(N)
        worst_sum = max(worst_sum, f.sum_residual())
        worst_qmf = max(worst_qmf, f.qmf_residual())
    dt = time.perf_counter() - t
    # "exactly-rounded" sum: within a few ulps of 2
    ok = worst_sum <= 4 * np.spacing(2.0) and worst_qmf < 1e-12 and dt < 1.0
    assert line(1, ok, f"N=1..8: max |sum-2|={worst_sum:.1e}, max QMF residual={worst_qmf:.1e}, {dt:.2f}s")


# 2 -------------------------------------------------------------------------


def _shift_gram(phi, shifts):
    v, per = phi.values, 1 << phi.level
    n = len(v)
    G = np.zeros((len(shifts), len(shifts)))
    for a, sa in enumerate(shifts):
        for b, sb in enumerate(shifts):
            d = (sb - sa) * per
            if abs(d) < n:
                x, y = (v[d:], v[: n - d]) if d >= 0 else (v[: n + d], v[-d:])
                G[a, b] = float(np.dot(x, y)) / per
    return G


def test_criterion_2_orthonormal_translates(line):
    errs = []
    for N in (1, 2, 3):
        phi = cascade(daubechies_filter(N), 10)
        G = _shift_gram(phi, list(range(-N, N + 1)))
        errs.append(float(np.max(np.abs(G - np.eye(len(G))))))
    ok = max(errs) <= 1e-6
    assert line(2, ok, "max |G - I| for N=1,2,3: " + ", ".join(f"{e:.1e}" for e in errs))


# 3 -------------------------------------------------------------------------


def test_criterion_3_support_minima_lattice(line):
    t = time.perf_counter()
    results = {}
    for N in (1, 2, 3):
        f = daubechies_filter(N)
        mra = MRA(f)
        for J in range(4):
            rep = verify_min_support_lemma(f, J, trials=100, level=12, mra=mra)
            results[(N, J)] = rep
    dt = time.perf_counter() - t
    failed = [k for k, r in results.items() if not r.ok]
    worst = max(r.worst_distance for r in results.values())
    ok = not failed and worst < F(2, 1 << 12) and dt < 30
    assert line(3, ok, f"12 (N,J) pairs x 100 draws, failures={failed}, worst distance={float(worst):.2e}, {dt:.1f}s")


# 4 -------------------------------------------------------------------------


def test_criterion_4_oversampled_wavelets(line):
    t = time.perf_counter()
    f = daubechies_filter(2)
    mra = MRA(f)
    offsets = [F(i, 3) for i in range(3)]
    details, ok = [], True
    for J in (0, 1):
        res = verify_prop33(f, J, offsets, range(-3, 4), levels=(9, 10, 11), mra=mra)
        r = res.report
        good = res.verdict == "independent" and r.sigma_rel > 1e-6 and r.converged and len(r.sigma_history) == 3
        ok &= good
        details.append(f"J={J}: {res.verdict}, sigma_rel={r.sigma_rel:.2e}, entry-delta tail={r.convergence[-1][1]:.1e}")
    bad = verify_prop33(f, 1, [F(0), F(1, 4)], mra=mra)
    ok &= bad.verdict == "hypothesis_failed"
    dt = time.perf_counter() - t
    ok &= dt < 60
    details.append(f"t=(0,1/4): {bad.verdict}, {dt:.1f}s")
    assert line(4, ok, "; ".join(details))


# 5 -------------------------------------------------------------------------


@pytest.mark.parametrize("j_max", [0, 1, 2])
def test_criterion_5_full_system_gram(line, j_max):
    t = time.perf_counter()
    sp = spec(j_max)
    system = ShearletSystem(sp)
    ix = enumerate_system(sp)
    src = ShearletElements(system, ix)
    rep = gram(src, (5, 6, 7))
    dup = gram(src.with_duplicate(0), (5, 6, 7))
    dt = time.perf_counter() - t
    ok = rep.verdict == "independent" and dup.verdict == "dependent" and dup.sigma_min < 1e-10 and dt < 300
    detail = (
        f"j_max={j_max}: {len(ix)} elements, {rep.verdict} (sigma_rel={rep.sigma_rel:.2e}, "
        f"entry-delta tail={rep.convergence[-1][1]:.1e}); "
        f"duplicate {dup.verdict} (sigma_min={dup.sigma_min:.1e}); {dt:.1f}s"
    )
    assert line(5, ok, detail)


# 6 -------------------------------------------------------------------------


def test_criterion_6_cone_invariant(line):
    sp = spec(3, dom=(0, 2))
    system = ShearletSystem(sp)
    ix = enumerate_system(sp)
    wrong, slope_bad = 0, 0
    for i in ix:
        wrong += cone_slope_diagnostic(system.evaluate(i, 6)).verdict != expected_cone(i)
        exact = exact_edge_slope(i, sp)
        if exact is not None:
            c = 2 ** ceil(i.j / 2)
            want = F(abs(i.k), c) if i.cone is Cone.PSI else F(c, abs(i.k))
            in_range = 0 < exact <= 1 if i.cone is Cone.PSI else exact > 1
            slope_bad += exact != want or not in_range
    ok = wrong == 0 and slope_bad == 0 and len(ix) > 0
    assert line(6, ok, f"{len(ix)} elements j<=3: {wrong} misclassified, {slope_bad} exact slope mismatches")


# 7 -------------------------------------------------------------------------


def test_criterion_7_frame_hypotheses(line):
    parts, ok = [], True
    infs = {}
    for N in (1, 2, 3):
        good, val = check_inf_phi(cascade(daubechies_filter(N), 10))
        infs[N] = val
        ok &= good
    haar_err = abs(infs[1] - (2 / pi) ** 2) / (2 / pi) ** 2
    ok &= haar_err < 0.02
    parts.append(f"inf|phi_hat|^2 N=1..3 = " + ", ".join(f"{infs[N]:.4f}" for N in (1, 2, 3)))
    parts.append(f"Haar rel. error {haar_err:.1e}")
    betas = {N: find_beta(wavelet_from_filter(daubechies_filter(N), 10)) for N in (2, 3)}
    ok &= all(b is not None for b in betas.values())
    parts.append("beta " + ", ".join(f"N={N}:{b}" for N, b in betas.items()))
    m0 = all(m0_positive_on_interval(N)[0] for N in range(1, 9))
    ok &= m0
    parts.append(f"m0>0 on (-1,1) for N=1..8: {m0}")
    xi = np.linspace(-64, 64, 4097)
    decay = check_decay(xi, psi_hat(daubechies_filter(1), xi), FrameHypothesisParams(5.5, 5.0), "wavelet")
    ok &= not decay.ok
    parts.append(f"Haar decay at gamma=5 fails as expected (xi={decay.first_violation:.4g})")
    assert line(7, ok, "; ".join(parts))


# 8 -------------------------------------------------------------------------


class _CascadeTranslates:
    """Integer translates of the cascade samples, which are discretely orthonormal."""

    def __init__(self, filt, shifts):
        self.filt, self.shifts = filt, list(shifts)
        self.labels = [f"phi(x-{m})" for m in self.shifts]

    def sample_matrix(self, level):
        import scipy.sparse as sparse

        v, per = cascade(self.filt, level).values, 1 << level
        lo = min(self.shifts) * per
        width = (max(self.shifts) - min(self.shifts)) * per + len(v)
        rows = np.zeros((len(self.shifts), width))
        for r, m in enumerate(self.shifts):
            rows[r, m * per - lo : m * per - lo + len(v)] = v
        return sparse.csr_matrix(rows), 1.0 / per


def test_criterion_8_frame_bound_sequences(line):
    haar = MRA(daubechies_filter(1))
    hw = Elements1D(haar, [Element1D("psi", j, m, 2 ** (j / 2)) for j in range(3) for m in range(-2, 3)])
    trans = _CascadeTranslates(daubechies_filter(2), range(-3, 4))
    ortho = [
        frame_bound_sequence(hw, [range(n) for n in (1, 5, 10, 15)], (6, 7, 8)),
        frame_bound_sequence(trans, [range(n) for n in (1, 3, 5, 7)], (8, 9, 10)),
    ]
    unit = max(float(np.max(np.abs(np.array(r.bounds) - 1))) for r in ortho)
    rng = np.random.default_rng(5)
    oversampled = Elements1D(MRA(daubechies_filter(2)), [Element1D("phi", 0, F(m, 3)) for m in range(9)])
    mono = all(r.nonincreasing for r in ortho)
    for _ in range(5):
        perm = [int(v) for v in rng.permutation(9)]
        mono &= frame_bound_sequence(oversampled, [perm[:n] for n in range(1, 10)], (8, 9, 10)).nonincreasing
    sp = spec(2)
    sh = ShearletElements(ShearletSystem(sp), enumerate_system(sp)[:60])
    shr = frame_bound_sequence(sh, [range(n) for n in (10, 20, 30, 40, 50, 60)], (5, 6, 7))
    mono &= shr.nonincreasing
    ok = mono and unit <= 1e-8 and shr.infimum > 0
    assert line(8, ok, f"all nestings nonincreasing: {mono}; orthonormal max |A_N-1|={unit:.1e}; shearlet inf A_N={shr.infimum:.2e}")


# 9 -------------------------------------------------------------------------


def test_criterion_9_oversampling(line):
    sp = spec(1)
    reps = {n: oversampling_containment(sp, n) for n in (2, 3)}
    ok = all(r.contained and r.witness is not None and any(v % n for v in r.witness.m) for n, r in reps.items())
    ok &= all("not omega-independent" in r.conclusion for r in reps.values())
    w = ", ".join(f"n={n}: witness m={r.witness.m}" for n, r in reps.items())
    assert line(9, ok, f"{reps[2].checked} indices mapped exactly; {w}; {reps[3].conclusion}")


# 10 ------------------------------------------------------------------------

_RUNS = [
    ["verify", "lemma31", "--trials", "20"],
    ["verify", "prop33", "--levels", "9", "10", "11"],
    ["verify", "cones", "--j-max", "2", "--domain", "0", "0", "2", "2"],
    ["verify", "gram", "--j-max", "1"],
    ["verify", "hypotheses", "-N", "2"],
    ["verify", "oversampling", "--j-max", "1"],
    ["system", "--j-max", "2"],
    ["plot-support", "--j-max", "1", "--selection", "intersects", "--domain", "0", "0", "1", "1"],
    ["frame-bounds", "--j-max", "2"],
]


def test_criterion_10_determinism(line, tmp_path):
    out = tmp_path / "out"
    snapshots = []
    for _ in range(2):
        for args in _RUNS:
            main([*args, "--out", str(out)])
        snapshots.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    a, b = snapshots
    same = [n for n in a if b.get(n) == a[n]]
    ok = bool(a) and a.keys() == b.keys() and len(same) == len(a)
    assert line(10, ok, f"{len(same)}/{len(a)} JSON/CSV/SVG artifacts byte-identical across two runs")
