"""Numerical certificates of linear independence and related structure.

Inner products are Riemann sums on the lattice where every element is an
exact table lookup (see :mod:`shearcert.mra1d`).  A Gram verdict of
``independent`` is only issued when the quadrature has visibly converged
across at least three grid levels.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Optional, Protocol, Sequence

import numpy as np
import scipy.sparse as sparse

from .dyadic import as_fraction, format_exact, in_lattice, pairwise_lattice_distinct, split_denominator
from .mra1d import MRA, FilterCoefficients, SampledFunction1D, lattice_lcm
from .shearlet2d import (
    Cone,
    SampledFunction2D,
    ShearletIndex,
    ShearletSystem,
    ShearletSystemSpec,
    lower_support_profile,
    max_shear,
    support_polygon,
)

__all__ = [
    "GramConvergenceError",
    "ElementSource",
    "Element1D",
    "Elements1D",
    "ShearletElements",
    "GramReport",
    "gram",
    "IndependenceCertificate",
    "staggered_support_certificate",
    "Lemma31Report",
    "verify_min_support_lemma",
    "Prop33Result",
    "verify_prop33",
    "SlopeClassification",
    "cone_slope_diagnostic",
    "FrameBoundReport",
    "frame_bound_sequence",
    "ContainmentReport",
    "oversampling_containment",
    "AdmissibilityReport",
    "admissibility_check",
]

Verdict = Literal["independent", "dependent", "inconclusive"]
DEFAULT_SEED = 20240611


class GramConvergenceError(RuntimeError):
    """Raised when a downstream computation needs a converged Gram matrix."""


class ElementSource(Protocol):
    labels: list[str]

    def sample_matrix(self, level: int) -> tuple[sparse.csr_matrix, float]: ...


# -- element sources --------------------------------------------------------


@dataclass(frozen=True)
class Element1D:
    """``weight * f(2**j x - shift)`` with ``f`` the scaling function or wavelet."""

    kind: Literal["phi", "psi"]
    j: int
    shift: Fraction
    weight: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("phi", "psi"):
            raise ValueError("kind must be 'phi' or 'psi'")
        object.__setattr__(self, "shift", as_fraction(self.shift))

    def support(self, s: int) -> tuple[Fraction, Fraction]:
        scale = Fraction(1, 2**self.j)
        return self.shift * scale, (self.shift + s) * scale

    def label(self) -> str:
        return f"{self.kind}(2^{self.j}x-{format_exact(self.shift)})"


class Elements1D:
    """A finite list of 1D elements sampled on a shared odd-denominator lattice."""

    def __init__(self, mra: MRA, elements: Sequence[Element1D]) -> None:
        if not elements:
            raise ValueError("need at least one element")
        self.mra = mra
        self.elements = list(elements)
        self.labels = [e.label() for e in self.elements]
        self.denominator = lattice_lcm(*(split_denominator(e.shift)[1] for e in self.elements))
        self.min_level = max(split_denominator(e.shift)[0] for e in self.elements)

    def with_duplicate(self, position: int) -> Elements1D:
        return Elements1D(self.mra, self.elements + [self.elements[position]])

    def _bounds(self, level: int) -> tuple[int, int]:
        s = self.mra.support_length
        scale = (1 << level) * self.denominator
        lo = min(e.support(s)[0] for e in self.elements)
        hi = max(e.support(s)[1] for e in self.elements)
        return math.floor(lo * scale), math.ceil(hi * scale)

    def _row(self, e: Element1D, n: np.ndarray, level: int) -> np.ndarray:
        B = self.denominator
        table = self.mra.phi_values(level, B) if e.kind == "phi" else self.mra.psi_values(level, B)
        off = e.shift * (1 << level) * B
        if off.denominator != 1:
            raise ValueError(f"level {level} too coarse for shift {e.shift}")
        idx = (n << e.j) - int(off)
        out = np.zeros(len(n))
        ok = (idx >= 0) & (idx < len(table))
        out[ok] = table[idx[ok]]
        return e.weight * out

    def sample_matrix(self, level: int) -> tuple[sparse.csr_matrix, float]:
        lo, hi = self._bounds(level)
        n = np.arange(lo, hi + 1, dtype=np.int64)
        rows = np.array([self._row(e, n, level) for e in self.elements])
        return sparse.csr_matrix(rows), 1.0 / ((1 << level) * self.denominator)

    def sample(self, position: int, level: int) -> SampledFunction1D:
        """One element as a :class:`SampledFunction1D` on the shared lattice."""
        e = self.elements[position]
        lo, hi = self._bounds(level)
        n = np.arange(lo, hi + 1, dtype=np.int64)
        step = Fraction(1, (1 << level) * self.denominator)
        smin, smax = e.support(self.mra.support_length)
        return SampledFunction1D(
            level, lo * step, self._row(e, n, level), smin, smax, self.denominator, {"label": self.labels[position]}
        )


class ShearletElements:
    """Shearlet system elements as an :class:`ElementSource`."""

    def __init__(self, system: ShearletSystem, indices: Sequence[ShearletIndex]) -> None:
        self.system = system
        self.indices = list(indices)
        self.labels = [ix.label() for ix in self.indices]

    def with_duplicate(self, position: int) -> ShearletElements:
        return ShearletElements(self.system, self.indices + [self.indices[position]])

    def subset(self, positions: Sequence[int]) -> ShearletElements:
        return ShearletElements(self.system, [self.indices[p] for p in positions])

    def sample_matrix(self, level: int) -> tuple[sparse.csr_matrix, float]:
        return self.system.sample_matrix(self.indices, level)


# -- Gram certification -----------------------------------------------------


@dataclass
class GramReport:
    """Gram matrix at the finest level plus its convergence history.

    ``convergence`` lists ``(level, max entry change / max diagonal)``
    against the previous level; ``sigma_history`` lists
    ``(level, sigma_min / max diagonal)``.
    """

    labels: list[str]
    gram: np.ndarray
    quadrature_level: int
    sigma_min: float
    max_diag: float
    tolerance: float
    convergence: list[tuple[int, float]]
    sigma_history: list[tuple[int, float]]
    converged: bool
    verdict: Verdict
    seed: Optional[int] = None
    notes: list[str] = field(default_factory=list)

    @property
    def sigma_rel(self) -> float:
        return self.sigma_min / self.max_diag if self.max_diag > 0 else 0.0

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.gram).min()) if len(self.gram) else 0.0

    def to_dict(self, include_matrix: bool = False) -> dict:
        d = {
            "size": len(self.labels),
            "quadrature_level": self.quadrature_level,
            "sigma_min": self.sigma_min,
            "sigma_rel": self.sigma_rel,
            "max_diag": self.max_diag,
            "tolerance": self.tolerance,
            "convergence": [[lv, v] for lv, v in self.convergence],
            "sigma_history": [[lv, v] for lv, v in self.sigma_history],
            "converged": self.converged,
            "verdict": self.verdict,
            "seed": self.seed,
            "notes": self.notes,
        }
        if include_matrix:
            d["labels"] = self.labels
            d["gram"] = self.gram.tolist()
        return d

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([""] + self.labels)
        for lab, row in zip(self.labels, self.gram):
            w.writerow([lab] + [repr(float(v)) for v in row])
        return buf.getvalue()


def _gram_at(source: ElementSource, level: int) -> np.ndarray:
    V, w = source.sample_matrix(level)
    G = (V @ V.T).toarray() * w
    return (G + G.T) / 2


def gram(
    source: ElementSource,
    levels: Sequence[int],
    *,
    tol: float = 1e-6,
    seed: Optional[int] = None,
    exact_delta: float = 1e-12,
) -> GramReport:
    """Gram matrices at increasing quadrature levels and a rank verdict.

    The verdict rule is

    * ``dependent`` if ``sigma_min / max_diag <= tol`` at every level;
    * ``independent`` if the history has converged and the finest relative
      ``sigma_min`` exceeds ``tol``;
    * ``inconclusive`` otherwise.

    Converged means either the last entry change is at rounding level
    (``exact_delta``), or the entry changes decrease strictly and the
    relative ``sigma_min`` moved by at most a tenth of itself between the
    last two levels.
    """
    levels = sorted(set(int(v) for v in levels))
    if len(levels) < 3:
        raise ValueError("need at least three quadrature levels")
    prev = None
    conv: list[tuple[int, float]] = []
    hist: list[tuple[int, float]] = []
    G = np.zeros((0, 0))
    sigma = maxdiag = 0.0
    for lv in levels:
        G = _gram_at(source, lv)
        maxdiag = float(np.max(np.diag(G), initial=0.0))
        sigma = float(np.linalg.svd(G, compute_uv=False).min()) if len(G) else 0.0
        hist.append((lv, sigma / maxdiag if maxdiag > 0 else 0.0))
        if prev is not None:
            conv.append((lv, float(np.max(np.abs(G - prev))) / maxdiag if maxdiag > 0 else 0.0))
        prev = G
    deltas = [d for _, d in conv]
    s_last, s_prev = hist[-1][1], hist[-2][1]
    converged = deltas[-1] <= exact_delta or (
        all(b < a for a, b in zip(deltas, deltas[1:])) and abs(s_last - s_prev) <= s_last / 10
    )
    notes = []
    if all(s <= tol for _, s in hist):
        verdict: Verdict = "dependent"
    elif converged and s_last > tol:
        verdict = "independent"
    else:
        verdict = "inconclusive"
        if not converged:
            notes.append("quadrature history has not converged")
    return GramReport(
        labels=list(source.labels),
        gram=G,
        quadrature_level=levels[-1],
        sigma_min=sigma,
        max_diag=maxdiag,
        tolerance=tol,
        convergence=conv,
        sigma_history=hist,
        converged=converged,
        verdict=verdict,
        seed=seed,
        notes=notes,
    )


# -- staggered supports -----------------------------------------------------


@dataclass
class IndependenceCertificate:
    method: Literal["staggered_support", "gram_rank", "lattice_lemma"]
    witness: dict
    passed: bool

    def to_dict(self) -> dict:
        return {"method": self.method, "witness": self.witness, "passed": self.passed}


def _detect_min(values: np.ndarray, threshold: float) -> Optional[int]:
    mag = np.abs(values)
    peak = mag.max(initial=0.0)
    if peak == 0.0:
        return None
    hit = np.flatnonzero(mag > threshold * peak)
    return int(hit[0]) if hit.size else None


def staggered_support_certificate(
    functions: Sequence[SampledFunction1D],
    *,
    combinations: int = 20,
    seed: int = DEFAULT_SEED,
    threshold: float = 1e-8,
) -> IndependenceCertificate:
    """Distinct exact support minima, plus a scan of random combinations.

    Every sampled combination ``sum alpha_i f_i`` must start within one
    grid cell of ``min {a_i : alpha_i != 0}``.  Colliding minima give
    ``passed=False`` with the pair reported; that is not a proof of
    dependence.
    """
    if not functions:
        raise ValueError("need at least one function")
    minima = [f.support_min for f in functions]
    collision = None
    order = sorted(range(len(minima)), key=lambda i: minima[i])
    for a, b in zip(order, order[1:]):
        if minima[a] == minima[b]:
            collision = [a, b]
            break
    witness: dict = {"minima": [format_exact(m) for m in minima], "seed": seed}
    if collision is not None:
        witness["collision"] = collision
        return IndependenceCertificate("staggered_support", witness, False)
    step = functions[0].step
    if any(f.step != step for f in functions):
        raise ValueError("functions must share a lattice")
    starts = [(f.offset - functions[0].offset) / step for f in functions]
    if any(s.denominator != 1 for s in starts):
        raise ValueError("sample offsets are not lattice-aligned")
    base = min(int(s) for s in starts)
    length = max(int(s) - base + len(f.values) for s, f in zip(starts, functions))
    rows = np.zeros((len(functions), length))
    for r, (s, f) in enumerate(zip(starts, functions)):
        rows[r, int(s) - base : int(s) - base + len(f.values)] = f.values
    origin = functions[0].offset + base * step
    rng = np.random.default_rng(seed)
    worst = Fraction(0)
    ok = True
    for _ in range(combinations):
        alpha = rng.standard_normal(len(functions))
        alpha[rng.random(len(functions)) < 0.3] = 0.0
        if not alpha.any():
            alpha[rng.integers(len(functions))] = 1.0
        first = _detect_min(alpha @ rows, threshold)
        expected = min(m for m, a in zip(minima, alpha) if a != 0)
        if first is None:
            ok = False
            continue
        dist = abs(origin + first * step - expected)
        worst = max(worst, dist)
        ok &= dist <= step
    witness.update(combinations=combinations, worst_distance=format_exact(worst), grid_step=format_exact(step))
    return IndependenceCertificate("staggered_support", witness, ok)


# -- support minima on the dyadic lattice -----------------------------------


@dataclass
class Lemma31Report:
    order: int
    J: int
    level: int
    trials: int
    passed: int
    redraws: int
    worst_distance: Fraction
    exact_matches: int
    seed: int

    @property
    def ok(self) -> bool:
        return self.passed == self.trials

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "J": self.J,
            "level": self.level,
            "trials": self.trials,
            "passed": self.passed,
            "redraws": self.redraws,
            "worst_distance": format_exact(self.worst_distance),
            "bound": format_exact(Fraction(2, 1 << self.level)),
            "exact_matches": self.exact_matches,
            "seed": self.seed,
            "ok": self.ok,
        }


def verify_min_support_lemma(
    filt: FilterCoefficients,
    J: int,
    trials: int = 100,
    seed: int = DEFAULT_SEED,
    *,
    level: int = 12,
    window: int = 8,
    density: float = 0.25,
    threshold: float = 1e-8,
    mra: Optional[MRA] = None,
) -> Lemma31Report:
    """Random sparse wavelet sums start on the lattice ``2**-(J+1) Z``.

    Each trial draws coefficients on ``psi(2**j x - m)`` for ``0 <= j <= J``
    and ``|m| <= window``, each kept with probability ``density``.  Kept
    coefficients have random sign and magnitude in ``[0.5, 1.5]`` so that no
    term sits at the detection threshold by accident.  The check detects the first grid point where the sum exceeds
    ``threshold`` relative to its maximum and measures the distance to the
    lattice.  All-zero draws are redrawn and counted.
    """
    if J < 0 or level < J + 8:
        raise ValueError("need 0 <= J and level >= J + 8")
    mra = mra or MRA(filt)
    psi = mra.psi_values(level)
    s = filt.support_length
    n = np.arange(-window << level, (window + s + 1) << level, dtype=np.int64)
    labels = [(j, m) for j in range(J + 1) for m in range(-window, window + 1)]
    E = np.zeros((len(labels), len(n)))
    for r, (j, m) in enumerate(labels):
        idx = (n << j) - (m << level)
        ok = (idx >= 0) & (idx < len(psi))
        E[r, ok] = 2 ** (j / 2) * psi[idx[ok]]
    rng = np.random.default_rng(seed)
    h = Fraction(1, 1 << level)
    grid_scale = 1 << (J + 1)
    passed = redraws = matches = 0
    worst = Fraction(0)
    for _ in range(trials):
        while True:
            keep = rng.random(len(labels)) < density
            mags = rng.uniform(0.5, 1.5, len(labels)) * rng.choice((-1.0, 1.0), len(labels))
            alpha = np.where(keep, mags, 0.0)
            first = _detect_min(alpha @ E, threshold) if keep.any() else None
            if first is not None:
                break
            redraws += 1
        x = (int(n[0]) + first) * h
        t = x * grid_scale
        dist = abs(t - round(t)) / grid_scale
        worst = max(worst, dist)
        passed += dist < 2 * h
        predicted = min(Fraction(m, 1 << j) for (j, m), a in zip(labels, alpha) if a != 0)
        matches += Fraction(0) <= x - predicted <= h
    return Lemma31Report(filt.order, J, level, trials, passed, redraws, worst, matches, seed)


# -- oversampled wavelets ---------------------------------------------------


@dataclass
class Prop33Result:
    offsets: list[Fraction]
    J: int
    hypothesis_ok: bool
    report: Optional[GramReport]

    @property
    def verdict(self) -> str:
        return self.report.verdict if self.hypothesis_ok and self.report else "hypothesis_failed"

    def to_dict(self) -> dict:
        return {
            "offsets": [format_exact(t) for t in self.offsets],
            "J": self.J,
            "hypothesis_ok": self.hypothesis_ok,
            "verdict": self.verdict,
            "gram": self.report.to_dict() if self.report else None,
        }


def prop33_elements(mra: MRA, J: int, t: Sequence[Fraction], translations: dict | Sequence[int]) -> Elements1D:
    """``psi(2**j (x - t_i) + l)`` over ``0 <= j <= J``; ``translations`` is
    either one range of ``l`` or a mapping ``(i, j) -> l values``."""
    elems = []
    for i, ti in enumerate(t):
        for j in range(J + 1):
            ls = translations[(i, j)] if isinstance(translations, dict) else translations
            for l in ls:
                elems.append(Element1D("psi", j, (1 << j) * ti - l, 2 ** (j / 2)))
    return Elements1D(mra, elems)


def verify_prop33(
    filt: FilterCoefficients,
    J: int,
    t: Sequence,
    translations: dict | Sequence[int] = range(-3, 4),
    *,
    levels: Sequence[int] = (9, 10, 11),
    tol: float = 1e-6,
    mra: Optional[MRA] = None,
) -> Prop33Result:
    """Gram certificate for shifted dilated wavelets with lattice-distinct offsets."""
    offsets = [as_fraction(v) for v in t]
    if not pairwise_lattice_distinct(offsets, J):
        return Prop33Result(offsets, J, False, None)
    src = prop33_elements(mra or MRA(filt), J, offsets, translations)
    return Prop33Result(offsets, J, True, gram(src, levels, tol=tol))


# -- cone classification ----------------------------------------------------


@dataclass
class SlopeClassification:
    label: str
    slopes: list[float]
    kept: list[float]
    slope_at_minimum: Optional[float]
    verdict: Literal["cone1", "cone2", "unsheared", "mixed"]

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "kept_slopes": self.kept,
            "slope_at_minimum": self.slope_at_minimum,
            "verdict": self.verdict,
        }


def classify_slopes(magnitudes: Sequence[float], *, flat: float = 0.05, slack: float = 0.1) -> str:
    """``cone1`` for magnitudes up to one (with ``slack`` for grid error),
    ``cone2`` above, ``unsheared`` if none exceeds ``flat``."""
    mags = [abs(v) for v in magnitudes if abs(v) > flat]
    if not mags:
        return "unsheared"
    if all(v <= 1 + slack for v in mags):
        return "cone1"
    if all(v > 1 + slack for v in mags):
        return "cone2"
    return "mixed"


def _stable_positions(prof, flat: float, agree: float) -> list[int]:
    s = np.asarray(prof.window_slopes)
    out = []
    for i in range(1, len(s) - 1):
        tol = agree * max(1.0, abs(s[i]))
        if abs(s[i]) > flat and abs(s[i - 1] - s[i]) <= tol and abs(s[i + 1] - s[i]) <= tol:
            out.append(i)
    return out


def stable_windows(prof, *, flat: float = 0.05, agree: float = 0.15) -> list[float]:
    """Slopes of non-flat windows whose two neighbours agree with them.

    On a straight edge neighbouring windows differ by at most about a tenth
    even for shallow digitised slopes, while windows near a corner of the
    support jump; ``agree`` is relative for slopes steeper than one.
    """
    return [float(prof.window_slopes[i]) for i in _stable_positions(prof, flat, agree)]


def cone_slope_diagnostic(
    f: SampledFunction2D,
    *,
    threshold: float = 1e-12,
    flat: float = 0.05,
    slack: float = 0.1,
) -> SlopeClassification:
    """Classify the lower support bound along ``x1`` by its slope magnitudes.

    Only locally stable windows are used (see :func:`stable_windows`), which
    drops windows straddling a corner of the support; flat windows are
    dropped as well.  ``slope_at_minimum`` is taken from the stable window
    closest to the global support minimum, or from the nearest raw window
    when no window is stable.
    """
    prof = lower_support_profile(f, axis=1, threshold=threshold)
    slopes = [float(v) for v in prof.window_slopes]
    pos = _stable_positions(prof, flat, 0.15)
    kept = [slopes[i] for i in pos]
    at_min = None
    if len(prof.window_centers):
        t_min = prof.coords[int(np.argmin(prof.minima))]
        cands = pos or range(len(slopes))
        w = min(cands, key=lambda i: abs(prof.window_centers[i] - t_min))
        at_min = slopes[w]
    return SlopeClassification(f.label, slopes, kept, at_min, classify_slopes(kept, flat=flat, slack=slack))


def expected_cone(index: ShearletIndex) -> str:
    if index.cone is Cone.PHI or index.k == 0:
        return "unsheared"
    return "cone1" if index.cone is Cone.PSI else "cone2"


def exact_edge_slope(index: ShearletIndex, spec: ShearletSystemSpec) -> Optional[Fraction]:
    """Magnitude of ``dx1/dx2`` along the edges bounding the wavelet factor."""
    if index.cone is Cone.PHI or index.k == 0:
        return None
    poly = support_polygon(index, spec)
    mags = {abs(v) for v in poly.edge_slopes() if v is not None and v != 0}
    if len(mags) != 1:
        raise AssertionError(f"unexpected edge structure for {index.label()}")
    return mags.pop()


# -- frame bounds -----------------------------------------------------------


@dataclass
class FrameBoundReport:
    sizes: list[int]
    bounds: list[float]
    nonincreasing: bool
    report: GramReport

    @property
    def infimum(self) -> float:
        return min(self.bounds)

    def to_dict(self) -> dict:
        return {
            "sizes": self.sizes,
            "A_N": self.bounds,
            "inf": self.infimum,
            "nonincreasing": self.nonincreasing,
            "gram": self.report.to_dict(),
        }


def frame_bound_sequence(
    source: ElementSource,
    nested: Sequence[Sequence[int]],
    levels: Sequence[int],
    *,
    tol: float = 1e-6,
    rounding: float = 1e-12,
) -> FrameBoundReport:
    """Smallest Gram eigenvalue of each nested subfamily.

    ``nested`` holds strictly increasing sets of positions into ``source``.
    The Gram matrix of the whole source is computed once; each ``A_N`` is
    the minimum eigenvalue of a principal submatrix, so the sequence is
    nonincreasing up to ``rounding`` (relative to the largest diagonal).
    """
    sets = [list(dict.fromkeys(s)) for s in nested]
    if not sets:
        raise ValueError("need at least one index set")
    for a, b in zip(sets, sets[1:]):
        if not (set(a) < set(b)):
            raise ValueError("index sets must be strictly nested")
    rep = gram(source, levels, tol=tol)
    if not rep.converged:
        raise GramConvergenceError("Gram quadrature did not converge")
    bounds = [float(np.linalg.eigvalsh(rep.gram[np.ix_(s, s)]).min()) for s in sets]
    eps = rounding * max(rep.max_diag, 1.0)
    mono = all(b <= a + eps for a, b in zip(bounds, bounds[1:]))
    return FrameBoundReport([len(s) for s in sets], bounds, mono, rep)


# -- oversampling -----------------------------------------------------------


@dataclass
class ContainmentReport:
    n: int
    checked: int
    contained: bool
    equal: bool
    witness: Optional[ShearletIndex]
    conclusion: str

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "checked": self.checked,
            "contained": self.contained,
            "equal": self.equal,
            "strictness_witness": self.witness.to_dict() if self.witness else None,
            "conclusion": self.conclusion,
        }


def oversampling_containment(spec: ShearletSystemSpec, n: int) -> ContainmentReport:
    """Check ``SH(c)`` embeds into ``SH(c/n)`` via ``m -> n m``, exactly.

    Every element of ``SH(c)`` must reappear in ``SH(c/n)`` with the same
    translation ``c m = (c/n)(n m)`` and the same support.  For ``n >= 2``
    the strictness witness is the index ``m = (1, 0)`` of the full system
    ``SH(c/n)``; it need not lie in the observation window.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    fine = spec.scaled(n)
    c, cf = spec.c, fine.c
    indices = enumerate_indices_cached(spec)
    ok = True
    dom = spec.domain
    keep = (lambda p: p.inside(dom)) if spec.selection == "inside" else (lambda p: p.overlaps(dom))
    for ix in indices:
        img = ShearletIndex(ix.cone, ix.j, ix.k, (n * ix.m[0], n * ix.m[1]))
        same_shift = all(c[i] * ix.m[i] == cf[i] * img.m[i] for i in range(2))
        if ix.cone is Cone.PHI:
            same_shift = all(c[0] * ix.m[i] == cf[0] * img.m[i] for i in range(2))
        poly = support_polygon(ix, spec)
        ok &= same_shift and support_polygon(img, fine) == poly and keep(poly)
    # c1 / n is not an integer multiple of c1, so this index has no preimage
    witness = ShearletIndex(Cone.PHI, 0, 0, (1, 0)) if n >= 2 else None
    equal = n == 1 and ok
    if n == 1:
        conclusion = "n = 1: the two systems coincide"
    elif ok and witness is not None:
        conclusion = (
            f"SH(c) is a proper subfamily of SH(c/{n}); since SH(c) is a frame, each extra "
            f"element of SH(c/{n}) is an l2-combination of SH(c), so SH(c/{n}) is not omega-independent"
        )
    else:
        conclusion = "containment could not be certified"
    return ContainmentReport(n, len(indices), ok, equal, witness, conclusion)


def enumerate_indices_cached(spec: ShearletSystemSpec) -> list[ShearletIndex]:
    from .shearlet2d import enumerate_system

    return enumerate_system(spec)


# -- admissibility ----------------------------------------------------------


@dataclass
class AdmissibilityReport:
    c: tuple[Fraction, Fraction]
    format_ok: bool
    reports: list[GramReport]
    passed: bool
    note: str = (
        "the 1D Gram check covers finitely many scales and translates; it is evidence "
        "for the independence assumption, not a proof of it"
    )

    def to_dict(self) -> dict:
        return {
            "c": [format_exact(v) for v in self.c],
            "format_ok": self.format_ok,
            "gram": [r.to_dict() for r in self.reports],
            "passed": self.passed,
            "note": self.note,
        }


def admissibility_check(
    order: int,
    c: Sequence,
    J: int = 1,
    window: int = 4,
    *,
    levels: Sequence[int] = (9, 10, 11),
    tol: float = 1e-6,
    mra: Optional[MRA] = None,
) -> AdmissibilityReport:
    """Odd denominators plus a desk-scale 1D independence check per axis."""
    cs = tuple(as_fraction(v) for v in c)
    format_ok = all(v > 0 and v.denominator % 2 == 1 for v in cs)
    if not format_ok:
        return AdmissibilityReport(cs, False, [], False)
    from .mra1d import daubechies_filter

    mra = mra or MRA(daubechies_filter(order))
    reports = []
    for ci in cs:
        elems = [Element1D("phi", 0, ci * m) for m in range(-window, window + 1)]
        elems += [
            Element1D("psi", j, ci * m, 2 ** (j / 2)) for j in range(J + 1) for m in range(-window, window + 1)
        ]
        reports.append(gram(Elements1D(mra, elems), levels, tol=tol))
    passed = all(r.verdict == "independent" for r in reports)
    return AdmissibilityReport(cs, True, reports, passed)
