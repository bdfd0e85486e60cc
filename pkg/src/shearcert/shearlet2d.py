"""Separable cone-adapted shearlet systems on dyadic grids.

Elements follow the usual three families

* ``PHI``:        ``phi1(x1 - c1 m1) phi1(x2 - c1 m2)``
* ``PSI``:        ``2**(3j/4) psi1(2**j x1 + S k x2 - c1 m1) phi1(S x2 - c2 m2)``
* ``PSI_TILDE``:  ``2**(3j/4) psi1(2**j x2 + S k x1 - c1 m2) phi1(S x1 - c2 m1)``

with ``S = 2**(j // 2)``.  For grid points ``x = n 2**-L`` every argument
lies on the lattice ``(2**-L / B) Z`` where ``B`` is the lcm of the odd
denominators of ``c1, c2``, so values are integer table lookups into
:class:`~shearcert.mra1d.MRA` tables.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Literal, Optional, Sequence

import numpy as np
import scipy.sparse as sparse

from .dyadic import as_fraction, format_exact
from .mra1d import MRA, SampledFunction1D, daubechies_filter, lattice_lcm

__all__ = [
    "Cone",
    "ShearletIndex",
    "Rectangle",
    "ShearletSystemSpec",
    "SupportPolygon",
    "SampledFunction2D",
    "SupportProfile",
    "Generator2D",
    "ShearletSystem",
    "parabolic_scaling",
    "shearing",
    "SWAP",
    "make_generators",
    "enumerate_system",
    "support_polygon",
    "lower_support_profile",
    "polygons_svg",
    "indices_json",
]

Point = tuple[Fraction, Fraction]
Selection = Literal["intersects", "inside"]


class Cone(str, Enum):
    PHI = "PHI"
    PSI = "PSI"
    PSI_TILDE = "PSI_TILDE"

    @property
    def rank(self) -> int:
        return ("PHI", "PSI", "PSI_TILDE").index(self.value)


def parabolic_scaling(j: int) -> np.ndarray:
    return np.array([[2**j, 0], [0, 2 ** (j // 2)]], dtype=object)


def shearing(k: int) -> np.ndarray:
    return np.array([[1, k], [0, 1]], dtype=object)


SWAP = np.array([[0, 1], [1, 0]], dtype=object)


def max_shear(cone: Cone, j: int) -> int:
    if cone is Cone.PHI:
        return 0
    bound = 2 ** (j // 2)
    return bound if cone is Cone.PSI else bound - 1


@dataclass(frozen=True)
class ShearletIndex:
    cone: Cone
    j: int
    k: int
    m: tuple[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cone", Cone(self.cone))
        object.__setattr__(self, "m", (int(self.m[0]), int(self.m[1])))
        if self.j < 0:
            raise ValueError("scale j must be non-negative")
        if self.cone is Cone.PHI and (self.j, self.k) != (0, 0):
            raise ValueError("PHI elements have j = k = 0")
        if abs(self.k) > max_shear(self.cone, self.j):
            raise ValueError(f"shear {self.k} outside the range of {self.cone.value} at scale {self.j}")

    def sort_key(self) -> tuple:
        return (self.cone.rank, self.j, self.k, self.m)

    def label(self) -> str:
        return f"{self.cone.value}(j={self.j},k={self.k},m={self.m[0]},{self.m[1]})"

    def to_dict(self) -> dict:
        return {"cone": self.cone.value, "j": self.j, "k": self.k, "m": list(self.m)}

    @classmethod
    def from_dict(cls, d: dict) -> ShearletIndex:
        return cls(Cone(d["cone"]), int(d["j"]), int(d["k"]), tuple(d["m"]))


def _is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned rectangle ``[x0, x1] x [y0, y1]`` with dyadic corners."""

    x0: Fraction
    y0: Fraction
    x1: Fraction
    y1: Fraction

    def __post_init__(self) -> None:
        for name in ("x0", "y0", "x1", "y1"):
            v = as_fraction(getattr(self, name))
            if not _is_dyadic(v):
                raise ValueError(f"domain corner {v} is not dyadic")
            object.__setattr__(self, name, v)
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError("degenerate domain")

    @classmethod
    def square(cls, lo, hi) -> Rectangle:
        return cls(lo, lo, hi, hi)

    def to_list(self) -> list[str]:
        return [format_exact(v) for v in (self.x0, self.y0, self.x1, self.y1)]


@dataclass(frozen=True)
class ShearletSystemSpec:
    """Filter order, sampling constants, maximal scale and observation window.

    ``selection`` decides which translates are kept: ``"intersects"`` keeps
    every element whose support polygon meets the interior of ``domain``,
    ``"inside"`` keeps only polygons contained in the closed domain.

    Sampling constants must have odd denominators unless
    ``allow_inadmissible`` is set; such specs support exact geometry and
    enumeration but not grid evaluation.
    """

    order: int
    c1: Fraction
    c2: Fraction
    j_max: int
    domain: Rectangle
    selection: Selection = "intersects"
    allow_inadmissible: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "c1", as_fraction(self.c1))
        object.__setattr__(self, "c2", as_fraction(self.c2))
        if self.order < 1:
            raise ValueError("filter order must be positive")
        if self.c1 <= 0 or self.c2 <= 0:
            raise ValueError("sampling constants must be positive")
        if not (self.allow_inadmissible or self.admissible):
            raise ValueError(
                f"inadmissible sampling constants {format_exact(self.c1)}, {format_exact(self.c2)}: "
                "denominators must be odd"
            )
        if self.j_max < 0:
            raise ValueError("j_max must be non-negative")
        if self.selection not in ("intersects", "inside"):
            raise ValueError(f"unknown selection {self.selection!r}")

    @property
    def admissible(self) -> bool:
        return self.c1.denominator % 2 == 1 and self.c2.denominator % 2 == 1

    @property
    def c(self) -> tuple[Fraction, Fraction]:
        return self.c1, self.c2

    @property
    def lattice_denominator(self) -> int:
        return lattice_lcm(self.c1.denominator, self.c2.denominator)

    @property
    def support_lengths(self) -> tuple[int, int]:
        s = 2 * self.order - 1
        return s, s

    def scaled(self, n: int) -> ShearletSystemSpec:
        """The same system with sampling constants ``c / n``."""
        c1, c2 = self.c
        return ShearletSystemSpec(self.order, c1 / n, c2 / n, self.j_max, self.domain, self.selection, True)

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "c1": format_exact(self.c1),
            "c2": format_exact(self.c2),
            "j_max": self.j_max,
            "domain": self.domain.to_list(),
            "selection": self.selection,
            "allow_inadmissible": self.allow_inadmissible,
        }


# -- polygons ---------------------------------------------------------------


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class SupportPolygon:
    """Exact parallelogram with counter-clockwise vertices."""

    vertices: tuple[Point, Point, Point, Point]

    def __post_init__(self) -> None:
        vs = tuple((Fraction(x), Fraction(y)) for x, y in self.vertices)
        if len(vs) != 4:
            raise ValueError("support polygons have four vertices")
        area2 = sum(vs[i][0] * vs[(i + 1) % 4][1] - vs[(i + 1) % 4][0] * vs[i][1] for i in range(4))
        if area2 == 0:
            raise ValueError("degenerate polygon")
        if area2 < 0:
            vs = (vs[0],) + tuple(reversed(vs[1:]))
        object.__setattr__(self, "vertices", vs)

    def edges(self) -> list[tuple[Fraction, Fraction]]:
        v = self.vertices
        return [(v[(i + 1) % 4][0] - v[i][0], v[(i + 1) % 4][1] - v[i][1]) for i in range(4)]

    def is_parallelogram(self) -> bool:
        e = self.edges()
        return e[0] == (-e[2][0], -e[2][1]) and e[1] == (-e[3][0], -e[3][1])

    def area(self) -> Fraction:
        v = self.vertices
        return sum(v[i][0] * v[(i + 1) % 4][1] - v[(i + 1) % 4][0] * v[i][1] for i in range(4)) / 2

    def bbox(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def is_axis_aligned(self) -> bool:
        return all(dx == 0 or dy == 0 for dx, dy in self.edges())

    def edge_slopes(self) -> list[Optional[Fraction]]:
        """``dx1/dx2`` of each edge; ``None`` for edges with ``dx2 = 0``."""
        return [None if dy == 0 else dx / dy for dx, dy in self.edges()]

    def translated(self, dx: Fraction, dy: Fraction) -> SupportPolygon:
        return SupportPolygon(tuple((x + dx, y + dy) for x, y in self.vertices))

    def swapped(self) -> SupportPolygon:
        return SupportPolygon(tuple((y, x) for x, y in self.vertices))

    def inside(self, rect: Rectangle) -> bool:
        return all(rect.x0 <= x <= rect.x1 and rect.y0 <= y <= rect.y1 for x, y in self.vertices)

    def overlaps(self, rect: Rectangle) -> bool:
        """True iff the open polygon meets the open rectangle (separating axes)."""
        x0, y0, x1, y1 = self.bbox()
        if x1 <= rect.x0 or x0 >= rect.x1 or y1 <= rect.y0 or y0 >= rect.y1:
            return False
        corners = [(rect.x0, rect.y0), (rect.x1, rect.y0), (rect.x1, rect.y1), (rect.x0, rect.y1)]
        for (dx, dy), p in zip(self.edges(), self.vertices):
            # outward normal of a CCW edge is (dy, -dx)
            if all(dy * (q[0] - p[0]) - dx * (q[1] - p[1]) >= 0 for q in corners):
                return False
        return True

    def to_list(self) -> list[list[str]]:
        return [[format_exact(x), format_exact(y)] for x, y in self.vertices]


def _psi_preimage(j: int, k: int, c: tuple[Fraction, Fraction], m: tuple[int, int], s1: int, s2: int) -> SupportPolygon:
    S = 2 ** (j // 2)
    A = 2**j

    def pre(u: Fraction, v: Fraction) -> Point:
        x2 = v / S
        return (u - k * v) / A, x2

    cm = (c[0] * m[0], c[1] * m[1])
    rect = [(0, 0), (s1, 0), (s1, s2), (0, s2)]
    return SupportPolygon(tuple(pre(cm[0] + u, cm[1] + v) for u, v in rect))


def support_polygon(index: ShearletIndex, spec: ShearletSystemSpec, s1: Optional[int] = None, s2: Optional[int] = None) -> SupportPolygon:
    """Exact support of an element: the affine preimage of ``[0,s1] x [0,s2] + cm``.

    ``s1`` and ``s2`` are the support lengths of ``psi1`` and ``phi1``; they
    default to ``2N - 1``.
    """
    d1, d2 = spec.support_lengths
    s1 = d1 if s1 is None else s1
    s2 = d2 if s2 is None else s2
    c1, c2 = spec.c
    if index.cone is Cone.PHI:
        a, b = c1 * index.m[0], c1 * index.m[1]
        return SupportPolygon(((a, b), (a + s2, b), (a + s2, b + s2), (a, b + s2)))
    if index.cone is Cone.PSI:
        return _psi_preimage(index.j, index.k, (c1, c2), index.m, s1, s2)
    m1, m2 = index.m
    return _psi_preimage(index.j, index.k, (c1, c2), (m2, m1), s1, s2).swapped()


def _translation(cone: Cone, j: int, k: int, c: tuple[Fraction, Fraction]) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    """Rows of the linear map ``m -> polygon shift``."""
    c1, c2 = c
    if cone is Cone.PHI:
        return (c1, Fraction(0)), (Fraction(0), c1)
    A, S = Fraction(2**j), Fraction(2 ** (j // 2))
    if cone is Cone.PSI:
        return (c1 / A, -k * c2 / A), (Fraction(0), c2 / S)
    # PSI_TILDE shift is the swap of the PSI shift with m swapped
    return (c2 / S, Fraction(0)), (-k * c2 / A, c1 / A)


def _open_range(lo_gap: Fraction, hi_gap: Fraction, t: Fraction) -> range:
    """Integers ``m`` with ``lo_gap < t m < hi_gap`` widened by one for safety."""
    a, b = lo_gap / t, hi_gap / t
    if t < 0:
        a, b = b, a
    return range(math.floor(a) - 1, math.ceil(b) + 2)


def enumerate_system(spec: ShearletSystemSpec) -> list[ShearletIndex]:
    """All indices up to ``j_max`` whose support meets the domain.

    Translation ranges come from the exact bounding-box condition and every
    candidate is confirmed with the exact polygon test, so counts are exact.
    Output is ordered by ``(cone, j, k, m)``.
    """
    dom = spec.domain
    c = spec.c
    keep = (lambda p: p.inside(dom)) if spec.selection == "inside" else (lambda p: p.overlaps(dom))
    out: list[ShearletIndex] = []
    for cone in Cone:
        for j in range(spec.j_max + 1):
            if cone is Cone.PHI and j > 0:
                break
            kmax = max_shear(cone, j)
            for k in range(-kmax, kmax + 1):
                base = support_polygon(ShearletIndex(cone, j, k, (0, 0)), spec)
                bx0, by0, bx1, by1 = base.bbox()
                (t11, t12), (t21, t22) = _translation(cone, j, k, c)
                found = []
                if t21 == 0:
                    # y-shift depends on m2 only
                    for m2 in _open_range(dom.y0 - by1, dom.y1 - by0, t22):
                        for m1 in _open_range(dom.x0 - bx1 - t12 * m2, dom.x1 - bx0 - t12 * m2, t11):
                            found.append((m1, m2))
                else:
                    for m1 in _open_range(dom.x0 - bx1, dom.x1 - bx0, t11):
                        for m2 in _open_range(dom.y0 - by1 - t21 * m1, dom.y1 - by0 - t21 * m1, t22):
                            found.append((m1, m2))
                for m in sorted(found):
                    poly = base.translated(t11 * m[0] + t12 * m[1], t21 * m[0] + t22 * m[1])
                    if keep(poly):
                        out.append(ShearletIndex(cone, j, k, m))
    return out


# -- sampled 2D functions ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class SampledFunction2D:
    """Values ``values[i1, i2] = f(origin + (i1, i2) 2**-level)``."""

    level: int
    origin: tuple[Fraction, Fraction]
    values: np.ndarray
    support: SupportPolygon
    label: str = ""

    @property
    def h(self) -> float:
        return 2.0**-self.level

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        n1, n2 = self.values.shape
        return (
            float(self.origin[0]) + self.h * np.arange(n1),
            float(self.origin[1]) + self.h * np.arange(n2),
        )

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.values**2)) * self.h)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x1", "x2", "value"])
        x1, x2 = self.axes()
        for i, a in enumerate(x1):
            for j, b in enumerate(x2):
                w.writerow([repr(float(a)), repr(float(b)), repr(float(self.values[i, j]))])
        return buf.getvalue()


def _lookup(table: np.ndarray, idx: np.ndarray) -> np.ndarray:
    out = np.zeros(idx.shape)
    ok = (idx >= 0) & (idx < len(table))
    out[ok] = table[idx[ok]]
    return out


class ShearletSystem:
    """Enumeration, support geometry and grid evaluation for one spec."""

    def __init__(self, spec: ShearletSystemSpec, mra: Optional[MRA] = None) -> None:
        self.spec = spec
        self.mra = mra if mra is not None else MRA(daubechies_filter(spec.order))
        if self.mra.filter.order != spec.order:
            raise ValueError("MRA filter order differs from the system order")
        if spec.lattice_denominator % 2 == 0:
            raise ValueError("grid evaluation needs odd-denominator sampling constants")
        self._indices: Optional[list[ShearletIndex]] = None

    @property
    def indices(self) -> list[ShearletIndex]:
        if self._indices is None:
            self._indices = enumerate_system(self.spec)
        return self._indices

    def polygon(self, index: ShearletIndex) -> SupportPolygon:
        return support_polygon(index, self.spec)

    def grid_box(self, index: ShearletIndex, L: int) -> tuple[int, int, int, int]:
        """Inclusive integer grid bounds covering the support polygon."""
        x0, y0, x1, y1 = self.polygon(index).bbox()
        n = 1 << L
        return math.ceil(x0 * n), math.ceil(y0 * n), math.floor(x1 * n), math.floor(y1 * n)

    def values_at(self, index: ShearletIndex, n1: np.ndarray, n2: np.ndarray, L: int) -> np.ndarray:
        """Element values at integer grid coordinates ``(n1, n2) 2**-L``."""
        B = self.spec.lattice_denominator
        phi = self.mra.phi_values(L, B)
        c1, c2 = self.spec.c
        sh1 = int(c1 * B) << L
        sh2 = int(c2 * B) << L
        m1, m2 = index.m
        n1 = np.asarray(n1, dtype=np.int64)
        n2 = np.asarray(n2, dtype=np.int64)
        if index.cone is Cone.PHI:
            return _lookup(phi, n1 * B - m1 * sh1) * _lookup(phi, n2 * B - m2 * sh1)
        psi = self.mra.psi_values(L, B)
        j, k = index.j, index.k
        S = 1 << (j // 2)
        if index.cone is Cone.PSI:
            y1, y2, p1, p2 = n1, n2, m1, m2
        else:
            y1, y2, p1, p2 = n2, n1, m2, m1
        vals = _lookup(psi, ((y1 << j) + S * k * y2) * B - p1 * sh1) * _lookup(phi, S * y2 * B - p2 * sh2)
        return 2 ** (0.75 * j) * vals

    def evaluate(self, index: ShearletIndex, L: int) -> SampledFunction2D:
        """Sample one element on ``(2**-L Z)**2`` over its support bounding box."""
        if L < 0:
            raise ValueError("grid level must be non-negative")
        a0, b0, a1, b1 = self.grid_box(index, L)
        n1, n2 = np.meshgrid(np.arange(a0, a1 + 1), np.arange(b0, b1 + 1), indexing="ij")
        vals = self.values_at(index, n1, n2, L)
        origin = (Fraction(a0, 1 << L), Fraction(b0, 1 << L))
        return SampledFunction2D(L, origin, vals, self.polygon(index), index.label())

    def combination(self, indices: Sequence[ShearletIndex], coeffs: Sequence[float], L: int) -> SampledFunction2D:
        """``sum coeffs[i] * element[i]`` on the grid covering all supports.

        The attached support is the bounding rectangle of the union.
        """
        if not indices or len(indices) != len(coeffs):
            raise ValueError("need matching non-empty index and coefficient lists")
        boxes = [self.grid_box(ix, L) for ix in indices]
        a0, b0 = min(b[0] for b in boxes), min(b[1] for b in boxes)
        a1, b1 = max(b[2] for b in boxes), max(b[3] for b in boxes)
        n1, n2 = np.meshgrid(np.arange(a0, a1 + 1), np.arange(b0, b1 + 1), indexing="ij")
        vals = sum(c * self.values_at(ix, n1, n2, L) for ix, c in zip(indices, coeffs))
        step = Fraction(1, 1 << L)
        x0, y0, x1, y1 = a0 * step, b0 * step, a1 * step, b1 * step
        box = SupportPolygon(((x0, y0), (x1, y0), (x1, y1), (x0, y1)))
        label = " + ".join(f"{c:.3g}*{ix.label()}" for ix, c in zip(indices, coeffs))
        return SampledFunction2D(L, (x0, y0), vals, box, label)

    def sample_matrix(self, indices: Sequence[ShearletIndex], L: int) -> tuple[sparse.csr_matrix, float]:
        """Rows of element samples on a shared grid and the cell area."""
        boxes = [self.grid_box(ix, L) for ix in indices]
        if not boxes:
            return sparse.csr_matrix((0, 0)), 4.0**-L
        lo1 = min(b[0] for b in boxes)
        lo2 = min(b[1] for b in boxes)
        hi2 = max(b[3] for b in boxes)
        width = hi2 - lo2 + 1
        hi1 = max(b[2] for b in boxes)
        rows, cols, data = [], [], []
        for r, (ix, (a0, b0, a1, b1)) in enumerate(zip(indices, boxes)):
            n1, n2 = np.meshgrid(np.arange(a0, a1 + 1), np.arange(b0, b1 + 1), indexing="ij")
            v = self.values_at(ix, n1, n2, L).ravel()
            nz = v != 0
            flat = ((n1.ravel() - lo1) * width + (n2.ravel() - lo2))[nz]
            rows.append(np.full(flat.size, r))
            cols.append(flat)
            data.append(v[nz])
        shape = (len(indices), (hi1 - lo1 + 1) * width)
        mat = sparse.csr_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=shape
        )
        return mat, 4.0**-L


# -- generators -------------------------------------------------------------


@dataclass(frozen=True)
class Generator2D:
    """Lazy separable product ``f1(x1) f2(x2)`` (arguments swapped if ``swap``)."""

    name: str
    first: SampledFunction1D
    second: SampledFunction1D
    swap: bool = False

    def __call__(self, x1, x2) -> np.ndarray:
        if self.swap:
            x1, x2 = x2, x1
        return self.first(x1) * self.second(x2)

    def dense(self) -> np.ndarray:
        """Materialised tensor on the shared 1D grid (rows index ``x1``)."""
        out = np.outer(self.first.values, self.second.values)
        return out.T if self.swap else out


def make_generators(phi1: SampledFunction1D, psi1: SampledFunction1D) -> tuple[Generator2D, Generator2D, Generator2D]:
    """``phi = phi1 x phi1``, ``psi = psi1 x phi1`` and its coordinate swap."""
    if (phi1.level, phi1.denominator) != (psi1.level, psi1.denominator):
        raise ValueError("generators need 1D samples at the same level")
    return (
        Generator2D("phi", phi1, phi1),
        Generator2D("psi", psi1, phi1),
        Generator2D("psi_tilde", psi1, phi1, swap=True),
    )


# -- lower support profile --------------------------------------------------


@dataclass(frozen=True)
class SupportProfile:
    """Lower support bound per slice and its local least-squares slopes."""

    axis: int
    coords: np.ndarray
    minima: np.ndarray
    window_centers: np.ndarray
    window_slopes: np.ndarray
    window_residuals: np.ndarray
    window_bends: np.ndarray

    def __call__(self, t) -> np.ndarray:
        return np.interp(t, self.coords, self.minima)


def lower_support_profile(f: SampledFunction2D, axis: int = 1, threshold: float = 1e-8, window: int = 5) -> SupportProfile:
    """Smallest coordinate along ``axis`` where ``|f| > threshold * max|f|``.

    For ``axis=1`` each slice has fixed ``x2`` and the slopes are
    ``dx1/dx2``.  Empty slices are skipped; residuals are the largest
    deviation (in grid cells) of a window from its fitted line.
    """
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    vals = np.abs(f.values)
    peak = vals.max(initial=0.0)
    if peak == 0.0:
        raise ValueError("function vanishes on the grid")
    mask = vals > threshold * peak
    if axis == 2:
        mask = mask.T
    x_along, x_slice = f.axes() if axis == 1 else f.axes()[::-1]
    hit = mask.any(axis=0)
    if not hit.any():
        raise ValueError("empty numerical support")
    first = np.argmax(mask, axis=0)
    coords = x_slice[hit]
    minima = x_along[first[hit]]
    centers, slopes, resid, bends = [], [], [], []
    for i in range(len(coords) - window + 1):
        t = coords[i : i + window]
        y = minima[i : i + window]
        # skip windows straddling a gap of empty slices
        if not np.allclose(np.diff(t), f.h):
            continue
        A = np.vstack([t, np.ones(window)]).T
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        centers.append(t[window // 2])
        slopes.append(coef[0])
        resid.append(float(np.max(np.abs(A @ coef - y))) / f.h)
        bends.append(float(np.max(np.abs(np.diff(y, 2)))) / f.h)
    return SupportProfile(
        axis, coords, minima, np.array(centers), np.array(slopes), np.array(resid), np.array(bends)
    )


# -- emitters ---------------------------------------------------------------

CONE_COLORS = {Cone.PHI: "#4d4d4d", Cone.PSI: "#1f77b4", Cone.PSI_TILDE: "#d62728"}


def polygons_svg(items: Iterable[tuple[ShearletIndex, SupportPolygon]], domain: Rectangle, size: int = 480) -> str:
    """SVG with one cone-coloured polygon per element; ``viewBox`` is the domain."""
    w = float(domain.x1 - domain.x0)
    hgt = float(domain.y1 - domain.y0)
    stroke = max(w, hgt) / 400
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{float(domain.x0):.6f} {float(domain.y0):.6f} {w:.6f} {hgt:.6f}">',
        # flip so x2 points up
        f'<g transform="translate(0 {float(domain.y0 + domain.y1):.6f}) scale(1 -1)">',
    ]
    for ix, poly in items:
        pts = " ".join(f"{float(x):.6f},{float(y):.6f}" for x, y in poly.vertices)
        lines.append(
            f'<polygon points="{pts}" fill="{CONE_COLORS[ix.cone]}" fill-opacity="0.15" '
            f'stroke="{CONE_COLORS[ix.cone]}" stroke-width="{stroke:.6f}"><title>{ix.label()}</title></polygon>'
        )
    lines += ["</g>", "</svg>", ""]
    return "\n".join(lines)


def indices_json(spec: ShearletSystemSpec, indices: Sequence[ShearletIndex]) -> str:
    payload = {
        "spec": spec.to_dict(),
        "count": len(indices),
        "indices": [
            dict(ix.to_dict(), polygon=support_polygon(ix, spec).to_list()) for ix in indices
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=1)
