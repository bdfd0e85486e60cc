"""Daubechies scaling functions and wavelets on dyadic grids.

Masks use the unnormalised convention ``phi(x) = sum_k a_k phi(2x - k)`` with
``sum_k a_k = 2``.  The wavelet uses the shifted high-pass mask
``g_k = (-1)**k a_{2N-1-k}`` so that both generators are supported on
``[0, 2N-1]``.

Two grid realisations are provided:

* :func:`cascade` iterates the refinement operator from the hat
  initialisation.  Its samples are discretely orthonormal at every level.
* :class:`MRA` computes exact point values of ``phi`` on the lattice
  ``(2**-L / b) Z`` for odd ``b`` from the eigenvector of the refinement
  matrix.  Sheared and odd-denominator translated arguments always land on
  such a lattice, so element evaluation needs no interpolation.
"""
from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Literal, Optional, Sequence

import mpmath
import numpy as np

from .dyadic import format_exact

__all__ = [
    "FilterError",
    "CascadeDivergenceError",
    "FilterCoefficients",
    "SampledFunction1D",
    "FrameHypothesisParams",
    "DecayCheck",
    "paper_m0",
    "m0_positive_on_interval",
    "daubechies_filter",
    "cascade",
    "wavelet_from_filter",
    "MRA",
    "sampled_fourier",
    "phi_hat",
    "psi_hat",
    "check_inf_phi",
    "find_beta",
    "check_decay",
    "fit_decay_constant",
]


class FilterError(ValueError):
    """Raised when a mask violates the sum or QMF conditions."""


class CascadeDivergenceError(RuntimeError):
    """Raised when cascade iterates stop contracting."""


@dataclass(frozen=True)
class FilterCoefficients:
    """Refinement mask ``a_0 .. a_{2N-1}`` of an orthonormal scaling function.

    Parameters
    ----------
    mask : tuple of float
        Low-pass coefficients, normalised to sum 2.
    order : int
        Number of vanishing moments ``N``; the mask has length ``2N``.
    """

    mask: tuple[float, ...]
    order: int

    def __post_init__(self) -> None:
        if self.order < 1:
            raise FilterError("order must be positive")
        if len(self.mask) != 2 * self.order:
            raise FilterError(f"mask of order {self.order} must have length {2 * self.order}")
        object.__setattr__(self, "mask", tuple(float(v) for v in self.mask))

    @property
    def lowpass(self) -> np.ndarray:
        return np.asarray(self.mask, dtype=float)

    @property
    def highpass(self) -> np.ndarray:
        """Shifted high-pass mask ``g_k = (-1)**k a_{2N-1-k}``."""
        a = self.lowpass[::-1].copy()
        a[1::2] *= -1
        return a

    @property
    def support_length(self) -> int:
        return 2 * self.order - 1

    @property
    def wavelet_shift(self) -> int:
        """Integer shift from the ``a_{1-k}`` high-pass to the one used here."""
        return self.order - 1

    def qmf_residual(self) -> float:
        """``max_l |sum_k a_k a_{k+2l} - 2 delta_l|``."""
        a = self.lowpass
        corr = np.correlate(a, a, mode="full")[len(a) - 1 :: 2]
        corr[0] -= 2.0
        return float(np.max(np.abs(corr)))

    def sum_residual(self) -> float:
        return abs(float(np.sum(self.lowpass)) - 2.0)

    def validate(self, tol: float = 1e-12) -> None:
        if self.sum_residual() > tol or self.qmf_residual() > tol:
            raise FilterError(
                f"mask fails orthonormality: sum residual {self.sum_residual():.3e}, "
                f"QMF residual {self.qmf_residual():.3e}"
            )

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "mask": list(self.mask),
            "highpass": self.highpass.tolist(),
            "sum_residual": self.sum_residual(),
            "qmf_residual": self.qmf_residual(),
        }


@dataclass(frozen=True, eq=False)
class SampledFunction1D:
    """Samples ``values[i] = f(offset + i * step)`` on a uniform lattice.

    The lattice step is ``2**-level / denominator`` with ``denominator`` odd
    (1 for ordinary dyadic grids).  Support endpoints are exact rationals.
    """

    level: int
    offset: Fraction
    values: np.ndarray
    support_min: Fraction
    support_max: Fraction
    denominator: int = 1
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.denominator < 1 or self.denominator % 2 == 0:
            raise ValueError("lattice denominator must be a positive odd integer")
        object.__setattr__(self, "offset", Fraction(self.offset))
        object.__setattr__(self, "support_min", Fraction(self.support_min))
        object.__setattr__(self, "support_max", Fraction(self.support_max))
        if not self.support_min < self.support_max:
            raise ValueError("support_min must be below support_max")
        vals = np.asarray(self.values, dtype=float)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def step(self) -> Fraction:
        return Fraction(1, (1 << self.level) * self.denominator)

    @property
    def h(self) -> float:
        return float(self.step)

    def grid(self) -> np.ndarray:
        return float(self.offset) + self.h * np.arange(len(self.values))

    def __call__(self, x) -> np.ndarray:
        """Piecewise-linear interpolation, zero outside the sampled range."""
        return np.interp(np.asarray(x, dtype=float), self.grid(), self.values, left=0.0, right=0.0)

    def riemann_sum(self) -> float:
        return float(np.sum(self.values) * self.h)

    def inner(self, other: SampledFunction1D) -> float:
        """Discrete ``L2`` inner product; both samples must share a lattice."""
        if (self.level, self.denominator) != (other.level, other.denominator):
            raise ValueError("inner product needs a common lattice")
        shift = (other.offset - self.offset) / self.step
        if shift.denominator != 1:
            raise ValueError("sample offsets are not lattice-aligned")
        s = int(shift)
        lo, hi = max(0, s), min(len(self.values), s + len(other.values))
        if hi <= lo:
            return 0.0
        return float(np.dot(self.values[lo:hi], other.values[lo - s : hi - s]) * self.h)

    def numerical_support(self, threshold: float = 1e-8) -> tuple[float, float]:
        """First and last grid point where ``|f|`` exceeds ``threshold * max|f|``."""
        mag = np.abs(self.values)
        peak = mag.max(initial=0.0)
        if peak == 0.0:
            raise ValueError("function vanishes on the grid")
        idx = np.flatnonzero(mag > threshold * peak)
        x = self.grid()
        return float(x[idx[0]]), float(x[idx[-1]])

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "denominator": self.denominator,
            "offset": format_exact(self.offset),
            "step": format_exact(self.step),
            "support": [format_exact(self.support_min), format_exact(self.support_max)],
            "metadata": self.metadata,
            "values": self.values.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "value"])
        for i, v in enumerate(self.values):
            w.writerow([format_exact(self.offset + i * self.step), repr(float(v))])
        return buf.getvalue()


@dataclass(frozen=True)
class FrameHypothesisParams:
    """Decay exponents and constants of the frame hypotheses.

    The ordering ``gamma + 4 > alpha > gamma > 4`` is required by
    :meth:`validate`, which the decay check calls.
    """

    alpha: float
    gamma: float
    K1: float = 1.0
    K2: float = 1.0
    beta: float = 1.0

    def validate(self) -> None:
        if not (self.gamma + 4 > self.alpha > self.gamma > 4):
            raise ValueError(
                f"need gamma + 4 > alpha > gamma > 4, got alpha={self.alpha}, gamma={self.gamma}"
            )
        if self.K1 <= 0 or self.K2 <= 0:
            raise ValueError("K1 and K2 must be positive")
        if not 0 < self.beta <= 1:
            raise ValueError("beta must lie in (0, 1]")


def paper_m0(N: int, xi):
    """Trigonometric polynomial ``((1 + e^{-i pi xi})/2)**N * P(sin^2(pi xi / 2))``.

    Evaluated exactly as printed, with ``P(y) = sum_s C(N-1+s, s) y**s``.
    Its modulus is not the low-pass filter's (see the module notes); it is
    used only for the positivity check on ``(-1, 1)``.
    """
    if N < 1:
        raise ValueError("N must be positive")
    xi = np.asarray(xi, dtype=float)
    y = np.sin(np.pi * xi / 2) ** 2
    poly = sum(comb(N - 1 + s, s) * y**s for s in range(N))
    out = ((1 + np.exp(-1j * np.pi * xi)) / 2) ** N * poly
    return out[()] if out.ndim == 0 else out


def m0_positive_on_interval(N: int, eps: float = 1e-6, points: int = 10_000) -> tuple[bool, float]:
    """Sample ``|paper_m0|`` on ``[-1 + eps, 1 - eps]``; return positivity and the minimum."""
    xi = np.linspace(-1 + eps, 1 - eps, points)
    low = float(np.min(np.abs(paper_m0(N, xi))))
    return low > 0.0, low


def daubechies_filter(N: int, *, tol: float = 1e-10) -> FilterCoefficients:
    """Minimal-phase Daubechies mask with ``N`` vanishing moments.

    The half-band polynomial is factorised in extended precision; every
    retained root lies inside the unit disk.

    Raises
    ------
    FilterError
        If ``N`` is outside ``[1, 20]`` or the factorisation residual
        exceeds ``tol``.
    """
    if not 1 <= N <= 20:
        raise FilterError(f"order must be in [1, 20], got {N}")
    with mpmath.workdps(80):
        taps = [mpmath.mpf(1)]
        for _ in range(N):
            taps = _mp_convolve(taps, [1, 1])
        if N > 1:
            coeffs = [comb(N - 1 + s, s) for s in range(N)][::-1]
            yroots = mpmath.polyroots(coeffs, maxsteps=500, extraprec=400)
            for y in yroots:
                # z + 1/z = 2 - 4y; keep the root inside the unit disk
                b = 2 - 4 * y
                disc = mpmath.sqrt(b * b - 4)
                z = min(((b + disc) / 2, (b - disc) / 2), key=abs)
                taps = _mp_convolve(taps, [1, -z])
        total = mpmath.fsum(taps)
        taps = [2 * t / total for t in taps]
        if max(abs(mpmath.im(t)) for t in taps) > tol:
            raise FilterError("factorisation produced a complex mask")
        mask = tuple(float(mpmath.re(t)) for t in taps)
    filt = FilterCoefficients(mask, N)
    if filt.qmf_residual() > tol or filt.sum_residual() > tol:
        raise FilterError(f"factorisation residual {filt.qmf_residual():.3e} exceeds {tol:g}")
    return filt


def _mp_convolve(p, q):
    out = [mpmath.mpc(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


def _refine(c: np.ndarray, mask: np.ndarray, start: int, stop: int, b: int = 1) -> np.ndarray:
    """Apply the refinement operator for levels ``start+1 .. stop``.

    ``c`` holds values on ``(2**-start / b) Z`` from the origin; one step maps
    ``c_l[n] = sum_k a_k c_{l-1}[n - k b 2**(l-1)]``.
    """
    for lev in range(start + 1, stop + 1):
        stride = b << (lev - 1)
        up = np.zeros((len(mask) - 1) * stride + 1)
        up[::stride] = mask
        c = np.convolve(c, up)
    return c


def cascade(filt: FilterCoefficients, L: int, *, max_increases: int = 3) -> SampledFunction1D:
    """Cascade samples of ``phi`` on ``2**-L Z`` from the hat initialisation.

    The iterates are exactly discretely orthonormal, have unit Riemann sum
    and form a partition of unity at every level.

    Raises
    ------
    CascadeDivergenceError
        If the sup-norm change between successive iterates grows for
        ``max_increases`` consecutive levels.
    """
    if L < 0:
        raise ValueError("level must be non-negative")
    a = filt.lowpass
    c = np.zeros(len(a))
    c[0] = 1.0
    prev_diff = None
    increases = 0
    history = []
    for lev in range(1, L + 1):
        nxt = _refine(c, a, lev - 1, lev)
        diff = float(np.max(np.abs(nxt[::2] - c)))
        history.append(diff)
        if prev_diff is not None and diff > prev_diff:
            increases += 1
            if increases >= max_increases:
                raise CascadeDivergenceError(
                    f"cascade diverged at level {lev}: differences {history[-max_increases - 1:]}"
                )
        else:
            increases = 0
        prev_diff = diff
        c = nxt
    return SampledFunction1D(
        level=L,
        offset=Fraction(0),
        values=c,
        support_min=Fraction(0),
        support_max=Fraction(filt.support_length),
        metadata={"kind": "scaling", "order": filt.order, "init": "hat", "differences": history},
    )


def _wavelet_step(phi_prev: np.ndarray, g: np.ndarray, L: int, b: int = 1) -> np.ndarray:
    """``psi_L[n] = sum_k g_k phi_{L-1}[n - k b 2**(L-1)]``."""
    return _refine(phi_prev, g, L - 1, L, b)


def wavelet_from_filter(filt: FilterCoefficients, L: int) -> SampledFunction1D:
    """Cascade samples of ``psi(x) = sum_k g_k phi(2x - k)`` on ``2**-L Z``.

    ``psi`` is one high-pass refinement step applied to the level ``L - 1``
    cascade, which keeps the discrete samples orthogonal to the scaling
    function translates.  The declared support is ``[0, 2N-1]``; the shift
    from the textbook mask ``(-1)**k a_{1-k}`` is stored in the metadata.
    """
    if L < 1:
        raise ValueError("wavelet samples need level >= 1")
    phi = cascade(filt, L - 1)
    vals = _wavelet_step(np.asarray(phi.values), filt.highpass, L)
    return SampledFunction1D(
        level=L,
        offset=Fraction(0),
        values=vals,
        support_min=Fraction(0),
        support_max=Fraction(filt.support_length),
        metadata={"kind": "wavelet", "order": filt.order, "init": "hat", "shift": filt.wavelet_shift},
    )


def _residue_cycles(b: int) -> list[list[int]]:
    seen: set[int] = set()
    cycles = []
    for r0 in range(b):
        if r0 in seen:
            continue
        cyc, r = [r0], (2 * r0) % b
        while r != r0:
            cyc.append(r)
            r = (2 * r) % b
        seen.update(cyc)
        cycles.append(cyc)
    return cycles


class MRA:
    """Exact lattice values of the scaling function and wavelet of a mask.

    Tables are cached per ``(level, denominator)``.  For odd ``b`` the values
    of ``phi`` on ``(1/b) Z`` solve an eigenproblem for the refinement
    matrix; one eigenvector per cycle of ``r -> 2r mod b`` is normalised so
    that each residue class sums to one (partition of unity).
    """

    def __init__(self, filt: FilterCoefficients) -> None:
        self.filter = filt
        self._phi: dict[tuple[int, int], np.ndarray] = {}
        self._psi: dict[tuple[int, int], np.ndarray] = {}

    @property
    def support_length(self) -> int:
        return self.filter.support_length

    def _base_values(self, b: int) -> np.ndarray:
        a = self.filter.lowpass
        s = self.support_length
        n = s * b + 1
        if self.filter.order == 1:
            # right-continuous indicator of [0, 1)
            v = np.zeros(n)
            v[:b] = 1.0
            return v
        M = np.zeros((n, n))
        for r in range(n):
            for k, ak in enumerate(a):
                q = 2 * r - k * b
                if 0 <= q < n:
                    M[r, q] += ak
        v = np.zeros(n)
        for cyc in _residue_cycles(b):
            members = [r for r in range(n) if r % b in cyc]
            sub = M[np.ix_(members, members)] - np.eye(len(members))
            norm_row = np.array([1.0 if r % b == cyc[0] else 0.0 for r in members])
            lhs = np.vstack([sub, norm_row])
            rhs = np.zeros(len(members) + 1)
            rhs[-1] = 1.0
            u, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
            v[members] = u
        return v

    def phi_values(self, level: int, denominator: int = 1) -> np.ndarray:
        """Values ``phi(n 2**-level / denominator)`` for ``n = 0 .. s 2**level denominator``."""
        key = (level, denominator)
        if key not in self._phi:
            if denominator % 2 == 0:
                raise ValueError("denominator must be odd")
            base = self._base_values(denominator)
            self._phi[key] = _refine(base, self.filter.lowpass, 0, level, denominator)
            self._phi[key].setflags(write=False)
        return self._phi[key]

    def psi_values(self, level: int, denominator: int = 1) -> np.ndarray:
        """Values of the wavelet on the same lattice, support ``[0, 2N-1]``."""
        key = (level, denominator)
        if key not in self._psi:
            if level == 0:
                # psi(n/b) = sum_k g_k phi((2n - k b)/b)
                phi = self.phi_values(0, denominator)
                n = len(phi)
                out = np.zeros(n)
                for k, gk in enumerate(self.filter.highpass):
                    idx = 2 * np.arange(n) - k * denominator
                    ok = (idx >= 0) & (idx < n)
                    out[ok] += gk * phi[idx[ok]]
            else:
                out = _wavelet_step(self.phi_values(level - 1, denominator), self.filter.highpass, level, denominator)
            out.setflags(write=False)
            self._psi[key] = out
        return self._psi[key]

    def phi(self, level: int, denominator: int = 1) -> SampledFunction1D:
        return self._sampled(self.phi_values(level, denominator), level, denominator, "scaling")

    def psi(self, level: int, denominator: int = 1) -> SampledFunction1D:
        return self._sampled(self.psi_values(level, denominator), level, denominator, "wavelet")

    def _sampled(self, vals, level, denominator, kind) -> SampledFunction1D:
        meta = {"kind": kind, "order": self.filter.order, "init": "exact"}
        if kind == "wavelet":
            meta["shift"] = self.filter.wavelet_shift
        return SampledFunction1D(
            level=level,
            offset=Fraction(0),
            values=vals,
            support_min=Fraction(0),
            support_max=Fraction(self.support_length),
            denominator=denominator,
            metadata=meta,
        )


def lattice_lcm(*dens: int) -> int:
    out = 1
    for d in dens:
        out = out * d // gcd(out, d)
    return out


# -- Fourier side -----------------------------------------------------------


def sampled_fourier(f: SampledFunction1D, xi, chunk: int = 256) -> np.ndarray:
    """Riemann-sum Fourier transform ``sum_n h f(x_n) exp(-2 pi i xi x_n)``."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    x = f.grid()
    vals = np.asarray(f.values)
    out = np.empty(len(xi), dtype=complex)
    for i in range(0, len(xi), chunk):
        block = xi[i : i + chunk]
        out[i : i + chunk] = np.exp(-2j * np.pi * np.outer(block, x)) @ vals
    return out * f.h


def _symbol(mask: np.ndarray, xi: np.ndarray) -> np.ndarray:
    k = np.arange(len(mask))
    return 0.5 * (np.exp(-2j * np.pi * np.outer(xi, k)) @ mask)


def phi_hat(filt: FilterCoefficients, xi, terms: int = 40) -> np.ndarray:
    """Truncated infinite product ``prod_{j>=1} m(xi / 2**j)``."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    out = np.ones(len(xi), dtype=complex)
    for j in range(1, terms + 1):
        out *= _symbol(filt.lowpass, xi / 2.0**j)
    return out


def psi_hat(filt: FilterCoefficients, xi, terms: int = 40) -> np.ndarray:
    """``m_1(xi/2) phi_hat(xi/2)`` with the shifted high-pass symbol."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    return _symbol(filt.highpass, xi / 2) * phi_hat(filt, xi / 2, terms)


def check_inf_phi(phi: SampledFunction1D, points: int = 2049) -> tuple[bool, float]:
    """Minimum of ``|phi_hat|**2`` over ``|xi| <= 1/2`` from the samples.

    A ``RuntimeWarning`` is issued when the minimum moves by more than 10%
    against the once-coarsened samples.
    """
    if phi.level < 8:
        raise ValueError("spectral checks need cascade level >= 8")
    if not np.any(phi.values):
        return False, 0.0
    xi = np.linspace(-0.5, 0.5, points)
    low = float(np.min(np.abs(sampled_fourier(phi, xi)) ** 2))
    if phi.denominator == 1:
        coarse = SampledFunction1D(
            phi.level - 1, phi.offset, phi.values[::2], phi.support_min, phi.support_max
        )
        low_c = float(np.min(np.abs(sampled_fourier(coarse, xi)) ** 2))
        if abs(low - low_c) > 0.1 * max(low, 1e-300):
            warnings.warn("frequency minimum not resolved on this grid", RuntimeWarning, stacklevel=2)
    return low > 0.0, low


def find_beta(
    psi: SampledFunction1D, *, floor: float = 1e-6, min_exponent: int = 10, points: int = 513
) -> Optional[Fraction]:
    """Largest ``beta`` in ``{1, 1/2, ..., 2**-min_exponent}`` with ``|psi_hat| > floor``
    on ``beta/2 <= |xi| <= beta``, or ``None``."""
    if not np.any(psi.values):
        return None
    for e in range(min_exponent + 1):
        beta = Fraction(1, 1 << e)
        band = np.linspace(float(beta) / 2, float(beta), points)
        xi = np.concatenate([-band, band])
        if np.min(np.abs(sampled_fourier(psi, xi))) > floor:
            return beta
    return None


@dataclass(frozen=True)
class DecayCheck:
    ok: bool
    first_violation: Optional[float]
    max_ratio: float

    def to_dict(self) -> dict:
        return {"ok": self.ok, "first_violation": self.first_violation, "max_ratio": self.max_ratio}


def _decay_envelope(xi: np.ndarray, params: FrameHypothesisParams, kind: str) -> np.ndarray:
    base = (1 + xi**2) ** (params.gamma / 2)
    if kind == "wavelet":
        return np.abs(xi) ** params.alpha / base
    if kind == "scaling":
        return 1.0 / base
    raise ValueError("kind must be 'scaling' or 'wavelet'")


def fit_decay_constant(
    xi, values, params: FrameHypothesisParams, kind: Literal["scaling", "wavelet"], *, atol: float = 1e-12
) -> float:
    """Smallest constant making the decay bound hold on the given samples.

    Magnitudes below ``atol`` count as zero where the envelope vanishes.
    """
    xi = np.asarray(xi, dtype=float)
    env = _decay_envelope(xi, params, kind)
    mag = np.abs(np.asarray(values))
    nz = env > 0
    if np.any(mag[~nz] > atol):
        return float("inf")
    return float(np.max(mag[nz] / env[nz], initial=0.0))


def check_decay(
    xi: Sequence[float],
    values: Sequence[complex],
    params: FrameHypothesisParams,
    kind: Literal["scaling", "wavelet"],
    *,
    atol: float = 1e-12,
) -> DecayCheck:
    """Test ``|psi_hat| <= K1 |xi|^alpha / (1+xi^2)^(gamma/2)`` (or the ``phi_hat``
    bound with ``K2``) at every sample, scanning outward from the origin.

    ``atol`` absorbs rounding in samples that vanish in exact arithmetic.
    """
    params.validate()
    xi = np.asarray(xi, dtype=float)
    mag = np.abs(np.asarray(values))
    K = params.K1 if kind == "wavelet" else params.K2
    bound = K * _decay_envelope(xi, params, kind)
    bad = mag > bound * (1 + 1e-12) + atol
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(bound > 0, mag / bound, np.where(mag > atol, np.inf, 0.0))
    max_ratio = float(np.max(ratio, initial=0.0))
    if not np.any(bad):
        return DecayCheck(True, None, max_ratio)
    order = np.argsort(np.abs(xi), kind="stable")
    first = next(float(xi[i]) for i in order if bad[i])
    return DecayCheck(False, first, max_ratio)
