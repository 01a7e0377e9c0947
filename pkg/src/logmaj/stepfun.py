"""Exact step-function calculus for singular value functions.

Step functions are finite lists of ``(value, width)`` pieces on the
interval ``(0, L)`` with ``L`` the sum of widths, right-continuous and
constant on each piece.  Generalized singular value functions mu(x),
distribution functions, decreasing rearrangements and the prefix
integrals consumed by the majorisation predicates are all exact
operations on this representation; no quadrature is involved.

Extended-real results use IEEE ``-inf`` (log of a zero piece); the
arithmetic here never produces NaN because infinite branches are
resolved explicitly before any subtraction.
"""

from __future__ import annotations

import dataclasses
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .algebra import Operator, spectral_decompose
from .config import tolerances
from .errors import NegativeValue, NotHermitian, OutOfDomain, ShapeMismatch

NEG_INF = float("-inf")

# Relative slop when locating breakpoints; covers the one-ulp drift of
# cumulative sums taken in different orders, far below every predicate
# tolerance.
_EDGE_REL = 1e-12


def _canonical(pieces: Iterable[tuple[float, float]], snap: float = 0.0) -> tuple[tuple[float, float], ...]:
    """Drop zero-width pieces and merge adjacent (near-)equal values.

    With ``snap > 0`` adjacent values within ``snap*max(1,|v|)`` of each
    other merge to their width-weighted mean, cascading left to right.
    """
    merged: list[list[float]] = []
    for value, width in pieces:
        value = float(value)
        width = float(width)
        if width < 0.0 or not np.isfinite(width):
            raise ValueError(f"piece width must be positive, got {width}")
        if width == 0.0:
            continue
        if not np.isfinite(value):
            raise ValueError(f"piece value must be finite, got {value}")
        if merged:
            prev_v, prev_w = merged[-1]
            tol = snap * max(1.0, abs(prev_v), abs(value))
            if value == prev_v or (snap > 0.0 and abs(value - prev_v) <= tol):
                total = prev_w + width
                merged[-1] = [(prev_v * prev_w + value * width) / total, total]
                continue
        merged.append([value, width])
    return tuple((v, w) for v, w in merged)


@dataclasses.dataclass(frozen=True)
class StepFunction:
    """Piecewise-constant function on (0, L) as (value, width) pieces."""

    pieces: tuple[tuple[float, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "pieces", _canonical(self.pieces))

    @classmethod
    def from_pieces(cls, pieces: Sequence[tuple[float, float]], snap: float = 0.0) -> "StepFunction":
        return cls(_canonical(pieces, snap=snap))

    @classmethod
    def constant(cls, value: float, length: float) -> "StepFunction":
        return cls(((float(value), float(length)),))

    @cached_property
    def values(self) -> np.ndarray:
        arr = np.array([v for v, _ in self.pieces], dtype=float)
        arr.setflags(write=False)
        return arr

    @cached_property
    def widths(self) -> np.ndarray:
        arr = np.array([w for _, w in self.pieces], dtype=float)
        arr.setflags(write=False)
        return arr

    @cached_property
    def total_length(self) -> float:
        return float(self.widths.sum()) if self.pieces else 0.0

    @cached_property
    def ends(self) -> np.ndarray:
        """Cumulative right endpoints of the pieces."""
        arr = np.cumsum(self.widths) if self.pieces else np.array([], dtype=float)
        arr.setflags(write=False)
        return arr

    @cached_property
    def _cumint(self) -> np.ndarray:
        arr = np.cumsum(self.values * self.widths) if self.pieces else np.array([], dtype=float)
        arr.setflags(write=False)
        return arr

    @cached_property
    def is_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.values) <= 0.0)) if self.pieces else True

    @cached_property
    def is_nonnegative(self) -> bool:
        return bool(np.all(self.values >= 0.0)) if self.pieces else True

    def breakpoints(self) -> np.ndarray:
        """Interior and right-end breakpoints (0 excluded)."""
        return self.ends

    def value_at(self, t: float) -> float:
        """Right-continuous evaluation; 0 beyond the domain length.

        The convention ``value_at(t) = v_i`` on ``[end_{i-1}, end_i)`` and
        ``0`` for ``t >= L`` serves both decreasing rearrangements (which
        are padded with an explicit zero tail) and distribution functions
        (which vanish above the top of the spectrum).
        """
        if t < 0.0:
            raise OutOfDomain(f"t={t} < 0")
        if not self.pieces or t >= self.total_length:
            return 0.0
        i = int(np.searchsorted(self.ends, t, side="right"))
        return float(self.values[i])

    def _locate(self, t: float) -> float:
        length = self.total_length
        slop = _EDGE_REL * max(1.0, length)
        if t < -slop or t > length + slop:
            raise OutOfDomain(f"t={t} outside [0, {length}]")
        return min(max(t, 0.0), length)

    def prefix_integral(self, t: float) -> float:
        """Exact integral of the function over (0, t)."""
        t = self._locate(t)
        if not self.pieces or t == 0.0:
            return 0.0
        i = int(np.searchsorted(self.ends, t, side="right"))
        if i >= len(self.pieces):
            return float(self._cumint[-1])
        base = float(self._cumint[i - 1]) if i > 0 else 0.0
        start = float(self.ends[i - 1]) if i > 0 else 0.0
        return base + float(self.values[i]) * (t - start)

    def log_prefix_integral(self, t: float) -> float:
        """Integral of log(value) over (0, t); -inf once a zero piece has
        positive overlap with (0, t)."""
        if not self.is_nonnegative:
            raise NegativeValue("log prefix integral requires a nonnegative function")
        t = self._locate(t)
        if not self.pieces or t == 0.0:
            return 0.0
        i = int(np.searchsorted(self.ends, t, side="right"))
        full_vals = self.values[:i]
        if np.any(full_vals == 0.0):
            return NEG_INF
        total = float(np.sum(np.log(full_vals) * self.widths[:i])) if i > 0 else 0.0
        if i < len(self.pieces):
            start = float(self.ends[i - 1]) if i > 0 else 0.0
            overlap = t - start
            if overlap > 0.0:
                v = float(self.values[i])
                if v == 0.0:
                    return NEG_INF
                total += np.log(v) * overlap
        return total

    def rearrange(self) -> "StepFunction":
        """Decreasing rearrangement: pieces sorted by value descending.

        Equimeasurable with the input (same distribution function);
        requires a nonnegative function.
        """
        if not self.is_nonnegative:
            raise NegativeValue("rearrangement requires a nonnegative function")
        ordered = sorted(self.pieces, key=lambda p: -p[0])
        return StepFunction(tuple(ordered))

    def pad_to(self, length: float) -> "StepFunction":
        """Extend with an explicit zero piece up to total length ``length``."""
        gap = length - self.total_length
        slop = _EDGE_REL * max(1.0, length)
        if gap <= slop:
            if gap < -slop:
                raise ShapeMismatch(
                    f"cannot pad length {self.total_length} down to {length}")
            return self
        return StepFunction(self.pieces + ((0.0, gap),))

    def truncate(self, length: float) -> "StepFunction":
        """Restrict to (0, length); length may not exceed the domain."""
        length = self._locate(length)
        out = []
        consumed = 0.0
        for v, w in self.pieces:
            if consumed + w <= length:
                out.append((v, w))
                consumed += w
            else:
                rest = length - consumed
                if rest > 0.0:
                    out.append((v, rest))
                break
        return StepFunction(tuple(out))

    def scale(self, factor: float) -> "StepFunction":
        """Multiply values by a nonnegative factor."""
        if factor < 0.0:
            raise NegativeValue("scale factor must be nonnegative")
        return StepFunction(tuple((v * factor, w) for v, w in self.pieces))

    def power(self, p: float) -> "StepFunction":
        """Pointwise p-th power of a nonnegative function (0**p = 0)."""
        if not self.is_nonnegative:
            raise NegativeValue("power requires a nonnegative function")
        return StepFunction(tuple(((v ** p if v > 0.0 else 0.0), w) for v, w in self.pieces))

    def map_values(self, f) -> "StepFunction":
        return StepFunction(tuple((float(f(v)), w) for v, w in self.pieces))


def union_breakpoints(*fns: StepFunction) -> np.ndarray:
    """Sorted union of all breakpoints, deduplicated up to one-ulp drift."""
    length = max((f.total_length for f in fns), default=0.0)
    pts = np.concatenate([f.ends for f in fns]) if fns else np.array([])
    if pts.size == 0:
        return pts
    pts = np.sort(pts)
    slop = _EDGE_REL * max(1.0, length)
    keep = [float(pts[0])]
    for t in pts[1:]:
        if float(t) - keep[-1] > slop:
            keep.append(float(t))
    return np.array(keep)


def values_on_grid(f: StepFunction, grid: np.ndarray) -> np.ndarray:
    """Per-cell values of ``f`` on the partition 0 = g_0 < g_1 < ... ."""
    cells = np.concatenate([[0.0], grid])
    mids = (cells[:-1] + cells[1:]) / 2.0
    return np.array([f.value_at(t) for t in mids])


def pointwise_product(f: StepFunction, g: StepFunction) -> StepFunction:
    """Pointwise product over the refined common partition.

    The shorter function is padded with zeros, so the result is defined on
    the longer domain.
    """
    length = max(f.total_length, g.total_length)
    f = f.pad_to(length)
    g = g.pad_to(length)
    grid = union_breakpoints(f, g)
    fv = values_on_grid(f, grid)
    gv = values_on_grid(g, grid)
    cells = np.concatenate([[0.0], grid])
    widths = np.diff(cells)
    return StepFunction.from_pieces(list(zip(fv * gv, widths)))


def mu(x: Operator) -> StepFunction:
    """Generalized singular value function of an operator.

    Each singular value s of block k contributes a piece ``(s, c_k)``;
    pieces are sorted descending, near-equal neighbours are merged (the
    eigensolver splits multiplicities by ~1e-12), and the result is padded
    with an explicit zero piece to total length tau(1).  Singular values
    below the relative rank threshold ``tol_alg * max(1, s_max)`` are
    flattened to exact zero so that rank decisions are unambiguous.
    """
    from .algebra import block_singular_values

    tol = tolerances().alg
    entries: list[tuple[float, float]] = []
    smax = 0.0
    for (_, c), b in zip(x.algebra.blocks, x.blocks):
        svals = block_singular_values(b)
        if svals.size:
            smax = max(smax, float(svals[0]))
        entries.extend((float(s), c) for s in svals)
    cut = tol * max(1.0, smax)
    entries = [(0.0 if v <= cut else v, w) for v, w in entries]
    entries.sort(key=lambda p: -p[0])
    f = StepFunction.from_pieces(entries, snap=tol)
    return f.pad_to(x.algebra.total_trace)


def distribution(x: Operator) -> StepFunction:
    """Distribution function d(s) = tau(e^x(s, inf)) over s in (0, ||x||].

    Requires a hermitian operator; apply to |x| for the singular value
    distribution of a general operator.  Represented as a step function of
    the level variable s, right-continuous, vanishing above the top of the
    spectrum.
    """
    if not x.is_hermitian():
        raise NotHermitian("distribution function requires a hermitian operator")
    dec = spectral_decompose(x)
    eigs: list[tuple[float, float]] = []
    for (_, c), w in zip(x.algebra.blocks, dec.eigenvalues):
        eigs.extend((float(lam), c) for lam in w if lam > 0.0)
    if not eigs:
        return StepFunction(())
    thresholds = sorted({lam for lam, _ in eigs})
    merged = [thresholds[0]]
    slop = _EDGE_REL * max(1.0, thresholds[-1])
    for t in thresholds[1:]:
        if t - merged[-1] > slop:
            merged.append(t)
    pieces = []
    prev = 0.0
    for s in merged:
        weight_ge = sum(c for lam, c in eigs if lam >= s - slop)
        pieces.append((weight_ge, s - prev))
        prev = s
    return StepFunction.from_pieces(pieces)
