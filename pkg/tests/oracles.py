"""Independent oracles used by the tests.

Each oracle recomputes an expected value along a different construction
path than the library: distribution-function inversion instead of
sort-merge-pad for mu, dense-grid summation for prefix integrals,
characteristic-polynomial roots (Faddeev-LeVerrier plus a companion
matrix) instead of the hermitian eigensolver, and direct outer products
for rank-one supports.  They are deliberately slow and simple.
"""

from __future__ import annotations

import numpy as np

from logmaj.algebra import Operator
from logmaj.stepfun import StepFunction


def weighted_singular_values(x: Operator) -> list[tuple[float, float]]:
    """(singular value, block weight) pairs, unsorted."""
    out = []
    for (_, c), b in zip(x.algebra.blocks, x.blocks):
        for s in np.linalg.svd(b, compute_uv=False):
            out.append((float(s), c))
    return out


def mu_by_distribution_inverse(x: Operator, ts: np.ndarray) -> np.ndarray:
    """mu(t) = inf{s >= 0 : d(s) <= t} with d from counting singular values.

    The candidate levels are the singular values themselves plus 0; the
    infimum over all s >= 0 is attained at one of them because d is a
    right-continuous step function with jumps there.
    """
    pairs = weighted_singular_values(x)
    levels = sorted({s for s, _ in pairs} | {0.0})

    def dist(s: float) -> float:
        return sum(c for v, c in pairs if v > s)

    dvals = [(s, dist(s)) for s in levels]
    out = np.empty(len(ts))
    for i, t in enumerate(ts):
        feasible = [s for s, d in dvals if d <= t]
        out[i] = min(feasible) if feasible else float("inf")
    return out


def mu_oracle_vectorized(x: Operator, ts: np.ndarray) -> np.ndarray:
    """Distribution-inverse oracle evaluated on a dense grid at once.

    Tabulates d over the descending singular value levels (weights of the
    strictly-larger values accumulate in descending order, matching how
    distribution tables are built), then inverts: the feasible set
    {s : d(s) <= t} is a suffix of the ascending level list because d is
    non-increasing in s, so its minimum is found by bisection.
    """
    pairs = sorted(weighted_singular_values(x), key=lambda p: -p[0])
    values = np.array([v for v, _ in pairs])
    weights = np.array([c for _, c in pairs])
    cumw = np.concatenate([[0.0], np.cumsum(weights)])
    levels_asc = np.unique(np.concatenate([values, [0.0]]))
    counts = np.searchsorted(-values, -levels_asc, side="left")  # strictly greater
    d_asc = cumw[counts]
    j = np.searchsorted(-d_asc, -np.asarray(ts), side="left")
    return levels_asc[j]


_DYADIC_H = 2.0 ** -17  # cell width; ~10^6 cells for desk-scale lengths


def _grid_values(f: StepFunction, t: float) -> tuple[np.ndarray, float]:
    """Cell-midpoint samples of ``f`` on the dyadic grid covering (0, t).

    The grid cell width 2^-17 divides every dyadic piece width the tests
    construct, so no cell straddles a breakpoint and the midpoint rule is
    exact up to float summation.
    """
    cells = round(t / _DYADIC_H)
    assert abs(cells * _DYADIC_H - t) < 1e-12, "t must sit on the dyadic grid"
    mids = (np.arange(cells) + 0.5) * _DYADIC_H
    vals = np.concatenate([f.values, [0.0]])
    idx = np.searchsorted(f.ends, mids, side="right")
    return vals[idx], _DYADIC_H


def prefix_integral_by_grid(f: StepFunction, t: float) -> float:
    """Dense-grid integral of a step function over (0, t)."""
    if t == 0.0:
        return 0.0
    picked, h = _grid_values(f, t)
    return float(np.sum(picked) * h)


def log_prefix_integral_by_grid(f: StepFunction, t: float) -> float:
    if t == 0.0:
        return 0.0
    picked, h = _grid_values(f, t)
    if np.any(picked <= 0.0):
        return float("-inf")
    return float(np.sum(np.log(picked)) * h)


def charpoly_coefficients(a: np.ndarray) -> np.ndarray:
    """Characteristic polynomial coefficients via Faddeev-LeVerrier.

    Returns [1, c_1, ..., c_n] with p(x) = x^n + c_1 x^(n-1) + ... + c_n,
    using only traces and matrix products (no eigensolver).
    """
    n = a.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    m = np.zeros_like(a)
    ident = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        m = a @ m + coeffs[k - 1] * ident
        coeffs[k] = -np.trace(a @ m) / k
    return coeffs


def eigenvalues_by_charpoly(a: np.ndarray) -> np.ndarray:
    """Eigenvalues as roots of the characteristic polynomial.

    np.roots builds the companion matrix and runs the general (non-
    hermitian) QR algorithm, a path independent of np.linalg.eigh.
    """
    roots = np.roots(charpoly_coefficients(a))
    return np.sort(roots.real)[::-1]


def rank_one_support(v: np.ndarray) -> np.ndarray:
    """The support projection of vv*: the normalized outer product."""
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return np.zeros((len(v), len(v)), dtype=complex)
    u = v / nv
    return np.outer(u, u.conj())


def dyadic_step_function(rng: np.random.Generator, max_pieces: int = 12,
                         nonnegative: bool = True,
                         decreasing: bool = False) -> StepFunction:
    """Random step function whose widths are dyadic rationals, so that a
    uniform grid of 2^k cells aligns exactly with every breakpoint."""
    n = int(rng.integers(1, max_pieces + 1))
    widths = rng.integers(1, 17, size=n) / 16.0
    values = rng.uniform(0.0 if nonnegative else -3.0, 3.0, size=n)
    if rng.uniform() < 0.3 and nonnegative:
        values[rng.integers(0, n)] = 0.0
    if decreasing:
        values = np.sort(np.abs(values))[::-1]
    return StepFunction(tuple((float(v), float(w)) for v, w in zip(values, widths)))
