"""Weighted direct sums of matrix blocks and their spectral calculus.

A :class:`FiniteAlgebra` models the finite-dimensional tracial setting
``M = M_{d_1} (+) ... (+) M_{d_m}`` with trace
``tau(x) = sum_k c_k * Tr(x_k)`` for strictly positive block weights
``c_k``.  Operators are tuples of complex matrices, one per block, with
blockwise arithmetic.  On top of that the module provides the weighted
trace, hermitian eigendecompositions, spectral and support projections,
and functional calculus.

All values are immutable after construction and every operation is pure;
the only shared state is the global tolerance configuration.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Iterator, Sequence

import numpy as np

from .config import tolerances
from .errors import DomainError, NotHermitian, ShapeMismatch


@dataclasses.dataclass(frozen=True)
class FiniteAlgebra:
    """A direct sum of full matrix blocks with per-block trace weights.

    ``blocks`` is a tuple of ``(dim, weight)`` pairs.  Block order is part
    of the identity: two algebras are equal iff their block lists are equal.
    """

    blocks: tuple[tuple[int, float], ...]

    def __post_init__(self):
        if not self.blocks:
            raise ShapeMismatch("algebra needs at least one block")
        normalized = []
        for dim, weight in self.blocks:
            dim = int(dim)
            weight = float(weight)
            if dim < 1:
                raise ShapeMismatch(f"block dimension must be >= 1, got {dim}")
            if not (weight > 0.0) or not np.isfinite(weight):
                raise ShapeMismatch(f"block weight must be > 0, got {weight}")
            normalized.append((dim, weight))
        object.__setattr__(self, "blocks", tuple(normalized))

    @classmethod
    def full(cls, dim: int, weight: float = 1.0) -> "FiniteAlgebra":
        """Single matrix block M_dim with trace weight ``weight``."""
        return cls(((dim, weight),))

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.blocks)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(c for _, c in self.blocks)

    @property
    def total_trace(self) -> float:
        """tau(1) = sum_k c_k * d_k."""
        return float(sum(c * d for d, c in self.blocks))

    @property
    def vector_dim(self) -> int:
        """Dimension of the algebra as a complex vector space."""
        return int(sum(d * d for d, _ in self.blocks))

    def block_offsets(self) -> tuple[int, ...]:
        """Start index of each block in the canonical vectorization."""
        offsets = []
        pos = 0
        for d, _ in self.blocks:
            offsets.append(pos)
            pos += d * d
        return tuple(offsets)

    def operator(self, blocks: Sequence[np.ndarray]) -> "Operator":
        return Operator(self, blocks)

    def zero(self) -> "Operator":
        return Operator(self, [np.zeros((d, d), dtype=complex) for d in self.dims])

    def identity(self) -> "Operator":
        return Operator(self, [np.eye(d, dtype=complex) for d in self.dims])

    def block_identity(self, k: int) -> "Operator":
        """The central projection 1_k supported on block ``k``."""
        blocks = [np.zeros((d, d), dtype=complex) for d in self.dims]
        blocks[k] = np.eye(self.dims[k], dtype=complex)
        return Operator(self, blocks)

    def diagonal(self, values: Sequence[Sequence[float]]) -> "Operator":
        """Operator with the given diagonal entries per block."""
        if len(values) != self.n_blocks:
            raise ShapeMismatch("one diagonal per block required")
        return Operator(self, [np.diag(np.asarray(v, dtype=complex)) for v in values])

    def matrix_units(self) -> Iterator[tuple[int, int, int, "Operator"]]:
        """Yield (block, i, j, e_ij) over the canonical matrix-unit basis."""
        for k, d in enumerate(self.dims):
            for i in range(d):
                for j in range(d):
                    blocks = [np.zeros((dd, dd), dtype=complex) for dd in self.dims]
                    blocks[k][i, j] = 1.0
                    yield k, i, j, Operator(self, blocks)

    def hermitian_basis(self) -> list["Operator"]:
        """A real basis of the hermitian part, built from matrix units."""
        out = []
        for k, d in enumerate(self.dims):
            for i in range(d):
                blocks = [np.zeros((dd, dd), dtype=complex) for dd in self.dims]
                blocks[k][i, i] = 1.0
                out.append(Operator(self, blocks))
                for j in range(i + 1, d):
                    sym = [np.zeros((dd, dd), dtype=complex) for dd in self.dims]
                    sym[k][i, j] = sym[k][j, i] = 1.0
                    out.append(Operator(self, sym))
                    asym = [np.zeros((dd, dd), dtype=complex) for dd in self.dims]
                    asym[k][i, j] = 1.0j
                    asym[k][j, i] = -1.0j
                    out.append(Operator(self, asym))
        return out


class Operator:
    """An element of a :class:`FiniteAlgebra`: one complex matrix per block.

    Arithmetic is blockwise; ``@`` is the algebra product, ``*`` is scalar
    multiplication.  Instances are immutable (the underlying arrays are
    marked read-only) and safe to share across threads.
    """

    __slots__ = ("algebra", "blocks")

    def __init__(self, algebra: FiniteAlgebra, blocks: Sequence[np.ndarray]):
        mats = tuple(np.array(b, dtype=complex) for b in blocks)
        if len(mats) != algebra.n_blocks:
            raise ShapeMismatch(
                f"expected {algebra.n_blocks} blocks, got {len(mats)}")
        for (d, _), b in zip(algebra.blocks, mats):
            if b.shape != (d, d):
                raise ShapeMismatch(f"block shape {b.shape} != ({d}, {d})")
        for b in mats:
            b.setflags(write=False)
        self.algebra = algebra
        self.blocks = mats

    def _require_same_algebra(self, other: "Operator") -> None:
        if self.algebra != other.algebra:
            raise ShapeMismatch("operators live in different algebras")

    def __add__(self, other: "Operator") -> "Operator":
        self._require_same_algebra(other)
        return Operator(self.algebra, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other: "Operator") -> "Operator":
        self._require_same_algebra(other)
        return Operator(self.algebra, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self) -> "Operator":
        return Operator(self.algebra, [-a for a in self.blocks])

    def __mul__(self, scalar: complex) -> "Operator":
        return Operator(self.algebra, [scalar * a for a in self.blocks])

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "Operator":
        return Operator(self.algebra, [a / scalar for a in self.blocks])

    def __matmul__(self, other: "Operator") -> "Operator":
        self._require_same_algebra(other)
        return Operator(self.algebra, [a @ b for a, b in zip(self.blocks, other.blocks)])

    def adjoint(self) -> "Operator":
        return Operator(self.algebra, [a.conj().T for a in self.blocks])

    def transpose(self) -> "Operator":
        return Operator(self.algebra, [a.T for a in self.blocks])

    def norm_inf(self) -> float:
        """Largest singular value across blocks (the operator norm)."""
        out = 0.0
        for b in self.blocks:
            s = np.linalg.svd(b, compute_uv=False)
            if s.size and s[0] > out:
                out = float(s[0])
        return out

    def is_hermitian(self, tol: float | None = None) -> bool:
        if tol is None:
            tol = tolerances().alg
        scale = max(1.0, self.norm_inf())
        return all(
            float(np.linalg.norm(b - b.conj().T, 2)) <= tol * scale
            for b in self.blocks
        )

    def isclose(self, other: "Operator", tol: float | None = None) -> bool:
        self._require_same_algebra(other)
        if tol is None:
            tol = tolerances().alg * max(1.0, self.norm_inf(), other.norm_inf())
        return (self - other).norm_inf() <= tol

    def __repr__(self) -> str:
        dims = "+".join(str(d) for d in self.algebra.dims)
        return f"Operator(dims={dims}, norm={self.norm_inf():.3g})"


def trace(x: Operator) -> complex:
    """Weighted trace tau(x) = sum_k c_k * Tr(x_k)."""
    return complex(sum(c * np.trace(b) for (_, c), b in zip(x.algebra.blocks, x.blocks)))


def frobenius_norm(x: Operator) -> float:
    """Hilbert-Schmidt norm; dominates the operator norm, cheap to compute."""
    total = 0.0
    for b in x.blocks:
        total += float(np.vdot(b, b).real)
    return float(np.sqrt(total))


def _fixed_phase(col: np.ndarray) -> np.ndarray:
    """Rotate a vector so its first significant entry is real positive."""
    idx = np.flatnonzero(np.abs(col) > 1e-12 * max(1.0, float(np.abs(col).max())))
    if idx.size == 0:
        return col
    pivot = col[idx[0]]
    return col * (np.conj(pivot) / abs(pivot))


def _lex_key(col: np.ndarray) -> tuple:
    fixed = _fixed_phase(col)
    return tuple((round(float(z.real), 12), round(float(z.imag), 12)) for z in fixed)


@dataclasses.dataclass(frozen=True)
class SpectralDecomposition:
    """Per-block eigendecomposition of a hermitian operator.

    Eigenvalues are real and sorted descending per block; ``bases`` holds
    the corresponding orthonormal eigenbases as unitary matrices whose
    columns are the eigenvectors.
    """

    algebra: FiniteAlgebra
    eigenvalues: tuple[np.ndarray, ...]
    bases: tuple[np.ndarray, ...]

    def reconstruct(self) -> Operator:
        blocks = [
            u @ np.diag(w.astype(complex)) @ u.conj().T
            for w, u in zip(self.eigenvalues, self.bases)
        ]
        return Operator(self.algebra, blocks)

    def all_eigenvalues(self) -> np.ndarray:
        return np.concatenate([w for w in self.eigenvalues]) if self.eigenvalues else np.array([])


def spectral_decompose(x: Operator) -> SpectralDecomposition:
    """Blockwise hermitian eigendecomposition, eigenvalues descending.

    Ties in the descending eigenvalue order are broken by a lexicographic
    order on phase-fixed eigenvectors, so the output is deterministic.

    Raises ``NotHermitian`` if ``x`` fails the hermiticity check.
    """
    if not x.is_hermitian():
        raise NotHermitian("spectral decomposition requires a hermitian operator")
    eigenvalues = []
    bases = []
    for b in x.blocks:
        sym = (b + b.conj().T) / 2.0
        w, v = np.linalg.eigh(sym)
        order = sorted(range(len(w)), key=lambda i: (-w[i], _lex_key(v[:, i])))
        w = np.array([w[i] for i in order], dtype=float)
        v = np.column_stack([_fixed_phase(v[:, i]) for i in order]) if len(order) else v
        w.setflags(write=False)
        v.setflags(write=False)
        eigenvalues.append(w)
        bases.append(v)
    return SpectralDecomposition(x.algebra, tuple(eigenvalues), tuple(bases))


def spectral_projection(x: Operator, lower: float, upper: float) -> Operator:
    """Spectral projection e^x(lower, upper] onto the half-open interval.

    Eigenvalue-versus-endpoint comparisons use strict ``> lower`` and
    ``<= upper`` on the computed eigenvalues, with no interval fudging;
    ``lower=-inf`` / ``upper=inf`` are allowed.
    """
    dec = spectral_decompose(x)
    blocks = []
    for w, u in zip(dec.eigenvalues, dec.bases):
        sel = (w > lower) & (w <= upper)
        cols = u[:, sel]
        blocks.append(cols @ cols.conj().T)
    return Operator(x.algebra, blocks)


def functional_calculus(x: Operator, f: Callable[[float], float]) -> Operator:
    """Apply a real scalar function to a hermitian operator: U f(D) U*.

    Raises ``DomainError`` if ``f`` is undefined or non-finite at an
    eigenvalue.
    """
    dec = spectral_decompose(x)
    blocks = []
    for w, u in zip(dec.eigenvalues, dec.bases):
        fw = np.empty(len(w), dtype=float)
        for i, lam in enumerate(w):
            try:
                val = float(f(float(lam)))
            except (ValueError, ZeroDivisionError, OverflowError, TypeError) as exc:
                raise DomainError(f"function undefined at eigenvalue {lam}") from exc
            if not np.isfinite(val):
                raise DomainError(f"function non-finite at eigenvalue {lam}")
            fw[i] = val
        blocks.append(u @ np.diag(fw.astype(complex)) @ u.conj().T)
    return Operator(x.algebra, blocks)


def absolute_value(x: Operator) -> Operator:
    """|x| = (x* x)^(1/2), defined for arbitrary operators.

    Computed from the singular value decomposition rather than the Gram
    matrix, which keeps small singular values at full precision.
    """
    blocks = []
    for b in x.blocks:
        _, s, vh = np.linalg.svd(b)
        blocks.append(vh.conj().T @ np.diag(s.astype(complex)) @ vh)
    return Operator(x.algebra, blocks)


def positive_part(x: Operator) -> Operator:
    """x_+ = the positive spectral part of a hermitian operator."""
    return functional_calculus(x, lambda t: max(t, 0.0))


def negative_part(x: Operator) -> Operator:
    """x_- with x = x_+ - x_- and x_+ x_- = 0."""
    return functional_calculus(x, lambda t: max(-t, 0.0))


def block_singular_values(b: np.ndarray) -> np.ndarray:
    """Singular values of one block, descending.

    Exactly hermitian blocks go through the symmetric eigensolver, which
    (unlike the SVD's bidiagonalization) is bit-exact on already-diagonal
    input; general blocks use the SVD.
    """
    if np.array_equal(b, b.conj().T):
        return np.sort(np.abs(np.linalg.eigvalsh(b)))[::-1]
    return np.linalg.svd(b, compute_uv=False)


def singular_values(x: Operator) -> tuple[np.ndarray, ...]:
    """Per-block singular values in descending order."""
    return tuple(block_singular_values(b) for b in x.blocks)


def support_projection(x: Operator) -> Operator:
    """Projection onto the closure of the range of |x|.

    The rank decision uses the relative threshold
    ``tol_rank = tol_alg * max(1, sigma_max)``; this equals the spectral
    projection of |x| over (tol_rank, inf).  The support satisfies
    ``x @ s(x) = x`` and ``s(x*) @ x = x``.
    """
    tol = tolerances().alg
    decs = [np.linalg.svd(b) for b in x.blocks]
    smax = max((float(s[0]) if s.size else 0.0) for _, s, _ in decs)
    tol_rank = tol * max(1.0, smax)
    blocks = []
    for _, s, vh in decs:
        rows = vh[s > tol_rank]
        blocks.append(rows.conj().T @ rows)
    return Operator(x.algebra, blocks)


def min_eigenvalue(x: Operator) -> float:
    """Smallest eigenvalue of a hermitian operator (no hermiticity check)."""
    vals = [float(np.linalg.eigvalsh((b + b.conj().T) / 2.0).min()) for b in x.blocks]
    return min(vals)


def is_psd(x: Operator, tol: float | None = None) -> bool:
    if tol is None:
        tol = tolerances().alg
    scale = max(1.0, x.norm_inf())
    return x.is_hermitian(tol) and min_eigenvalue(x) >= -tol * scale
