"""Seeded random generators for operators, algebras and test fixtures.

Every randomized checker and suite derives its generator through
``rng_for(seed, label, trial)``, which hashes the triple into a
SeedSequence.  Trials are therefore independent of execution order and
identical across serial and parallel runs.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .algebra import FiniteAlgebra, Operator, spectral_decompose

def _label_entropy(label: str) -> int:
    return int.from_bytes(hashlib.sha256(label.encode("utf-8")).digest()[:8], "big")


def rng_for(seed: int, label: str, trial: int = 0) -> np.random.Generator:
    """Deterministic generator for (seed, label, trial)."""
    return np.random.default_rng(np.random.SeedSequence(
        entropy=int(seed), spawn_key=(_label_entropy(label), int(trial))))


def random_algebra(rng: np.random.Generator, max_blocks: int = 3,
                   max_dim: int = 4) -> FiniteAlgebra:
    n = int(rng.integers(1, max_blocks + 1))
    blocks = []
    for _ in range(n):
        dim = int(rng.integers(1, max_dim + 1))
        weight = float(rng.uniform(0.5, 2.0))
        blocks.append((dim, weight))
    return FiniteAlgebra(tuple(blocks))


def gaussian(algebra: FiniteAlgebra, rng: np.random.Generator) -> Operator:
    """Complex Gaussian operator, entries ~ N(0, 1/d) per block."""
    blocks = []
    for d in algebra.dims:
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        blocks.append(g / np.sqrt(2.0 * d))
    return Operator(algebra, blocks)


def hermitian(algebra: FiniteAlgebra, rng: np.random.Generator) -> Operator:
    g = gaussian(algebra, rng)
    return (g + g.adjoint()) * 0.5


def hermitian_contraction(algebra: FiniteAlgebra, rng: np.random.Generator) -> Operator:
    """Hermitian h with ||h|| <= 1 (strictly below 1 generically)."""
    h = hermitian(algebra, rng)
    return h / (h.norm_inf() + 1e-3)


def psd(algebra: FiniteAlgebra, rng: np.random.Generator, delta: float = 0.0) -> Operator:
    """a = g* g + delta * 1; delta in {0, 1e-3} covers singular and
    well-conditioned regimes."""
    g = gaussian(algebra, rng)
    a = g.adjoint() @ g
    if delta:
        a = a + delta * algebra.identity()
    return a


def unitary(algebra: FiniteAlgebra, rng: np.random.Generator) -> Operator:
    """Haar-ish unitary per block via phase-fixed QR."""
    blocks = []
    for d in algebra.dims:
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        q, r = np.linalg.qr(g)
        phases = np.diag(r).copy()
        phases[phases == 0] = 1.0
        q = q * (phases / np.abs(phases))
        blocks.append(q)
    return Operator(algebra, blocks)


def projection(algebra: FiniteAlgebra, rng: np.random.Generator) -> Operator:
    """Random orthogonal projection with a uniformly chosen rank profile."""
    u = unitary(algebra, rng)
    blocks = []
    for d, ub in zip(algebra.dims, u.blocks):
        rank = int(rng.integers(0, d + 1))
        diag = np.zeros(d, dtype=complex)
        diag[:rank] = 1.0
        blocks.append(ub @ np.diag(diag) @ ub.conj().T)
    return Operator(algebra, blocks)


def nonzero_projection(algebra: FiniteAlgebra, rng: np.random.Generator) -> Operator:
    for _ in range(64):
        p = projection(algebra, rng)
        if p.norm_inf() > 0.5:
            return p
    return algebra.identity()


def rank_one_psd(algebra: FiniteAlgebra, rng: np.random.Generator) -> Operator:
    """vv* for a random vector v spread over all blocks."""
    blocks = []
    for d in algebra.dims:
        v = (rng.standard_normal(d) + 1j * rng.standard_normal(d)) / np.sqrt(2.0 * d)
        blocks.append(np.outer(v, v.conj()))
    return Operator(algebra, blocks)


def disjoint_psd_pair(algebra: FiniteAlgebra, rng: np.random.Generator) -> tuple[Operator, Operator]:
    """PSD pair (x, y) with xy = 0, built from complementary spectral bands
    of one random hermitian operator."""
    h = hermitian(algebra, rng)
    dec = spectral_decompose(h)
    xb, yb = [], []
    for d, w, u in zip(algebra.dims, dec.eigenvalues, dec.bases):
        split = int(rng.integers(0, d + 1))
        dx = np.zeros(d, dtype=complex)
        dy = np.zeros(d, dtype=complex)
        dx[:split] = rng.uniform(0.2, 1.5, size=split)
        dy[split:] = rng.uniform(0.2, 1.5, size=d - split)
        xb.append(u @ np.diag(dx) @ u.conj().T)
        yb.append(u @ np.diag(dy) @ u.conj().T)
    return Operator(algebra, xb), Operator(algebra, yb)


def commuting_pair(algebra: FiniteAlgebra, rng: np.random.Generator) -> tuple[Operator, Operator]:
    """Two random polynomials of one hermitian operator."""
    h = hermitian(algebra, rng)
    ident = algebra.identity()
    c = rng.standard_normal(6)
    h2 = h @ h
    x = c[0] * ident + c[1] * h + c[2] * h2
    y = c[3] * ident + c[4] * h + c[5] * h2
    return x, y
