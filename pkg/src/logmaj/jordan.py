"""Jordan *-homomorphisms: representation, verification, decomposition.

Linear maps between finite algebras are stored as dense matrices acting
on the canonical vectorization (blockwise row-major matrix units).  A
map J is certified Jordan by checking *-preservation and J(x^2) = J(x)^2
on the hermitian basis plus random hermitians, with a polarization spot
check; the hom/anti-hom split is computed by generating the *-algebra of
the range, diagonalizing its center and classifying each minimal central
projection by which multiplication law it supports.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .algebra import (FiniteAlgebra, Operator, absolute_value, frobenius_norm,
                      min_eigenvalue, spectral_decompose, spectral_projection)
from .config import tolerances
from .errors import (ClassificationFailure, InternalError, PlanMismatch,
                     ShapeMismatch, SplitMissing)
from .sampling import hermitian, psd, rng_for


def vectorize(x: Operator) -> np.ndarray:
    """Coordinates of x in the canonical matrix-unit basis."""
    return np.concatenate([b.reshape(-1) for b in x.blocks])


def unvectorize(algebra: FiniteAlgebra, vec: np.ndarray) -> Operator:
    blocks = []
    pos = 0
    for d in algebra.dims:
        blocks.append(vec[pos:pos + d * d].reshape(d, d))
        pos += d * d
    if pos != vec.size:
        raise ShapeMismatch(f"vector length {vec.size} != algebra dimension {pos}")
    return Operator(algebra, blocks)


def left_multiplication_matrix(b: Operator) -> np.ndarray:
    """Matrix of x -> b @ x on the canonical vectorization."""
    blocks = [np.kron(bk, np.eye(d, dtype=complex))
              for d, bk in zip(b.algebra.dims, b.blocks)]
    n = b.algebra.vector_dim
    out = np.zeros((n, n), dtype=complex)
    pos = 0
    for blk in blocks:
        m = blk.shape[0]
        out[pos:pos + m, pos:pos + m] = blk
        pos += m
    return out


@dataclasses.dataclass(frozen=True)
class LinearMap:
    """Complex-linear map given by its matrix on vectorized operators."""

    domain: FiniteAlgebra
    codomain: FiniteAlgebra
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        expected = (self.codomain.vector_dim, self.domain.vector_dim)
        if m.shape != expected:
            raise ShapeMismatch(f"map matrix shape {m.shape} != {expected}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def apply(self, x: Operator) -> Operator:
        if x.algebra != self.domain:
            raise ShapeMismatch("operator not in the map's domain")
        return unvectorize(self.codomain, self.matrix @ vectorize(x))

    def rank(self, tol: float | None = None) -> int:
        if tol is None:
            tol = tolerances().alg
        s = np.linalg.svd(self.matrix, compute_uv=False)
        if s.size == 0:
            return 0
        return int(np.count_nonzero(s > tol * max(1.0, float(s[0]))))

    @staticmethod
    def identity(algebra: FiniteAlgebra) -> "LinearMap":
        n = algebra.vector_dim
        return LinearMap(algebra, algebra, np.eye(n, dtype=complex))

    @staticmethod
    def transpose_map(algebra: FiniteAlgebra) -> "LinearMap":
        return LinearMap.from_function(algebra, algebra, lambda x: x.transpose())

    @staticmethod
    def from_function(domain: FiniteAlgebra, codomain: FiniteAlgebra, fn) -> "LinearMap":
        cols = []
        for _, _, _, e in domain.matrix_units():
            cols.append(vectorize(fn(e)))
        return LinearMap(domain, codomain, np.column_stack(cols))

    def left_compose(self, b: Operator) -> "LinearMap":
        """The map x -> b @ self(x)."""
        if b.algebra != self.codomain:
            raise ShapeMismatch("left factor not in the codomain")
        return LinearMap(self.domain, self.codomain,
                         left_multiplication_matrix(b) @ self.matrix)


@dataclasses.dataclass(frozen=True)
class JordanCertificate:
    selfadjoint_ok: bool
    square_ok: bool
    positivity_ok: bool
    max_residual: float

    @property
    def passed(self) -> bool:
        return self.selfadjoint_ok and self.square_ok and self.positivity_ok

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class JordanFailure:
    """Verification failure with the worst witness; never raised."""

    kind: str
    residual: float
    witness: Operator | None
    certificate: JordanCertificate


@dataclasses.dataclass(frozen=True)
class PlanEntry:
    source: int
    target: int
    transpose: bool
    unitary_seed: int


@dataclasses.dataclass(frozen=True)
class JordanPlan:
    """Ground-truth construction plan: each entry carries one source block
    into one target block, optionally transposed, conjugated by a seeded
    unitary.  Targets must be distinct; a source may fan out to several
    targets (the hom (+) anti duplication), and sources may be unused."""

    domain: FiniteAlgebra
    codomain: FiniteAlgebra
    entries: tuple[PlanEntry, ...]

    def __post_init__(self):
        seen_targets = set()
        for e in self.entries:
            if not (0 <= e.source < self.domain.n_blocks):
                raise PlanMismatch(f"source index {e.source} out of range")
            if not (0 <= e.target < self.codomain.n_blocks):
                raise PlanMismatch(f"target index {e.target} out of range")
            if e.target in seen_targets:
                raise PlanMismatch(f"target block {e.target} used twice")
            seen_targets.add(e.target)
            if self.domain.dims[e.source] != self.codomain.dims[e.target]:
                raise PlanMismatch(
                    f"dimension mismatch: source {e.source} is "
                    f"{self.domain.dims[e.source]}, target {e.target} is "
                    f"{self.codomain.dims[e.target]}")

    def effective_flags(self) -> dict[int, str]:
        """Expected classification per target ('hom'/'anti'); dimension-1
        targets are hom by the tie-break."""
        flags = {}
        for e in self.entries:
            if self.codomain.dims[e.target] == 1 or not e.transpose:
                flags[e.target] = "hom"
            else:
                flags[e.target] = "anti"
        return flags

    def hom_source_projection(self) -> Operator:
        """The preimage central projection p: sum of source identities all
        of whose entries act multiplicatively."""
        hom_sources = []
        by_source: dict[int, list[PlanEntry]] = {}
        for e in self.entries:
            by_source.setdefault(e.source, []).append(e)
        flags = self.effective_flags()
        for s, entries in by_source.items():
            if all(flags[e.target] == "hom" for e in entries):
                hom_sources.append(s)
        p = self.domain.zero()
        for s in hom_sources:
            p = p + self.domain.block_identity(s)
        return p


@dataclasses.dataclass(frozen=True)
class StormerSplit:
    """Minimal central projections of the algebra generated by the range,
    each classified as multiplicative or anti-multiplicative."""

    unit: Operator
    projections: tuple[Operator, ...]
    kinds: tuple[str, ...]

    @property
    def z(self) -> Operator:
        """Sum of the hom-classified central projections."""
        total = self.unit.algebra.zero()
        for p, kind in zip(self.projections, self.kinds):
            if kind == "hom":
                total = total + p
        return total

    @property
    def hom_blocks(self) -> tuple[Operator, ...]:
        return tuple(p for p, k in zip(self.projections, self.kinds) if k == "hom")

    @property
    def antihom_blocks(self) -> tuple[Operator, ...]:
        return tuple(p for p, k in zip(self.projections, self.kinds) if k == "anti")


@dataclasses.dataclass
class JordanMap:
    """A verified Jordan *-homomorphism with its certificate.

    ``plan`` is present for generated maps and records the ground truth;
    ``split`` is filled once by :func:`stormer_split` and cached.
    """

    map: LinearMap
    certificate: JordanCertificate
    plan: JordanPlan | None = None
    split: StormerSplit | None = None

    @property
    def domain(self) -> FiniteAlgebra:
        return self.map.domain

    @property
    def codomain(self) -> FiniteAlgebra:
        return self.map.codomain

    def apply(self, x: Operator) -> Operator:
        return self.map.apply(x)


def verify_jordan(linear_map: LinearMap, seed: int = 0, n_square: int = 200,
                  n_pairs: int = 50, n_psd: int = 25):
    """Certify a linear map as a Jordan *-homomorphism, or report failure.

    Checks *-preservation on the hermitian basis, J(x^2) = J(x)^2 on the
    basis hermitians and ``n_square`` random hermitians (sufficient by
    polarization, itself spot-checked on ``n_pairs`` random pairs via
    J(xy + yx) = J(x)J(y) + J(y)J(x)), and positivity on random PSD
    inputs.  Mathematical failure is returned, never raised.

    Residual comparisons screen through the Frobenius norm (which
    dominates the operator norm, so every acceptance stays sound); the
    reported ``max_residual`` is the exact operator norm of the worst
    witness.
    """
    tol = tolerances().jordan
    dom = linear_map.domain
    worst_f = -1.0
    worst_residual: Operator | None = None
    worst_witness: Operator | None = None
    worst_kind = ""
    sa_ok = sq_ok = pos_ok = True

    def note(kind: str, residual_op: Operator, witness: Operator) -> bool:
        """Record the worst candidate and return whether it passes tol."""
        nonlocal worst_f, worst_residual, worst_witness, worst_kind
        f = frobenius_norm(residual_op)
        if f > worst_f:
            worst_f, worst_residual = f, residual_op
            worst_witness, worst_kind = witness, kind
        return f <= tol

    basis = dom.hermitian_basis()
    for h in basis:
        jh = linear_map.apply(h)
        sa_ok &= note("selfadjoint", jh - jh.adjoint(), h)

    rng = rng_for(seed, "verify-jordan-square")
    candidates = list(basis)
    for _ in range(n_square):
        candidates.append(hermitian(dom, rng))
    for h in candidates:
        jh = linear_map.apply(h)
        sq_ok &= note("square", linear_map.apply(h @ h) - jh @ jh, h)
    rng = rng_for(seed, "verify-jordan-pairs")
    for _ in range(n_pairs):
        x = hermitian(dom, rng)
        y = hermitian(dom, rng)
        jx, jy = linear_map.apply(x), linear_map.apply(y)
        res = linear_map.apply(x @ y + y @ x) - (jx @ jy + jy @ jx)
        sq_ok &= note("polarization", res, x)

    rng = rng_for(seed, "verify-jordan-psd")
    for _ in range(n_psd):
        a = psd(dom, rng)
        ja = linear_map.apply(a)
        herm_defect = frobenius_norm(ja - ja.adjoint())
        if herm_defect > tol:
            pos_ok &= note("positivity", ja - ja.adjoint(), a)
            continue
        neg = max(0.0, -min_eigenvalue(ja))
        if neg > tol:
            pos_ok = False
            if neg > worst_f:
                worst_f, worst_residual = neg, None
                worst_witness, worst_kind = a, "positivity"
        elif neg > worst_f:
            worst_f, worst_residual = neg, None
            worst_witness, worst_kind = a, "positivity"

    max_residual = (worst_residual.norm_inf() if worst_residual is not None
                    else max(worst_f, 0.0))
    cert = JordanCertificate(sa_ok, sq_ok, pos_ok, max_residual)
    if cert.passed:
        return JordanMap(linear_map, cert)
    return JordanFailure(worst_kind, max_residual, worst_witness, cert)


def _orthonormal_span(vectors: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis (rows) of the row span of ``vectors``."""
    if vectors.size == 0:
        return vectors
    u, s, vh = np.linalg.svd(vectors, full_matrices=False)
    if s.size == 0:
        return np.zeros((0, vectors.shape[1]), dtype=complex)
    keep = s > tol * max(1.0, float(s[0]))
    return vh[keep]


def _span_blocks(cod: FiniteAlgebra, span: np.ndarray) -> list[np.ndarray]:
    """Reshape span rows into per-block matrix stacks (m, d, d)."""
    out = []
    pos = 0
    for d in cod.dims:
        out.append(span[:, pos:pos + d * d].reshape(-1, d, d))
        pos += d * d
    return out


def _generated_algebra(J: LinearMap) -> list[Operator]:
    """Orthonormal spanning set of the *-algebra generated by the range.

    Iterates degree-2 products (blockwise, vectorized) until the span
    dimension stabilizes; mathematically this terminates within the
    algebra dimension, the cap only guards float pathologies.
    """
    cod = J.codomain
    n = cod.vector_dim
    span = _orthonormal_span(J.matrix.T.copy(), 1e-12)
    for _ in range(n + 1):
        m = span.shape[0]
        if m == 0:
            return []
        pieces = []
        for stack in _span_blocks(cod, span):
            adj = np.conj(np.transpose(stack, (0, 2, 1)))
            prods = np.einsum("aij,bjk->abik", stack, stack).reshape(m * m, -1)
            pieces.append(np.vstack([adj.reshape(m, -1), prods]))
        stacked = np.hstack(pieces)
        new_span = _orthonormal_span(np.vstack([span, stacked]), 1e-12)
        if new_span.shape[0] == m:
            return [unvectorize(cod, v) for v in span]
        span = new_span
    raise InternalError("generated-algebra closure did not stabilize")


def _center_elements(ops: list[Operator]) -> list[Operator]:
    """Basis of the center of the span of ``ops`` (a *-closed algebra).

    Solves the linear commutation system sum_i c_i [ops_i, ops_r] = 0 for
    all r; the kernel dimension equals the number of minimal central
    projections of the algebra.
    """
    if not ops:
        return []
    cod = ops[0].algebra
    m = len(ops)
    n = cod.vector_dim
    span = np.array([vectorize(a) for a in ops])
    comm_blocks = []
    for stack in _span_blocks(cod, span):
        left = np.einsum("iab,rbc->riac", stack, stack)
        right = np.einsum("rab,ibc->riac", stack, stack)
        comm_blocks.append((left - right).reshape(m, m, -1))
    comms = np.concatenate(comm_blocks, axis=2)  # (r, i, n)
    system = comms.transpose(0, 2, 1).reshape(m * n, m)
    _, s, vh = np.linalg.svd(system)
    smax = float(s[0]) if s.size else 0.0
    padded = np.zeros(m)
    padded[:s.size] = s
    kernel = vh[padded <= 1e-10 * max(1.0, smax)]
    return [unvectorize(cod, span.T @ np.conj(coeffs)) for coeffs in kernel]


def stormer_split(J: JordanMap, seed: int = 0, n_verify: int = 100) -> StormerSplit:
    """Split a verified Jordan map into hom and anti-hom central parts.

    Computes the *-algebra generated by the range, diagonalizes its
    center through a generic hermitian element, and classifies each
    minimal central projection by whether compression onto it makes the
    map multiplicative or anti-multiplicative.  Dimension-one (abelian)
    summands satisfy both laws and are classified hom by the tie-break.
    The classification is re-verified globally on random pairs.
    """
    if J.split is not None:
        return J.split
    tol = tolerances().jordan
    dom, cod = J.domain, J.codomain
    unit = J.apply(dom.identity())
    if unit.norm_inf() <= tol:
        split = StormerSplit(unit, (), ())
        J.split = split
        return split
    algebra_ops = _generated_algebra(J.map)
    center = _center_elements(algebra_ops)

    projections: list[Operator] = []
    for attempt in range(8):
        rng = rng_for(seed, "stormer-generic", attempt)
        generic = cod.zero()
        for op in center:
            h = (op + op.adjoint()) * 0.5
            ah = (op - op.adjoint()) * (-0.5j)
            generic = generic + float(rng.standard_normal()) * h
            generic = generic + float(rng.standard_normal()) * ah
        dec = spectral_decompose(generic)
        eigs = sorted(float(v) for w in dec.eigenvalues for v in w)
        scale = max(1.0, abs(eigs[0]), abs(eigs[-1])) if eigs else 1.0
        clusters: list[list[float]] = []
        for v in eigs:
            if clusters and abs(v - clusters[-1][-1]) <= 1e-6 * scale:
                clusters[-1].append(v)
            else:
                clusters.append([v])
        candidates = []
        margin = 1e-7 * scale
        for cluster in clusters:
            lo, hi = cluster[0] - margin, cluster[-1] + margin
            blocks = []
            for w, u in zip(dec.eigenvalues, dec.bases):
                cols = u[:, (w > lo) & (w <= hi)]
                blocks.append(cols @ cols.conj().T)
            p = Operator(cod, blocks)
            proj = p @ unit  # commutes with unit; drops the off-range kernel
            if proj.norm_inf() > tol:
                candidates.append(proj)
        # A generic center element separates all minimal central summands;
        # eigenvalue collisions are resolved by redrawing.
        if len(candidates) == len(center):
            projections = candidates
            break
    else:
        raise InternalError("could not separate the central summands")

    # classification and global verification compare residuals through the
    # Frobenius norm, which dominates the operator norm
    rng = rng_for(seed, "stormer-classify")
    sample_pairs = [(hermitian(dom, rng), hermitian(dom, rng)) for _ in range(20)]
    basis = dom.hermitian_basis()
    for i in range(0, len(basis) - 1, 2):
        sample_pairs.append((basis[i], basis[i + 1]))
    triples = []
    for x, y in sample_pairs:
        jxy = J.apply(x @ y)
        triples.append((jxy, J.apply(x), J.apply(y)))
    kinds = []
    for p in projections:
        hom_res = 0.0
        anti_res = 0.0
        for jxy, jx, jy in triples:
            hom_res = max(hom_res, frobenius_norm((jxy - jx @ jy) @ p))
            anti_res = max(anti_res, frobenius_norm((jxy - jy @ jx) @ p))
        is_hom = hom_res <= tol
        is_anti = anti_res <= tol
        if not (is_hom or is_anti):
            raise ClassificationFailure(
                f"central summand is neither hom (res {hom_res:.2e}) nor "
                f"anti-hom (res {anti_res:.2e})")
        kinds.append("hom" if is_hom else "anti")

    split = StormerSplit(unit, tuple(projections), tuple(kinds))
    z = split.z
    anti = unit - z
    rng = rng_for(seed, "stormer-global")
    for _ in range(n_verify):
        x = hermitian(dom, rng)
        y = hermitian(dom, rng)
        jxy = J.apply(x @ y)
        jx, jy = J.apply(x), J.apply(y)
        if frobenius_norm((jxy - jx @ jy) @ z) > tol:
            raise ClassificationFailure("global hom verification failed")
        if frobenius_norm((jxy - jy @ jx) @ anti) > tol:
            raise ClassificationFailure("global anti-hom verification failed")
    J.split = split
    return split


def _derived_hom_projection(J: JordanMap) -> Operator:
    """p = sum of domain block identities mapping wholly into the hom part."""
    if J.plan is not None:
        return J.plan.hom_source_projection()
    if J.split is None:
        raise SplitMissing("compute stormer_split before the abs identity")
    tol = tolerances().jordan
    z = J.split.z
    p = J.domain.zero()
    for k in range(J.domain.n_blocks):
        jk = J.apply(J.domain.block_identity(k))
        if (jk @ z - jk).norm_inf() <= tol:
            p = p + J.domain.block_identity(k)
    return p


def jordan_abs_residual(J: JordanMap, x: Operator) -> float:
    """Residual of |J(x)| = J(p|x| + (1-p)|x*|) in operator norm.

    The preimage projection p comes from the generator plan when present,
    otherwise from the split.  The identity holds whenever every central
    summand of the domain maps purely multiplicatively or purely
    anti-multiplicatively; mixed fan-outs report an honest residual.
    """
    p = _derived_hom_projection(J)
    one = J.domain.identity()
    lhs = absolute_value(J.apply(x))
    rhs = J.apply(p @ absolute_value(x) + (one - p) @ absolute_value(x.adjoint()))
    return (lhs - rhs).norm_inf()


def check_injective(J: JordanMap) -> bool:
    """J(p) != 0 for every minimal diagonal matrix unit, cross-checked
    against the rank of the map matrix."""
    tol = tolerances().jordan
    units_ok = True
    for k, i, j, e in J.domain.matrix_units():
        if i != j:
            continue
        if J.apply(e).norm_inf() <= tol:
            units_ok = False
            break
    rank_ok = J.map.rank() == J.domain.vector_dim
    if units_ok != rank_ok:
        raise InternalError("injectivity witnesses disagree with the matrix rank")
    return units_ok


@dataclasses.dataclass(frozen=True)
class OrthoReport:
    ortho_ok: bool
    jordan_ok: bool
    trials: int
    worst: float
    failures: tuple[str, ...]

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


def ortho_extension_check(linear_map: LinearMap, trials: int = 50, seed: int = 0) -> OrthoReport:
    """Consistency check of the ortho-homomorphism extension statement.

    Samples orthogonal projection pairs, verifies their images are
    orthogonal projections summing correctly, then reports whether the
    Jordan verification also passes.
    """
    tol = tolerances().jordan
    dom = linear_map.domain
    worst = 0.0
    failures: list[str] = []
    for trial in range(trials):
        rng = rng_for(seed, "ortho-check", trial)
        h = hermitian(dom, rng)
        cut = float(rng.uniform(-0.5, 0.5))
        p = spectral_projection(h, cut, float("inf"))
        q = dom.identity() - p
        for name, r in (("p", p), ("q", q)):
            img = linear_map.apply(r)
            res = max((img @ img - img).norm_inf(), (img - img.adjoint()).norm_inf())
            worst = max(worst, res)
            if res > tol:
                failures.append(f"trial {trial}: image of {name} is not a projection")
        cross = (linear_map.apply(p) @ linear_map.apply(q)).norm_inf()
        join = (linear_map.apply(p + q) - linear_map.apply(p) - linear_map.apply(q)).norm_inf()
        worst = max(worst, cross, join)
        if cross > tol:
            failures.append(f"trial {trial}: images not orthogonal")
        if join > tol:
            failures.append(f"trial {trial}: join not additive")
    ortho_ok = not failures
    jordan_ok = isinstance(verify_jordan(linear_map, seed=seed, n_square=50, n_pairs=20), JordanMap)
    return OrthoReport(ortho_ok, jordan_ok, trials, worst, tuple(failures[:5]))


def _plan_unitary(dim: int, seed: int) -> np.ndarray:
    """Seeded conjugating unitary; seed 0 is reserved for the identity."""
    if seed == 0:
        return np.eye(dim, dtype=complex)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed))
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases[phases == 0] = 1.0
    return q * (phases / np.abs(phases))


def random_jordan(domain: FiniteAlgebra, plan: JordanPlan) -> JordanMap:
    """Build J(x)_target = u (x_source or x_source^T) u* from a plan.

    The returned map always passes verification (it is a sum of block
    *-isomorphisms and *-anti-isomorphisms by construction); the plan is
    retained as ground truth for split recovery tests.
    """
    if plan.domain != domain:
        raise PlanMismatch("plan domain differs from the given algebra")
    cod = plan.codomain
    unitaries = {e.target: _plan_unitary(cod.dims[e.target], e.unitary_seed)
                 for e in plan.entries}

    def act(x: Operator) -> Operator:
        blocks = [np.zeros((d, d), dtype=complex) for d in cod.dims]
        for e in plan.entries:
            src = x.blocks[e.source]
            mat = src.T if e.transpose else src
            u = unitaries[e.target]
            blocks[e.target] = u @ mat @ u.conj().T
        return Operator(cod, blocks)

    linear_map = LinearMap.from_function(domain, cod, act)
    verified = verify_jordan(linear_map, n_square=10, n_pairs=5, n_psd=5)
    if not isinstance(verified, JordanMap):
        raise InternalError("constructed plan map failed Jordan verification")
    verified.plan = plan
    return verified


def random_plan(rng: np.random.Generator, domain: FiniteAlgebra | None = None,
                fanout: bool = False) -> JordanPlan:
    """Random plan (and codomain) over a random or given domain.

    Without fan-out each source feeds exactly one fresh target block; with
    fan-out a source may be duplicated into two targets with independent
    transpose flags, exercising the mixed hom/anti case.
    """
    from .sampling import random_algebra

    if domain is None:
        domain = random_algebra(rng)
    entries = []
    target_blocks: list[tuple[int, float]] = []
    for s, (d, _) in enumerate(domain.blocks):
        copies = 2 if (fanout and rng.uniform() < 0.5) else 1
        for _ in range(copies):
            target_blocks.append((d, float(rng.uniform(0.5, 2.0))))
            entries.append(PlanEntry(
                source=s,
                target=len(target_blocks) - 1,
                transpose=bool(rng.uniform() < 0.5),
                unitary_seed=int(rng.integers(1, 2 ** 31)),
            ))
    order = rng.permutation(len(target_blocks))
    remap = {int(old): new for new, old in enumerate(order)}
    codomain = FiniteAlgebra(tuple(target_blocks[int(old)] for old in order))
    entries = [dataclasses.replace(e, target=remap[e.target]) for e in entries]
    return JordanPlan(domain, codomain, tuple(entries))
