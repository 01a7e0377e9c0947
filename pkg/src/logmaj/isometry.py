"""Analysis and synthesis of order-preserving isometries T = B . J.

``analyze`` runs five phases on a candidate linear map between normed
finite algebras: sampled positivity, the isometry identity, disjointness
preservation (with a diagnostic that traces the proof chain
norm-equality -> mu-equality -> product-zero on every witness), the
commuting factor B = T(1), and extraction of the Jordan part
J(x) = B^+ T(x) with its support identities.  ``synthesize`` goes the
other way, building calibrated maps from a plan for round-trip testing.

Positivity is a sampling check only: rank-one PSD inputs falsify
positivity of a linear map in practice, but no certificate is computed,
and the report says so.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .algebra import (FiniteAlgebra, Operator, functional_calculus,
                      min_eigenvalue, singular_values, support_projection)
from .config import tolerances
from .errors import CalibrationError, JMissing, Singular
from .jordan import (JordanFailure, JordanMap, JordanPlan, LinearMap,
                     random_jordan, unvectorize, vectorize, verify_jordan)
from .majorization import log_submajorizes, mu_values_equal
from .norms import Lp, NormSpec, evaluate_norm
from .sampling import (disjoint_psd_pair, gaussian, hermitian, psd,
                       rank_one_psd, rng_for)
from .stepfun import mu


@dataclasses.dataclass(frozen=True)
class CheckStats:
    ok: bool
    trials: int
    worst: float
    note: str = ""

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class ChainReport:
    """Proof-chain diagnostic over all disjointness witnesses: how often
    each link held and the first broken link, if any."""

    norm_equality_ok: bool
    mu_equality_ok: bool
    product_zero_ok: bool
    first_broken: str | None
    worst_norm_gap: float

    def to_json(self) -> dict:
        return dataclasses.asdict(self)

    @property
    def intact(self) -> bool:
        return self.first_broken is None


@dataclasses.dataclass
class IsometryAnalysis:
    positive: CheckStats
    isometric: CheckStats
    disjointness: CheckStats
    chain: ChainReport
    B: Operator
    commutation_residual: float
    J: JordanMap | None
    jordan_failure: JordanFailure | None
    factorization_residual: float
    support_identity_residual: float

    @property
    def passed(self) -> bool:
        tol = tolerances().iso
        return (self.positive.ok and self.isometric.ok and self.disjointness.ok
                and self.chain.intact and self.J is not None
                and self.commutation_residual <= tol
                and self.factorization_residual <= tol
                and self.support_identity_residual <= tol)

    def to_json(self) -> dict:
        from .serialize import encode_operator

        return {
            "positive": self.positive.to_json(),
            "isometric": self.isometric.to_json(),
            "disjointness": self.disjointness.to_json(),
            "chain": self.chain.to_json(),
            "B": encode_operator(self.B),
            "commutation_residual": self.commutation_residual,
            "jordan_extracted": self.J is not None,
            "jordan_failure": None if self.jordan_failure is None else {
                "kind": self.jordan_failure.kind,
                "residual": self.jordan_failure.residual,
            },
            "factorization_residual": self.factorization_residual,
            "support_identity_residual": self.support_identity_residual,
            "passed": self.passed,
        }


def _sample_inputs(dom: FiniteAlgebra, rng: np.random.Generator, kind: int) -> Operator:
    if kind % 3 == 0:
        return rank_one_psd(dom, rng)
    if kind % 3 == 1:
        return psd(dom, rng, delta=1e-3 if kind % 6 == 1 else 0.0)
    return gaussian(dom, rng)


def analyze(T: LinearMap, norm_domain: NormSpec, norm_codomain: NormSpec,
            trials: int = 200, seed: int = 0) -> IsometryAnalysis:
    """Run the five-phase order-isometry analysis; failures are recorded
    in the report, never raised."""
    tol = tolerances().iso
    dom, cod = T.domain, T.codomain

    # positivity (sampling; incomplete by design)
    worst_pos = 0.0
    for trial in range(trials):
        rng = rng_for(seed, "iso-positive", trial)
        x = rank_one_psd(dom, rng) if trial % 2 == 0 else psd(dom, rng)
        tx = T.apply(x)
        herm_defect = (tx - tx.adjoint()).norm_inf()
        scale = max(1.0, tx.norm_inf())
        if herm_defect > tol * scale:
            worst_pos = max(worst_pos, herm_defect / scale)
            continue
        neg = max(0.0, -min_eigenvalue(tx))
        worst_pos = max(worst_pos, neg / scale)
    positive = CheckStats(worst_pos <= tol, trials, worst_pos,
                          "sampled on rank-one and mixed PSD inputs; no certificate")

    # isometry
    worst_iso = 0.0
    for trial in range(trials):
        rng = rng_for(seed, "iso-isometry", trial)
        x = _sample_inputs(dom, rng, trial)
        ne = evaluate_norm(norm_domain, x)
        nf = evaluate_norm(norm_codomain, T.apply(x))
        gap = abs(nf - ne) / max(1.0, ne)
        worst_iso = max(worst_iso, gap)
    isometric = CheckStats(worst_iso <= tol, trials, worst_iso)

    # disjointness with proof-chain diagnostic
    worst_dis = 0.0
    worst_norm_gap = 0.0
    link_norm = link_mu = link_prod = True
    first_broken: str | None = None
    n_dis = max(1, trials // 2)
    for trial in range(n_dis):
        rng = rng_for(seed, "iso-disjoint", trial)
        x, y = disjoint_psd_pair(dom, rng)
        tx, ty = T.apply(x), T.apply(y)
        prod = (tx @ ty).norm_inf() / (1.0 + tx.norm_inf() * ty.norm_inf())
        worst_dis = max(worst_dis, prod)

        gap = abs(evaluate_norm(norm_domain, x - y) - evaluate_norm(norm_domain, x + y))
        worst_norm_gap = max(worst_norm_gap, gap)
        ok_norm = gap <= 1e-10 * max(1.0, evaluate_norm(norm_domain, x + y))
        f_diff, f_sum = mu(tx - ty), mu(tx + ty)
        scale = max(1.0, f_sum.values.max() if f_sum.pieces else 0.0)
        ok_mu = mu_values_equal(f_diff, f_sum, tol * scale)
        ok_prod = prod <= tol
        link_norm &= ok_norm
        link_mu &= ok_mu
        link_prod &= ok_prod
        if first_broken is None:
            for name, ok in (("norm-equality", ok_norm), ("mu-equality", ok_mu),
                             ("product-zero", ok_prod)):
                if not ok:
                    first_broken = name
                    break
    disjointness = CheckStats(worst_dis <= tol, n_dis, worst_dis)
    chain = ChainReport(link_norm, link_mu, link_prod, first_broken, worst_norm_gap)

    # B = T(1) and commutation
    B = T.apply(dom.identity())
    basis_images = [unvectorize(cod, col) for col in T.matrix.T]
    comm = 0.0
    for img in basis_images:
        comm = max(comm, (B @ img - img @ B).norm_inf())

    # Jordan extraction J = B^+ T on the support of B
    J: JordanMap | None = None
    jordan_failure: JordanFailure | None = None
    fact_res = float("inf")
    supp_res = float("inf")
    if B.is_hermitian(tol):
        smax = max((float(s[0]) if s.size else 0.0) for s in singular_values(B))
        cut = tolerances().alg * max(1.0, smax)
        b_pinv = functional_calculus(B, lambda t: 1.0 / t if t > cut else 0.0)
        j_map = T.left_compose(b_pinv)
        verified = verify_jordan(j_map, seed=seed, n_square=100, n_pairs=25, n_psd=15)
        if isinstance(verified, JordanMap):
            J = verified
            fact_res = 0.0
            rng = rng_for(seed, "iso-factorization")
            test_set = basis_images_domain(dom) + [gaussian(dom, rng) for _ in range(50)]
            for x in test_set:
                fact_res = max(fact_res, (T.apply(x) - B @ J.apply(x)).norm_inf())
            supp_res = 0.0
            for trial in range(50):
                rng = rng_for(seed, "iso-support", trial)
                e = _random_projection(dom, rng)
                supp_res = max(supp_res, (J.apply(e) - support_projection(T.apply(e))).norm_inf())
                x = psd(dom, rng)
                supp_res = max(supp_res,
                               (support_projection(T.apply(x)) - J.apply(support_projection(x))).norm_inf())
        else:
            jordan_failure = verified
    return IsometryAnalysis(positive, isometric, disjointness, chain, B, comm,
                            J, jordan_failure, fact_res, supp_res)


def basis_images_domain(dom: FiniteAlgebra) -> list[Operator]:
    return [e for _, _, _, e in dom.matrix_units()]


def _random_projection(alg: FiniteAlgebra, rng: np.random.Generator) -> Operator:
    from .algebra import spectral_projection

    h = hermitian(alg, rng)
    cut = float(rng.uniform(-0.3, 0.3))
    return spectral_projection(h, cut, float("inf"))


@dataclasses.dataclass(frozen=True)
class SynthSpec:
    """Recipe for a synthesized map T = B . J.

    ``b_blocks`` holds one nonnegative scalar per codomain block (zero on
    blocks no source feeds).  For an Lp -> Lp pair with equal exponent the
    calibration sum_t c'_t beta_t^p = c_s is enforced per source block at
    construction; other norm pairs are accepted but flagged uncalibrated
    and only analyzed, never asserted isometric.
    """

    plan: JordanPlan
    b_blocks: tuple[float, ...]
    norm_domain: NormSpec
    norm_codomain: NormSpec

    def __post_init__(self):
        if len(self.b_blocks) != self.plan.codomain.n_blocks:
            raise CalibrationError("need one scalar per codomain block")
        if any(b < 0.0 for b in self.b_blocks):
            raise CalibrationError("B scalars must be nonnegative")
        if self.calibratable:
            p = self.norm_domain.p
            for s, (dim, c_s) in enumerate(self.plan.domain.blocks):
                lhs = 0.0
                for e in self.plan.entries:
                    if e.source == s:
                        c_t = self.plan.codomain.weights[e.target]
                        lhs += c_t * self.b_blocks[e.target] ** p
                if abs(lhs - c_s) > 1e-9 * max(1.0, c_s):
                    raise CalibrationError(
                        f"source block {s}: sum c'_t beta_t^{p:g} = {lhs:.12g} "
                        f"!= {c_s:.12g}")

    @property
    def calibratable(self) -> bool:
        return (isinstance(self.norm_domain, Lp) and isinstance(self.norm_codomain, Lp)
                and self.norm_domain.p == self.norm_codomain.p)

    @property
    def calibrated(self) -> bool:
        return self.calibratable

    def b_operator(self) -> Operator:
        cod = self.plan.codomain
        blocks = [beta * np.eye(d, dtype=complex)
                  for d, beta in zip(cod.dims, self.b_blocks)]
        return Operator(cod, blocks)


def synthesize(spec: SynthSpec) -> LinearMap:
    """Build T = B . J from a synthesis recipe; J comes from the plan."""
    J = random_jordan(spec.plan.domain, spec.plan)
    return J.map.left_compose(spec.b_operator())


def synthesized_jordan(spec: SynthSpec) -> JordanMap:
    return random_jordan(spec.plan.domain, spec.plan)


@dataclasses.dataclass(frozen=True)
class ReflectionReport:
    ok: bool
    trials: int
    worst: float
    f_log_monotone_ok: bool
    witness_note: str = ""

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


def check_surjective_reflection(T: LinearMap, norm_codomain: NormSpec,
                                trials: int = 200, seed: int = 0) -> ReflectionReport:
    """For invertible T: solve T(x) = y for random PSD y and check x >= 0.

    Also samples the precondition the statement needs, log-monotonicity of
    the codomain norm.
    """
    if T.matrix.shape[0] != T.matrix.shape[1]:
        raise Singular("map is not square, cannot be surjective")
    s = np.linalg.svd(T.matrix, compute_uv=False)
    if s.size == 0 or s[-1] <= 1e-12 * max(1.0, float(s[0])):
        raise Singular("map matrix is numerically singular")
    tol = tolerances().iso
    cod = T.codomain
    worst = 0.0
    note = ""
    for trial in range(trials):
        rng = rng_for(seed, "reflect", trial)
        y = psd(cod, rng, delta=1e-3 if trial % 2 else 0.0)
        x = unvectorize(T.domain, np.linalg.solve(T.matrix, vectorize(y)))
        herm_defect = (x - x.adjoint()).norm_inf()
        scale = max(1.0, x.norm_inf())
        bad = herm_defect / scale if herm_defect > tol * scale else \
            max(0.0, -min_eigenvalue(x)) / scale
        if bad > worst:
            worst = bad
            if bad > tol:
                note = f"trial {trial}: preimage of a PSD operator fails positivity"

    mono_ok = True
    for trial in range(10):
        rng = rng_for(seed, "reflect-mono", trial)
        a = psd(cod, rng, delta=1e-3)
        h = hermitian(cod, rng)
        h = h / (h.norm_inf() + 1e-3)
        root = functional_calculus(a, lambda t: t ** 0.5 if t > 0 else 0.0)
        b = root @ h @ root
        if not log_submajorizes(mu(b), mu(a)).holds:
            continue
        if evaluate_norm(norm_codomain, b) > evaluate_norm(norm_codomain, a) * (1 + 1e-9) + 1e-12:
            mono_ok = False
    return ReflectionReport(worst <= tol and mono_ok, trials, worst, mono_ok, note)


@dataclasses.dataclass(frozen=True)
class CentralBReport:
    status: str  # "central" | "factor" | "not-applicable" | "failed"
    ok: bool | None
    alpha: float | None
    residual: float

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


def central_B_check(analysis: IsometryAnalysis, onto: bool) -> CentralBReport:
    """For surjective analyses, verify B commutes with the codomain; on a
    single-block codomain (factor) verify B = alpha 1."""
    if analysis.J is None:
        raise JMissing("analysis carries no Jordan map")
    cod = analysis.J.codomain
    j_surjective = analysis.J.map.rank() == cod.vector_dim
    if not (onto and j_surjective):
        return CentralBReport("not-applicable", None, None, 0.0)
    tol = tolerances().iso
    B = analysis.B
    worst = 0.0
    for _, _, _, e in cod.matrix_units():
        worst = max(worst, (B @ e - e @ B).norm_inf())
    if cod.n_blocks == 1:
        from .algebra import trace

        alpha = float(np.real(trace(B))) / cod.total_trace
        dev = (B - alpha * cod.identity()).norm_inf()
        worst = max(worst, dev)
        return CentralBReport("factor", worst <= tol, alpha, worst)
    return CentralBReport("central", worst <= tol, None, worst)
