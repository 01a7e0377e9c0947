"""Named randomized suites executing the library's invariants.

Every suite derives a fresh generator per (seed, suite, trial), so runs
are reproducible and independent of execution order; parallel and serial
runs produce identical reports.  Failures carry bounded witness payloads
sufficient to reproduce the trial.
"""

from __future__ import annotations

import dataclasses
from typing import Callable

import numpy as np

from .algebra import (Operator, functional_calculus, spectral_decompose,
                      spectral_projection, trace)
from .config import tolerances
from .errors import LogmajError
from .isometry import (SynthSpec, analyze, central_B_check,
                       check_surjective_reflection, synthesize)
from .jordan import (JordanMap, PlanEntry, jordan_abs_residual, random_jordan,
                     random_plan, stormer_split, verify_jordan)
from .majorization import (disjointness_from_mu_equality, fk_determinant,
                           log_submajorizes, mu_values_equal, submajorizes)
from .norms import (LogF, Lorentz, Lp, check_delta_axioms, check_slm,
                    check_symmetric, norm_label)
from .sampling import (commuting_pair, disjoint_psd_pair, gaussian, hermitian,
                       hermitian_contraction, psd, random_algebra, rng_for,
                       unitary)
from .stepfun import StepFunction, mu, pointwise_product


@dataclasses.dataclass
class SuiteResult:
    name: str
    passed: bool
    trials: int
    failures: list
    stats: dict

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "trials": self.trials,
            "failures": self.failures[:5],
            "stats": self.stats,
        }


def _fail(failures: list, trial: int, what: str, **data):
    if len(failures) < 5:
        entry = {"trial": trial, "what": what}
        entry.update(data)
        failures.append(entry)


def _sandwich_pair(rng: np.random.Generator):
    """(a, b) with a >= 0 hermitian b and -a <= b <= a, covering singular
    and well-conditioned a."""
    alg = random_algebra(rng)
    mode = rng.integers(0, 3)
    a = psd(alg, rng, delta=1e-3 if mode == 1 else 0.0)
    if mode == 2:
        h0 = hermitian(alg, rng)
        p = spectral_projection(h0, 0.0, float("inf"))
        a = p @ a @ p  # rank-deficient regime
    h = hermitian_contraction(alg, rng)
    root = functional_calculus(a, lambda t: t ** 0.5 if t > 0.0 else 0.0)
    b = root @ h @ root
    return a, b


def suite_sandwich(trials: int, seed: int, fault: str | None = None) -> SuiteResult:
    failures = []
    worst = float("inf")
    for trial in range(trials):
        rng = rng_for(seed, "sandwich-logmaj", trial)
        a, b = _sandwich_pair(rng)
        verdict = log_submajorizes(mu(b), mu(a))
        worst = min(worst, verdict.slack)
        if not verdict.holds:
            _fail(failures, trial, "log-submajorisation failed",
                  slack=verdict.slack, worst_t=verdict.worst_t)
        elif verdict.slack != float("-inf") and verdict.slack < -1e-8:
            _fail(failures, trial, "slack below tolerance",
                  slack=verdict.slack, worst_t=verdict.worst_t)
    return SuiteResult("sandwich-logmaj", not failures, trials, failures,
                       {"min_slack": worst})


def suite_det_monotone(trials: int, seed: int, fault: str | None = None) -> SuiteResult:
    failures = []
    for trial in range(trials):
        rng = rng_for(seed, "sandwich-logmaj", trial)  # same pairs as the sandwich suite
        a, b = _sandwich_pair(rng)
        da, db = fk_determinant(a), fk_determinant(b)
        if db > da * (1.0 + 1e-8):
            _fail(failures, trial, "determinant monotonicity failed", det_a=da, det_b=db)
    return SuiteResult("det-monotone", not failures, trials, failures, {})


def suite_product(trials: int, seed: int, fault: str | None = None) -> SuiteResult:
    failures = []
    for trial in range(trials):
        rng = rng_for(seed, "product-logmaj", trial)
        alg = random_algebra(rng)
        x, y = gaussian(alg, rng), gaussian(alg, rng)
        verdict = log_submajorizes(mu(x @ y), pointwise_product(mu(x), mu(y)))
        if not verdict.holds:
            _fail(failures, trial, "product inequality failed",
                  slack=verdict.slack, worst_t=verdict.worst_t)
    return SuiteResult("product-logmaj", not failures, trials, failures, {})


_POWERS = (0.5, 1.0, 2.0, 3.7)


def suite_power_transfer(trials: int, seed: int, fault: str | None = None) -> SuiteResult:
    failures = []
    for trial in range(trials):
        rng = rng_for(seed, "power-transfer", trial)
        a, b = _sandwich_pair(rng)
        fa, fb = mu(a), mu(b)
        if not log_submajorizes(fb, fa).holds:
            continue
        for p in _POWERS:
            verdict = submajorizes(fb.power(p), fa.power(p))
            if not verdict.holds:
                _fail(failures, trial, f"power transfer failed at p={p}",
                      slack=verdict.slack, worst_t=verdict.worst_t)
    return SuiteResult("power-transfer", not failures, trials, failures, {})


_CONVEX = (("relu", lambda t: max(t, 0.0)), ("exp", np.exp), ("square", lambda t: t * t))


def suite_convex_transfer(trials: int, seed: int, fault: str | None = None) -> SuiteResult:
    # The transfer is exercised in its increasing-convex form on
    # nonnegative decreasing inputs (powers of mu), which is the form the
    # downstream results consume.
    failures = []
    for trial in range(trials):
        rng = rng_for(seed, "convex-transfer", trial)
        a, b = _sandwich_pair(rng)
        f = mu(b).power(2.0)
        g = mu(a).power(2.0)
        if not submajorizes(f, g).holds:
            continue
        for name, phi in _CONVEX:
            verdict = submajorizes(f.map_values(phi).rearrange(), g.map_values(phi).rearrange())
            if not verdict.holds:
                _fail(failures, trial, f"convex transfer failed for {name}",
                      slack=verdict.slack)
    return SuiteResult("convex-transfer", not failures, trials, failures, {})


def suite_mu_rigidity(trials: int, seed: int, fault: str | None = None) -> SuiteResult:
    tol = tolerances()
    failures = []
    for trial in range(trials):
        rng = rng_for(seed, "mu-rigidity", trial)
        alg = random_algebra(rng)
        a = psd(alg, rng, delta=1e-3)
        fa = mu(a)
        scale = max(1.0, float(fa.values.max()))
        # equal pair: identical mu and identical operators
        if not mu_values_equal(fa, mu(a), tol.maj * scale):
            _fail(failures, trial, "mu of equal operators differs")
        # perturbed pair 0 <= b <= a must change mu detectably
        dec = spectral_decompose(a)
        top = max(float(w[0]) for w in dec.eigenvalues if w.size)
        if top <= 1e-6:
            continue
        k = max(range(alg.n_blocks), key=lambda i: dec.eigenvalues[i][0])
        lam_k = float(dec.eigenvalues[k][0])
        eps = 0.5 * lam_k
        p = spectral_projection(a, lam_k - 1e-9 * max(1.0, lam_k), float("inf"))
        b = a - eps * p
        if mu_values_equal(mu(b), fa, 10 * tol.alg * scale):
            _fail(failures, trial, "perturbation left mu unchanged", eps=eps)
        if (a - b).norm_inf() <= 10 * tol.alg:
            _fail(failures, trial, "perturbation too small to be a control")
    return SuiteResult("mu-rigidity", not failures, trials, failures, {})


def suite_projection_rigidity(trials: int, seed: int, fault: str | None = None) -> SuiteResult:
    tol = tolerances()
    failures = []
    for trial in range(trials):
        rng = rng_for(seed, "projection-rigidity", trial)
        alg = random_algebra(rng)
        z = psd(alg, rng, delta=1e-3)
        dec = spectral_decompose(z)
        eigs = np.sort(np.concatenate([w for w in dec.eigenvalues]))
        top = float(eigs[-1])
        lam = None
        for _ in range(16):
            cand = float(rng.uniform(0.2, 0.8)) * top
            if np.all(np.abs(eigs - cand) > 1e-6 * max(1.0, top)):
                lam = cand
                break
        if lam is None:
            continue
        r = spectral_projection(z, lam, float("inf"))
        t_r = float(np.real(trace(r)))
        if t_r <= 0.0:
            continue
        scale = max(1.0, top)
        fz = mu(z).truncate(t_r)
        frzr = mu(r @ z @ r).truncate(t_r)
        if not mu_values_equal(fz, frzr, tol.maj * scale):
            _fail(failures, trial, "mu(rzr) != mu(z) on (0, tau(r))")
        # a rotated projection of equal trace must break the equality
        u = unitary(alg, rng)
        p = u @ r @ u.adjoint()
        if (p - r).norm_inf() > 1e-6:
            fpzp = mu(p @ z @ p).truncate(t_r)
            if mu_values_equal(fz, fpzp, tol.maj * scale):
                _fail(failures, trial, "rotated projection preserved mu")
    return SuiteResult("projection-rigidity", not failures, trials, failures, {})


def suite_anticommute(trials: int, seed: int, fault: str | None = None) -> SuiteResult:
    tol = tolerances()
    failures = []
    checked = 0
    for trial in range(trials):
        rng = rng_for(seed, "anticommute", trial)
        alg = random_algebra(rng)
        x, y = disjoint_psd_pair(alg, rng)
        anti = (x @ y + y @ x).norm_inf()
        scale = 1.0 + x.norm_inf() * y.norm_inf()
        if anti <= tol.alg * scale:
            checked += 1
            if (x @ y).norm_inf() > 10 * tol.alg * scale:
                _fail(failures, trial, "anticommuting PSD pair with nonzero product",
                      product=(x @ y).norm_inf())
        # control: overlapping pair must not satisfy the hypothesis
        w = psd(alg, rng)
        x2, y2 = x + w, y + w
        if (x2 @ y2 + y2 @ x2).norm_inf() <= tol.alg * scale and w.norm_inf() > 1e-3:
            _fail(failures, trial, "overlapping pair passed the anticommutator cut")
    return SuiteResult("anticommute", not failures, trials, failures,
                       {"hypothesis_hits": checked})


def suite_sum_diff(trials: int, seed: int, fault: str | None = None) -> SuiteResult:
    failures = []
    for trial in range(trials):
        rng = rng_for(seed, "sum-diff", trial)
        alg = random_algebra(rng)
        x, y = disjoint_psd_pair(alg, rng)
        diag = disjointness_from_mu_equality(x, y)
        if not (diag.mu_equal and diag.product_zero):
            _fail(failures, trial, "disjoint pair misclassified",
                  mu_equal=diag.mu_equal, product_zero=diag.product_zero)
        # overlapping pair: make a shared support component and expect
        # mu-inequality
        w = psd(alg, rng)
        x2 = x + w
        y2 = y + w
        if (x2 @ y2).norm_inf() > 1e-6:
            diag2 = disjointness_from_mu_equality(x2, y2)
            if diag2.mu_equal:
                _fail(failures, trial, "overlapping pair reported mu-equal")
            if diag2.violation:
                _fail(failures, trial, "mu-equality/disjointness rigidity violated", trial_kind="overlap")
        if diag.violation:
            _fail(failures, trial, "mu-equality/disjointness rigidity violated", trial_kind="disjoint")
    return SuiteResult("sum-diff", not failures, trials, failures, {})


_LORENTZ_WEIGHT = StepFunction(((2.0, 8.0), (1.0, 8.0), (0.5, 24.0)))


def _norm_variants() -> list:
    return [Lp(0.5), Lp(1.0), Lp(2.0), Lorentz(1.0, _LORENTZ_WEIGHT), LogF()]


def suite_norm_axioms(trials: int, seed: int, fault: str | None = None) -> SuiteResult:
    failures = []
    stats = {}
    per_variant = max(2, trials // 5)
    for spec in _norm_variants():
        rng = rng_for(seed, f"norm-axioms:{norm_label(spec)}")
        alg = random_algebra(rng)
        samples = [gaussian(alg, rng) for _ in range(per_variant)]
        report = check_delta_axioms(spec, samples)
        stats[norm_label(spec)] = report.stats
        if not report.passed:
            for v in report.axiom_violations[:2]:
                _fail(failures, 0, f"{norm_label(spec)}: {v.axiom}",
                      witness=v.witness, magnitude=v.magnitude)
        sym = check_symmetric(spec, max(10, trials // 10), seed)
        if not sym.passed:
            _fail(failures, 0, f"{norm_label(spec)}: symmetry violations",
                  count=len(sym.axiom_violations))
    return SuiteResult("norm-axioms", not failures, trials, failures, stats)


def suite_slm(trials: int, seed: int, fault: str | None = None) -> SuiteResult:
    failures = []
    stats = {}
    for spec in _norm_variants():
        report = check_slm(spec, trials, seed)
        stats[norm_label(spec)] = report.stats
        if not report.passed:
            for v in report.axiom_violations[:2]:
                _fail(failures, 0, f"{norm_label(spec)}: {v.axiom}",
                      witness=v.witness, magnitude=v.magnitude)
    return SuiteResult("slm-all-variants", not failures, trials, failures, stats)


def suite_jordan_roundtrip(trials: int, seed: int, fault: str | None = None) -> SuiteResult:
    tol = tolerances()
    failures = []
    worst_cert = 0.0
    worst_abs = 0.0
    worst_comm = 0.0
    for trial in range(trials):
        rng = rng_for(seed, "jordan-roundtrip", trial)
        plan = random_plan(rng)
        J = random_jordan(plan.domain, plan)
        # independent verification at full sample counts, not just the
        # reduced construction-time certificate
        verified = verify_jordan(J.map, seed=seed + trial, n_square=200,
                                 n_pairs=50, n_psd=25)
        if not isinstance(verified, JordanMap):
            _fail(failures, trial, "generated map failed verification",
                  kind=verified.kind, residual=verified.residual)
            continue
        verified.plan = plan
        J = verified
        worst_cert = max(worst_cert, J.certificate.max_residual)
        if J.certificate.max_residual > 1e-10:
            _fail(failures, trial, "verification residual too large",
                  residual=J.certificate.max_residual)
        x = gaussian(plan.domain, rng)
        res = jordan_abs_residual(J, x)
        worst_abs = max(worst_abs, res)
        if res > 1e-9 * (1.0 + x.norm_inf()):
            _fail(failures, trial, "abs identity residual too large", residual=res)
        cx, cy = commuting_pair(plan.domain, rng)
        comm_res = (J.apply(cx @ cy) - J.apply(cx) @ J.apply(cy)).norm_inf()
        worst_comm = max(worst_comm, comm_res)
        if comm_res > tol.jordan:
            _fail(failures, trial, "commuting multiplicativity failed", residual=comm_res)
        h = hermitian(plan.domain, rng)
        if J.apply(h).norm_inf() > h.norm_inf() + tol.jordan:
            _fail(failures, trial, "contractivity failed")
    return SuiteResult("jordan-roundtrip", not failures, trials, failures,
                       {"worst_certificate_residual": worst_cert,
                        "worst_abs_residual": worst_abs,
                        "worst_commuting_residual": worst_comm})


def _split_matches_plan(J: JordanMap) -> tuple[bool, str]:
    split = stormer_split(J)
    expected = J.plan.effective_flags()
    cod = J.codomain
    for target, flag in expected.items():
        hit = None
        for p, kind in zip(split.projections, split.kinds):
            if np.linalg.norm(p.blocks[target]) > 0.5:
                hit = kind
                break
        if hit is None:
            return False, f"target {target} not covered by any central summand"
        if hit != flag:
            return False, f"target {target}: classified {hit}, plan says {flag}"
    return True, ""


def suite_stormer_roundtrip(trials: int, seed: int, fault: str | None = None) -> SuiteResult:
    failures = []
    for trial in range(trials):
        rng = rng_for(seed, "stormer-roundtrip", trial)
        plan = random_plan(rng, fanout=bool(trial % 2))
        J = random_jordan(plan.domain, plan)
        try:
            ok, why = _split_matches_plan(J)
        except LogmajError as exc:
            ok, why = False, str(exc)
        if not ok:
            _fail(failures, trial, f"split mismatch: {why}")
        # the classifier must not be vacuous: a transposed block of dim >= 2
        # must fail plain multiplicativity somewhere
        anti_targets = [t for t, f in J.plan.effective_flags().items() if f == "anti"]
        if anti_targets:
            t0 = anti_targets[0]
            witnessed = False
            for _ in range(8):
                x, y = hermitian(plan.domain, rng), hermitian(plan.domain, rng)
                lhs = J.apply(x @ y)
                rhs = J.apply(x) @ J.apply(y)
                if np.linalg.norm((lhs - rhs).blocks[t0]) > 1e-6:
                    witnessed = True
                    break
            if not witnessed:
                _fail(failures, trial, "anti block behaved multiplicatively")
        split = stormer_split(J)
        z = split.z
        comm = 0.0
        for _, _, _, e in plan.domain.matrix_units():
            img = J.apply(e)
            comm = max(comm, (z @ img - img @ z).norm_inf())
        if comm > tolerances().jordan:
            _fail(failures, trial, "z fails to be central", residual=comm)
    return SuiteResult("stormer-roundtrip", not failures, trials, failures, {})


def _calibrated_synth_spec(rng: np.random.Generator, p: float) -> SynthSpec:
    plan = random_plan(rng, fanout=bool(rng.uniform() < 0.5))
    dom, cod = plan.domain, plan.codomain
    betas = [0.0] * cod.n_blocks
    by_source: dict[int, list[PlanEntry]] = {}
    for e in plan.entries:
        by_source.setdefault(e.source, []).append(e)
    for s, (dim, c_s) in enumerate(dom.blocks):
        entries = by_source.get(s, [])
        shares = rng.uniform(0.5, 1.5, size=len(entries))
        shares = shares / shares.sum()
        for e, share in zip(entries, shares):
            c_t = cod.weights[e.target]
            betas[e.target] = float((c_s * share / c_t) ** (1.0 / p))
    return SynthSpec(plan, tuple(betas), Lp(p), Lp(p))


_SYNTH_POWERS = (0.5, 1.0, 2.0, 3.0)


def suite_isometry_roundtrip(trials: int, seed: int, fault: str | None = None) -> SuiteResult:
    failures = []
    worst_fact = 0.0
    worst_supp = 0.0
    for trial in range(trials):
        rng = rng_for(seed, "isometry-roundtrip", trial)
        p = _SYNTH_POWERS[trial % len(_SYNTH_POWERS)]
        spec = _calibrated_synth_spec(rng, p)
        T = synthesize(spec)
        if fault == "calibration":
            # rebuild T with one miscalibrated scalar, bypassing validation
            J = random_jordan(spec.plan.domain, spec.plan)
            bad = spec.b_operator()
            k = max(range(len(spec.b_blocks)), key=lambda i: spec.b_blocks[i])
            blocks = [b.copy() for b in bad.blocks]
            blocks[k] = blocks[k] * 1.02
            T = J.map.left_compose(Operator(spec.plan.codomain, blocks))
        report = analyze(T, spec.norm_domain, spec.norm_codomain,
                         trials=30, seed=seed + trial)
        worst_fact = max(worst_fact, report.factorization_residual)
        worst_supp = max(worst_supp, report.support_identity_residual)
        if not report.passed:
            _fail(failures, trial, "analysis failed",
                  positive=report.positive.ok, isometric=report.isometric.ok,
                  disjoint=report.disjointness.ok,
                  fact=report.factorization_residual,
                  supp=report.support_identity_residual,
                  chain=report.chain.first_broken)
            continue
        if report.factorization_residual > 1e-8:
            _fail(failures, trial, "factorization residual too large",
                  residual=report.factorization_residual)
        if report.support_identity_residual > 1e-8:
            _fail(failures, trial, "support identity residual too large",
                  residual=report.support_identity_residual)
        if not report.chain.intact:
            _fail(failures, trial, "proof chain broken", link=report.chain.first_broken)
        if report.J is not None:
            report.J.plan = spec.plan
            ok, why = _split_matches_plan(report.J)
            if not ok:
                _fail(failures, trial, f"extracted split mismatch: {why}")
    return SuiteResult("isometry-roundtrip", not failures, trials, failures,
                       {"worst_factorization_residual": worst_fact,
                        "worst_support_residual": worst_supp})


def _invertible_synth_spec(rng: np.random.Generator, p: float) -> SynthSpec:
    plan = random_plan(rng, fanout=False)
    dom, cod = plan.domain, plan.codomain
    betas = [0.0] * cod.n_blocks
    for e in plan.entries:
        c_s = dom.weights[e.source]
        c_t = cod.weights[e.target]
        betas[e.target] = float((c_s / c_t) ** (1.0 / p))
    return SynthSpec(plan, tuple(betas), Lp(p), Lp(p))


def suite_surjective_reflection(trials: int, seed: int, fault: str | None = None) -> SuiteResult:
    failures = []
    n_maps = max(1, trials // 50)
    per_map = max(1, trials // n_maps)
    done = 0
    for m in range(n_maps):
        rng = rng_for(seed, "surjective-reflection", m)
        p = _SYNTH_POWERS[m % len(_SYNTH_POWERS)]
        spec = _invertible_synth_spec(rng, p)
        T = synthesize(spec)
        report = check_surjective_reflection(T, spec.norm_codomain,
                                             trials=per_map, seed=seed + m)
        done += per_map
        if not report.ok:
            _fail(failures, m, "reflection failed", worst=report.worst,
                  note=report.witness_note)
        analysis = analyze(T, spec.norm_domain, spec.norm_codomain, trials=20,
                           seed=seed + m)
        if analysis.J is not None:
            central = central_B_check(analysis, onto=True)
            if central.ok is False:
                _fail(failures, m, "B not central for an onto map",
                      residual=central.residual)
    return SuiteResult("surjective-reflection", not failures, done, failures, {})


SUITES: dict[str, tuple[Callable, int]] = {
    "sandwich-logmaj": (suite_sandwich, 1000),
    "det-monotone": (suite_det_monotone, 1000),
    "product-logmaj": (suite_product, 1000),
    "power-transfer": (suite_power_transfer, 500),
    "convex-transfer": (suite_convex_transfer, 500),
    "mu-rigidity": (suite_mu_rigidity, 500),
    "projection-rigidity": (suite_projection_rigidity, 100),
    "anticommute": (suite_anticommute, 500),
    "sum-diff": (suite_sum_diff, 500),
    "norm-axioms": (suite_norm_axioms, 200),
    "slm-all-variants": (suite_slm, 500),
    "jordan-roundtrip": (suite_jordan_roundtrip, 100),
    "stormer-roundtrip": (suite_stormer_roundtrip, 100),
    "isometry-roundtrip": (suite_isometry_roundtrip, 100),
    "surjective-reflection": (suite_surjective_reflection, 500),
}


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Configuration of a suite run; identical configs and inputs yield
    byte-identical reports."""

    seed: int = 0
    trials: int | None = None  # None: per-suite default counts
    only: str | None = None
    jobs: int = 1
    tolerance_overrides: dict | None = None
    output: str | None = None

    def suite_names(self) -> list[str]:
        if self.only is None:
            return list(SUITES)
        if self.only not in SUITES:
            raise LogmajError(f"unknown suite {self.only!r}; "
                              f"known: {', '.join(SUITES)}")
        return [self.only]


def run_suites(config: RunConfig, progress=None) -> dict:
    """Execute the selected suites and return the report document."""
    from . import __version__

    if config.tolerance_overrides:
        from .config import set_tolerances

        set_tolerances(**config.tolerance_overrides)
    names = config.suite_names()

    def run_one(name: str) -> SuiteResult:
        func, default_trials = SUITES[name]
        trials = config.trials if config.trials is not None else default_trials
        result = func(trials, config.seed)
        if progress is not None:
            progress(result)
        return result

    if config.jobs > 1 and len(names) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(run_one, names))
    else:
        results = [run_one(n) for n in names]

    report = {
        "version": __version__,
        "config": {
            "seed": config.seed,
            "trials": config.trials,
            "only": config.only,
            "jobs": config.jobs,
            "tolerance_overrides": config.tolerance_overrides or {},
        },
        "suites": [r.to_json() for r in results],
        "passed": all(r.passed for r in results),
    }
    return report
