"""Symmetric Delta-norms: evaluation and axiom/monotonicity checkers.

Three norm families are supported, all functions of mu(x) alone:

* ``Lp(p)``      -- (integral of mu^p)^(1/p), 0 < p < infinity;
* ``Lorentz(p, w)`` -- (integral of mu^p w)^(1/p) against a strictly
  positive non-increasing step weight;
* ``LogF()``     -- integral of log(1 + mu), an F-norm.

Evaluation is exact piecewise arithmetic over the refined partition of
mu(x) and the weight.  The checkers are randomized: they verify the
Delta-norm axioms, the symmetry property (monotonicity under pointwise
mu-domination) and strict log-monotonicity, reporting violations with
witnesses instead of raising.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Sequence, Union

import numpy as np

from .algebra import FiniteAlgebra, Operator
from .config import tolerances
from .errors import GenerationFailure, NegativeValue, WeightTooShort
from .majorization import log_submajorizes
from .sampling import random_algebra, rng_for, unitary
from .stepfun import StepFunction, mu, union_breakpoints, values_on_grid


@dataclasses.dataclass(frozen=True)
class Lp:
    p: float

    def __post_init__(self):
        if not (self.p > 0.0):
            raise ValueError(f"Lp exponent must be positive, got {self.p}")


@dataclasses.dataclass(frozen=True)
class Lorentz:
    p: float
    weight: StepFunction

    def __post_init__(self):
        if not (self.p > 0.0):
            raise ValueError(f"Lorentz exponent must be positive, got {self.p}")
        if not self.weight.pieces:
            raise ValueError("Lorentz weight must be nonempty")
        if not self.weight.is_decreasing:
            raise ValueError("Lorentz weight must be non-increasing")
        if float(self.weight.values.min()) <= 0.0:
            raise ValueError("Lorentz weight must be strictly positive")


@dataclasses.dataclass(frozen=True)
class LogF:
    pass


NormSpec = Union[Lp, Lorentz, LogF]


def norm_label(spec: NormSpec) -> str:
    if isinstance(spec, Lp):
        return f"lp({spec.p:g})"
    if isinstance(spec, Lorentz):
        return f"lorentz({spec.p:g})"
    return "log"


def quasi_constant(spec: NormSpec) -> float | None:
    """Closed-form quasi-triangle constant, or None when only an empirical
    estimate is reported (Lorentz)."""
    if isinstance(spec, Lp):
        return 1.0 if spec.p >= 1.0 else 2.0 ** (1.0 / spec.p - 1.0)
    if isinstance(spec, LogF):
        return 1.0
    return None


def evaluate_norm_mu(spec: NormSpec, f: StepFunction) -> float:
    """Evaluate a norm on an already-computed singular value function."""
    if not f.is_nonnegative:
        raise NegativeValue("norms are evaluated on nonnegative mu functions")
    if isinstance(spec, Lp):
        total = float(np.sum(f.values ** spec.p * f.widths)) if f.pieces else 0.0
        return total ** (1.0 / spec.p)
    if isinstance(spec, LogF):
        total = float(np.sum(np.log1p(f.values) * f.widths)) if f.pieces else 0.0
        return total
    length = f.total_length
    if spec.weight.total_length < length * (1.0 - 1e-12):
        raise WeightTooShort(
            f"weight length {spec.weight.total_length} < trace length {length}")
    w = spec.weight.truncate(min(length, spec.weight.total_length))
    grid = union_breakpoints(f, w)
    fv = values_on_grid(f, grid)
    wv = values_on_grid(w, grid)
    cells = np.concatenate([[0.0], grid])
    widths = np.diff(cells)
    total = float(np.sum(fv ** spec.p * wv * widths))
    return total ** (1.0 / spec.p)


def evaluate_norm(spec: NormSpec, x: Operator) -> float:
    return evaluate_norm_mu(spec, mu(x))


@dataclasses.dataclass(frozen=True)
class Violation:
    axiom: str
    witness: str
    magnitude: float

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "witness": self.witness, "magnitude": self.magnitude}


@dataclasses.dataclass(frozen=True)
class NormCheckReport:
    passed: bool
    axiom_violations: tuple[Violation, ...]
    trials: int
    stats: dict

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "violations": [v.to_json() for v in self.axiom_violations],
            "trials": self.trials,
            "stats": self.stats,
        }


def _report(violations: list[Violation], trials: int, stats: dict | None = None) -> NormCheckReport:
    return NormCheckReport(not violations, tuple(violations), trials, stats or {})


def check_delta_axioms(spec: NormSpec, samples: Sequence[Operator]) -> NormCheckReport:
    """Verify the four Delta-norm axioms on a sample set.

    Positivity and definiteness, contractivity under |alpha| <= 1,
    vanishing along alpha = 2^-k, and the quasi-triangle inequality with
    the variant's constant.  For Lorentz norms the constant is estimated
    empirically (max observed ratio) and reported in ``stats``.
    """
    if len(samples) < 2:
        raise ValueError("need at least two samples")
    tol = tolerances().norm
    violations: list[Violation] = []
    norms = [evaluate_norm(spec, x) for x in samples]

    zero = samples[0].algebra.zero()
    if evaluate_norm(spec, zero) != 0.0:
        violations.append(Violation("definiteness", "zero operator", evaluate_norm(spec, zero)))
    for i, (x, nx) in enumerate(zip(samples, norms)):
        if nx < 0.0:
            violations.append(Violation("positivity", f"sample {i}", nx))
        if x.norm_inf() > 1e-12 and nx <= 0.0:
            violations.append(Violation("definiteness", f"sample {i}", nx))

    rng = np.random.default_rng(20570)
    for i, (x, nx) in enumerate(zip(samples, norms)):
        alpha = rng.uniform(0.0, 1.0) * np.exp(1j * rng.uniform(0.0, 2 * np.pi))
        na = evaluate_norm(spec, alpha * x)
        if na > nx * (1.0 + tol) + tol:
            violations.append(Violation("contractivity", f"sample {i}, |alpha|={abs(alpha):.3f}",
                                        na - nx))

    for i, x in enumerate(samples[: min(8, len(samples))]):
        prev = evaluate_norm(spec, x)
        for k in range(1, 41):
            cur = evaluate_norm(spec, (2.0 ** -k) * x)
            if cur > prev * (1.0 + tol) + tol:
                violations.append(Violation("continuity-at-0", f"sample {i}, k={k}", cur - prev))
                break
            prev = cur
        else:
            if prev > 1e-7:
                violations.append(Violation("continuity-at-0", f"sample {i} tail", prev))

    c_closed = quasi_constant(spec)
    worst_ratio = 0.0
    for i in range(len(samples) - 1):
        x, y = samples[i], samples[i + 1]
        denom = norms[i] + norms[i + 1]
        if denom <= 1e-15:
            continue
        ratio = evaluate_norm(spec, x + y) / denom
        worst_ratio = max(worst_ratio, ratio)
        if c_closed is not None and ratio > c_closed * (1.0 + 1e-9) + 1e-12:
            violations.append(Violation("quasi-triangle", f"pair ({i}, {i+1})", ratio - c_closed))
    stats = {"quasi_triangle_worst_ratio": worst_ratio}
    if c_closed is not None:
        stats["quasi_triangle_constant"] = c_closed
    elif not math.isfinite(worst_ratio):
        violations.append(Violation("quasi-triangle", "non-finite ratio", worst_ratio))
    return _report(violations, len(samples), stats)


def _shrunken_copy(x: Operator, rng: np.random.Generator) -> Operator:
    """y with mu(y) <= mu(x): shrink singular values, fresh unitaries."""
    u = unitary(x.algebra, rng)
    v = unitary(x.algebra, rng)
    blocks = []
    for b in x.blocks:
        uu, s, vh = np.linalg.svd(b)
        s = s * rng.uniform(0.0, 1.0, size=s.shape)
        blocks.append(uu @ np.diag(s.astype(complex)) @ vh)
    y = Operator(x.algebra, blocks)
    return u @ y @ v


def check_symmetric(spec: NormSpec, trials: int, seed: int,
                    algebra: FiniteAlgebra | None = None) -> NormCheckReport:
    """Monotonicity under mu-domination: mu(y) <= mu(x) implies
    ||y|| <= ||x||, on randomly generated pairs."""
    from .sampling import gaussian  # local import to avoid cycle at module load

    tol = tolerances().norm
    violations: list[Violation] = []
    label = f"symmetric:{norm_label(spec)}"
    for trial in range(trials):
        rng = rng_for(seed, label, trial)
        alg = algebra or random_algebra(rng)
        x = gaussian(alg, rng)
        y = _shrunken_copy(x, rng)
        nx = evaluate_norm(spec, x)
        ny = evaluate_norm(spec, y)
        if ny > nx + tol * max(1.0, nx):
            violations.append(Violation("symmetry", f"trial {trial}", ny - nx))
    return _report(violations, trials)


def _flatten_and_shrink(slots: list[tuple[float, float]], rng: np.random.Generator):
    """Redistribute log-mass of a descending slot list and shrink.

    A contiguous run of positive slots is replaced by its width-weighted
    geometric mean (this preserves total log-mass and lowers every proper
    log-prefix), then all values are scaled by a factor rho < 1.  Returns
    the new values and the constructed log-mass gap at full length.
    """
    values = [v for v, _ in slots]
    widths = [w for _, w in slots]
    pos = [i for i, v in enumerate(values) if v > 0.0]
    if len(pos) >= 2 and rng.uniform() < 0.7:
        i = int(rng.integers(0, len(pos) - 1))
        j = int(rng.integers(i + 1, len(pos)))
        lo, hi = pos[i], pos[j]
        seg_w = sum(widths[lo:hi + 1])
        seg_log = sum(w * math.log(v) for v, w in zip(values[lo:hi + 1], widths[lo:hi + 1]))
        mean = math.exp(seg_log / seg_w)
        for k in range(lo, hi + 1):
            values[k] = mean
    rho = float(rng.uniform(0.5, 0.95))
    values = [v * rho for v in values]
    pos_width = sum(w for v, w in zip(values, widths) if v > 0.0)
    gap = pos_width * (-math.log(rho))
    return values, gap


def check_slm(spec: NormSpec, trials: int, seed: int,
              algebra: FiniteAlgebra | None = None) -> NormCheckReport:
    """Strict log-monotonicity on constructed strict pairs.

    Per trial, a random y is drawn and x is built with
    mu(x) <<_log mu(y) and mu(x) != mu(y) by flattening a run of the
    singular value slots of y to its geometric mean and shrinking all
    values by rho < 1.  The pair is verified by the predicate before the
    norm gap is asserted; the strictness threshold is proportional to the
    constructed log-mass gap rather than a bare epsilon.
    """
    from .sampling import gaussian

    tol = tolerances()
    violations: list[Violation] = []
    label = f"slm:{norm_label(spec)}"
    produced = 0
    attempts = 0
    max_attempts = 10 * trials
    trial = 0
    while produced < trials:
        if attempts >= max_attempts:
            raise GenerationFailure(
                f"no valid SLM pair in {max_attempts} attempts for {norm_label(spec)}")
        rng = rng_for(seed, label, trial)
        trial += 1
        attempts += 1
        alg = algebra or random_algebra(rng)
        y = gaussian(alg, rng)
        slots: list[tuple[float, float]] = []
        block_sizes = []
        for (d, c), b in zip(alg.blocks, y.blocks):
            s = np.linalg.svd(b, compute_uv=False)
            slots.extend((float(v), c) for v in s)
            block_sizes.append(d)
        order = sorted(range(len(slots)), key=lambda i: -slots[i][0])
        sorted_slots = [slots[i] for i in order]
        new_sorted, gap = _flatten_and_shrink(sorted_slots, rng)
        new_values = [0.0] * len(slots)
        for rank, idx in enumerate(order):
            new_values[idx] = new_sorted[rank]
        diags = []
        pos = 0
        for d in block_sizes:
            diags.append(sorted(new_values[pos:pos + d], reverse=True))
            pos += d
        x = alg.diagonal(diags)
        u = unitary(alg, rng)
        v = unitary(alg, rng)
        x = u @ x @ v
        fx, fy = mu(x), mu(y)
        verdict = log_submajorizes(fx, fy)
        distinct = bool(np.any(np.abs(values_on_grid(fx, union_breakpoints(fx, fy))
                                      - values_on_grid(fy, union_breakpoints(fx, fy))) > 1e-12))
        if not verdict.holds or not distinct:
            continue
        produced += 1
        nx = evaluate_norm(spec, x)
        ny = evaluate_norm(spec, y)
        if nx > ny + tol.norm * max(1.0, ny):
            violations.append(Violation("log-monotone", f"trial {trial - 1}", nx - ny))
        threshold = tol.strict * gap * max(ny, 1e-300)
        if ny - nx <= threshold:
            violations.append(Violation("slm-strict", f"trial {trial - 1}", ny - nx))
    return _report(violations, trials, {"attempts": attempts})
