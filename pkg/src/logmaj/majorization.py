"""Submajorisation predicates and the Fuglede-Kadison determinant.

Both predicates compare prefix integrals at every breakpoint of the union
partition of the two step functions.  Prefix integrals of step functions
are piecewise linear in t, so extrema of their difference occur at
breakpoints; checking there is exact, no grid sampling is involved.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .algebra import Operator, is_psd
from .config import tolerances
from .errors import NotPSD, ShapeMismatch
from .stepfun import NEG_INF, StepFunction, mu, union_breakpoints


@dataclasses.dataclass(frozen=True)
class MajorizationVerdict:
    """Outcome of a prefix-domination check.

    ``slack`` is the minimum of RHS - LHS over the checked breakpoints
    (+inf when every comparison was trivially satisfied by an infinite
    branch, -inf when domination fails against a -inf right side) and
    ``worst_t`` the breakpoint attaining it.
    """

    holds: bool
    worst_t: float
    slack: float
    checked_points: tuple[float, ...]

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "worst_t": self.worst_t,
            "slack": self.slack,
            "checked_points": list(self.checked_points),
        }


def _checked_pair(b: StepFunction, a: StepFunction, pad: bool):
    if not (b.is_decreasing and a.is_decreasing):
        raise ShapeMismatch("submajorisation requires decreasing step functions")
    if not (b.is_nonnegative and a.is_nonnegative):
        raise ShapeMismatch("submajorisation requires nonnegative step functions")
    la, lb = a.total_length, b.total_length
    if abs(la - lb) > 1e-12 * max(1.0, la, lb):
        if not pad:
            raise ShapeMismatch(f"lengths differ ({lb} vs {la}) and padding is disabled")
        length = max(la, lb)
        a = a.pad_to(length)
        b = b.pad_to(length)
    return b, a


def submajorizes(b: StepFunction, a: StepFunction, pad: bool = True,
                 tol: float | None = None) -> MajorizationVerdict:
    """Check b <<(prec-prec) a: prefix integrals of b dominated by a's.

    The comparison allows an absolute slack of ``tol * max(1, scale)``
    where ``scale`` is the larger total integral.
    """
    if tol is None:
        tol = tolerances().maj
    b, a = _checked_pair(b, a, pad)
    points = union_breakpoints(b, a)
    if points.size == 0:
        return MajorizationVerdict(True, 0.0, 0.0, ())
    scale = max(1.0, abs(b.prefix_integral(b.total_length)),
                abs(a.prefix_integral(a.total_length)))
    holds = True
    slack = math.inf
    worst_t = float(points[0])
    for t in points:
        gap = a.prefix_integral(float(t)) - b.prefix_integral(float(t))
        if gap < slack:
            slack = gap
            worst_t = float(t)
        if gap < -tol * scale:
            holds = False
    if slack == math.inf:
        slack = 0.0
    return MajorizationVerdict(holds, worst_t, slack, tuple(float(t) for t in points))


def log_submajorizes(b: StepFunction, a: StepFunction, pad: bool = True,
                     tol: float | None = None) -> MajorizationVerdict:
    """Check b <<_log a: log-prefix integrals of b dominated by a's.

    -inf on the left is dominated by anything; a finite left side against
    -inf on the right is a failure.  Slack is taken over breakpoints where
    both sides are finite.
    """
    if tol is None:
        tol = tolerances().maj
    b, a = _checked_pair(b, a, pad)
    points = union_breakpoints(b, a)
    if points.size == 0:
        return MajorizationVerdict(True, 0.0, 0.0, ())
    holds = True
    slack = math.inf
    worst_t = float(points[0])
    for t in points:
        lhs = b.log_prefix_integral(float(t))
        rhs = a.log_prefix_integral(float(t))
        if lhs == NEG_INF:
            continue
        if rhs == NEG_INF:
            holds = False
            slack = NEG_INF
            worst_t = float(t)
            continue
        gap = rhs - lhs
        if gap < slack:
            slack = gap
            worst_t = float(t)
        if gap < -tol:
            holds = False
    if slack == math.inf:
        slack = 0.0
    return MajorizationVerdict(holds, worst_t, slack, tuple(float(t) for t in points))


def fk_determinant(x: Operator) -> float:
    """Fuglede-Kadison determinant: exp of the full log-prefix integral.

    Equals the product of all singular values raised to their block trace
    weights; 0 when the operator is singular (the log integral is -inf,
    with singularity decided by the relative rank cut applied in mu).
    """
    f = mu(x)
    log_det = f.log_prefix_integral(f.total_length)
    if log_det == NEG_INF:
        return 0.0
    return float(math.exp(log_det))


def mu_values_equal(f: StepFunction, g: StepFunction, tol: float) -> bool:
    """Pointwise equality of two step functions on the union partition."""
    length = max(f.total_length, g.total_length)
    f = f.pad_to(length)
    g = g.pad_to(length)
    grid = union_breakpoints(f, g)
    cells = np.concatenate([[0.0], grid])
    mids = (cells[:-1] + cells[1:]) / 2.0
    for t in mids:
        if abs(f.value_at(float(t)) - g.value_at(float(t))) > tol:
            return False
    return True


@dataclasses.dataclass(frozen=True)
class DisjointnessDiagnostic:
    """Executable form of the mu-equality => disjointness implication.

    ``violation`` is set when mu(x-y) = mu(x+y) holds but the product is
    not zero, which would falsify the underlying rigidity statement.
    """

    mu_equal: bool
    product_zero: bool

    @property
    def violation(self) -> bool:
        return self.mu_equal and not self.product_zero

    def to_json(self) -> dict:
        return {
            "mu_equal": self.mu_equal,
            "product_zero": self.product_zero,
            "violation": self.violation,
        }


def disjointness_from_mu_equality(x: Operator, y: Operator) -> DisjointnessDiagnostic:
    """Compare mu(x-y) with mu(x+y) and test the product of two PSD operators."""
    if not is_psd(x) or not is_psd(y):
        raise NotPSD("diagnostic requires positive semidefinite operators")
    tol = tolerances()
    f_diff = mu(x - y)
    f_sum = mu(x + y)
    scale = max(1.0, f_sum.values.max() if f_sum.pieces else 0.0)
    mu_equal = mu_values_equal(f_diff, f_sum, tol.maj * scale)
    product = x @ y
    product_zero = product.norm_inf() <= tol.alg * (1.0 + x.norm_inf() * y.norm_inf())
    return DisjointnessDiagnostic(mu_equal, product_zero)
