"""Normalized learning gain and Welch's two-sample t-test.

The gain formula ``(test3 - test2) / (100 - test2)`` expresses a score
change as the fraction of the maximum possible improvement. The t-test is
the unequal-variance (Welch) variant with Welch-Satterthwaite degrees of
freedom; its two-tailed p-value comes from a continued-fraction evaluation
of the regularized incomplete beta function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


class DenominatorZero(ValueError):
    """test2 = 100 leaves no room for gain and a zero denominator."""


class InsufficientData(ValueError):
    """A group has fewer than two scores."""


class ZeroVariance(ValueError):
    """A group's scores are all identical."""


@dataclass(frozen=True, slots=True)
class ScorePair:
    """Mid-test and post-test percentages for one student."""

    test2: float
    test3: float

    def __post_init__(self) -> None:
        if self.test2 == 100.0:
            raise DenominatorZero("test2 = 100 makes the gain denominator zero")
        if not (0.0 <= self.test2 < 100.0):
            raise ValueError("test2 must lie in [0, 100)")
        if not (0.0 <= self.test3 <= 100.0):
            raise ValueError("test3 must lie in [0, 100]")


@dataclass(frozen=True, slots=True)
class TTestResult:
    t: float
    df: float
    p_two_tailed: float


def normalized_gain(pair: ScorePair) -> float:
    """Achieved fraction of the maximum possible score improvement."""
    return (pair.test3 - pair.test2) / (100.0 - pair.test2)


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    # Modified Lentz evaluation of the continued fraction for the
    # incomplete beta function (Numerical Recipes style).
    tiny = 1e-300
    eps = 1e-16
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 400):
        m2 = 2 * m
        numerator = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + numerator * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numerator / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        numerator = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + numerator * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numerator / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    return h


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b), accurate to ~1e-15 absolute for moderate a, b."""
    if not (a > 0.0 and b > 0.0):
        raise ValueError("shape parameters must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def two_tailed_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for a Student-t variable with ``df`` degrees of freedom."""
    if df <= 0.0:
        raise ValueError("df must be positive")
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return regularized_incomplete_beta(0.5 * df, 0.5, x)


def student_t_cdf(t: float, df: float) -> float:
    """Lower-tail probability of the Student-t distribution."""
    p = two_tailed_p(t, df)
    return 0.5 * p if t < 0.0 else 1.0 - 0.5 * p


def _mean_var(scores: Sequence[float], label: str) -> tuple[int, float, float]:
    n = len(scores)
    if n < 2:
        raise InsufficientData(f"group {label} needs at least 2 scores")
    mean = math.fsum(scores) / n
    var = math.fsum((x - mean) ** 2 for x in scores) / (n - 1)
    if var == 0.0:
        raise ZeroVariance(f"group {label} has zero variance")
    return n, mean, var


def welch_t(group_a: Sequence[float], group_b: Sequence[float]) -> TTestResult:
    """Welch's unequal-variance two-sample t-test, two-tailed."""
    n1, m1, v1 = _mean_var(group_a, "A")
    n2, m2, v2 = _mean_var(group_b, "B")
    se2 = v1 / n1 + v2 / n2
    t = (m1 - m2) / math.sqrt(se2)
    df = se2 * se2 / ((v1 / n1) ** 2 / (n1 - 1) + (v2 / n2) ** 2 / (n2 - 1))
    return TTestResult(t, df, two_tailed_p(t, df))
