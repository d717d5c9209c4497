"""Closed-form Haar predictions, coupon-collector combinatorics, averaging.

Coverage probabilities are evaluated exactly with Python integers where
that is cheap, and in floating point (inclusion-exclusion with compensated
summation, or a non-negative occupancy recursion) otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import AggregationError, InvalidParameterError, NumericalInconsistencyError
from .krylov import ComplexitySeries

__all__ = [
    "StirlingTable",
    "STIRLING",
    "stirling2",
    "expected_complexity_haar",
    "expected_complexity_haar_exact",
    "coverage_probability",
    "partial_coverage_probability",
    "partial_coverage_distribution",
    "SaturationBound",
    "saturation_time_bound",
    "MinComplexityEstimate",
    "min_complexity_estimate",
    "AveragedSeries",
    "aggregate",
    "EXACT_MAX_N",
]

EXACT_MAX_N = 64
# float inclusion-exclusion is trusted only while the largest term is at
# most this multiple of the result
_CANCELLATION_LIMIT = 1e4


class StirlingTable:
    """Rows S(n, 0..n) of Stirling numbers of the second kind, grown lazily."""

    def __init__(self, n_max: int = EXACT_MAX_N):
        self.n_max = n_max
        self.rows = [[1]]

    def row(self, n: int) -> list[int]:
        if n > self.n_max:
            raise IndexError(f"table holds n <= {self.n_max}")
        while len(self.rows) <= n:
            prev = self.rows[-1]
            k = len(prev)
            new = [0] * (k + 1)
            for m in range(1, k + 1):
                new[m] = (m * prev[m] if m < k else 0) + prev[m - 1]
            self.rows.append(new)
        return self.rows[n]

    def __call__(self, n: int, m: int) -> int:
        if m < 0 or m > n:
            return 0
        return self.row(n)[m]


STIRLING = StirlingTable()


def _surjections(n: int, m: int) -> int:
    """m! S(n, m), the number of maps from n labeled draws onto m labels."""
    if m < 0 or m > n:
        return 0
    return sum((-1) ** j * math.comb(m, j) * (m - j) ** n for j in range(m + 1))


def stirling2(n: int, m: int) -> int:
    if n < 0 or m < 0:
        return 0
    if n <= STIRLING.n_max:
        return STIRLING(n, m)
    return _surjections(n, m) // math.factorial(m)


def expected_complexity_haar(t: int, D: int) -> float:
    """t - t(t-1)/(2D) for t < D, continued by the plateau D/2."""
    if t < 0:
        raise InvalidParameterError("t must be non-negative")
    if t >= D:
        return D / 2.0
    return t - t * (t - 1) / (2.0 * D)


def expected_complexity_haar_exact(t: int, D: int) -> float:
    """Exact mean C(t) for independent Haar states: t - t(t+1)/(2D), then (D-1)/2.

    At step t the fresh state has mean weight 1/D on each of the t earlier
    Krylov vectors and 1 - t/D on the new one.
    """
    if t < 0:
        raise InvalidParameterError("t must be non-negative")
    t = min(t, D - 1)
    return t - t * (t + 1) / (2.0 * D)


def _coverage_exact(n: int, D: int) -> float:
    if n <= STIRLING.n_max:
        num = math.factorial(D) * STIRLING(n, D)
    else:
        num = _surjections(n, D)
    return float(Fraction(num, D**n))


def _coverage_log(n: int, D: int):
    """Inclusion-exclusion in log space; returns (value, max_term)."""
    k = np.arange(D)  # the k = D term vanishes for n >= 1
    log_terms = (
        math.lgamma(D + 1)
        - np.array([math.lgamma(i + 1) + math.lgamma(D - i + 1) for i in k])
        + n * np.log1p(-k / D)
    )
    terms = np.exp(log_terms) * np.where(k % 2, -1.0, 1.0)
    return math.fsum(terms), float(np.exp(log_terms.max()))


def coverage_probability(n: int, D: int, method: str = "auto") -> float:
    """Probability that n uniform draws from D outcomes hit every outcome.

    ``method`` is "exact" (integer arithmetic), "log" (floating
    inclusion-exclusion) or "auto": exact for n <= 64, otherwise the float
    route unless cancellation would cost accuracy, in which case exact.
    The "log" route raises instead of returning a cancellation-damaged value.
    """
    if n < 0 or D < 1:
        raise InvalidParameterError("need n >= 0 and D >= 1")
    if n < D:
        return 0.0
    if D == 1:
        return 1.0
    if method == "exact":
        return _coverage_exact(n, D)
    if method not in ("log", "auto"):
        raise InvalidParameterError(f"unknown method {method!r}")
    if method == "auto" and n <= EXACT_MAX_N:
        return _coverage_exact(n, D)
    value, biggest = _coverage_log(n, D)
    if value > 0 and biggest <= _CANCELLATION_LIMIT * value:
        return value
    if method == "log":
        raise NumericalInconsistencyError(
            f"inclusion-exclusion cancels too strongly at n={n}, D={D}; use the exact route"
        )
    return _coverage_exact(n, D)


def partial_coverage_probability(n: int, m: int, D: int) -> float:
    """Probability that n uniform draws from D show exactly m distinct outcomes."""
    if m < 0 or m > n or m > D:
        return 0.0
    num = math.comb(D, m) * math.factorial(m) * stirling2(n, m)
    return float(Fraction(num, D**n))


def partial_coverage_distribution(n: int, D: int) -> np.ndarray:
    """P(n, m) for m = 0..D via the occupancy recursion (all terms non-negative)."""
    p = np.zeros(D + 1)
    p[0] = 1.0
    m = np.arange(D + 1)
    stay, move = m / D, (D - m) / D
    for _ in range(n):
        nxt = p * stay
        nxt[1:] += p[:-1] * move[:-1]
        p = nxt
    return p


@dataclass(frozen=True)
class SaturationBound:
    n: int
    proxy: float  # D ln(D / epsilon)


def saturation_time_bound(D: int, epsilon: float) -> SaturationBound:
    """Smallest n with coverage_probability(n, D) >= 1 - epsilon."""
    if not 0 < epsilon < 1:
        raise InvalidParameterError("epsilon must lie in (0, 1)")
    target = 1.0 - epsilon
    lo, hi = D - 1, D  # P(lo) = 0 < target
    while coverage_probability(hi, D) < target:
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if coverage_probability(mid, D) >= target:
            hi = mid
        else:
            lo = mid
    return SaturationBound(n=hi, proxy=D * math.log(D / epsilon))


@dataclass(frozen=True)
class MinComplexityEstimate:
    m_max: int
    estimate: float  # m_max * P(t, m_max)
    proxy: float  # (D t)^(1/3)
    expectation: float  # sum_m m P(t, m), reported alongside the modal term


def min_complexity_estimate(t: int, D: int, exact: bool = False) -> MinComplexityEstimate:
    if t < 1:
        raise InvalidParameterError("t must be >= 1")
    if exact:
        dist = np.array([partial_coverage_probability(t, m, D) for m in range(D + 1)])
    else:
        dist = partial_coverage_distribution(t, D)
    m_max = int(np.argmax(dist))
    return MinComplexityEstimate(
        m_max=m_max,
        estimate=m_max * float(dist[m_max]),
        proxy=(D * t) ** (1.0 / 3.0),
        expectation=float(np.arange(D + 1) @ dist),
    )


AveragedSeries = ComplexitySeries


def aggregate(realizations: list[ComplexitySeries]) -> ComplexitySeries:
    """Pointwise mean and standard error (ddof=1; zero for a single series)."""
    if not realizations:
        raise AggregationError("nothing to aggregate")
    lengths = {len(s) for s in realizations}
    if len(lengths) != 1:
        raise AggregationError(f"series lengths differ: {sorted(lengths)}")
    data = np.stack([s.values for s in realizations])
    n = data.shape[0]
    stderr = data.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.zeros(data.shape[1])
    sizes = None
    if all(s.basis_sizes is not None for s in realizations):
        sizes = np.stack([s.basis_sizes for s in realizations]).mean(axis=0)
    return ComplexitySeries(values=data.mean(axis=0), stderr=stderr, n_samples=n, basis_sizes=sizes)
