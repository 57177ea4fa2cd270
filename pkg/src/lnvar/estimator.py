"""Streaming sample sums and the mean-ratio variability estimators.

The accumulator keeps just enough running sums to read out the arithmetic,
harmonic and geometric means, the relative mean ratio, and a conventional
moment-based squared coefficient of variation.  sum_x and sum_inv_x are kept
with Neumaier compensated summation: reciprocals of a widely spread sample
span many orders of magnitude, and naive accumulation visibly biases the
harmonic mean once samples reach the millions.

Alongside the data-facing estimators, this module holds the closed-form
population predictions for the ratio statistic: its expected value, its
variance/sd before and after the n/(n-1) bias correction, the large-sample
efficiency of the corrected estimator, and the measurement-cost accounting
for collectively measured means.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal

from .errors import DomainError, EmptySampleError, SampleTooSmallError

__all__ = [
    "SampleAccumulator",
    "EstimateReport",
    "expected_k_n",
    "var_k_n",
    "sd_k_n",
    "var_k_hat",
    "sd_k_hat",
    "large_sample_efficiency",
    "measurement_cost",
]

# Below this the efficiency ratio is 1 to within one ulp.
_EFFICIENCY_UNIT_THRESHOLD = 1e-12


def _two_sum(a: float, b: float) -> tuple[float, float]:
    """Error-free sum: returns (fl(a+b), exact rounding error)."""
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _comp_add(s: float, c: float, x: float) -> tuple[float, float]:
    """One Neumaier step: add x to the running (sum, compensation) pair."""
    t = s + x
    if abs(s) >= abs(x):
        c += (s - t) + x
    else:
        c += (x - t) + s
    return t, c


@dataclass(frozen=True)
class EstimateReport:
    """Point estimates and diagnostics read out of one accumulator.

    predicted_sd_k_hat is a plug-in diagnostic: the population sd formula
    evaluated at the point estimate k_hat, not an unbiased sd estimate.
    """

    n: int
    a_n: float
    h_n: float
    k_n: float
    k_hat: float
    g_hat: float
    cv2_conventional: float
    predicted_sd_k_hat: float
    cost_collective: int
    cost_conventional: int


class SampleAccumulator:
    """Mergeable running sums of a positive-valued sample.

    Accumulators are plain values: fill independent ones on separate
    workers and combine them with merge (component-wise sums).
    """

    __slots__ = ("n", "_sx", "_sx_c", "_sinv", "_sinv_c", "_sx2")

    def __init__(self) -> None:
        self.n = 0
        self._sx = 0.0
        self._sx_c = 0.0
        self._sinv = 0.0
        self._sinv_c = 0.0
        self._sx2 = 0.0

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "SampleAccumulator":
        acc = cls()
        for x in values:
            acc.add(x)
        return acc

    def __repr__(self) -> str:
        return (
            f"SampleAccumulator(n={self.n}, sum_x={self.sum_x!r}, "
            f"sum_inv_x={self.sum_inv_x!r}, sum_x2={self.sum_x2!r})"
        )

    @property
    def sum_x(self) -> float:
        return self._sx + self._sx_c

    @property
    def sum_inv_x(self) -> float:
        return self._sinv + self._sinv_c

    @property
    def sum_x2(self) -> float:
        return self._sx2

    def add(self, x: float) -> None:
        """Fold one observation in; rejects anything off the positive reals."""
        x = float(x)
        if not math.isfinite(x) or x <= 0.0:
            raise DomainError(f"lognormal support is positive reals, got {x}")
        self._sx, self._sx_c = _comp_add(self._sx, self._sx_c, x)
        self._sinv, self._sinv_c = _comp_add(self._sinv, self._sinv_c, 1.0 / x)
        self._sx2 += x * x
        self.n += 1

    def merge(self, other: "SampleAccumulator") -> "SampleAccumulator":
        """Component-wise combination; commutative, with the empty accumulator as identity."""
        out = SampleAccumulator()
        out.n = self.n + other.n
        s, e = _two_sum(self._sx, other._sx)
        out._sx, out._sx_c = s, (self._sx_c + other._sx_c) + e
        s, e = _two_sum(self._sinv, other._sinv)
        out._sinv, out._sinv_c = s, (self._sinv_c + other._sinv_c) + e
        out._sx2 = self._sx2 + other._sx2
        return out

    def _require(self, min_n: int) -> None:
        if self.n == 0:
            raise EmptySampleError("no observations accumulated")
        if self.n < min_n:
            raise SampleTooSmallError(
                f"need at least {min_n} observations, have {self.n}"
            )

    def arithmetic_mean(self) -> float:
        self._require(1)
        return self.sum_x / self.n

    def harmonic_mean(self) -> float:
        self._require(1)
        return self.n / self.sum_inv_x

    def relative_ratio(self) -> float:
        """Arithmetic-to-harmonic mean ratio minus one, clamped at 0 against fp residue."""
        self._require(1)
        ratio = (self.sum_x * self.sum_inv_x) / (self.n * self.n)
        return max(0.0, ratio - 1.0)

    def k_hat(self) -> float:
        """Bias-corrected relative ratio: n/(n-1) times relative_ratio.

        Unbiased for the squared coefficient of variation of a lognormal
        population; undefined at n = 1 where the correction factor blows up.
        """
        self._require(2)
        return (self.n / (self.n - 1.0)) * self.relative_ratio()

    def g_hat(self) -> float:
        """Geometric-mean estimate sqrt(A_n * H_n); consistent, between the two means."""
        self._require(1)
        return math.sqrt(self.arithmetic_mean() * self.harmonic_mean())

    def cv2_conventional(self) -> float:
        """Moment-based comparison estimate: unbiased sample variance over squared mean."""
        self._require(2)
        a = self.arithmetic_mean()
        var = (self._sx2 - self.n * a * a) / (self.n - 1)
        # near-constant samples can leave a tiny negative fp residue
        return max(0.0, var) / (a * a)

    def report(self) -> EstimateReport:
        self._require(2)
        k_hat = self.k_hat()
        return EstimateReport(
            n=self.n,
            a_n=self.arithmetic_mean(),
            h_n=self.harmonic_mean(),
            k_n=self.relative_ratio(),
            k_hat=k_hat,
            g_hat=self.g_hat(),
            cv2_conventional=self.cv2_conventional(),
            predicted_sd_k_hat=sd_k_hat(self.n, k_hat),
            cost_collective=measurement_cost(self.n, "collective"),
            cost_conventional=measurement_cost(self.n, "conventional"),
        )


def _check_n(n: int, minimum: int = 2) -> None:
    if n < minimum:
        raise DomainError(f"n must be >= {minimum}, got {n}")


def _check_k(k: float) -> None:
    if not (math.isfinite(k) and k >= 0.0):
        raise DomainError(f"k must be >= 0 and finite, got {k}")


def expected_k_n(n: int, k: float) -> float:
    """Expected value of the uncorrected relative ratio: (n-1)/n * k."""
    _check_n(n)
    _check_k(k)
    return (n - 1) / n * k


def var_k_n(n: int, k: float) -> float:
    """Variance of the uncorrected relative ratio: 2(n-1)/n^2 k^2 (1 + k + k^2/(2n))."""
    _check_n(n)
    _check_k(k)
    return 2.0 * (n - 1) / (n * n) * k * k * (1.0 + k + k * k / (2.0 * n))


def sd_k_n(n: int, k: float) -> float:
    return math.sqrt(var_k_n(n, k))


def var_k_hat(n: int, k: float) -> float:
    """Variance of the bias-corrected ratio: 2/(n-1) k^2 (1 + k + k^2/(2n))."""
    _check_n(n)
    _check_k(k)
    return 2.0 / (n - 1) * k * k * (1.0 + k + k * k / (2.0 * n))


def sd_k_hat(n: int, k: float) -> float:
    return math.sqrt(var_k_hat(n, k))


def large_sample_efficiency(sigma2_y: float) -> float:
    """Asymptotic efficiency of the corrected ratio estimator vs. the series-based
    minimum-variance benchmark: sigma2^2 / (exp(sigma2) - 1)^2.

    Strictly decreasing in sigma2_y with limit 1 at 0+; inputs below 1e-12
    return 1.0 exactly.
    """
    if not (math.isfinite(sigma2_y) and sigma2_y > 0.0):
        raise DomainError(f"sigma2_y must be > 0, got {sigma2_y}")
    if sigma2_y < _EFFICIENCY_UNIT_THRESHOLD:
        return 1.0
    try:
        em = math.expm1(sigma2_y)
    except OverflowError:
        return 0.0
    ratio = sigma2_y / em
    return ratio * ratio


def measurement_cost(n: int, mode: Literal["conventional", "collective"]) -> int:
    """Number of physical measurements needed for a size-n sample.

    Conventional per-replicate reading costs n; collectively measured
    arithmetic and harmonic means cost 2 (one reading each) regardless of n.
    """
    _check_n(n)
    if mode == "conventional":
        return n
    if mode == "collective":
        return 2
    raise DomainError(f"unknown measurement mode {mode!r}")
