"""Exact mean and variance of the relative ratio statistic by covariance enumeration.

The ratio statistic expands into (1/n^2) * sum over ordered index pairs of
X_i/X_j, so its variance is a sum of covariances Cov(X_i/X_j, X_p/X_q) over
all [n(n-1)]^2 ordered pairs of ordered pairs.  For lognormal X the value of
each covariance depends only on how the two index pairs overlap, which splits
the terms into seven classes:

    kind                 pair pattern            covariance     count
    self_pair            (i,j) vs (i,j)          w^4 - w^2      n(n-1)
    reciprocal_pair      (i,j) vs (j,i)          1 - w^2        n(n-1)
    shared_denominator   (i,j) vs (p,j)          w^3 - w^2      n(n-1)(n-2)
    num_is_other_den     (i,j) vs (p,i)          w   - w^2      n(n-1)(n-2)
    den_is_other_num     (i,j) vs (j,q)          w   - w^2      n(n-1)(n-2)
    shared_numerator     (i,j) vs (i,q)          w^3 - w^2      n(n-1)(n-2)
    disjoint             no shared index         0              n(n-1)(n-2)(n-3)

with w the population arithmetic-to-harmonic mean ratio, and p, q fresh
indices.  Assembling count * covariance and scaling by n^-4 reproduces the
closed-form variance in the estimator module through entirely different
arithmetic, which is what makes this module a useful cross-check.  The counts
themselves can additionally be validated against brute-force enumeration of
index tuples.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import DomainError
from .estimator import expected_k_n, var_k_n

__all__ = [
    "TermKind",
    "TermClass",
    "covariance_term",
    "term_multiplicity",
    "term_table",
    "exact_mean_kn",
    "exact_var_kn",
    "brute_force_class_counts",
    "run_verification",
    "VerificationReport",
    "CheckGroup",
]

DEFAULT_OMEGAS = (1.0, 1.1, 2.0, 5.0, 10.0)
DEFAULT_MAX_N = 12
# beyond this the O(n^4) enumeration stops being instant
DEFAULT_BRUTE_FORCE_LIMIT = 8


class TermKind(enum.Enum):
    SELF_PAIR = "self_pair"
    RECIPROCAL_PAIR = "reciprocal_pair"
    SHARED_DENOMINATOR = "shared_denominator"
    NUM_IS_OTHER_DEN = "num_is_other_den"
    DEN_IS_OTHER_NUM = "den_is_other_num"
    SHARED_NUMERATOR = "shared_numerator"
    DISJOINT = "disjoint"


@dataclass(frozen=True)
class TermClass:
    """One covariance class at a concrete (n, omega)."""

    kind: TermKind
    multiplicity: int
    covariance_value: float


def _check_omega(omega: float) -> None:
    if not (math.isfinite(omega) and omega >= 1.0):
        raise DomainError(f"omega must be >= 1, got {omega}")


def _check_n(n: int) -> None:
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")


def covariance_term(kind: TermKind, omega: float) -> float:
    """Covariance of one ratio-pair class as a polynomial in omega."""
    _check_omega(omega)
    w2 = omega * omega
    if kind is TermKind.SELF_PAIR:
        return w2 * w2 - w2
    if kind is TermKind.RECIPROCAL_PAIR:
        return 1.0 - w2
    if kind in (TermKind.SHARED_DENOMINATOR, TermKind.SHARED_NUMERATOR):
        return w2 * omega - w2
    if kind in (TermKind.NUM_IS_OTHER_DEN, TermKind.DEN_IS_OTHER_NUM):
        return omega - w2
    return 0.0  # DISJOINT


def term_multiplicity(kind: TermKind, n: int) -> int:
    """Closed-form count of ordered pair-of-pairs tuples in one class.

    Classes needing more distinct indices than n provides come out as 0,
    so n = 2 and n = 3 assemble correctly with no special casing.
    """
    _check_n(n)
    pairs = n * (n - 1)
    if kind in (TermKind.SELF_PAIR, TermKind.RECIPROCAL_PAIR):
        return pairs
    if kind is TermKind.DISJOINT:
        return pairs * (n - 2) * (n - 3) if n >= 4 else 0
    return pairs * (n - 2)


def term_table(n: int, omega: float) -> list[TermClass]:
    return [
        TermClass(kind, term_multiplicity(kind, n), covariance_term(kind, omega))
        for kind in TermKind
    ]


def exact_mean_kn(n: int, omega: float) -> float:
    """Mean of the uncorrected relative ratio assembled from pair counts.

    The double sum contributes n unit terms plus n(n-1) ratio terms each
    with expectation omega: (1/n^2)(n + n(n-1) omega) - 1.
    """
    _check_n(n)
    _check_omega(omega)
    return (n + n * (n - 1) * omega) / (n * n) - 1.0


def exact_var_kn(n: int, omega: float) -> float:
    """Variance of the uncorrected relative ratio by full class enumeration."""
    total = math.fsum(t.multiplicity * t.covariance_value for t in term_table(n, omega))
    return total / float(n) ** 4


def _classify(i: int, j: int, p: int, q: int) -> TermKind:
    # callers guarantee i != j and p != q
    if p == i and q == j:
        return TermKind.SELF_PAIR
    if p == j and q == i:
        return TermKind.RECIPROCAL_PAIR
    if q == j:
        return TermKind.SHARED_DENOMINATOR
    if p == i:
        return TermKind.SHARED_NUMERATOR
    if q == i:
        return TermKind.NUM_IS_OTHER_DEN
    if p == j:
        return TermKind.DEN_IS_OTHER_NUM
    return TermKind.DISJOINT


def brute_force_class_counts(n: int) -> dict[TermKind, int]:
    """Count every class by enumerating all (i,j,p,q) with i != j, p != q.

    O(n^4); meant for validating term_multiplicity at small n.
    """
    _check_n(n)
    counts = {kind: 0 for kind in TermKind}
    pairs = list(itertools.permutations(range(n), 2))
    for i, j in pairs:
        for p, q in pairs:
            counts[_classify(i, j, p, q)] += 1
    return counts


def _rel_close(a: float, b: float, tol: float) -> bool:
    if a == b:
        return True
    return abs(a - b) <= tol * max(abs(a), abs(b))


@dataclass
class CheckGroup:
    label: str
    checks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class VerificationReport:
    groups: list[CheckGroup]

    @property
    def passed(self) -> bool:
        return all(g.passed for g in self.groups)

    @property
    def first_failure(self) -> Optional[str]:
        for g in self.groups:
            if g.failures:
                return g.failures[0]
        return None


def run_verification(
    max_n: int = DEFAULT_MAX_N,
    omegas: Iterable[float] = DEFAULT_OMEGAS,
    rel_tol: float = 1e-12,
    brute_force_limit: int = DEFAULT_BRUTE_FORCE_LIMIT,
    multiplicity_fault: Optional[TermKind] = None,
) -> VerificationReport:
    """Cross-check the enumeration oracle against the closed-form predictions.

    multiplicity_fault is a test hook: it inflates one class count by 1
    inside the checks, which must surface as a failure naming that class.
    """
    if max_n < 2:
        raise DomainError(f"max_n must be >= 2, got {max_n}")
    omegas = list(omegas)

    def mult(kind: TermKind, n: int) -> int:
        m = term_multiplicity(kind, n)
        if multiplicity_fault is not None and kind is multiplicity_fault:
            m += 1
        return m

    counts_group = CheckGroup("class counts vs brute-force enumeration")
    for n in range(2, min(max_n, brute_force_limit) + 1):
        enumerated = brute_force_class_counts(n)
        for kind in TermKind:
            counts_group.checks += 1
            expected = mult(kind, n)
            if expected != enumerated[kind]:
                counts_group.failures.append(
                    f"n={n} class={kind.value}: closed-form count {expected} "
                    f"!= enumerated {enumerated[kind]}"
                )

    totals_group = CheckGroup("multiplicity totals")
    for n in range(2, max_n + 1):
        totals_group.checks += 1
        total = sum(mult(kind, n) for kind in TermKind)
        expected = (n * (n - 1)) ** 2
        if total != expected:
            totals_group.failures.append(
                f"n={n}: class counts sum to {total}, expected (n(n-1))^2 = {expected}"
            )

    mean_group = CheckGroup("mean agreement")
    for n in range(2, max_n + 1):
        for omega in omegas:
            mean_group.checks += 1
            got = exact_mean_kn(n, omega)
            want = expected_k_n(n, omega - 1.0)
            if not _rel_close(got, want, rel_tol):
                mean_group.failures.append(
                    f"n={n} omega={omega:g}: enumeration mean {got!r} "
                    f"vs closed form {want!r}"
                )

    var_group = CheckGroup("variance agreement")
    for n in range(2, max_n + 1):
        for omega in omegas:
            var_group.checks += 1
            if multiplicity_fault is None:
                got = exact_var_kn(n, omega)
            else:
                got = (
                    math.fsum(
                        mult(kind, n) * covariance_term(kind, omega)
                        for kind in TermKind
                    )
                    / float(n) ** 4
                )
            want = var_k_n(n, omega - 1.0)
            if not _rel_close(got, want, rel_tol):
                var_group.failures.append(
                    f"n={n} omega={omega:g}: enumeration variance {got!r} "
                    f"vs closed form {want!r}"
                )

    return VerificationReport(
        groups=[counts_group, totals_group, mean_group, var_group]
    )
