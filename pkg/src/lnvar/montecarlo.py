"""Seeded simulation grid for the mean-ratio variability estimator.

A cell is one (n, cv, runs, seed) experiment: each run draws n lognormal
variates with geometric mean exp(mu_y) and squared coefficient of variation
cv^2, reads off the bias-corrected relative ratio, and the cell reports the
empirical mean and sd of that estimate over all runs next to the analytic
predictions.

Reproducibility contract: per-cell seeds derive from (master_seed, row-major
cell index) through numpy's SeedSequence mixing, so any cell can be re-run in
isolation; draws come from an independent PCG64 stream per cell; per-run
estimates are reduced with exact (Shewchuk) summation so the aggregates do
not depend on chunking.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

from .errors import BudgetExceededError, DomainError
from .estimator import expected_k_n, large_sample_efficiency, sd_k_hat, sd_k_n
from .model import params_from_gk

__all__ = [
    "SimulationCell",
    "GridConfig",
    "resolve_runs",
    "derive_cell_seed",
    "run_cell",
    "run_grid",
    "efficiency_curve",
    "BUDGET_ENV_VAR",
    "DEFAULT_MAX_DRAWS",
    "DEFAULT_MASTER_SEED",
]

# total runs budget follows the source protocol: 1e7 estimator draws split
# across the runs of each sample size
RUNS_NUMERATOR = 10**7
DEFAULT_MASTER_SEED = 1729
DEFAULT_MAX_DRAWS = 10**9
BUDGET_ENV_VAR = "LNVAR_MAX_DRAWS"
# draws generated per chunk; fixed so chunking is deterministic
_CHUNK_ELEMS = 1 << 20

_DEFAULT_N_VALUES = (2, 10, 100)
_DEFAULT_CV_VALUES = (0.1, 0.5, 1.0)
_DEFAULT_RUNS_CAP = 10**6


@dataclass(frozen=True)
class SimulationCell:
    """Summary of one Monte Carlo cell."""

    n: int
    cv: float
    runs: int
    seed: int
    mean_khat: float
    sd_khat: float
    pred_mean: float
    pred_sd: float
    se_mean: float


@dataclass
class GridConfig:
    """A batch of cells: the cross product of n_values and cv_values.

    runs per cell defaults to floor(RUNS_NUMERATOR / (n - 1)), clipped to
    runs_cap when one is set; runs_override replaces the rule entirely.
    """

    n_values: Sequence[int]
    cv_values: Sequence[float]
    master_seed: int = DEFAULT_MASTER_SEED
    runs_override: Optional[int] = None
    runs_cap: Optional[int] = None
    mu_y: float = 0.0

    def __post_init__(self) -> None:
        self.n_values = tuple(int(n) for n in self.n_values)
        self.cv_values = tuple(float(cv) for cv in self.cv_values)
        if not self.n_values or not self.cv_values:
            raise DomainError("n_values and cv_values must be nonempty")
        for n in self.n_values:
            if n < 2:
                raise DomainError(f"every n must be >= 2, got {n}")
        for cv in self.cv_values:
            if not (math.isfinite(cv) and cv > 0.0):
                raise DomainError(f"every cv must be positive and finite, got {cv}")
        if self.master_seed < 0:
            raise DomainError("master_seed must be a nonnegative integer")
        if self.runs_override is not None and self.runs_override < 2:
            raise DomainError("runs_override must be >= 2")
        if self.runs_cap is not None and self.runs_cap < 2:
            raise DomainError("runs_cap must be >= 2")
        if not math.isfinite(self.mu_y):
            raise DomainError("mu_y must be finite")

    @classmethod
    def default(cls, master_seed: int = DEFAULT_MASTER_SEED) -> "GridConfig":
        """The stock desk-scale grid: n in {2, 10, 100}, cv in {0.1, 0.5, 1.0},
        runs = min(1e6, floor(1e7 / (n - 1)))."""
        return cls(
            n_values=_DEFAULT_N_VALUES,
            cv_values=_DEFAULT_CV_VALUES,
            master_seed=master_seed,
            runs_cap=_DEFAULT_RUNS_CAP,
        )


def resolve_runs(
    n: int, runs_override: Optional[int] = None, runs_cap: Optional[int] = None
) -> int:
    """Runs for a sample size n under the default rule, a cap, or an override."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if runs_override is not None:
        return runs_override
    runs = RUNS_NUMERATOR // (n - 1)
    if runs_cap is not None:
        runs = min(runs, runs_cap)
    return runs


def derive_cell_seed(master_seed: int, cell_index: int) -> int:
    """Mix (master_seed, cell_index) into an independent 64-bit cell seed.

    Uses numpy's SeedSequence with the cell index as spawn key, the same
    mixing that backs SeedSequence.spawn, so cell streams never overlap
    and a cell is reproducible from the CSV row alone.
    """
    ss = np.random.SeedSequence(master_seed, spawn_key=(cell_index,))
    return int(ss.generate_state(1, np.uint64)[0])


def _resolve_budget(max_draws: Optional[int]) -> int:
    if max_draws is not None:
        return max_draws
    env = os.environ.get(BUDGET_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise DomainError(
                f"{BUDGET_ENV_VAR} must be an integer, got {env!r}"
            ) from None
    return DEFAULT_MAX_DRAWS


def run_cell(
    n: int,
    cv: float,
    runs: int,
    seed: int,
    mu_y: float = 0.0,
    *,
    statistic: Literal["khat", "kn"] = "khat",
    max_draws: Optional[int] = None,
) -> SimulationCell:
    """Run one simulation cell and summarize it.

    statistic selects the per-run estimate: the bias-corrected ratio
    ("khat", the default) or the raw relative ratio ("kn"); the analytic
    prediction columns follow the choice.  The sd over runs uses the
    unbiased (runs - 1) divisor.
    """
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if not (math.isfinite(cv) and cv > 0.0):
        raise DomainError(f"cv must be positive and finite, got {cv}")
    if runs < 2:
        raise DomainError(f"runs must be >= 2, got {runs}")
    if seed < 0:
        raise DomainError("seed must be a nonnegative integer")
    if statistic not in ("khat", "kn"):
        raise DomainError(f"unknown statistic {statistic!r}")

    cost = runs * n
    budget = _resolve_budget(max_draws)
    if cost > budget:
        raise BudgetExceededError(
            f"cell (n={n}, runs={runs}) needs {cost} draws, over the budget of "
            f"{budget}; raise {BUDGET_ENV_VAR} to allow it",
            cost=cost,
            budget=budget,
        )
    if cv > 2.0:
        warnings.warn(
            f"cv={cv:g} > 2: the estimator's variance grows like cv^8/n, so the "
            "empirical sd converges slowly at this setting",
            RuntimeWarning,
            stacklevel=2,
        )

    params = params_from_gk(math.exp(mu_y), cv * cv)
    sigma = math.sqrt(params.sigma2_y)
    correction = n / (n - 1.0)
    rng = np.random.default_rng(seed)

    estimates = np.empty(runs, dtype=np.float64)
    rows_per_chunk = max(1, _CHUNK_ELEMS // n)
    done = 0
    while done < runs:
        rows = min(rows_per_chunk, runs - done)
        x = np.exp(rng.normal(mu_y, sigma, size=(rows, n)))
        kn = x.sum(axis=1) * (1.0 / x).sum(axis=1) / (n * n) - 1.0
        estimates[done : done + rows] = kn if statistic == "kn" else kn * correction
        done += rows

    mean = math.fsum(estimates) / runs
    resid = estimates - mean
    np.multiply(resid, resid, out=resid)
    sd = math.sqrt(math.fsum(resid) / (runs - 1))

    if statistic == "kn":
        pred_mean = expected_k_n(n, cv * cv)
        pred_sd = sd_k_n(n, cv * cv)
    else:
        pred_mean = cv * cv
        pred_sd = sd_k_hat(n, cv * cv)

    return SimulationCell(
        n=n,
        cv=cv,
        runs=runs,
        seed=seed,
        mean_khat=mean,
        sd_khat=sd,
        pred_mean=pred_mean,
        pred_sd=pred_sd,
        se_mean=sd / math.sqrt(runs),
    )


def run_grid(cfg: GridConfig, *, max_draws: Optional[int] = None) -> list[SimulationCell]:
    """Run every (n, cv) cell of the grid, row-major over n then cv.

    Any cell failure propagates; no partial results are returned.
    """
    cells = []
    index = 0
    for n in cfg.n_values:
        for cv in cfg.cv_values:
            runs = resolve_runs(n, cfg.runs_override, cfg.runs_cap)
            seed = derive_cell_seed(cfg.master_seed, index)
            cells.append(
                run_cell(n, cv, runs, seed, cfg.mu_y, max_draws=max_draws)
            )
            index += 1
    return cells


def efficiency_curve(
    sigma2_min: float,
    sigma2_max: float,
    points: int,
    spacing: Literal["log", "linear"] = "log",
) -> list[tuple[float, float]]:
    """Large-sample efficiency sampled on a grid of log-space variances."""
    if not (
        math.isfinite(sigma2_min)
        and math.isfinite(sigma2_max)
        and 0.0 < sigma2_min < sigma2_max
    ):
        raise DomainError(
            f"need 0 < sigma2_min < sigma2_max, got [{sigma2_min}, {sigma2_max}]"
        )
    if points < 2:
        raise DomainError(f"points must be >= 2, got {points}")
    if spacing == "log":
        grid = np.geomspace(sigma2_min, sigma2_max, points)
    elif spacing == "linear":
        grid = np.linspace(sigma2_min, sigma2_max, points)
    else:
        raise DomainError(f"unknown spacing {spacing!r}")
    return [(float(s2), large_sample_efficiency(float(s2))) for s2 in grid]
