"""Monte Carlo scenarios: simulate, bootstrap, estimate, summarise.

For every sample size ``n`` and outer replicate ``r = 0..R-1`` one series is
simulated from the seed ``derive_seed(master_seed, 0, n, r)`` and
bootstrapped ``A`` times with master seed ``derive_seed(master_seed, 1, n, r)``.
Work items are independent, so they may run on a thread pool; results are
always collected in ``(n, r)`` order.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..empirical import (
    Grid,
    SubordinatedSample,
    grid_functions,
    normalizer_dn,
    simulate_sample,
)
from ..errors import DegenerateSample, LRDBootError
from ..estimator import (
    EstimateMeta,
    JmEstimate,
    estimate_jm,
    jm_from_replicates,
    sup_abs_deviation,
    true_abs_jm,
)
from ..hermite import RANK_TOL, HermiteProfile, build_profile, hermite_eval
from ..mbb import BlockTable, BootstrapPlan, draw_starts
from ..rng import derive_seed
from .config import ExperimentConfig
from .diagnostics import MIN_SIZE, DiagnosticsSummary, normality_diagnostics

__all__ = [
    "SCHEMA_ID",
    "STATISTICS",
    "ScenarioError",
    "SeriesResult",
    "LevelResult",
    "ScenarioReport",
    "probe_point",
    "run_scenario",
    "run_estimates",
]

SCHEMA_ID = "lrdboot.report/1"

# pooled statistics reported per sample size
STATISTICS = (
    "bootstrap_hermite_sum",
    "bootstrap_empirical_x0",
    "hermite_sum",
    "empirical_x0",
)


class ScenarioError(LRDBootError):
    """A module error inside a scenario, tagged with where it happened."""

    def __init__(self, n: int, series: int, seed: int, cause: LRDBootError):
        self.n, self.series, self.seed, self.cause = n, series, seed, cause
        super().__init__(f"n={n}, series={series}, seed={seed}: {cause}")


@dataclass
class SeriesResult:
    seed: int
    boot_seed: int
    boot_hermite: np.ndarray = field(repr=False)
    boot_empirical: np.ndarray = field(repr=False)
    cond_var_hermite: float
    cond_var_empirical: float
    hermite_sum: float
    empirical_x0: float
    jhat: np.ndarray = field(repr=False)
    sup_deviation: float

    def standardized(self, which: str) -> np.ndarray | None:
        """Bootstrap values divided by their exact conditional standard deviation."""
        vals, var = (
            (self.boot_hermite, self.cond_var_hermite)
            if which == "hermite"
            else (self.boot_empirical, self.cond_var_empirical)
        )
        if var <= 0.0:
            return None
        return vals / math.sqrt(var)


@dataclass
class LevelResult:
    n: int
    l: int
    p: int
    d_n: float
    d_l: float
    x0: float
    x0_quantile: float
    jm_x0: float
    series: list = field(repr=False)
    diagnostics: dict = field(default_factory=dict)

    def pool(self, statistic: str, series=None) -> np.ndarray:
        """Pooled values of ``statistic`` over ``series`` (default: all)."""
        chosen = self.series if series is None else [self.series[k] for k in series]
        if statistic == "bootstrap_hermite_sum":
            parts = [s.standardized("hermite") for s in chosen]
            return np.concatenate([p for p in parts if p is not None] or [np.zeros(0)])
        if statistic == "bootstrap_empirical_x0":
            parts = [s.standardized("empirical") for s in chosen]
            return np.concatenate([p for p in parts if p is not None] or [np.zeros(0)])
        if statistic == "hermite_sum":
            return np.array([s.hermite_sum for s in chosen])
        if statistic == "empirical_x0":
            return np.array([s.empirical_x0 for s in chosen])
        raise KeyError(statistic)

    @property
    def sup_deviations(self) -> np.ndarray:
        return np.array([s.sup_deviation for s in self.series])

    def target_variance(self, m: int) -> float:
        """Limit variance ``(J_m(x0) / m!)^2`` of the normalised ``W_n(x0)``."""
        return (self.jm_x0 / math.factorial(m)) ** 2

    def empirical_variance(self) -> tuple[float, float]:
        """Sample variance of ``d_n^{-1} W_n(x0)`` over series and its standard error."""
        v = self.pool("empirical_x0")
        if v.size < 2:
            return math.nan, math.nan
        c = v - v.mean()
        var = float(np.mean(c**2))
        se = float(math.sqrt(max(np.mean(c**4) - var**2, 0.0) / v.size))
        return var, se


@dataclass
class ScenarioReport:
    config: ExperimentConfig
    profile: HermiteProfile
    grid: Grid
    levels: list
    runtime_seconds: float
    schema: str = SCHEMA_ID

    def level(self, n: int) -> LevelResult:
        for lev in self.levels:
            if lev.n == n:
                return lev
        raise KeyError(n)

    def jm_estimate(self, n: int, series: int = 0) -> JmEstimate:
        lev = self.level(n)
        s = lev.series[series]
        meta = EstimateMeta(n, lev.l, lev.p, self.config.A, self.profile.rank, s.boot_seed)
        return JmEstimate(self.grid, s.jhat, meta)

    def to_dict(self) -> dict:
        m = self.profile.rank
        levels = []
        for lev in self.levels:
            var, se = lev.empirical_variance()
            devs = lev.sup_deviations
            levels.append(
                {
                    "n": lev.n,
                    "l": lev.l,
                    "p": lev.p,
                    "d_n": lev.d_n,
                    "d_l": lev.d_l,
                    "hurst_H": 1.0 - m * self.config.model.d_exp_effective / 2.0,
                    "x0": lev.x0,
                    "x0_quantile": lev.x0_quantile,
                    "jm_x0": lev.jm_x0,
                    "diagnostics": {
                        k: (v.to_dict() if isinstance(v, DiagnosticsSummary) else v)
                        for k, v in lev.diagnostics.items()
                    },
                    "empirical_x0_variance": var,
                    "empirical_x0_variance_se": se,
                    "empirical_x0_target_variance": lev.target_variance(m),
                    "jhat_sup_deviation": {
                        "per_series": devs.tolist(),
                        "median": float(np.median(devs)),
                    },
                }
            )
        return {
            "schema": self.schema,
            "config": self.config.to_dict(),
            "profile": {
                "transform": self.profile.transform.keyword,
                "rank": m,
                "sigma_m": self.profile.sigma_m,
                "rank_margin_low": self.profile.rank_margin_low,
            },
            "levels": levels,
            "runtime_seconds": self.runtime_seconds,
        }


def probe_point(profile: HermiteProfile, level: float, tol: float = RANK_TOL) -> tuple[float, float]:
    """Quantile ``F^{-1}(level)``, nudged away from zeros of ``J_m``.

    Levels are tried in the order ``level, level +- 0.01, level +- 0.02, ...``
    until ``|J_m(x0)| > 10 tol``.
    """
    for k in range(0, 99):
        for q in ((level,) if k == 0 else (level + 0.01 * k, level - 0.01 * k)):
            if not 0.0 < q < 1.0:
                continue
            x0 = float(profile.quantile(q))
            if abs(float(profile.jm(x0))) > 10 * tol:
                return x0, q
    raise LRDBootError(f"J_{profile.rank} vanishes at every probe quantile")


@dataclass(frozen=True)
class _Level:
    n: int
    l: int
    p: int
    d_n: float
    x0_grid: Grid


def _series(cfg: ExperimentConfig, profile: HermiteProfile, grid: Grid, lev: _Level, r: int):
    m = profile.rank
    seed = derive_seed(cfg.master_seed, 0, lev.n, r)
    boot_seed = derive_seed(cfg.master_seed, 1, lev.n, r)
    try:
        sample = simulate_sample(cfg.model, cfg.transform, lev.n, seed)
        plan = BootstrapPlan(lev.n, lev.l, lev.p, cfg.A, boot_seed)
        starts = draw_starts(plan)

        probe = BlockTable(sample, lev.l, m, lev.x0_grid, profile)
        cond = probe.conditional_variance()
        boot_h = probe.replicate_H(starts)
        boot_w = probe.replicate_W(starts)[:, 1]

        cdf0, jm0 = grid_functions(profile, lev.x0_grid)
        hsum = float(np.sum(hermite_eval(m, sample.x)))
        w_x0 = float(np.sum(sample.y <= lev.x0_grid.points[0]) - lev.n * cdf0[1])

        full = BlockTable(sample, lev.l, m, grid, d_l=probe.d_l)
        jhat = jm_from_replicates(full.replicate_W(starts), m)
        jhat[0] = jhat[-1] = 0.0
        dev = float(np.max(np.abs(jhat - true_abs_jm(profile, grid))))
    except LRDBootError as exc:
        raise ScenarioError(lev.n, r, seed, exc) from exc

    return SeriesResult(
        seed=seed,
        boot_seed=boot_seed,
        boot_hermite=boot_h,
        boot_empirical=boot_w,
        cond_var_hermite=float(cond["H"]),
        cond_var_empirical=float(cond["W"][1]),
        hermite_sum=hsum / lev.d_n,
        empirical_x0=w_x0 / lev.d_n,
        jhat=jhat,
        sup_deviation=dev,
    )


def _diagnose(values: np.ndarray):
    if values.size < MIN_SIZE:
        return {"skipped": f"pool size {values.size} < {MIN_SIZE}"}
    try:
        return normality_diagnostics(values)
    except DegenerateSample as exc:
        return {"skipped": str(exc)}


def _prepare(cfg: ExperimentConfig):
    profile = build_profile(cfg.transform, cfg.m_override)
    m = profile.rank
    levels_q = np.linspace(cfg.grid.lo, cfg.grid.hi, cfg.grid.size)
    grid = Grid.from_quantiles(profile, levels_q)
    grid_functions(profile, grid)
    return profile, grid, m


def run_scenario(config: ExperimentConfig, threads: int = 1) -> ScenarioReport:
    """Run every ``(n, r)`` work item of ``config`` and summarise per ``n``.

    Raises
    ------
    ScenarioError
        Wrapping the first module error, with the failing ``(n, series, seed)``.
    RegimeViolation
        If ``m * D >= 1`` for the detected (or overridden) rank.
    """
    t0 = time.perf_counter()
    profile, grid, m = _prepare(config)
    level_q = config.x0_quantile if config.x0_quantile is not None else (0.5 if m == 1 else 0.7)
    x0, q_used = probe_point(profile, level_q)
    x0_grid = Grid((x0,))
    grid_functions(profile, x0_grid)

    plans = []
    for n in config.n:
        l = config.l_rule.block_length(n)
        p = config.p_rule.blocks(n, l)
        plans.append(_Level(n, l, p, normalizer_dn(config.model, m, n), x0_grid))

    tasks = [(lev, r) for lev in plans for r in range(config.R)]

    def work(item):
        lev, r = item
        return _series(config, profile, grid, lev, r)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, tasks))
    else:
        results = [work(t) for t in tasks]

    levels = []
    jm_x0 = float(profile.jm(x0))
    for k, lev in enumerate(plans):
        series = results[k * config.R : (k + 1) * config.R]
        out = LevelResult(
            n=lev.n,
            l=lev.l,
            p=lev.p,
            d_n=lev.d_n,
            d_l=normalizer_dn(config.model, m, lev.l),
            x0=x0,
            x0_quantile=q_used,
            jm_x0=jm_x0,
            series=series,
        )
        out.diagnostics = {stat: _diagnose(out.pool(stat)) for stat in STATISTICS}
        levels.append(out)

    return ScenarioReport(config, profile, grid, levels, time.perf_counter() - t0)


@dataclass
class EstimateRun:
    n: int
    series: int
    estimate: JmEstimate
    sup_deviation: float | None


def run_estimates(
    config: ExperimentConfig, threads: int = 1, data: np.ndarray | None = None
) -> tuple[Grid, HermiteProfile | None, list]:
    """Estimator-only path.

    With ``data`` (an observed series) a single estimate is produced; the
    Gaussian layer is unknown, so ``config.m_override`` must give the rank
    and the grid is the empirical 1%..99% quantile range of the data.
    """
    if data is not None:
        if config.m_override is None:
            raise LRDBootError("m_override is required when estimating from data")
        m = config.m_override
        y = np.asarray(data, dtype=float)
        sample = SubordinatedSample(y=y, model=config.model)
        levels_q = np.linspace(config.grid.lo, config.grid.hi, config.grid.size)
        grid = Grid(tuple(np.unique(np.quantile(y, levels_q))))
        n = sample.n
        l = config.l_rule.block_length(n)
        plan = BootstrapPlan(n, l, config.p_rule.blocks(n, l), config.A, derive_seed(config.master_seed, 1, n, 0))
        est = estimate_jm(sample, plan, m, grid)
        return grid, None, [EstimateRun(n, 0, est, None)]

    profile, grid, m = _prepare(config)
    tasks = [(n, r) for n in config.n for r in range(config.R)]

    def work(item):
        n, r = item
        seed = derive_seed(config.master_seed, 0, n, r)
        try:
            sample = simulate_sample(config.model, config.transform, n, seed)
            l = config.l_rule.block_length(n)
            plan = BootstrapPlan(
                n, l, config.p_rule.blocks(n, l), config.A, derive_seed(config.master_seed, 1, n, r)
            )
            est = estimate_jm(sample, plan, m, grid)
        except LRDBootError as exc:
            raise ScenarioError(n, r, seed, exc) from exc
        return EstimateRun(n, r, est, sup_abs_deviation(est, profile))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(work, tasks))
    else:
        runs = [work(t) for t in tasks]
    return grid, profile, runs
