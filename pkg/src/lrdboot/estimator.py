"""Bootstrap estimator of the limit shape ``|J_m(x)|``.

For replicates ``a = 1..A`` of the normalised bootstrap empirical process,

    J_hat(x) = m! * sqrt(mean_a W*_a(x)^2).

Only the modulus is identifiable: the bootstrap limit is symmetric, so the
sign of ``J_m`` is lost.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .empirical import Grid, SubordinatedSample
from .hermite import HermiteProfile
from .mbb import BlockTable, BootstrapPlan, draw_starts

__all__ = ["JmEstimate", "estimate_jm", "jm_from_replicates", "sup_abs_deviation"]


@dataclass(frozen=True)
class EstimateMeta:
    n: int
    l: int
    p: int
    A: int
    m: int
    master_seed: int


@dataclass(frozen=True)
class JmEstimate:
    grid: Grid
    values: np.ndarray = field(repr=False)
    meta: EstimateMeta

    def to_csv(self, profile: HermiteProfile | None = None) -> str:
        """Rows ``x,jhat,jm_true_abs,abs_error``; truth columns empty without a profile."""
        truth = None if profile is None else true_abs_jm(profile, self.grid)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["x", "jhat", "jm_true_abs", "abs_error"])
        for k, (x, v) in enumerate(zip(self.grid.x, self.values)):
            if truth is None:
                w.writerow([repr(float(x)), repr(float(v)), "", ""])
            else:
                t = float(truth[k])
                w.writerow([repr(float(x)), repr(float(v)), repr(t), repr(abs(float(v) - t))])
        return buf.getvalue()

    def summary_json(self, profile: HermiteProfile | None = None) -> str:
        out = {"meta": asdict(self.meta)}
        if profile is not None:
            out["sup_abs_deviation"] = sup_abs_deviation(self, profile)
        return json.dumps(out, indent=2, sort_keys=True)


def jm_from_replicates(w_star: np.ndarray, m: int) -> np.ndarray:
    """``m! * RMS`` over the replicate axis (axis 0) of normalised W* values."""
    w_star = np.atleast_2d(w_star)
    return math.factorial(m) * np.sqrt(np.mean(w_star**2, axis=0))


def estimate_jm(
    sample: SubordinatedSample,
    plan: BootstrapPlan,
    m: int,
    grid: Grid,
    table: BlockTable | None = None,
) -> JmEstimate:
    """Estimate ``|J_m|`` on ``grid`` from the ``plan.A`` replicates of ``plan``.

    A precomputed ``table`` for the same sample, block length and rank may be
    passed to avoid rebuilding block sums.
    """
    if plan.n != sample.n:
        raise ValueError("plan and sample lengths differ")
    if table is None:
        table = BlockTable(sample, plan.l, m, grid)
    w = table.replicate_W(draw_starts(plan))
    values = jm_from_replicates(w, m)
    values[0] = values[-1] = 0.0
    meta = EstimateMeta(sample.n, plan.l, plan.p, plan.A, m, plan.master_seed)
    return JmEstimate(grid, values, meta)


def true_abs_jm(profile: HermiteProfile, grid: Grid) -> np.ndarray:
    inner = np.abs(np.asarray(profile.jm(grid.interior), dtype=float))
    return np.concatenate([[0.0], inner, [0.0]])


def sup_abs_deviation(est: JmEstimate, profile: HermiteProfile) -> float:
    """``max_x | J_hat(x) - |J_m(x)| |`` over the estimate's grid."""
    if profile.rank != est.meta.m:
        raise ValueError(f"profile rank {profile.rank} differs from estimate rank {est.meta.m}")
    return float(np.max(np.abs(est.values - true_abs_jm(profile, est.grid))))
