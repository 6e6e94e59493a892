"""Moving block bootstrap of the empirical process.

A replicate concatenates ``p`` blocks ``B_s = (s, ..., s + l - 1)`` whose
start indices are drawn uniformly from ``1..n-l+1``. Because every bootstrap
statistic here is a sum of per-block contributions, all conditional moments
are exact averages over the ``n - l + 1`` blocks, which is what the
``conditional_*`` helpers compute.

Start indices are 1-based in :class:`BootstrapReplicate` (matching the usual
block notation) and 0-based everywhere else.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .empirical import (
    Grid,
    Label,
    ProcessEvaluation,
    SubordinatedSample,
    counts_below,
    grid_functions,
    normalizer_dn,
)
from .hermite import HermiteProfile, hermite_eval
from .rng import stream

__all__ = [
    "BootstrapPlan",
    "BootstrapReplicate",
    "edge_weights",
    "draw_replicate",
    "draw_starts",
    "tilde_F",
    "tilde_mu",
    "BlockTable",
    "bootstrap_empirical",
    "bootstrap_residual",
    "bootstrap_hermite_sum",
    "conditional_second_moment",
    "replicates_csv",
]


@dataclass(frozen=True)
class BootstrapPlan:
    """Block length ``l``, ``p`` blocks per replicate, ``A`` replicates.

    ``p`` defaults to ``n // l``.
    """

    n: int
    l: int
    p: int | None = None
    A: int = 1
    master_seed: int = 0

    def __post_init__(self):
        if not 1 <= self.l <= self.n:
            raise ValueError(f"block length must satisfy 1 <= l <= n, got l={self.l}, n={self.n}")
        if self.p is None:
            object.__setattr__(self, "p", self.n // self.l)
        if self.p < 1:
            raise ValueError("p must be at least 1")
        if self.A < 1:
            raise ValueError("A must be at least 1")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")

    @property
    def n_blocks(self) -> int:
        return self.n - self.l + 1


@dataclass(frozen=True)
class BootstrapReplicate:
    start_indices: np.ndarray = field(repr=False)
    l: int

    @property
    def expanded(self) -> np.ndarray:
        """1-based indices of the bootstrap sample, length ``p * l``."""
        return (self.start_indices[:, None] + np.arange(self.l)[None, :]).ravel()


def edge_weights(n: int, l: int) -> np.ndarray:
    """``a_{n,j}``: number of blocks containing index ``j`` (j = 1..n)."""
    if not 1 <= l <= n:
        raise ValueError("need 1 <= l <= n")
    j = np.arange(1, n + 1)
    return np.minimum.reduce([j, np.full(n, l), n - j + 1, np.full(n, n - l + 1)])


def _starts(plan: BootstrapPlan, replicate_id: int) -> np.ndarray:
    if not 0 <= replicate_id < plan.A:
        raise ValueError(f"replicate_id {replicate_id} outside 0..{plan.A - 1}")
    return stream(plan.master_seed, replicate_id).integers(0, plan.n_blocks, size=plan.p)


def draw_replicate(plan: BootstrapPlan, replicate_id: int) -> BootstrapReplicate:
    return BootstrapReplicate(_starts(plan, replicate_id) + 1, plan.l)


def draw_starts(plan: BootstrapPlan, replicate_ids=None) -> np.ndarray:
    """0-based block starts, one row per replicate id (default: all ``A``)."""
    ids = range(plan.A) if replicate_ids is None else replicate_ids
    return np.array([_starts(plan, int(a)) for a in ids], dtype=np.int64).reshape(-1, plan.p)


def tilde_F(sample: SubordinatedSample, l: int, grid: Grid) -> np.ndarray:
    """Block-average CDF ``(l (n-l+1))^{-1} sum_j a_{n,j} 1{Y_j <= x}`` on the full grid."""
    n = sample.n
    a = edge_weights(n, l)
    order = np.argsort(sample.y, kind="stable")
    cum = np.concatenate([[0], np.cumsum(a[order])])
    idx = counts_below(sample.y[order], grid)
    out = cum[idx] / (l * (n - l + 1))
    out[0], out[-1] = 0.0, 1.0
    return out


def tilde_mu(sample: SubordinatedSample, l: int, m: int) -> float:
    """Block-average Hermite mean ``(l (n-l+1))^{-1} sum_j a_{n,j} H_m(X_j)``."""
    n = sample.n
    a = edge_weights(n, l)
    h = hermite_eval(m, sample.require_x())
    return float(np.dot(a, h) / (l * (n - l + 1)))


class BlockTable:
    """Per-block sums of one sample, the raw material for every bootstrap statistic.

    Parameters
    ----------
    sample : SubordinatedSample
    l : int
        Block length.
    m : int
        Hermite rank; fixes ``d_l`` and the Hermite block sums.
    grid : Grid, optional
        Needed for the empirical-process statistics.
    profile : HermiteProfile, optional
        Needed for ``S*`` (supplies ``J_m / m!`` on the grid).
    d_l : float, optional
        Override the normaliser (defaults to ``normalizer_dn(model, m, l)``).
    """

    def __init__(
        self,
        sample: SubordinatedSample,
        l: int,
        m: int,
        grid: Grid | None = None,
        profile: HermiteProfile | None = None,
        d_l: float | None = None,
    ):
        n = sample.n
        if not 1 <= l <= n:
            raise ValueError("need 1 <= l <= n")
        self.n, self.l, self.m = n, int(l), int(m)
        self.n_blocks = n - l + 1
        self.grid = grid
        self.d_l = normalizer_dn(sample.model, m, l) if d_l is None else float(d_l)

        self.herm = None
        self.tilde_mu = None
        if sample.x is not None:
            h = hermite_eval(m, sample.x)
            self.herm = np.lib.stride_tricks.sliding_window_view(h, l).sum(axis=1)
            self.tilde_mu = tilde_mu(sample, l, m)

        self.counts = None
        self.tilde_F = None
        self.jm = None
        if grid is not None:
            ind = sample.y[:, None] <= grid.interior[None, :]
            cum = np.concatenate(
                [np.zeros((1, ind.shape[1]), np.int64), np.cumsum(ind, axis=0, dtype=np.int64)]
            )
            inner = cum[l:] - cum[:-l]
            self.counts = np.hstack(
                [np.zeros((self.n_blocks, 1), np.int64), inner, np.full((self.n_blocks, 1), l)]
            )
            self.tilde_F = tilde_F(sample, l, grid)
            if profile is not None:
                if profile.rank != m:
                    raise ValueError("profile rank differs from m")
                self.jm = np.asarray(grid_functions(profile, grid)[1])

    # -- per-block centred contributions -------------------------------------

    def centered_W(self) -> np.ndarray:
        return self.counts - self.l * self.tilde_F

    def centered_H(self) -> np.ndarray:
        return self.herm - self.l * self.tilde_mu

    def centered_S(self) -> np.ndarray:
        return self.centered_W() - self.jm * self.centered_H()[:, None]

    def conditional_mean(self, p: int) -> dict[str, np.ndarray]:
        """``E*`` of the normalised W*, H*, S* by enumerating all blocks."""
        scale = p / (self.d_l * math.sqrt(p))
        out = {}
        if self.counts is not None:
            out["W"] = scale * self.centered_W().mean(axis=0)
        if self.herm is not None:
            out["H"] = scale * float(self.centered_H().mean())
        if self.jm is not None and self.herm is not None:
            out["S"] = scale * self.centered_S().mean(axis=0)
        return out

    def conditional_variance(self) -> dict[str, np.ndarray]:
        """``E*`` of the squared normalised statistics; independent of ``p``."""
        d2 = self.d_l**2
        out = {}
        if self.counts is not None:
            out["W"] = (self.centered_W() ** 2).mean(axis=0) / d2
        if self.herm is not None:
            out["H"] = float((self.centered_H() ** 2).mean()) / d2
        if self.jm is not None and self.herm is not None:
            out["S"] = (self.centered_S() ** 2).mean(axis=0) / d2
        return out

    # -- replicates ------------------------------------------------------------

    def _block_totals(self, starts: np.ndarray) -> np.ndarray:
        # block multiplicities times integer counts: every partial sum is an
        # integer below 2**53, so the product is exact whatever the BLAS order
        mult = np.zeros((starts.shape[0], self.n_blocks))
        rows = np.repeat(np.arange(starts.shape[0]), starts.shape[1])
        np.add.at(mult, (rows, starts.ravel()), 1.0)
        return mult @ self.counts.astype(float)

    def replicate_W(self, starts: np.ndarray) -> np.ndarray:
        """Normalised W* for each row of 0-based ``starts`` (shape ``(A, p)``)."""
        starts = np.atleast_2d(starts)
        p = starts.shape[1]
        total = self._block_totals(starts)
        w = (total - p * self.l * self.tilde_F) / (self.d_l * math.sqrt(p))
        w[:, 0] = 0.0
        w[:, -1] = 0.0
        return w

    def replicate_H(self, starts: np.ndarray) -> np.ndarray:
        """Normalised centred Hermite sums, one per row of ``starts``."""
        starts = np.atleast_2d(starts)
        p = starts.shape[1]
        total = self.herm[starts].sum(axis=1)
        return (total - p * self.l * self.tilde_mu) / (self.d_l * math.sqrt(p))

    def replicate_S(self, starts: np.ndarray) -> np.ndarray:
        return self.replicate_W(starts) - self.jm[None, :] * self.replicate_H(starts)[:, None]


def _resolve(plan: BootstrapPlan, replicate) -> np.ndarray:
    if isinstance(replicate, BootstrapReplicate):
        return np.asarray(replicate.start_indices, dtype=np.int64)[None, :] - 1
    return _starts(plan, int(replicate))[None, :]


def _check_plan(sample: SubordinatedSample, plan: BootstrapPlan):
    if plan.n != sample.n:
        raise ValueError(f"plan is for n={plan.n}, sample has n={sample.n}")


def bootstrap_empirical(
    sample: SubordinatedSample, plan: BootstrapPlan, replicate, grid: Grid, m: int
) -> ProcessEvaluation:
    """Normalised bootstrap empirical process W* of one replicate.

    ``replicate`` is a replicate id or an explicit :class:`BootstrapReplicate`.
    """
    _check_plan(sample, plan)
    table = BlockTable(sample, plan.l, m, grid)
    w = table.replicate_W(_resolve(plan, replicate))[0]
    return ProcessEvaluation(grid, w, Label.W_STAR, sample.n, sample.seed)


def bootstrap_residual(
    sample: SubordinatedSample,
    plan: BootstrapPlan,
    replicate,
    grid: Grid,
    profile: HermiteProfile,
) -> ProcessEvaluation:
    """Bootstrap reduction residual ``S* = W* - J_m/m! * H*``."""
    _check_plan(sample, plan)
    table = BlockTable(sample, plan.l, profile.rank, grid, profile)
    s = table.replicate_S(_resolve(plan, replicate))[0]
    return ProcessEvaluation(grid, s, Label.S_STAR, sample.n, sample.seed)


def bootstrap_hermite_sum(
    sample: SubordinatedSample, plan: BootstrapPlan, replicate, m: int
) -> float:
    """``(d_l sqrt(p))^{-1} sum_{i <= pl} (H_m(X*_i) - tilde_mu)``."""
    _check_plan(sample, plan)
    table = BlockTable(sample, plan.l, m)
    return float(table.replicate_H(_resolve(plan, replicate))[0])


def conditional_second_moment(
    sample: SubordinatedSample,
    profile: HermiteProfile,
    l: int,
    x: float,
    y: float | None = None,
) -> float:
    """Exact ``E*[S*(x)^2]`` (or of the increment ``S*(x, y)``) over all blocks."""
    pts = [x] if y is None else [x, y]
    if y is not None and not x < y:
        raise ValueError("increment needs x < y")
    finite = [v for v in pts if math.isfinite(v)]
    grid = Grid(tuple(finite) if finite else (0.0,))
    table = BlockTable(sample, l, profile.rank, grid, profile)
    c = table.centered_S()

    def column(v):
        if v == -math.inf:
            return c[:, 0]
        if v == math.inf:
            return c[:, -1]
        return c[:, 1 + finite.index(v)]

    block = column(x) if y is None else column(y) - column(x)
    return float(np.mean(block**2) / table.d_l**2)


def replicates_csv(table: BlockTable, starts: np.ndarray, replicate_ids=None) -> str:
    """RFC-4180 rows ``replicate_id,x,W_star,S_star`` for the given replicates."""
    w = table.replicate_W(starts)
    s = table.replicate_S(starts)
    ids = range(len(starts)) if replicate_ids is None else replicate_ids
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\r\n")
    out.writerow(["replicate_id", "x", "W_star", "S_star"])
    xs = table.grid.x
    for k, rid in enumerate(ids):
        for g, xv in enumerate(xs):
            out.writerow([rid, repr(float(xv)), repr(float(w[k, g])), repr(float(s[k, g]))])
    return buf.getvalue()
