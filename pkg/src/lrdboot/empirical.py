"""Empirical process, exact normalisation and the reduction residual."""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import RegimeViolation
from .hermite import HermiteProfile, Transform, hermite_eval
from .lrd_gauss import CovarianceModel, autocovariance, simulate_path

__all__ = [
    "SubordinatedSample",
    "simulate_sample",
    "Grid",
    "Label",
    "ProcessEvaluation",
    "Normalization",
    "hurst_exponent",
    "dependence_sum",
    "normalizer_dn",
    "normalization",
    "grid_functions",
    "counts_below",
    "empirical_process",
    "reduction_residual",
]


@dataclass(frozen=True)
class SubordinatedSample:
    """Gaussian path ``x`` and its image ``y = G(x)``.

    ``x`` is ``None`` for observed data where the Gaussian layer is unknown.
    """

    y: np.ndarray = field(repr=False)
    x: np.ndarray | None = field(default=None, repr=False)
    model: CovarianceModel | None = None
    transform: Transform | None = None
    seed: int | None = None

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        if y.ndim != 1 or y.size == 0:
            raise ValueError("sample must be a non-empty 1-d array")
        if self.x is not None and np.shape(self.x) != y.shape:
            raise ValueError("x and y must have the same length")
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    def __len__(self):
        return self.n

    def require_x(self) -> np.ndarray:
        if self.x is None:
            raise ValueError("this operation needs the Gaussian coordinates X")
        return np.asarray(self.x)


def simulate_sample(
    model: CovarianceModel, transform: Transform, n: int, seed: int
) -> SubordinatedSample:
    path = simulate_path(model, n, seed)
    return SubordinatedSample(
        y=np.asarray(transform(path.values), dtype=float).reshape(-1),
        x=path.values,
        model=model,
        transform=transform,
        seed=int(seed),
    )


@dataclass(frozen=True)
class Grid:
    """Evaluation points ``-inf < x_1 < ... < x_k < +inf``.

    Only the finite points are stored; the two sentinels are implicit and
    occupy the first and last slot of every value vector.
    """

    points: tuple

    def __post_init__(self):
        pts = tuple(float(p) for p in np.asarray(self.points, dtype=float).ravel())
        if len(pts) < 1:
            raise ValueError("grid needs at least one finite point")
        if not all(math.isfinite(p) for p in pts):
            raise ValueError("grid points must be finite; sentinels are implicit")
        if any(b <= a for a, b in zip(pts[:-1], pts[1:])):
            raise ValueError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_quantiles(cls, profile: HermiteProfile, levels) -> "Grid":
        xs = np.asarray(profile.quantile(np.asarray(levels, dtype=float)), dtype=float)
        return cls(tuple(np.unique(xs)))

    @classmethod
    def default(cls, profile: HermiteProfile, size: int = 101) -> "Grid":
        """``size`` quantiles of ``F`` from 1% to 99%."""
        return cls.from_quantiles(profile, np.linspace(0.01, 0.99, size))

    @property
    def interior(self) -> np.ndarray:
        return np.asarray(self.points)

    @property
    def x(self) -> np.ndarray:
        """All points including the sentinels as floating infinities."""
        return np.concatenate([[-np.inf], self.interior, [np.inf]])

    def __len__(self):
        return len(self.points) + 2


class Label(str, enum.Enum):
    W_N = "W_N"
    W_N_NORMALIZED = "W_N_NORMALIZED"
    S_N = "S_N"
    W_STAR = "W_STAR"
    S_STAR = "S_STAR"
    J_HAT = "J_HAT"


@dataclass(frozen=True)
class ProcessEvaluation:
    grid: Grid
    values: np.ndarray = field(repr=False)
    label: Label
    n: int
    seed: int | None = None

    def __post_init__(self):
        if len(self.values) != len(self.grid):
            raise ValueError("values and grid differ in length")

    def to_csv(self) -> str:
        """RFC-4180 rows ``x,value,label,n,seed`` with a header line."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["x", "value", "label", "n", "seed"])
        seed = "" if self.seed is None else self.seed
        for x, v in zip(self.grid.x, self.values):
            w.writerow([repr(float(x)), repr(float(v)), self.label.value, self.n, seed])
        return buf.getvalue()


def hurst_exponent(m: int, d_exp: float) -> float:
    """``H = 1 - m D / 2``."""
    return 1.0 - m * d_exp / 2.0


def _check_regime(model: CovarianceModel, m: int):
    if m < 1:
        raise ValueError("Hermite rank must be positive")
    if m * model.d_exp_effective >= 1.0:
        raise RegimeViolation(
            f"m * D = {m * model.d_exp_effective:g} >= 1 for {model}: not long memory"
        )


def dependence_sum(model: CovarianceModel, m: int, n: int) -> float:
    """``sum_{i,j <= n} |rho(i - j)|^m`` in O(n)."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    k = np.arange(1, n)
    tail = np.abs(autocovariance(model, k)) ** m if n > 1 else np.zeros(0)
    return float(n + 2.0 * np.sum((n - k) * tail))


def normalizer_dn(model: CovarianceModel, m: int, n: int) -> float:
    """Standard deviation of ``sum_{i <= n} H_m(X_i)``.

    Equal to ``sqrt(m! * sum_{i,j <= n} rho(i - j)^m)``; with this scale the
    normalised Hermite sum has unit variance for every ``n``.

    Raises
    ------
    RegimeViolation
        If ``m * D >= 1``.
    """
    _check_regime(model, m)
    return math.sqrt(math.factorial(m) * dependence_sum(model, m, n))


@dataclass(frozen=True)
class Normalization:
    m: int
    d_exp: float
    hurst_H: float
    d_n: float


def normalization(model: CovarianceModel, m: int, n: int) -> Normalization:
    d = model.d_exp_effective
    return Normalization(m, d, hurst_exponent(m, d), normalizer_dn(model, m, n))


@lru_cache(maxsize=256)
def grid_functions(profile: HermiteProfile, grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """``(F, J_m / m!)`` on the full grid, sentinels included."""
    cdf = np.concatenate([[0.0], profile.cdf(grid.interior), [1.0]])
    jm = np.concatenate([[0.0], profile.jm(grid.interior), [0.0]])
    jm = jm / math.factorial(profile.rank)
    cdf.setflags(write=False)
    jm.setflags(write=False)
    return cdf, jm


def counts_below(y_sorted: np.ndarray, grid: Grid) -> np.ndarray:
    """``#{i : y_i <= x}`` for every grid slot; ``y_sorted`` must be ascending."""
    n = y_sorted.shape[0]
    inner = np.searchsorted(y_sorted, grid.interior, side="right")
    return np.concatenate([[0], inner, [n]]).astype(np.int64)


def empirical_process(
    sample: SubordinatedSample,
    profile: HermiteProfile,
    grid: Grid,
    normalized: bool = False,
) -> ProcessEvaluation:
    """``W_n(x) = sum_i (1{Y_i <= x} - F(x))``, optionally divided by ``d_n``."""
    cdf, _ = grid_functions(profile, grid)
    w = counts_below(np.sort(sample.y), grid) - sample.n * cdf
    # exact zeros at the sentinels, independent of rounding in n * F
    w[0] = w[-1] = 0.0
    label = Label.W_N
    if normalized:
        w = w / normalizer_dn(sample.model, profile.rank, sample.n)
        label = Label.W_N_NORMALIZED
    return ProcessEvaluation(grid, w, label, sample.n, sample.seed)


def reduction_residual(
    sample: SubordinatedSample, profile: HermiteProfile, grid: Grid
) -> ProcessEvaluation:
    """``S_n(x) = d_n^{-1} sum_i (1{Y_i <= x} - F(x) - J_m(x)/m! H_m(X_i))``."""
    x = sample.require_x()
    cdf, jm = grid_functions(profile, grid)
    hsum = float(np.sum(hermite_eval(profile.rank, x)))
    s = counts_below(np.sort(sample.y), grid) - sample.n * cdf - jm * hsum
    s[0] = s[-1] = 0.0
    s /= normalizer_dn(sample.model, profile.rank, sample.n)
    return ProcessEvaluation(grid, s, Label.S_N, sample.n, sample.seed)
