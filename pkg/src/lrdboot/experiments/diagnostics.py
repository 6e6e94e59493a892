"""Moment and Kolmogorov-Smirnov screens for approximate normality."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats

from ..errors import DegenerateSample

__all__ = ["DiagnosticsSummary", "normality_diagnostics", "MIN_SIZE"]

MIN_SIZE = 8


@dataclass(frozen=True)
class DiagnosticsSummary:
    skewness: float
    excess_kurtosis: float
    ks: float
    size: int
    mean: float
    sd: float

    def to_dict(self):
        return asdict(self)


def normality_diagnostics(values) -> DiagnosticsSummary:
    """Studentize ``values`` and compare them with the standard normal law.

    Skewness and excess kurtosis are the plain moment ratios ``m3 / m2^1.5``
    and ``m4 / m2^2 - 3``; ``ks`` is the exact one-sample Kolmogorov-Smirnov
    distance of the studentized sample to ``N(0, 1)``. ``mean`` and ``sd``
    describe the raw input.
    """
    v = np.asarray(values, dtype=float).ravel()
    if v.size < MIN_SIZE:
        raise ValueError(f"need at least {MIN_SIZE} values, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise ValueError("values must be finite")
    mean = float(np.mean(v))
    centred = v - mean
    m2 = float(np.mean(centred**2))
    if m2 <= 0.0 or np.ptp(v) == 0.0:
        raise DegenerateSample("sample standard deviation is zero")
    m3 = float(np.mean(centred**3))
    m4 = float(np.mean(centred**4))
    sd = float(np.std(v, ddof=1))
    ks = float(stats.kstest(centred / sd, "norm").statistic)
    return DiagnosticsSummary(
        skewness=m3 / m2**1.5,
        excess_kurtosis=m4 / m2**2 - 3.0,
        ks=ks,
        size=int(v.size),
        mean=mean,
        sd=sd,
    )
