"""Long-memory correlation models and exact Gaussian path simulation.

Paths are generated by circulant embedding (Davies and Harte): the first
row of the correlation matrix is mirrored into a circulant of size
``2 (n - 1)``, diagonalised by the FFT, and coloured complex noise is
transformed back. When every circulant eigenvalue is non-negative the real
part of the result is an exact draw from ``N(0, [rho(|i - j|)])``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import EmbeddingNotPSD
from .rng import stream

__all__ = [
    "CovarianceModel",
    "GaussianPath",
    "autocovariance",
    "circulant_eigenvalues",
    "simulate_path",
]

EIG_TOL = 1e-9


@dataclass(frozen=True)
class CovarianceModel:
    """Unit-variance correlation family with hyperbolic decay ``k^{-D}``.

    Use the :meth:`fgn` and :meth:`poly` constructors.

    ``"fgn"``  fractional Gaussian noise with Hurst parameter ``h`` in
               (1/2, 1); decay exponent ``D = 2 - 2h``.
    ``"poly"`` ``rho(k) = (1 + k)^{-D}`` with ``D`` in (0, 1); the slowly
               varying factor is ``(1 + 1/k)^{-D} -> 1``.
    """

    family: str
    param: float

    def __post_init__(self):
        if self.family == "fgn":
            if not 0.5 < self.param < 1.0:
                raise ValueError(f"fgn hurst must lie in (1/2, 1), got {self.param}")
        elif self.family == "poly":
            if not 0.0 < self.param < 1.0:
                raise ValueError(f"poly exponent must lie in (0, 1), got {self.param}")
        else:
            raise ValueError(f"unknown covariance family {self.family!r}")
        object.__setattr__(self, "param", float(self.param))

    @classmethod
    def fgn(cls, hurst: float) -> "CovarianceModel":
        return cls("fgn", hurst)

    @classmethod
    def poly(cls, d_exp: float) -> "CovarianceModel":
        return cls("poly", d_exp)

    @property
    def d_exp_effective(self) -> float:
        """Decay exponent ``D`` of ``rho(k) ~ c k^{-D}``."""
        if self.family == "fgn":
            return 2.0 - 2.0 * self.param
        return self.param

    @property
    def hurst(self) -> float:
        """Hurst parameter ``1 - D/2`` of the underlying Gaussian process."""
        return 1.0 - self.d_exp_effective / 2.0

    def to_dict(self) -> dict:
        key = "hurst" if self.family == "fgn" else "d_exp"
        return {"family": self.family, key: self.param}

    def __str__(self):
        return f"{self.family.upper()}({self.param:g})"


def autocovariance(model: CovarianceModel, lag):
    """Correlation ``rho(lag)``; ``lag`` may be an integer or an integer array."""
    k = np.abs(np.asarray(lag, dtype=float))
    if model.family == "poly":
        out = (1.0 + k) ** (-model.param)
    else:
        two_h = 2.0 * model.param
        out = np.empty_like(k)
        small = k < 2
        ks = k[small]
        out[small] = 0.5 * (
            (ks + 1.0) ** two_h - 2.0 * ks**two_h + np.abs(ks - 1.0) ** two_h
        )
        kb = k[~small]
        # second difference of k^{2h}, written to avoid cancellation at large k
        u = 1.0 / kb
        out[~small] = (
            0.5
            * kb**two_h
            * (np.expm1(two_h * np.log1p(u)) + np.expm1(two_h * np.log1p(-u)))
        )
    if out.ndim == 0:
        return float(out)
    return out


@lru_cache(maxsize=64)
def _eigenvalues(model: CovarianceModel, n: int) -> np.ndarray:
    r = autocovariance(model, np.arange(n))
    row = np.concatenate([r, r[-2:0:-1]])
    spectrum = np.fft.fft(row)
    lam = spectrum.real.copy()
    lam[np.abs(spectrum.imag) >= EIG_TOL] = np.nan
    if np.isnan(lam).any():
        raise EmbeddingNotPSD(f"{model}, n={n}: circulant spectrum is not real")
    lam_min = lam.min()
    if lam_min < -EIG_TOL:
        raise EmbeddingNotPSD(
            f"{model}, n={n}: smallest circulant eigenvalue {lam_min:.3e}"
        )
    lam.setflags(write=False)
    return lam


def circulant_eigenvalues(model: CovarianceModel, n: int) -> np.ndarray:
    """Spectrum of the length ``2 (n - 1)`` circulant embedding of ``rho(0..n-1)``.

    Raises
    ------
    EmbeddingNotPSD
        If an eigenvalue is below ``-1e-9``.
    """
    n = int(n)
    if n < 2:
        raise ValueError("circulant embedding needs n >= 2")
    return _eigenvalues(model, n)


@dataclass(frozen=True)
class GaussianPath:
    values: np.ndarray = field(repr=False)
    model: CovarianceModel
    seed: int

    def __len__(self):
        return len(self.values)


def _colour(model: CovarianceModel, n: int, rng: np.random.Generator) -> np.ndarray:
    if n == 1:
        return np.array([rng.standard_normal()])
    lam = circulant_eigenvalues(model, n)
    size = lam.shape[0]
    w = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    y = np.fft.fft(np.sqrt(np.clip(lam, 0.0, None) / size) * w)
    return y.real[:n].copy()


def simulate_path(model: CovarianceModel, n: int, seed: int) -> GaussianPath:
    """Draw ``X_1..X_n`` exactly from the stationary Gaussian law of ``model``.

    The output depends only on ``(model, n, seed)``.
    """
    n = int(n)
    if n < 1:
        raise ValueError("path length must be positive")
    values = _colour(model, n, stream(seed))
    values.setflags(write=False)
    return GaussianPath(values, model, int(seed))
