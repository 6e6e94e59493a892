"""Hermite machinery for indicator classes ``{1{G(X) <= x}}``.

For every supported transform ``G`` the sublevel set ``{s : G(s) <= x}`` is
a finite union of intervals, computed exactly. Gaussian integrals of Hermite
polynomials over an interval have the closed form

    int_a^b H_q(s) phi(s) ds = H_{q-1}(a) phi(a) - H_{q-1}(b) phi(b),   q >= 1,

so ``F(x)`` and ``J_q(x)`` are evaluated without numerical quadrature.
Only ``sigma_m`` (an expectation of ``G`` itself) goes through ``scipy.integrate``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from .errors import QuadratureFailure, RankNotFound, RankTooLarge

__all__ = [
    "Transform",
    "HermiteProfile",
    "hermite_eval",
    "true_cdf",
    "hermite_coeff",
    "detect_rank",
    "sigma_m",
    "quantile",
    "default_probe_grid",
    "build_profile",
]

Q_MAX = 30
RANK_TOL = 1e-6
SQRT_2PI = math.sqrt(2.0 * math.pi)


def hermite_eval(q: int, x):
    """Probabilists' Hermite polynomial ``H_q(x)`` by three-term recurrence."""
    q = int(q)
    if q < 0:
        raise ValueError("Hermite degree must be non-negative")
    if q > Q_MAX:
        raise RankTooLarge(f"degree {q} exceeds supported maximum {Q_MAX}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if q == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = x.copy()
    for k in range(1, q):
        h_prev, h = h, x * h - k * h_prev
    return h if h.ndim else float(h)


def _phi(x: float) -> float:
    if math.isinf(x):
        return 0.0
    return math.exp(-0.5 * x * x) / SQRT_2PI


@dataclass(frozen=True)
class Transform:
    """Measurable map ``G`` applied to the Gaussian path.

    ``kind`` is one of ``identity``, ``square``, ``abs``, ``hermite`` (with
    degree ``q``) or ``custom``. A custom transform is the piecewise-linear
    interpolant through ``knots``/``values``, held constant outside the knot
    range, so each linear piece is monotone.
    """

    kind: str
    q: int = 0
    knots: tuple = field(default=(), repr=False)
    values: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.kind not in {"identity", "square", "abs", "hermite", "custom"}:
            raise ValueError(f"unknown transform kind {self.kind!r}")
        if self.kind == "hermite" and not 1 <= self.q <= Q_MAX:
            raise ValueError(f"hermite transform degree must be in 1..{Q_MAX}")
        if self.kind == "custom":
            k = np.asarray(self.knots, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if k.ndim != 1 or k.shape != v.shape or k.size < 2:
                raise ValueError("custom transform needs >= 2 knots with matching values")
            if np.any(np.diff(k) <= 0) or not np.all(np.isfinite(k)):
                raise ValueError("custom knots must be finite and strictly increasing")
            if not np.all(np.isfinite(v)):
                raise ValueError("custom values must be finite")
            object.__setattr__(self, "knots", tuple(float(t) for t in k))
            object.__setattr__(self, "values", tuple(float(t) for t in v))

    @classmethod
    def from_keyword(cls, word: str) -> "Transform":
        """Parse ``identity | square | abs | hermite:q``."""
        word = word.strip().lower()
        if word in {"identity", "square", "abs"}:
            return cls(word)
        if word.startswith("hermite:"):
            try:
                q = int(word.split(":", 1)[1])
            except ValueError:
                raise ValueError(f"bad hermite degree in {word!r}") from None
            return cls("hermite", q)
        raise ValueError(f"unknown transform keyword {word!r}")

    @classmethod
    def custom(cls, knots, values) -> "Transform":
        return cls("custom", 0, tuple(knots), tuple(values))

    @property
    def keyword(self) -> str:
        if self.kind == "hermite":
            return f"hermite:{self.q}"
        return self.kind

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind == "identity":
            out = s.copy()
        elif self.kind == "square":
            out = s * s
        elif self.kind == "abs":
            out = np.abs(s)
        elif self.kind == "hermite":
            out = np.asarray(hermite_eval(self.q, s))
        else:
            out = np.interp(s, self.knots, self.values)
        return out if out.ndim else float(out)

    def breakpoints(self) -> list[float]:
        """Points where ``G`` may change monotonicity (used to split integrals)."""
        if self.kind in {"square", "abs"}:
            return [0.0]
        if self.kind == "hermite":
            return sorted(_real_roots(_hermite_power_coeffs(self.q - 1), 0.0)) if self.q > 1 else []
        if self.kind == "custom":
            return list(self.knots)
        return []

    def preimage(self, x: float) -> list[tuple[float, float]]:
        """Disjoint sorted intervals whose union is ``{s : G(s) <= x}``."""
        if math.isnan(x):
            raise ValueError("x is NaN")
        if x == math.inf:
            return [(-math.inf, math.inf)]
        if x == -math.inf:
            return []
        if self.kind == "identity":
            return [(-math.inf, x)]
        if self.kind in {"square", "abs"}:
            if x < 0:
                return []
            c = math.sqrt(x) if self.kind == "square" else x
            return [(-c, c)]
        if self.kind == "hermite":
            return _hermite_sublevel(self.q, x)
        return _custom_sublevel(self.knots, self.values, x)


def _hermite_power_coeffs(q: int) -> np.ndarray:
    c = np.zeros(q + 1)
    c[q] = 1.0
    return np.polynomial.hermite_e.herme2poly(c)


def _real_roots(power_coeffs: np.ndarray, shift: float) -> list[float]:
    c = power_coeffs.copy()
    c[0] -= shift
    if c.size == 1:
        return []
    roots = np.polynomial.polynomial.polyroots(c)
    scale = max(1.0, float(np.max(np.abs(roots)))) if roots.size else 1.0
    real = [float(r.real) for r in roots if abs(r.imag) <= 1e-7 * scale]
    return real


def _hermite_sublevel(q: int, x: float) -> list[tuple[float, float]]:
    roots = _real_roots(_hermite_power_coeffs(q), x)
    polished = []
    for r in roots:
        for _ in range(3):
            d = q * hermite_eval(q - 1, r)
            if d == 0.0:
                break
            step = (hermite_eval(q, r) - x) / d
            r -= step
            if abs(step) < 1e-15 * max(1.0, abs(r)):
                break
        polished.append(r)
    cuts = sorted(polished)
    edges = [-math.inf, *cuts, math.inf]
    pieces = []
    for a, b in zip(edges[:-1], edges[1:]):
        if a == b:
            continue
        if math.isinf(a) and math.isinf(b):
            mid = 0.0
        elif math.isinf(a):
            mid = b - 1.0
        elif math.isinf(b):
            mid = a + 1.0
        else:
            mid = 0.5 * (a + b)
        if hermite_eval(q, mid) <= x:
            pieces.append((a, b))
    return _merge(pieces)


def _custom_sublevel(knots, values, x) -> list[tuple[float, float]]:
    pieces = []
    if values[0] <= x:
        pieces.append((-math.inf, knots[0]))
    for s0, s1, g0, g1 in zip(knots[:-1], knots[1:], values[:-1], values[1:]):
        lo0, lo1 = g0 <= x, g1 <= x
        if lo0 and lo1:
            pieces.append((s0, s1))
        elif lo0 or lo1:
            t = s0 + (x - g0) * (s1 - s0) / (g1 - g0)
            pieces.append((s0, t) if lo0 else (t, s1))
    if values[-1] <= x:
        pieces.append((knots[-1], math.inf))
    return _merge(pieces)


def _merge(pieces):
    out: list[tuple[float, float]] = []
    for a, b in sorted(pieces):
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def _interval_mass(a: float, b: float) -> float:
    # pick the tail that keeps the subtraction well conditioned
    if a >= 0:
        return float(special.ndtr(-a) - special.ndtr(-b))
    return float(special.ndtr(b) - special.ndtr(a))


def _interval_hermite(q: int, a: float, b: float) -> float:
    if q == 0:
        return _interval_mass(a, b)
    left = 0.0 if math.isinf(a) else hermite_eval(q - 1, a) * _phi(a)
    right = 0.0 if math.isinf(b) else hermite_eval(q - 1, b) * _phi(b)
    return left - right


def _vectorize(fn, x):
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        return fn(float(arr))
    return np.array([fn(float(v)) for v in arr.ravel()]).reshape(arr.shape)


def true_cdf(transform: Transform, x):
    """``F(x) = P(G(X) <= x)`` for standard normal ``X``."""
    return _vectorize(
        lambda v: min(1.0, sum(_interval_mass(a, b) for a, b in transform.preimage(v))),
        x,
    )


def hermite_coeff(transform: Transform, q: int, x):
    """``J_q(x) = E[1{G(X) <= x} H_q(X)]``."""
    q = int(q)
    if q > Q_MAX:
        raise RankTooLarge(f"degree {q} exceeds supported maximum {Q_MAX}")
    if q < 0:
        raise ValueError("Hermite degree must be non-negative")
    return _vectorize(
        lambda v: sum(_interval_hermite(q, a, b) for a, b in transform.preimage(v)),
        x,
    )


def quantile(transform: Transform, u):
    """Generalised inverse ``inf{x : F(x) >= u}`` for ``u`` in (0, 1)."""

    def one(level: float) -> float:
        if not 0.0 < level < 1.0:
            raise ValueError("quantile level must lie in (0, 1)")
        lo, hi = -1.0, 1.0
        while true_cdf(transform, lo) >= level:
            lo *= 2.0
        while true_cdf(transform, hi) < level:
            hi *= 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if true_cdf(transform, mid) >= level:
                hi = mid
            else:
                lo = mid
        return hi

    return _vectorize(one, u)


def default_probe_grid(transform: Transform, size: int = 41) -> np.ndarray:
    """``size`` points at equispaced quantile levels ``k / (size + 1)`` of ``F``."""
    levels = np.arange(1, size + 1) / (size + 1)
    return np.asarray(quantile(transform, levels))


def detect_rank(
    transform: Transform,
    probe_grid=None,
    q_max: int = 12,
    tol: float = RANK_TOL,
) -> int:
    """Smallest ``q >= 1`` with ``max_x |J_q(x)| > tol`` over the probe grid.

    Raises
    ------
    RankNotFound
        If every coefficient up to ``q_max`` stays below ``tol``.
    """
    if q_max > Q_MAX:
        raise RankTooLarge(f"q_max {q_max} exceeds supported maximum {Q_MAX}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    grid = default_probe_grid(transform) if probe_grid is None else np.asarray(probe_grid, float)
    if grid.size == 0:
        raise ValueError("probe grid is empty")
    for q in range(1, q_max + 1):
        if np.max(np.abs(hermite_coeff(transform, q, grid))) > tol:
            return q
    raise RankNotFound(f"{transform.keyword}: |J_q| <= {tol} for all q <= {q_max}")


def _gauss_expectation(transform: Transform, fn, tol: float) -> float:
    cuts = [-math.inf, *transform.breakpoints(), math.inf]
    total, err = 0.0, 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        if a == b:
            continue
        val, e = integrate.quad(
            lambda s: fn(s) * _phi(s), a, b, epsabs=tol / 10, epsrel=1e-12, limit=200
        )
        total += val
        err += e
    if not math.isfinite(total) or err > tol:
        raise QuadratureFailure(f"{transform.keyword}: error estimate {err:.2e} > {tol:.0e}")
    return total


def sigma_m(transform: Transform, m: int, tol: float = 1e-8) -> float:
    """``E[G(X) H_m(X)] / m!`` by adaptive quadrature."""
    if m > Q_MAX:
        raise RankTooLarge(f"degree {m} exceeds supported maximum {Q_MAX}")
    second = _gauss_expectation(transform, lambda s: transform(s) ** 2, max(tol, 1e-6))
    if not math.isfinite(second):
        raise QuadratureFailure(f"{transform.keyword}: E[G(X)^2] is not finite")
    raw = _gauss_expectation(transform, lambda s: transform(s) * hermite_eval(m, s), tol)
    return raw / math.factorial(m)


@dataclass(frozen=True)
class HermiteProfile:
    """A transform together with its Hermite rank and derived constants.

    ``rank_margin_low`` flags ranks whose detecting coefficient exceeded the
    tolerance by less than a factor of 10.
    """

    transform: Transform
    rank: int
    sigma_m: float
    rank_margin_low: bool = False

    def cdf(self, x):
        return true_cdf(self.transform, x)

    def coeff(self, q: int, x):
        return hermite_coeff(self.transform, q, x)

    def jm(self, x):
        """Leading coefficient ``J_m(x)``."""
        return hermite_coeff(self.transform, self.rank, x)

    def quantile(self, u):
        return quantile(self.transform, u)


def build_profile(transform: Transform, m: int | None = None, tol: float = RANK_TOL) -> HermiteProfile:
    """Detect (or accept) the rank of ``transform`` and bundle its constants."""
    probe = default_probe_grid(transform)
    rank = detect_rank(transform, probe, tol=tol) if m is None else int(m)
    peak = float(np.max(np.abs(hermite_coeff(transform, rank, probe))))
    return HermiteProfile(
        transform=transform,
        rank=rank,
        sigma_m=sigma_m(transform, rank),
        rank_margin_low=peak < 10 * tol,
    )
