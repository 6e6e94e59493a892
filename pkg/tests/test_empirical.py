import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mc_mean_se
from lrdboot.empirical import (
    Grid,
    Label,
    ProcessEvaluation,
    SubordinatedSample,
    counts_below,
    dependence_sum,
    empirical_process,
    grid_functions,
    hurst_exponent,
    normalization,
    normalizer_dn,
    reduction_residual,
    simulate_sample,
)
from lrdboot.errors import RegimeViolation
from lrdboot.hermite import Transform, build_profile
from lrdboot.lrd_gauss import CovarianceModel
from oracles import INCREMENT_PAIRS, brute_dependence_sum, residual_second_moment

POLY04 = CovarianceModel.poly(0.4)
POLY03 = CovarianceModel.poly(0.3)
FGN08 = CovarianceModel.fgn(0.8)


class TestNormalizer:
    @pytest.mark.parametrize("model", [POLY04, FGN08])
    @pytest.mark.parametrize("m", [1, 2])
    def test_single_observation(self, model, m):
        assert dependence_sum(model, m, 1) == 1.0
        assert normalizer_dn(model, m, 1) == pytest.approx(math.sqrt(math.factorial(m)))

    def test_examples(self):
        assert dependence_sum(POLY04, 1, 2) == pytest.approx(2 + 2 * 2**-0.4, abs=1e-12)
        assert normalizer_dn(POLY04, 1, 2) == pytest.approx(1.875024, abs=1e-6)
        assert math.sqrt(dependence_sum(POLY04, 2, 2)) == pytest.approx(1.774457, abs=1e-6)
        # with the factorial the normaliser is the sd of a sum of H_2
        assert normalizer_dn(POLY04, 2, 2) == pytest.approx(math.sqrt(2) * 1.774457, abs=1e-6)

    @pytest.mark.parametrize("model", [POLY04, FGN08, POLY03])
    @pytest.mark.parametrize("m,n", [(1, 5), (1, 64), (2, 37), (2, 200)])
    def test_matches_double_sum(self, model, m, n):
        assert dependence_sum(model, m, n) == pytest.approx(brute_dependence_sum(model, m, n), rel=1e-12)

    def test_regime_violation(self):
        with pytest.raises(RegimeViolation):
            normalizer_dn(POLY04, 3, 10)
        with pytest.raises(RegimeViolation):
            normalizer_dn(FGN08, 3, 10)

    def test_strictly_increasing(self):
        d = [normalizer_dn(POLY03, 2, n) for n in range(1, 300)]
        assert all(b > a for a, b in zip(d[:-1], d[1:]))

    @pytest.mark.parametrize("model,m", [(POLY03, 1), (POLY03, 2), (FGN08, 1), (POLY04, 2)])
    def test_growth_exponent(self, model, m):
        ns = 2 ** np.arange(10, 17)
        logd = np.log([normalizer_dn(model, m, int(n)) for n in ns])
        slope = np.polyfit(np.log(ns), logd, 1)[0]
        assert abs(slope - hurst_exponent(m, model.d_exp_effective)) < 0.03

    def test_hurst_interval(self):
        for d in [0.1, 0.3, 0.49, 0.6, 0.9]:
            for m in [1, 2, 3]:
                h = hurst_exponent(m, d)
                assert (0.5 < h < 1.0) == (m * d < 1)

    def test_normalization_record(self):
        rec = normalization(POLY03, 2, 100)
        assert rec.hurst_H == pytest.approx(0.7)
        assert rec.d_n == normalizer_dn(POLY03, 2, 100)

    def test_unit_variance_of_hermite_sum(self):
        # d_n^2 is the exact variance of sum H_m(X_i)
        from lrdboot.hermite import hermite_eval

        n, reps = 32, 20_000
        sums = np.array(
            [np.sum(hermite_eval(2, simulate_sample(POLY03, Transform("identity"), n, s).x)) for s in range(reps)]
        )
        v = sums**2 / normalizer_dn(POLY03, 2, n) ** 2
        mean, se = mc_mean_se(v)
        assert abs(mean - 1.0) < 4 * se


class TestGrid:
    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            Grid((0.0, -1.0))
        with pytest.raises(ValueError):
            Grid((0.0, 0.0))

    def test_rejects_explicit_infinity(self):
        with pytest.raises(ValueError):
            Grid((-math.inf, 0.0))

    def test_sentinels(self):
        g = Grid((0.0, 1.0))
        assert len(g) == 4
        assert g.x[0] == -math.inf and g.x[-1] == math.inf

    def test_default_is_quantile_grid(self, identity_profile):
        g = Grid.default(identity_profile)
        assert len(g.points) == 101
        np.testing.assert_allclose(identity_profile.cdf(g.interior), np.linspace(0.01, 0.99, 101), atol=1e-10)


class TestEmpiricalProcess:
    def test_hand_count(self, identity_profile):
        s = SubordinatedSample(y=np.array([-1.0, 0.0, 1.0]))
        w = empirical_process(s, identity_profile, Grid((0.0,)))
        assert w.values[1] == pytest.approx(0.5)
        assert w.label is Label.W_N

    def test_all_above(self, identity_profile):
        s = SubordinatedSample(y=np.array([3.0, 4.0, 5.0, 6.0]))
        assert empirical_process(s, identity_profile, Grid((0.0,))).values[1] == -2.0

    def test_sentinels_zero(self, poly03, identity_profile, identity_grid):
        s = simulate_sample(poly03, Transform("identity"), 128, 3)
        for ev in (
            empirical_process(s, identity_profile, identity_grid),
            empirical_process(s, identity_profile, identity_grid, normalized=True),
            reduction_residual(s, identity_profile, identity_grid),
        ):
            assert ev.values[0] == 0.0 and ev.values[-1] == 0.0

    def test_normalized_scale(self, poly03, identity_profile, identity_grid):
        s = simulate_sample(poly03, Transform("identity"), 100, 4)
        raw = empirical_process(s, identity_profile, identity_grid).values
        norm = empirical_process(s, identity_profile, identity_grid, normalized=True)
        assert norm.label is Label.W_N_NORMALIZED
        np.testing.assert_allclose(norm.values, raw / normalizer_dn(poly03, 1, 100))

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32), n=st.integers(2, 200))
    def test_telescoping(self, seed, n):
        profile = build_profile(Transform("square"))
        s = simulate_sample(POLY03, Transform("square"), n, seed)
        grid = Grid(tuple(np.linspace(0.05, 4.0, 12)))
        w = empirical_process(s, profile, grid).values
        cdf, _ = grid_functions(profile, grid)
        cnt = counts_below(np.sort(s.y), grid)
        for i in range(len(grid)):
            for j in range(i + 1, len(grid)):
                increment = (cnt[j] - cnt[i]) - n * (cdf[j] - cdf[i])
                assert w[j] - w[i] == pytest.approx(increment, abs=1e-9)
        # the increments over consecutive grid cells add up to the total
        assert np.sum(np.diff(w)) == pytest.approx(w[-1] - w[0], abs=1e-9)

    def test_residual_definition(self, poly03, identity_profile, identity_grid):
        s = simulate_sample(poly03, Transform("identity"), 50, 11)
        w = empirical_process(s, identity_profile, identity_grid).values
        _, jm = grid_functions(identity_profile, identity_grid)
        expected = (w - jm * np.sum(s.x)) / normalizer_dn(poly03, 1, 50)
        expected[0] = expected[-1] = 0.0
        np.testing.assert_allclose(reduction_residual(s, identity_profile, identity_grid).values, expected, atol=1e-12)

    def test_residual_needs_x(self, identity_profile):
        with pytest.raises(ValueError):
            reduction_residual(SubordinatedSample(y=np.zeros(3)), identity_profile, Grid((0.0,)))

    def test_csv(self, identity_profile):
        s = SubordinatedSample(y=np.array([-1.0, 0.0, 1.0]), seed=9)
        text = empirical_process(s, identity_profile, Grid((0.0,))).to_csv()
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["x", "value", "label", "n", "seed"]
        assert rows[1][0] == "-inf" and rows[-1][0] == "inf"
        assert [r[2] for r in rows[1:]] == ["W_N"] * 3
        assert text.endswith("\r\n")

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            ProcessEvaluation(Grid((0.0,)), np.zeros(2), Label.W_N, 1)


DECAY_NS = (256, 512, 1024, 2048, 4096)


@pytest.fixture(scope="module")
def ratios(identity_profile):
    """Mean square of residual increments over 500 seeds, divided by ``F(x, y)``."""
    grid = Grid(tuple(sorted({v for pair in INCREMENT_PAIRS for v in pair})))
    pos = {v: k + 1 for k, v in enumerate(grid.points)}
    out = {}
    for n in DECAY_NS:
        s_vals = np.array(
            [
                reduction_residual(simulate_sample(POLY03, Transform("identity"), n, 10_000 + r), identity_profile, grid).values
                for r in range(500)
            ]
        )
        for x, y in INCREMENT_PAIRS:
            f = float(identity_profile.cdf(y) - identity_profile.cdf(x))
            sq = (s_vals[:, pos[y]] - s_vals[:, pos[x]]) ** 2 / f
            out[n, (x, y)] = (*mc_mean_se(sq), residual_second_moment(identity_profile, POLY03, n, x, y) / f)
    return out


class TestResidualDecay:
    @pytest.mark.parametrize("pair", INCREMENT_PAIRS)
    def test_matches_exact_series(self, ratios, pair):
        for n in DECAY_NS:
            mean, se, exact = ratios[n, pair]
            assert abs(mean - exact) < 4 * se, (n, mean, exact, se)

    @pytest.mark.parametrize("pair", INCREMENT_PAIRS)
    def test_decreases_with_n(self, ratios, pair):
        means = [ratios[n, pair][0] for n in DECAY_NS]
        assert all(b < a for a, b in zip(means[:-1], means[1:])), means

    def test_exact_series_decreases(self, identity_profile):
        for x, y in INCREMENT_PAIRS:
            vals = [residual_second_moment(identity_profile, POLY03, n, x, y) for n in DECAY_NS]
            assert all(b < a for a, b in zip(vals[:-1], vals[1:]))
