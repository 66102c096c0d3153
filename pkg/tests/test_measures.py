import math

import numpy as np
import pytest

import oracles
from bmsde import (
    GridSpec,
    InvalidArgument,
    InvalidMeasure,
    NotNormalized,
    Density,
    QuantizedDensity,
    SignedDensity,
    boxast,
    delta_inf,
    delta_zero,
    entropy,
    entropy_series,
    is_degraded,
    make_density,
    mix,
    moment_mk,
    varoast,
)


def bec(grid, eps):
    return make_density(grid, [(0.0, eps), (math.inf, 1.0 - eps)])


def bsc(grid, p):
    llr = math.log((1.0 - p) / p)
    return make_density(grid, [(llr, 1.0 - p), (-llr, p)])


def l1_diff(a, b):
    return (a - b).l1_norm()


class TestMakeDensity:
    def test_point_mass_at_zero(self, grid):
        x = make_density(grid, [(0.0, 1.0)])
        assert l1_diff(x, delta_zero(grid)) == 0.0

    def test_point_mass_at_inf(self, grid):
        x = make_density(grid, [(math.inf, 1.0)])
        assert x.inf_mass == 1.0
        assert l1_diff(x, delta_inf(grid)) == 0.0

    def test_erasure_mixture(self, grid):
        x = bec(grid, 0.3)
        assert x.inf_mass == pytest.approx(0.7, abs=1e-15)
        assert entropy(x) == pytest.approx(0.3, abs=1e-12)

    def test_rejects_nan_location(self, grid):
        with pytest.raises(InvalidArgument):
            make_density(grid, [(math.nan, 1.0)])

    def test_rejects_negative_mass(self, grid):
        with pytest.raises(InvalidMeasure):
            make_density(grid, [(0.0, 1.5), (1.0, -0.5)])

    def test_rejects_unnormalized(self, grid):
        with pytest.raises(NotNormalized):
            make_density(grid, [(0.0, 0.5)])

    def test_negative_location_folds_symmetrically(self, grid):
        x = make_density(grid, [(2.0, 2.0 / 3.0), (-2.0, 1.0 / 3.0)])
        # mass at -2 is forced to e^{-2} times the mass at +2
        w = x.weights
        n = len(w) // 2
        k = round(2.0 / grid.spacing)
        assert w[n - k] == pytest.approx(w[n + k] * math.exp(-2.0), rel=1e-12)


class TestSerialization:
    def test_round_trip(self, grid):
        x = bsc(grid, 0.11)
        y = Density.from_json(x.to_json())
        assert l1_diff(x, y) == 0.0
        assert y.grid == grid

    def test_bad_json(self):
        with pytest.raises(InvalidMeasure):
            Density.from_json("{not json")

    def test_missing_key(self):
        with pytest.raises(InvalidMeasure):
            Density.from_json('{"spacing": 0.0625}')


class TestVaroast:
    def test_identity(self, grid, rng):
        x = oracles.random_channel_mixture(rng, grid)
        assert l1_diff(varoast(delta_zero(grid), x), x) < 1e-15

    def test_inf_absorbs(self, grid, rng):
        x = oracles.random_channel_mixture(rng, grid)
        out = varoast(delta_inf(grid), x)
        assert out.inf_mass == pytest.approx(1.0, abs=1e-12)

    def test_bsc_pair_four_atoms(self, grid):
        # on-grid atoms at +-l1, +-l2 combine to +-(l1+l2), +-(l1-l2)
        # with product masses, every location landing exactly on a bin
        l1, l2 = 3.0, 1.5
        p1 = 1.0 / (1.0 + math.exp(l1))
        p2 = 1.0 / (1.0 + math.exp(l2))
        x1 = make_density(grid, [(l1, 1 - p1), (-l1, p1)])
        x2 = make_density(grid, [(l2, 1 - p2), (-l2, p2)])
        got = varoast(x1, x2)
        atoms = [
            (l1 + l2, (1 - p1) * (1 - p2)),
            (l1 - l2, (1 - p1) * p2),
            (-l1 + l2, p1 * (1 - p2)),
            (-l1 - l2, p1 * p2),
        ]
        want = make_density(grid, atoms)
        assert l1_diff(got, want) < 1e-12


class TestBoxast:
    def test_identity(self, grid, rng):
        x = oracles.random_channel_mixture(rng, grid)
        assert l1_diff(boxast(delta_inf(grid), x), x) < 1e-15

    def test_zero_absorbs(self, grid, rng):
        x = oracles.random_channel_mixture(rng, grid)
        out = boxast(delta_zero(grid), x)
        assert l1_diff(out, delta_zero(grid)) < 1e-12

    def test_bec_closure(self, grid):
        e1, e2 = 0.35, 0.6
        got = boxast(bec(grid, e1), bec(grid, e2))
        want = bec(grid, e1 + e2 - e1 * e2)
        assert l1_diff(got, want) < 1e-14


class TestEntropy:
    def test_delta_zero(self, grid):
        assert entropy(delta_zero(grid)) == pytest.approx(1.0, abs=1e-15)

    def test_delta_inf(self, grid):
        assert entropy(delta_inf(grid)) == 0.0

    def test_bsc_binary_entropy(self, grid):
        assert entropy(bsc(grid, 0.11)) == pytest.approx(
            oracles.BSC_H_011, abs=1e-9
        )

    def test_entropy_order_under_degradation(self, grid):
        assert entropy(bec(grid, 0.7)) > entropy(bec(grid, 0.3))


class TestEntropySeries:
    def test_delta_zero_exact(self, grid):
        assert entropy_series(delta_zero(grid), 5) == pytest.approx(1.0, abs=1e-15)

    def test_delta_inf_truncation_tail(self, grid):
        # all moments are 1; the finite partial sum leaves the harmonic
        # style tail, inside 1e-2 only once K is large
        val = entropy_series(delta_inf(grid), 50)
        assert 0.0 < val < 1e-2

    def test_bec_half_converges(self, grid):
        x = bec(grid, 0.5)
        assert entropy_series(x, 200) == pytest.approx(0.5, abs=1e-3)

    def test_monotone_in_k(self, grid, rng):
        x = oracles.random_channel_mixture(rng, grid)
        vals = [entropy_series(x, k) for k in (5, 10, 20, 50, 100)]
        assert all(a >= b - 1e-15 for a, b in zip(vals, vals[1:]))
        assert vals[-1] >= entropy(x) - 1e-6

    def test_rejects_bad_k(self, grid):
        with pytest.raises(InvalidArgument):
            entropy_series(delta_zero(grid), 0)


class TestMoments:
    def test_delta_inf_is_one(self, grid):
        for k in (1, 2, 3):
            assert moment_mk(delta_inf(grid), k) == 1.0

    def test_delta_zero_is_zero(self, grid):
        for k in (1, 2, 3):
            assert moment_mk(delta_zero(grid), k) == 0.0

    def test_multiplicative_under_boxast(self, rng):
        # needs the fine verification grid; quadratic deposition error at
        # the default grid sits right at 1e-5
        fine = GridSpec(spacing=1.0 / 128, half_range=32.0)
        for _ in range(5):
            x = oracles.random_channel_mixture(rng, fine)
            y = oracles.random_channel_mixture(rng, fine)
            z = boxast(x, y)
            for k in (1, 2, 3):
                assert moment_mk(z, k) == pytest.approx(
                    moment_mk(x, k) * moment_mk(y, k), abs=1e-6
                )

    def test_rejects_bad_k(self, grid):
        with pytest.raises(InvalidArgument):
            moment_mk(delta_zero(grid), 0)


class TestDegradation:
    def test_delta_zero_maximal(self, grid, rng):
        x = oracles.random_channel_mixture(rng, grid)
        assert is_degraded(delta_zero(grid), x)

    def test_delta_inf_minimal(self, grid, rng):
        x = oracles.random_channel_mixture(rng, grid)
        assert is_degraded(x, delta_inf(grid))

    def test_bec_ordering(self, grid):
        assert is_degraded(bec(grid, 0.6), bec(grid, 0.4))
        assert not is_degraded(bec(grid, 0.4), bec(grid, 0.6))

    def test_preserved_by_both_operators(self, grid, rng):
        x1, x2 = bec(grid, 0.6), bec(grid, 0.4)
        for _ in range(5):
            x3 = oracles.random_channel_mixture(rng, grid)
            assert is_degraded(varoast(x1, x3), varoast(x2, x3))
            assert is_degraded(boxast(x1, x3), boxast(x2, x3))


class TestOperatorAlgebra:
    def test_mass_conservation(self, grid, rng):
        for _ in range(10):
            x = oracles.random_channel_mixture(rng, grid)
            y = oracles.random_channel_mixture(rng, grid)
            assert varoast(x, y).total_mass == pytest.approx(1.0, abs=1e-9)
            assert boxast(x, y).total_mass == pytest.approx(1.0, abs=1e-9)

    def test_commutativity(self, grid, rng):
        for _ in range(5):
            x = oracles.random_channel_mixture(rng, grid)
            y = oracles.random_channel_mixture(rng, grid)
            assert l1_diff(varoast(x, y), varoast(y, x)) <= 1e-9
            assert l1_diff(boxast(x, y), boxast(y, x)) <= 1e-9

    def _small_support(self, rng, grid):
        # keeps varoast away from range saturation so associativity is
        # exact; see the associativity note in the module docstring
        k = rng.integers(2, 5)
        locs = rng.uniform(0.0, grid.half_range / 4.0, size=k)
        masses = rng.dirichlet(np.ones(k))
        return make_density(
            grid, [(float(l), float(m)) for l, m in zip(locs, masses)]
        )

    def test_varoast_associativity(self, grid, rng):
        for _ in range(5):
            x, y, z = (self._small_support(rng, grid) for _ in range(3))
            a = varoast(varoast(x, y), z)
            b = varoast(x, varoast(y, z))
            assert l1_diff(a, b) <= 1e-9

    def test_boxast_associativity_within_quantization(self, grid, rng):
        # regrouping re-deposits intermediate results, so the raw L1 gap
        # for sparse atom inputs is sizable at the default grid; the
        # entropy functional is what the algebra actually preserves
        for _ in range(5):
            x, y, z = (self._small_support(rng, grid) for _ in range(3))
            a = boxast(boxast(x, y), z)
            b = boxast(x, boxast(y, z))
            assert l1_diff(a, b) <= 0.5
            assert abs(entropy(a) - entropy(b)) <= 1e-5

    def test_linearity(self, grid, rng):
        x1 = oracles.random_channel_mixture(rng, grid)
        x2 = oracles.random_channel_mixture(rng, grid)
        x3 = oracles.random_channel_mixture(rng, grid)
        a, b = 0.3, 0.7
        for op in (varoast, boxast):
            lhs = op(mix([x1, x2], [a, b]), x3)
            rhs = a * op(x1, x3) + b * op(x2, x3)
            assert l1_diff(lhs, rhs) <= 1e-9


class TestDualityIdentities:
    def test_duality_on_probability_pairs(self, grid, rng):
        for _ in range(10):
            x = oracles.random_channel_mixture(rng, grid)
            y = oracles.random_channel_mixture(rng, grid)
            gap = entropy(varoast(x, y)) + entropy(boxast(x, y)) \
                - entropy(x) - entropy(y)
            assert abs(gap) <= 1e-10

    def test_difference_duality_one_signed(self, grid, rng):
        for _ in range(5):
            x1, x3, x4 = (oracles.random_channel_mixture(rng, grid) for _ in range(3))
            y = x3 - x4
            gap = entropy(varoast(x1, y)) + entropy(boxast(x1, y)) - entropy(y)
            assert abs(gap) <= 1e-10

    def test_difference_duality_both_signed(self, grid, rng):
        for _ in range(5):
            x1, x2, x3, x4 = (
                oracles.random_channel_mixture(rng, grid) for _ in range(4)
            )
            y1, y2 = x1 - x2, x3 - x4
            gap = entropy(varoast(y1, y2)) + entropy(boxast(y1, y2))
            assert abs(gap) <= 1e-10

    def test_signed_square_nonpositive(self, grid, rng):
        for _ in range(10):
            a = oracles.random_channel_mixture(rng, grid)
            b = oracles.random_channel_mixture(rng, grid)
            y = a - b
            val = entropy(boxast(y, y))
            assert val <= 1e-12
            if y.l1_norm() > 1e-6:
                assert val < 0.0

    def test_difference_bound_both_operators(self, grid, rng):
        # |H((x1'-x1) op (x2-x3))| <= H(x1'-x1) for degraded x1' >= x1;
        # partial erasure of x1 is degraded by construction
        for _ in range(5):
            x1 = oracles.random_channel_mixture(rng, grid)
            x1p = mix([delta_zero(grid), x1], [0.5, 0.5])
            x2 = oracles.random_channel_mixture(rng, grid)
            x3 = oracles.random_channel_mixture(rng, grid)
            d = x1p - x1
            assert is_degraded(x1p, x1)
            bound = entropy(d) + 1e-10
            assert abs(entropy(varoast(d, x2 - x3))) <= bound
            assert abs(entropy(boxast(d, x2 - x3))) <= bound

    def test_three_variable_bound(self, grid, rng):
        for _ in range(5):
            x1 = oracles.random_channel_mixture(rng, grid)
            x1p = mix([delta_zero(grid), x1], [0.4, 0.6])
            x2, x3, x4 = (oracles.random_channel_mixture(rng, grid) for _ in range(3))
            d = x1p - x1
            bound = entropy(d) + 1e-10
            for op in (varoast, boxast):
                assert abs(entropy(op(op(d, x2 - x3), x4))) <= bound


class TestSignedArithmetic:
    def test_difference_is_signed(self, grid):
        y = bec(grid, 0.6) - bec(grid, 0.2)
        assert isinstance(y, SignedDensity)
        assert y.total_mass == pytest.approx(0.0, abs=1e-15)

    def test_scalar_scaling(self, grid):
        x = bec(grid, 0.5)
        assert isinstance(0.5 * x, Density)
        assert (0.5 * x).total_mass == pytest.approx(0.5, abs=1e-15)

    def test_quantized_requires_unit_mass(self, grid):
        with pytest.raises(NotNormalized):
            QuantizedDensity(grid, np.full(grid.n_bins, 0.5 / grid.n_bins))

    def test_symmetry_residual_at_rounding_floor(self, grid, rng):
        x = oracles.random_channel_mixture(rng, grid)
        y = oracles.random_channel_mixture(rng, grid)
        assert boxast(x, y).symmetry_residual() <= 1e-14
        assert varoast(x, y).symmetry_residual() <= 1e-14
