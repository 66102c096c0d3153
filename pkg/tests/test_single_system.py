import math

import numpy as np
import pytest

import oracles
from bmsde import (
    ChannelFamily,
    GridSpec,
    NoChannelSolution,
    Unsupported,
    bp_threshold,
    de_fixed_point,
    de_step,
    delta_inf,
    delta_zero,
    density_for_entropy,
    density_of,
    energy_gap,
    entropy,
    fixed_point_potential,
    from_edge_perspective,
    mix,
    potential,
    potential_derivative,
    potential_threshold,
)


def bec(grid, eps):
    return mix([delta_zero(grid), delta_inf(grid)], [eps, 1.0 - eps])


@pytest.fixture(scope="module")
def bec_fam(grid):
    return ChannelFamily("bec", grid)


class TestDeStep:
    def test_perfect_input_is_fixed(self, grid, dd36, rng):
        c = oracles.random_channel_mixture(rng, grid)
        out = de_step(delta_inf(grid), c, dd36)
        assert (out - delta_inf(grid)).l1_norm() < 1e-12

    def test_perfect_channel_absorbs(self, grid, dd36, rng):
        x = oracles.random_channel_mixture(rng, grid)
        out = de_step(x, delta_inf(grid), dd36)
        assert (out - delta_inf(grid)).l1_norm() < 1e-12

    def test_matches_scalar_bec_recursion(self, grid, dd36):
        for eps in (0.3, 0.42, 0.55):
            for a in (0.2, 0.6, 1.0):
                out = de_step(bec(grid, a), bec(grid, eps), dd36)
                want = oracles.bec_de_step(a, eps, oracles.LAM_36, oracles.RHO_36)
                assert entropy(out) == pytest.approx(want, abs=1e-6)


class TestDeFixedPoint:
    def test_perfect_init_stays(self, grid, dd36, bec_fam):
        res = de_fixed_point(density_of(bec_fam, 0.45), dd36, init=delta_inf(grid))
        assert res.converged
        assert res.iterations == 1
        assert entropy(res.fixed_point) == 0.0

    def test_below_threshold_decodes(self, grid, dd36, bec_fam):
        res = de_fixed_point(density_of(bec_fam, 0.40), dd36)
        assert res.converged
        assert entropy(res.fixed_point) < 1e-7

    def test_above_threshold_stalls_at_scalar_fixed_point(self, grid, dd36, bec_fam):
        # converged=True means the iteration settled; the settle point is
        # the non-trivial scalar-DE fixed point, not the decoded one
        res = de_fixed_point(density_of(bec_fam, 0.45), dd36)
        assert res.converged
        want = oracles.bec_de_limit(0.45, oracles.LAM_36, oracles.RHO_36)
        assert want > 0.1
        assert entropy(res.fixed_point) == pytest.approx(want, abs=1e-4)

    def test_trace_monotone_from_zero_init(self, grid, dd36, bec_fam):
        for h in (0.40, 0.45, 0.50):
            res = de_fixed_point(density_of(bec_fam, h), dd36)
            trace = np.asarray(res.entropy_trace)
            assert np.all(np.diff(trace) <= 1e-12)


class TestBpThreshold:
    def test_bec_regular(self, dd36, bec_fam):
        res = bp_threshold(bec_fam, dd36, tol=1e-4)
        assert res.h_threshold == pytest.approx(oracles.BEC_BP_36, abs=1e-3)
        assert res.bracket[1] - res.bracket[0] <= 1e-4

    def test_bec_cycle_matches_scalar(self, grid, bec_fam):
        with pytest.warns(Warning):
            dd = from_edge_perspective([0, 1.0], [0, 1.0])
        res = bp_threshold(bec_fam, dd, tol=1e-3)
        want = oracles.bec_bp_threshold([0, 1.0], [0, 1.0])
        assert res.h_threshold == pytest.approx(want, abs=2e-3)

    def test_bracket_classification(self, dd36, bec_fam):
        res = bp_threshold(bec_fam, dd36, tol=1e-3)
        lo, hi = res.bracket
        below = de_fixed_point(density_of(bec_fam, lo), dd36)
        above = de_fixed_point(density_of(bec_fam, hi), dd36)
        assert entropy(below.fixed_point) < 1e-7
        assert entropy(above.fixed_point) > 1e-7


class TestPotential:
    def test_zero_at_perfect_point(self, grid, dd36, rng):
        c = oracles.random_channel_mixture(rng, grid)
        assert potential(delta_inf(grid), c, dd36) == pytest.approx(0.0, abs=1e-12)

    def test_matches_scalar_bec_up_to_constant(self, grid, dd36):
        # the quantized functional is a fixed positive multiple of the
        # scalar BEC potential; estimate the ratio once and pin it
        ratios = []
        for eps in (0.35, 0.45, 0.55):
            for a in (0.3, 0.6, 0.9):
                u = potential(bec(grid, a), bec(grid, eps), dd36)
                s = oracles.bec_potential(a, eps, oracles.LAM_36, oracles.RHO_36)
                if abs(s) > 1e-6:
                    ratios.append(u / s)
        ratios = np.asarray(ratios)
        assert ratios.min() > 0.0
        assert np.ptp(ratios) / ratios.mean() < 1e-4

    def test_channel_monotonicity(self, grid, dd36, bec_fam, rng):
        # noisier channel lowers the potential at fixed non-perfect x
        bsc_fam = ChannelFamily("bsc", grid)
        for fam in (bec_fam, bsc_fam):
            for _ in range(5):
                x = oracles.random_channel_mixture(rng, grid)
                u_noisy = potential(x, density_for_entropy(fam, 0.55), dd36)
                u_clean = potential(x, density_for_entropy(fam, 0.35), dd36)
                assert u_noisy < u_clean


class TestPotentialDerivative:
    def test_zero_direction(self, grid, dd36, rng):
        c = oracles.random_channel_mixture(rng, grid)
        x = oracles.random_channel_mixture(rng, grid)
        y = x - x
        assert potential_derivative(x, c, dd36, y) == 0.0

    def test_matches_finite_difference(self, dd36, rng):
        fine = GridSpec(spacing=1.0 / 64, half_range=32.0)
        c = density_of(ChannelFamily("bsc", fine), 0.11)
        worst = 0.0
        for _ in range(5):
            a = oracles.random_channel_mixture(rng, fine)
            b = oracles.random_channel_mixture(rng, fine)
            base, y, path = oracles.convex_probe(a, b)
            fd = oracles.richardson1(lambda t: potential(path(t), c, dd36))
            an = potential_derivative(base, c, dd36, y)
            worst = max(worst, abs(an - fd) / max(abs(fd), 1e-12))
        assert worst <= 1e-5

    def test_zero_at_fixed_points(self, grid, dd36, rng):
        for kind in ("bec", "bsc"):
            fam = ChannelFamily(kind, grid)
            c = density_for_entropy(fam, 0.45)
            res = de_fixed_point(c, dd36)
            fp = res.fixed_point
            assert entropy(fp) > 1e-3
            for _ in range(8):
                y = oracles.random_channel_mixture(rng, grid) - fp
                assert abs(potential_derivative(fp, c, dd36, y)) <= 1e-5


class TestEnergyGap:
    def test_below_bp_is_infinite(self, grid, dd36, bec_fam):
        assert energy_gap(density_of(bec_fam, 0.40), dd36) == math.inf

    def test_between_bp_and_maxwell_is_positive(self, grid, dd36, bec_fam):
        gap = energy_gap(density_of(bec_fam, 0.45), dd36, family_hint=bec_fam)
        assert 0.0 < gap < math.inf

    def test_above_maxwell_is_negative(self, grid, dd36, bec_fam):
        assert energy_gap(density_of(bec_fam, 0.50), dd36, family_hint=bec_fam) < 0.0

    def test_perfect_channel(self, grid, dd36):
        assert energy_gap(delta_inf(grid), dd36) == math.inf

    def test_matches_scalar_gap_up_to_constant(self, grid, dd36, bec_fam):
        # same fixed ratio as the potential itself
        u = potential(bec(grid, 0.6), bec(grid, 0.45), dd36)
        s = oracles.bec_potential(0.6, 0.45, oracles.LAM_36, oracles.RHO_36)
        ratio = u / s
        for eps in (0.45, 0.47):
            gap = energy_gap(density_of(bec_fam, eps), dd36, family_hint=bec_fam)
            want = ratio * oracles.bec_energy_gap(eps, oracles.LAM_36, oracles.RHO_36)
            assert gap == pytest.approx(want, rel=1e-3)


class TestPotentialThreshold:
    def test_bec_regular(self, dd36, bec_fam):
        res = potential_threshold(bec_fam, dd36, tol=1e-3)
        assert res.h_threshold == pytest.approx(oracles.BEC_POTENTIAL_36, abs=2e-3)

    def test_ordering_vs_bp(self, dd36, bec_fam):
        bp = bp_threshold(bec_fam, dd36, tol=1e-3)
        pot = potential_threshold(bec_fam, dd36, tol=1e-3)
        assert bp.h_threshold <= pot.h_threshold + 1e-3


class TestFixedPointPotential:
    def test_perfect_point(self, grid, dd36):
        assert fixed_point_potential(delta_inf(grid), dd36) == pytest.approx(0.0, abs=1e-12)

    def test_scalar_fixed_point(self, grid, dd36):
        a = oracles.bec_de_limit(0.45, oracles.LAM_36, oracles.RHO_36)
        h = 0.45 * oracles.poly(
            oracles.LAM_36, 1.0 - oracles.poly(oracles.RHO_36, 1.0 - a)
        )
        x = bec(grid, h)
        u = fixed_point_potential(x, dd36)
        s = oracles.bec_potential(h, 0.45, oracles.LAM_36, oracles.RHO_36)
        ratio_probe = potential(bec(grid, 0.6), bec(grid, 0.45), dd36) / oracles.bec_potential(
            0.6, 0.45, oracles.LAM_36, oracles.RHO_36
        )
        assert u == pytest.approx(ratio_probe * s, rel=1e-3)

    def test_non_bec_density_rejected(self, grid, dd36):
        x = density_of(ChannelFamily("bsc", grid), 0.11)
        with pytest.raises(Unsupported):
            fixed_point_potential(x, dd36)

    def test_no_channel_solves(self, grid, dd36):
        # small erasure mass: lambda(1-rho(1-a)) ~ 25a^2 < a, so the
        # required erasure rate a/s exceeds 1
        with pytest.raises(NoChannelSolution):
            fixed_point_potential(bec(grid, 0.02), dd36)
