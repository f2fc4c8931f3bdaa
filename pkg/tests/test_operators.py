"""Tests for diagonal operators, maximal sweeps, kernel sums, and checks."""

import numpy as np
import pytest

from oscimax import (
    CutoffProfile,
    LatticeGrid,
    SymbolParams,
    TimeGrid,
    apply_multiplier,
    inverse_transform,
    kernel_lattice_sum,
    maximal_over_times,
    oscillating_op,
    pure_mode,
    random_spectral_field,
    riesz_mean_op,
    riesz_symbol_decay_check,
    schrodinger_propagate,
    sup_bound_1d_check,
    verify_kernel_decay,
)
from oscimax.symbols import riesz_mean_symbol

PROFILE = CutoffProfile()


class TestTimeGrid:
    def test_geometric_defaults(self):
        tg = TimeGrid()
        times = tg.times
        assert times[-1] == pytest.approx(0.5)
        assert np.all(np.diff(times) > 0)
        assert times[0] == pytest.approx(0.5 * 2.0**-20)

    def test_uniform(self):
        tg = TimeGrid(sigma=0.4, count=8, spacing="uniform")
        np.testing.assert_allclose(tg.times, 0.4 * np.arange(1, 9) / 8)

    def test_refined_nests(self):
        for spacing in ("geometric", "uniform"):
            tg = TimeGrid(count=9, spacing=spacing, span_octaves=6)
            fine = tg.refined(3).times
            for t in tg.times:
                assert np.min(np.abs(fine - t)) <= 1e-12 * t

    def test_validation(self):
        with pytest.raises(ValueError):
            TimeGrid(sigma=0.6)
        with pytest.raises(ValueError):
            TimeGrid(count=1)


class TestDiagonalOperators:
    def test_identity_and_zero(self):
        grid = LatticeGrid(1, 32)
        f = random_spectral_field(grid, np.random.default_rng(0))
        same = apply_multiplier(f, lambda lam: np.ones_like(lam))
        np.testing.assert_array_equal(same.coefficients, f.coefficients)
        zero = apply_multiplier(f, lambda lam: np.zeros_like(lam))
        assert np.all(zero.coefficients == 0)

    def test_unitarity(self):
        grid = LatticeGrid(2, 32)
        rng = np.random.default_rng(1)
        for _ in range(10):
            f = random_spectral_field(grid, rng)
            g = schrodinger_propagate(f, 0.5, 1.3)
            assert g.l2_norm() == pytest.approx(f.l2_norm(), rel=1e-13)

    def test_group_law(self):
        grid = LatticeGrid(1, 64)
        f = random_spectral_field(grid, np.random.default_rng(2))
        ab = schrodinger_propagate(schrodinger_propagate(f, 0.3, 0.4), 0.3, 0.8)
        direct = schrodinger_propagate(f, 0.3, 1.2)
        np.testing.assert_allclose(ab.coefficients, direct.coefficients, atol=1e-13)

    def test_linearity(self):
        grid = LatticeGrid(1, 32)
        rng = np.random.default_rng(3)
        f = random_spectral_field(grid, rng)
        g = random_spectral_field(grid, rng)
        params = SymbolParams(0.5, 0.75)
        lhs = oscillating_op(
            f.__class__(grid, 2.0 * f.coefficients - 1j * g.coefficients),
            params,
            PROFILE,
            0.3,
        )
        rhs = (
            2.0 * oscillating_op(f, params, PROFILE, 0.3).coefficients
            - 1j * oscillating_op(g, params, PROFILE, 0.3).coefficients
        )
        np.testing.assert_allclose(lhs.coefficients, rhs, atol=1e-14)

    def test_commutation(self):
        grid = LatticeGrid(1, 64)
        f = random_spectral_field(grid, np.random.default_rng(4))
        params = SymbolParams(0.5, 1.0)
        ab = oscillating_op(schrodinger_propagate(f, 0.5, 0.7), params, PROFILE, 0.2)
        ba = schrodinger_propagate(oscillating_op(f, params, PROFILE, 0.2), 0.5, 0.7)
        np.testing.assert_allclose(ab.coefficients, ba.coefficients, atol=1e-13)

    def test_riesz_mean_single_mode(self):
        grid = LatticeGrid(1, 32)
        f = pure_mode(grid, (6,))
        out = riesz_mean_op(f, 2.0, 0.5, 0.1)
        expected = riesz_mean_symbol(2.0, 0.5, 0.1 * 6.0**0.5)
        assert out.coefficients[6] == pytest.approx(expected, abs=1e-12)

    def test_riesz_mean_zero_mode_passthrough(self):
        grid = LatticeGrid(1, 32)
        f = pure_mode(grid, (0,))
        out = riesz_mean_op(f, 2.0, 0.5, 0.1)
        assert out.coefficients[0] == pytest.approx(1.0, abs=1e-12)


class TestMaximalOverTimes:
    def test_monotone_under_refinement(self):
        grid = LatticeGrid(1, 64)
        f = random_spectral_field(grid, np.random.default_rng(5), band_limit=20)
        params = SymbolParams(0.5, 0.75)
        tg = TimeGrid(count=12, span_octaves=8)

        def family(t, g):
            return oscillating_op(g, params, PROFILE, t)

        coarse = maximal_over_times(f, family, tg).samples.real
        fine = maximal_over_times(f, family, tg.refined()).samples.real
        assert np.all(fine >= coarse - 1e-15)

    def test_dominates_single_time(self):
        grid = LatticeGrid(1, 32)
        f = random_spectral_field(grid, np.random.default_rng(6), band_limit=10)
        params = SymbolParams(0.5, 0.75)
        tg = TimeGrid(count=8, span_octaves=4)

        def family(t, g):
            return oscillating_op(g, params, PROFILE, t)

        maximal = maximal_over_times(f, family, tg).samples.real
        one = np.abs(inverse_transform(family(tg.times[3], f)).samples)
        assert np.all(maximal >= one - 1e-15)


class TestKernelLatticeSum:
    def test_matches_operator_on_grid(self):
        """Circular convolution with the band-matched kernel reproduces the
        diagonal operator exactly."""
        grid = LatticeGrid(1, 64)
        f = random_spectral_field(grid, np.random.default_rng(7), band_limit=20)
        params = SymbolParams(0.5, 1.5)
        t = 0.3
        op_side = inverse_transform(oscillating_op(f, params, PROFILE, t)).samples
        fvals = inverse_transform(f).samples
        xs = grid.coords_1d
        cap = grid.modes_per_axis // 2 - 1
        kvals = np.array(
            [kernel_lattice_sum(params, PROFILE, t, float(x), M_cap=cap) for x in xs]
        )
        n = len(xs)
        conv = (
            np.array(
                [
                    np.sum(kvals[(j - np.arange(n)) % n] * fvals)
                    for j in range(n)
                ]
            )
            * grid.spacing
            / (2.0 * np.pi)
        )
        np.testing.assert_allclose(conv, op_side, atol=1e-8)

    def test_matches_continuum_transform(self):
        """For small t the lattice sum approximates t^-1 times the cosine
        transform of the symbol at x/t."""
        from oscimax import fourier_cosine_mu

        params = SymbolParams(0.5, 0.5)
        t = 0.5
        for u in (0.1, 0.3, 0.7):
            lattice = kernel_lattice_sum(
                params, PROFILE, t, u * t, eps=1e-7, M_cap=200_000
            )
            continuum = fourier_cosine_mu(params, PROFILE, u) / t
            assert abs(lattice - continuum) <= 0.02 * abs(continuum)

    def test_unregularized_needs_decay(self):
        with pytest.raises(ValueError):
            kernel_lattice_sum(SymbolParams(0.5, 0.5), PROFILE, 0.5, 0.1, eps=0.0)

    def test_eps_halving_stability(self):
        params = SymbolParams(0.5, 0.5)
        a = kernel_lattice_sum(params, PROFILE, 0.5, 0.2, eps=1e-7, M_cap=200_000)
        b = kernel_lattice_sum(params, PROFILE, 0.5, 0.2, eps=5e-8, M_cap=200_000)
        assert abs(a - b) <= 1e-3 * abs(a)


class TestVerifyKernelDecay:
    def test_bounded_branch(self):
        """beta = 0.75 gives excess 0.5 and predicted exponent 0: the kernel is
        predicted bounded on the window."""
        params = SymbolParams(0.5, 0.75)
        t = 0.5
        radii = np.geomspace(0.05, 1.0, 12) * t
        report = verify_kernel_decay(params, PROFILE, t, radii)
        assert report["branch"] == "bounded"
        assert report["pass"]

    def test_m_cap_stability(self):
        params = SymbolParams(0.5, 0.5)
        t = 0.5
        radii = np.geomspace(0.05, 1.0, 10) * t
        a = verify_kernel_decay(params, PROFILE, t, radii, M_cap=200_000)
        b = verify_kernel_decay(params, PROFILE, t, radii, M_cap=400_000)
        assert abs(a["fitted"].slope - b["fitted"].slope) < 0.05

    def test_window_validation(self):
        params = SymbolParams(0.5, 0.75)
        with pytest.raises(ValueError):
            verify_kernel_decay(params, PROFILE, 0.5, [1.0])  # x/t = 2 > 1


class TestSupBound:
    def test_constant_function(self):
        t = np.linspace(0.0, 0.5, 101)
        f = np.full_like(t, 3.0)
        fp = np.zeros_like(t)
        report = sup_bound_1d_check(t, f, fp, 1.0, 0.0)
        assert report["pass"]
        assert report["lhs"] == pytest.approx(3.0)

    def test_linear_function(self):
        t = np.linspace(0.0, 0.5, 2001)
        report = sup_bound_1d_check(t, t, np.ones_like(t), 1.0, 0.0)
        assert report["lhs"] == pytest.approx(0.5)
        assert report["rhs"] == pytest.approx(np.sqrt(0.5) + np.sqrt(0.5**3 / 3.0), abs=1e-2)
        assert report["pass"]

    @pytest.mark.parametrize("b", [0.1, 1.0, 10.0])
    def test_oscillatory(self, b):
        t = np.linspace(0.0, 0.5, 2001)
        f = np.sin(20.0 * t)
        fp = 20.0 * np.cos(20.0 * t)
        for eps in (-0.5, 0.0, 0.5):
            assert sup_bound_1d_check(t, f, fp, b, eps)["pass"]

    def test_validation(self):
        t = np.linspace(0.0, 0.5, 11)
        with pytest.raises(ValueError):
            sup_bound_1d_check(t, t, np.ones_like(t), 0.0, 0.0)
        with pytest.raises(ValueError):
            sup_bound_1d_check(t + 0.1, t, np.ones_like(t), 1.0, 0.0)


class TestRieszSymbolDecay:
    def test_order_one_envelope(self):
        report = riesz_symbol_decay_check(1.0, 0.5, 100.0, 10_000.0)
        assert report["fitted"].slope == pytest.approx(-1.0, abs=0.15)
        assert report["pass"]

    def test_fractional_order(self):
        report = riesz_symbol_decay_check(0.5, 0.5, 100.0, 10_000.0)
        assert report["fitted"].slope == pytest.approx(-0.5, abs=0.15)
        assert report["pass"]

    def test_regime_validation(self):
        with pytest.raises(ValueError):
            riesz_symbol_decay_check(1.0, 0.5, 5.0, 50.0)
