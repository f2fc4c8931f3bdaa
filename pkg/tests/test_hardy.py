"""Tests for atoms, heat quasinorms, Riesz potentials, and weak-L^p."""

import numpy as np
import pytest

from oscimax import (
    Atom,
    AtomSpec,
    LatticeGrid,
    forward_transform,
    grid_norm,
    heat_semigroup,
    hp_quasinorm_estimate,
    inverse_transform,
    make_exceptional_atom,
    make_regular_atom,
    moment_integrals,
    pure_mode,
    random_spectral_field,
    riesz_potential,
    weak_lp_quasinorm,
)
from oscimax.hardy import ResolutionError, ball_measure
from oscimax.torus import GridField


class TestAtomSpec:
    def test_cancellation_degree(self):
        spec = AtomSpec(p=0.5, center=(1.0,), radius=0.1, seed=0)
        assert spec.cancellation_degree(1) == 1
        assert spec.cancellation_degree(2) == 2
        spec34 = AtomSpec(p=0.75, center=(1.0,), radius=0.1, seed=0)
        assert spec34.cancellation_degree(1) == 0

    def test_validation(self):
        with pytest.raises(ValueError):
            AtomSpec(p=1.2, center=(0.0,), radius=0.1, seed=0)
        with pytest.raises(ValueError):
            AtomSpec(p=0.5, center=(0.0,), radius=1.0, seed=0)  # > pi/10


class TestRegularAtoms:
    def test_certificates_1d(self):
        grid = LatticeGrid(1, 512)
        spec = AtomSpec(p=0.5, center=(2.0,), radius=0.25, seed=3)
        atom = make_regular_atom(spec, grid)
        target = ball_measure(1, 0.25) ** (0.5 - 2.0)
        assert atom.certified_l2 == pytest.approx(target, rel=1e-13)
        assert atom.certified_moment_bound <= 1e-10 * atom.certified_l2

    def test_certificates_2d(self):
        grid = LatticeGrid(2, 128)
        spec = AtomSpec(p=2.0 / 3.0, center=(3.0, 1.0), radius=0.3, seed=5)
        atom = make_regular_atom(spec, grid)
        target = ball_measure(2, 0.3) ** (0.5 - 1.5)
        assert atom.certified_l2 == pytest.approx(target, rel=1e-13)
        assert atom.certified_moment_bound <= 1e-10 * atom.certified_l2

    def test_support_inside_ball(self):
        grid = LatticeGrid(1, 512)
        spec = AtomSpec(p=0.5, center=(np.pi,), radius=0.2, seed=1)
        atom = make_regular_atom(spec, grid)
        x = grid.coords_1d
        outside = np.abs(((x - np.pi + np.pi) % (2 * np.pi)) - np.pi) >= 0.2
        assert np.all(atom.field.samples[outside] == 0.0)

    def test_moments_reverify(self):
        grid = LatticeGrid(1, 1024)
        spec = AtomSpec(p=0.5, center=(1.5,), radius=0.3, seed=9)
        atom = make_regular_atom(spec, grid)
        moments = moment_integrals(atom.field, spec.center, 1)
        assert np.max(np.abs(moments)) <= 1e-10 * atom.certified_l2

    def test_determinism(self):
        grid = LatticeGrid(1, 256)
        spec = AtomSpec(p=0.5, center=(1.0,), radius=0.2, seed=4)
        a = make_regular_atom(spec, grid)
        b = make_regular_atom(spec, grid)
        np.testing.assert_array_equal(a.field.samples, b.field.samples)

    def test_unresolvable_radius(self):
        grid = LatticeGrid(1, 16)
        spec = AtomSpec(p=0.5, center=(1.0,), radius=0.05, seed=0)
        with pytest.raises(ResolutionError):
            make_regular_atom(spec, grid)


class TestExceptionalAtoms:
    def test_sup_normalized(self):
        grid = LatticeGrid(1, 128)
        atom = make_exceptional_atom(grid, seed=2)
        assert np.max(np.abs(atom.field.samples)) == pytest.approx(1.0, abs=1e-15)
        assert atom.kind == "exceptional"


class TestRieszPotential:
    def test_identity_at_zero_order(self):
        grid = LatticeGrid(1, 32)
        f = random_spectral_field(grid, np.random.default_rng(0))
        assert riesz_potential(f, 0.0) is f

    def test_scaling_on_pure_mode(self):
        grid = LatticeGrid(1, 32)
        f = pure_mode(grid, (4,))
        out = riesz_potential(f, -0.5)
        assert out.coefficients[4] == pytest.approx(4.0**-0.5)

    def test_zero_mode_dropped(self):
        grid = LatticeGrid(1, 32)
        f = pure_mode(grid, (0,))
        assert riesz_potential(f, -1.0).coefficients[0] == 0.0


class TestHeatQuasinorm:
    def test_semigroup_decay(self):
        grid = LatticeGrid(1, 32)
        f = pure_mode(grid, (3,))
        out = heat_semigroup(f, 0.5)
        assert out.coefficients[3] == pytest.approx(np.exp(-0.5 * 9.0))

    def test_dominates_lp_of_function(self):
        """The heat maximal function dominates the function itself as t->0."""
        grid = LatticeGrid(1, 128)
        f = random_spectral_field(grid, np.random.default_rng(1), band_limit=10)
        est = hp_quasinorm_estimate(f, 1.0)
        plain = grid_norm(inverse_transform(f), 1.0)
        assert est >= 0.99 * plain

    def test_unresolved_times_rejected(self):
        grid = LatticeGrid(1, 256)
        f = random_spectral_field(grid, np.random.default_rng(2))
        with pytest.raises(ResolutionError):
            hp_quasinorm_estimate(f, 1.0, heat_times=np.array([1.0, 2.0]))


class TestWeakLp:
    def test_indicator_exact(self):
        """For an indicator of measure m, the weak quasinorm is m^{1/p}."""
        grid = LatticeGrid(1, 64)
        samples = np.zeros(64, dtype=complex)
        samples[:16] = 1.0
        f = GridField(grid, samples)
        measure = 16 * grid.cell_volume
        for p in (0.5, 1.0, 2.0):
            assert weak_lp_quasinorm(f, p) == pytest.approx(measure ** (1.0 / p))

    def test_dominated_by_strong_norm(self):
        grid = LatticeGrid(1, 128)
        f = inverse_transform(random_spectral_field(grid, np.random.default_rng(3)))
        for p in (0.5, 1.0):
            assert weak_lp_quasinorm(f, p) <= grid_norm(f, p) + 1e-12

    def test_validation(self):
        grid = LatticeGrid(1, 64)
        f = GridField(grid, np.zeros(64, dtype=complex))
        with pytest.raises(ValueError):
            weak_lp_quasinorm(f, 0.0)
