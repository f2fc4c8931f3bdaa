"""Tests for the torus spectral model: grids, transforms, norms."""

import numpy as np
import pytest

from oscimax import (
    GridField,
    LatticeGrid,
    SpectralField,
    eigenvalue,
    forward_transform,
    grid_norm,
    inverse_transform,
    pure_mode,
    random_spectral_field,
)


class TestLatticeGrid:
    def test_basic_properties(self):
        grid = LatticeGrid(1, 64)
        assert grid.spatial_points_per_axis == 64
        assert grid.spectral_shape == (64,)
        assert grid.freqs_1d.min() == -32
        assert grid.freqs_1d.max() == 31
        assert grid.spacing == pytest.approx(2 * np.pi / 64)

    def test_2d_shapes(self):
        grid = LatticeGrid(2, 16)
        assert grid.spectral_shape == (16, 16)
        assert grid.eigenvalue_array().shape == (16, 16)
        assert grid.cell_volume == pytest.approx(grid.spacing**2)

    def test_oversampling(self):
        grid = LatticeGrid(1, 16, spatial_points_per_axis=64)
        assert grid.spatial_shape == (64,)

    @pytest.mark.parametrize(
        "dim,modes", [(3, 16), (1, 7), (1, 15), (0, 16)]
    )
    def test_invalid_construction(self, dim, modes):
        with pytest.raises(ValueError):
            LatticeGrid(dim, modes)

    def test_undersampling_rejected(self):
        with pytest.raises(ValueError):
            LatticeGrid(1, 64, spatial_points_per_axis=32)


class TestEigenvalue:
    def test_values(self):
        grid = LatticeGrid(2, 16)
        assert eigenvalue(grid, (3, 4)) == pytest.approx(5.0)
        assert eigenvalue(LatticeGrid(1, 16), (-8,)) == pytest.approx(8.0)

    def test_out_of_range(self):
        grid = LatticeGrid(1, 16)
        with pytest.raises(ValueError):
            eigenvalue(grid, (8,))  # max representable is 7
        with pytest.raises(ValueError):
            eigenvalue(grid, (-9,))


class TestTransforms:
    def test_roundtrip_1d(self):
        grid = LatticeGrid(1, 64)
        rng = np.random.default_rng(0)
        f = random_spectral_field(grid, rng)
        back = forward_transform(inverse_transform(f))
        np.testing.assert_allclose(back.coefficients, f.coefficients, atol=1e-13)

    def test_roundtrip_2d_oversampled(self):
        grid = LatticeGrid(2, 16, spatial_points_per_axis=32)
        rng = np.random.default_rng(1)
        f = random_spectral_field(grid, rng)
        back = forward_transform(inverse_transform(f))
        np.testing.assert_allclose(back.coefficients, f.coefficients, atol=1e-13)

    def test_pure_mode_values(self):
        """A pure mode has unit coefficient and samples exp(i<xi,x>)."""
        grid = LatticeGrid(1, 32)
        f = pure_mode(grid, (5,))
        samples = inverse_transform(f).samples
        expected = np.exp(1j * 5 * grid.coords_1d)
        np.testing.assert_allclose(samples, expected, atol=1e-13)

    def test_parseval(self):
        grid = LatticeGrid(2, 32)
        rng = np.random.default_rng(2)
        f = random_spectral_field(grid, rng)
        spatial = grid_norm(inverse_transform(f), 2.0)
        assert spatial == pytest.approx(f.l2_norm(), rel=1e-13)

    def test_shape_mismatch_rejected(self):
        grid = LatticeGrid(1, 16)
        with pytest.raises(ValueError):
            SpectralField(grid, np.zeros(8, dtype=complex))
        with pytest.raises(ValueError):
            GridField(grid, np.zeros((16, 16), dtype=complex))


class TestConjugateSymmetry:
    def test_real_field_is_symmetric(self):
        grid = LatticeGrid(1, 32)
        samples = np.cos(3 * grid.coords_1d) + 0.5 * np.sin(7 * grid.coords_1d)
        f = forward_transform(GridField(grid, samples.astype(complex)))
        assert f.is_conjugate_symmetric()

    def test_complex_field_is_not(self):
        grid = LatticeGrid(1, 32)
        f = pure_mode(grid, (5,))
        assert not f.is_conjugate_symmetric()


class TestRandomField:
    def test_band_limit(self):
        grid = LatticeGrid(2, 32)
        rng = np.random.default_rng(3)
        f = random_spectral_field(grid, rng, band_limit=5.0)
        lam = grid.eigenvalue_array()
        assert np.all(f.coefficients[lam > 5.0] == 0.0)
        assert np.any(f.coefficients[lam <= 5.0] != 0.0)

    def test_determinism(self):
        grid = LatticeGrid(1, 16)
        a = random_spectral_field(grid, np.random.default_rng(7))
        b = random_spectral_field(grid, np.random.default_rng(7))
        np.testing.assert_array_equal(a.coefficients, b.coefficients)
