"""Discrete spectral model of the flat torus [0, 2pi)^n for n in {1, 2}.

Frequencies live on the integer lattice with each coordinate in
[-M/2, M/2 - 1]; the spatial grid is uniform with N >= M points per axis.
Normalization: c(xi) = (2pi)^{-n} * integral of f(x) exp(-i<xi, x>) dx,
so a pure mode exp(i<xi, x>) has coefficient 1 at xi and Parseval reads
integral |f|^2 = (2pi)^n * sum |c(xi)|^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PERIOD = 2.0 * np.pi


@dataclass(frozen=True)
class LatticeGrid:
    """Truncated frequency lattice plus matching uniform spatial grid.

    dimension: 1 or 2.
    modes_per_axis: even M >= 8; frequencies per axis in [-M/2, M/2 - 1].
    spatial_points_per_axis: N >= M (oversampling allowed; transforms are
        exact roundtrips only for fields band-limited to the lattice).
    """

    dimension: int
    modes_per_axis: int
    spatial_points_per_axis: int = 0

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.dimension}")
        if self.modes_per_axis < 8 or self.modes_per_axis % 2 != 0:
            raise ValueError(
                f"modes_per_axis must be an even integer >= 8, got {self.modes_per_axis}"
            )
        if self.spatial_points_per_axis == 0:
            object.__setattr__(self, "spatial_points_per_axis", self.modes_per_axis)
        if self.spatial_points_per_axis < self.modes_per_axis:
            raise ValueError("spatial_points_per_axis must be >= modes_per_axis")

    @property
    def freqs_1d(self) -> np.ndarray:
        """Per-axis frequencies in FFT order: 0..M/2-1, -M/2..-1."""
        m = self.modes_per_axis
        return np.fft.fftfreq(m, d=1.0 / m).astype(np.int64)

    @property
    def spectral_shape(self) -> tuple:
        return (self.modes_per_axis,) * self.dimension

    @property
    def spatial_shape(self) -> tuple:
        return (self.spatial_points_per_axis,) * self.dimension

    @property
    def spacing(self) -> float:
        return PERIOD / self.spatial_points_per_axis

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dimension

    @property
    def coords_1d(self) -> np.ndarray:
        return np.arange(self.spatial_points_per_axis) * self.spacing

    def coords(self) -> tuple:
        """Meshgrid of spatial coordinates (ij indexing), one array per axis."""
        axes = (self.coords_1d,) * self.dimension
        return np.meshgrid(*axes, indexing="ij")

    def eigenvalue_array(self) -> np.ndarray:
        """|xi| for every lattice point, shaped like the coefficient array."""
        k = self.freqs_1d.astype(float)
        if self.dimension == 1:
            return np.abs(k)
        kx, ky = np.meshgrid(k, k, indexing="ij")
        return np.hypot(kx, ky)


def eigenvalue(grid: LatticeGrid, xi) -> float:
    """Euclidean norm |xi| of a lattice point (sqrt of the Laplacian eigenvalue).

    xi is an integer for dimension 1, a pair of integers for dimension 2.
    """
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=np.int64))
    if xi_arr.shape != (grid.dimension,):
        raise ValueError(
            f"expected {grid.dimension} frequency coordinates, got {xi_arr.shape}"
        )
    half = grid.modes_per_axis // 2
    if np.any(xi_arr < -half) or np.any(xi_arr > half - 1):
        raise ValueError(f"frequency {xi} outside lattice range [-{half}, {half - 1}]")
    return float(np.sqrt(np.sum(xi_arr.astype(float) ** 2)))


@dataclass(frozen=True)
class SpectralField:
    """Complex Fourier coefficients, one per lattice point, in FFT order."""

    grid: LatticeGrid
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex)
        if c.shape != self.grid.spectral_shape:
            raise ValueError(
                f"coefficient shape {c.shape} does not match lattice {self.grid.spectral_shape}"
            )
        object.__setattr__(self, "coefficients", c)

    def l2_norm(self) -> float:
        """Spectral L2 norm: ((2pi)^n * sum |c|^2)^{1/2} (Parseval)."""
        n = self.grid.dimension
        return float(np.sqrt(PERIOD**n * np.sum(np.abs(self.coefficients) ** 2)))

    def is_conjugate_symmetric(self, tol: float = 1e-12) -> bool:
        c = self.coefficients
        axes = tuple(range(c.ndim))
        mirrored = np.conj(np.flip(np.roll(c, -1, axis=axes), axis=axes))
        scale = np.max(np.abs(c)) or 1.0
        # The -M/2 row has no mirror partner; compare only where both exist.
        mask = np.ones_like(c, dtype=bool)
        half = self.grid.modes_per_axis // 2
        k = self.grid.freqs_1d
        for ax in axes:
            sl = [slice(None)] * c.ndim
            sl[ax] = k == -half
            mask[tuple(sl)] = False
        return bool(np.max(np.abs((c - mirrored)[mask])) <= tol * scale)


@dataclass(frozen=True)
class GridField:
    """Complex samples on the uniform spatial grid."""

    grid: LatticeGrid
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.shape != self.grid.spatial_shape:
            raise ValueError(
                f"sample shape {s.shape} does not match spatial grid {self.grid.spatial_shape}"
            )
        object.__setattr__(self, "samples", s)


def forward_transform(f: GridField) -> SpectralField:
    """Grid samples -> lattice coefficients (FFT, modes above M/2 discarded)."""
    grid = f.grid
    ns = grid.spatial_points_per_axis
    c_full = np.fft.fftn(f.samples) / ns**grid.dimension
    idx = grid.freqs_1d % ns
    if grid.dimension == 1:
        c = c_full[idx]
    else:
        c = c_full[np.ix_(idx, idx)]
    return SpectralField(grid, c)


def inverse_transform(F: SpectralField) -> GridField:
    """Lattice coefficients -> grid samples (zero-padded inverse FFT)."""
    grid = F.grid
    ns = grid.spatial_points_per_axis
    shape = (ns,) * grid.dimension
    c_full = np.zeros(shape, dtype=complex)
    idx = grid.freqs_1d % ns
    if grid.dimension == 1:
        c_full[idx] = F.coefficients
    else:
        c_full[np.ix_(idx, idx)] = F.coefficients
    samples = np.fft.ifftn(c_full) * ns**grid.dimension
    return GridField(grid, samples)


def grid_norm(f: GridField, p: float) -> float:
    """L^p (quasi)norm by Riemann sum: (sum |f|^p * cell)^(1/p)."""
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    return float(
        (np.sum(np.abs(f.samples) ** p) * f.grid.cell_volume) ** (1.0 / p)
    )


def random_spectral_field(
    grid: LatticeGrid, rng: np.random.Generator, band_limit: float | None = None
) -> SpectralField:
    """Gaussian random coefficients, optionally restricted to |xi| <= band_limit."""
    shape = grid.spectral_shape
    c = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    if band_limit is not None:
        c = np.where(grid.eigenvalue_array() <= band_limit, c, 0.0)
    return SpectralField(grid, c)


def pure_mode(grid: LatticeGrid, xi) -> SpectralField:
    """Field exp(i<xi, x>): coefficient 1 at xi, 0 elsewhere."""
    eigenvalue(grid, xi)  # range check
    c = np.zeros(grid.spectral_shape, dtype=complex)
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=np.int64))
    m = grid.modes_per_axis
    c[tuple(int(v) % m for v in xi_arr)] = 1.0
    return SpectralField(grid, c)
