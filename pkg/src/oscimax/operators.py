"""Diagonal spectral operators on the torus, maximal functions over time
grids, kernel evaluation by lattice sums, and the kernel/sup-bound checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quadrature import DecayFit, fit_decay_exponent
from .symbols import (
    CutoffProfile,
    SymbolParams,
    mu_symbol,
    riesz_mean_symbol,
)
from .torus import GridField, LatticeGrid, SpectralField, inverse_transform

GEOMETRIC = "geometric"
UNIFORM = "uniform"


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing time samples in (0, sigma], used to discretize
    suprema over the time parameter.

    Geometric spacing spans `span_octaves` octaves below sigma by default,
    mirroring the vanishing-t endpoint of the continuous supremum.
    """

    sigma: float = 0.5
    count: int = 64
    spacing: str = GEOMETRIC
    span_octaves: float = 20.0

    def __post_init__(self):
        if not 0.0 < self.sigma <= 0.5:
            raise ValueError(f"sigma must lie in (0, 0.5], got {self.sigma}")
        if self.count < 2:
            raise ValueError("count must be >= 2")
        if self.spacing not in (GEOMETRIC, UNIFORM):
            raise ValueError(f"unknown spacing {self.spacing!r}")

    @property
    def times(self) -> np.ndarray:
        if self.spacing == GEOMETRIC:
            return np.geomspace(
                self.sigma * 2.0**-self.span_octaves, self.sigma, self.count
            )
        return np.linspace(self.sigma / self.count, self.sigma, self.count)

    def refined(self, factor: int = 2) -> "TimeGrid":
        """Finer grid whose times contain the current ones, so discrete maxima
        over the refined grid dominate pointwise."""
        if factor < 1:
            raise ValueError("factor must be >= 1")
        if self.spacing == GEOMETRIC:
            # log-uniform nodes nest when the interval count is scaled
            count = (self.count - 1) * factor + 1
        else:
            # uniform nodes k*sigma/count nest when count is scaled
            count = self.count * factor
        return TimeGrid(self.sigma, count, self.spacing, self.span_octaves)


def apply_multiplier(f: SpectralField, m) -> SpectralField:
    """Multiply the coefficient at each lattice point by m(|xi|)."""
    lam = f.grid.eigenvalue_array()
    return SpectralField(f.grid, f.coefficients * m(lam))


def schrodinger_propagate(f: SpectralField, alpha: float, s: float) -> SpectralField:
    """Unimodular diagonal propagator with phase s * |xi|^alpha per mode."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return apply_multiplier(f, lambda lam: np.exp(1j * s * lam**alpha))


def oscillating_op(
    f: SpectralField, params: SymbolParams, profile: CutoffProfile, t: float
) -> SpectralField:
    """Diagonal operator with the oscillating symbol at time scale t."""
    return apply_multiplier(f, lambda lam: mu_symbol(params, profile, t, lam))


def riesz_mean_op(f: SpectralField, k: float, alpha: float, t: float) -> SpectralField:
    """Riesz mean of order k of the fractional propagator at time t.

    Per-frequency factor: the Beta-weighted average of e^{i t r |xi|^alpha}
    over r in [0, 1]; the zero mode passes through unchanged.
    """
    if t <= 0.0:
        raise ValueError(f"t must be positive, got {t}")
    lam = f.grid.eigenvalue_array()
    z_values = t * lam**alpha
    flat = z_values.ravel()
    uniq, inv = np.unique(flat, return_inverse=True)
    sym = np.array([riesz_mean_symbol(k, alpha, z) for z in uniq])
    factors = sym[inv].reshape(lam.shape)
    return SpectralField(f.grid, f.coefficients * factors)


def maximal_over_times(f: SpectralField, family, grid: TimeGrid) -> GridField:
    """Pointwise max over the time grid of |inverse_transform(family(t) f)|.

    `family` maps a time t to a diagonal operator SpectralField -> SpectralField.
    Times are reduced in fixed ascending order for bit-stable results.
    """
    best = None
    for t in grid.times:
        g = inverse_transform(family(t, f))
        mag = np.abs(g.samples)
        best = mag if best is None else np.maximum(best, mag)
    return GridField(f.grid, best.astype(complex))


def kernel_lattice_sum(
    params: SymbolParams,
    profile: CutoffProfile,
    t: float,
    x: float,
    eps: float = 0.0,
    M_cap: int = 100_000,
) -> complex:
    """1-D kernel at separation x by direct lattice summation:

        sum_{m in Z} mu(t|m|) e^{imx} e^{-eps m^2}
        = 2 * sum_{m>=1} mu(t m) cos(m x) e^{-eps m^2},

    Gaussian (Abel-Gauss) regularization for conditionally convergent sums.
    """
    if eps < 0.0:
        raise ValueError("eps must be nonnegative")
    if eps == 0.0 and params.beta <= 1.0:
        raise ValueError(
            "unregularized lattice sum requires beta > 1 for absolute convergence"
        )
    m = np.arange(1, M_cap + 1, dtype=float)
    terms = mu_symbol(params, profile, t, m) * np.cos(m * x)
    if eps > 0.0:
        terms = terms * np.exp(-eps * m**2)
    return 2.0 * complex(np.sum(terms))


def kernel_tail_bound(
    params: SymbolParams, t: float, eps: float, M_cap: int
) -> float:
    """Crude bound on the dropped |m| > M_cap terms of the lattice sum."""
    m = np.arange(M_cap + 1, M_cap + 200_001, dtype=float)
    env = (t * m) ** (-params.beta) * np.exp(-eps * m**2)
    return 2.0 * float(np.sum(env))


def verify_kernel_decay(
    params: SymbolParams,
    profile: CutoffProfile,
    t: float,
    radii,
    eps: float = 1e-7,
    M_cap: int = 200_000,
    slope_tol: float = 0.3,
) -> dict:
    """Fit |kernel(x, t)| against x/t on a log-log scale for x/t <= 1.

    For beta = n*alpha/2 + excess (n = 1 here) the local singularity predicts
    slope -1 + excess/(1 - alpha); when that is >= 0 the kernel is predicted
    bounded on the window and a sup/inf ratio check replaces the fit.
    """
    radii = np.asarray(radii, dtype=float)
    if np.any(radii / t > 1.0 + 1e-12):
        raise ValueError("all radii must satisfy x/t <= 1")
    excess = params.beta - params.alpha / 2.0
    if excess <= 0.0:
        raise ValueError("requires beta > alpha/2")
    predicted = -1.0 + excess / (1.0 - params.alpha)
    mods = np.array(
        [
            abs(kernel_lattice_sum(params, profile, t, x, eps=eps, M_cap=M_cap))
            for x in radii
        ]
    )
    ratios = radii / t
    fit = fit_decay_exponent(list(zip(ratios, mods)))
    if predicted < 0.0:
        passed = abs(fit.slope - predicted) <= slope_tol
        branch = "slope"
    else:
        passed = bool(np.max(mods) <= 10.0 * np.min(mods))
        branch = "bounded"
    return {
        "fitted": fit,
        "predicted_slope": predicted,
        "branch": branch,
        "pass": bool(passed),
        "eps": eps,
        "M_cap": M_cap,
    }


def sup_bound_1d_check(
    t: np.ndarray,
    f: np.ndarray,
    f_prime: np.ndarray,
    b: float,
    eps: float,
) -> dict:
    """Check sup|f| <= sqrt(b * I1) + sqrt(I2 / b) + |f(0)| + slack on [0, sigma],

    where I1 = integral t^eps |f'|^2 and I2 = integral |f|^2 t^-eps, both by
    trapezoid rule over the interior samples (the t = 0 endpoint is excluded
    so negative-power weights stay finite); slack = 2 * spacing * max|f'|
    covers the discretization gap.
    """
    if b <= 0.0:
        raise ValueError(f"b must be positive, got {b}")
    t = np.asarray(t, dtype=float)
    f = np.asarray(f, dtype=float)
    fp = np.asarray(f_prime, dtype=float)
    if not (t.shape == f.shape == fp.shape):
        raise ValueError("t, f, f_prime must have matching shapes")
    if t[0] != 0.0:
        raise ValueError("samples must start at t = 0")
    ti, fi, fpi = t[1:], f[1:], fp[1:]
    i1 = float(np.trapezoid(ti**eps * fpi**2, ti))
    i2 = float(np.trapezoid(fi**2 * ti**-eps, ti))
    spacing = float(np.max(np.diff(t)))
    slack = 2.0 * spacing * float(np.max(np.abs(fp)))
    lhs = float(np.max(np.abs(f)))
    rhs = np.sqrt(b * i1) + np.sqrt(i2 / b) + abs(float(f[0])) + slack
    return {"lhs": lhs, "rhs": float(rhs), "pass": bool(lhs <= rhs)}


def riesz_symbol_decay_check(
    k: float,
    alpha: float,
    z_lo: float,
    z_hi: float,
    n_windows: int = 40,
    samples_per_window: int = 48,
    slope_tol: float = 0.15,
) -> dict:
    """Fit the upper envelope of |riesz_mean_symbol| against z.

    The envelope is taken as the maximum over local windows each covering at
    least one full 2pi oscillation; the leading large-z term predicts
    slope -k.
    """
    if not (z_lo >= 10.0 and z_hi >= 10.0 * z_lo):
        raise ValueError("need z_hi >= 10*z_lo >= 100 for the asymptotic regime")
    edges = np.geomspace(z_lo, z_hi, n_windows + 1)
    centers, peaks = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        hi = max(hi, lo + 2.5 * np.pi)
        zs = np.linspace(lo, hi, samples_per_window)
        mods = [abs(riesz_mean_symbol(k, alpha, z)) for z in zs]
        centers.append(np.sqrt(lo * hi))
        peaks.append(max(mods))
    fit = fit_decay_exponent(list(zip(centers, peaks)))
    passed = abs(fit.slope + k) <= slope_tol
    return {"fitted": fit, "predicted_slope": -k, "pass": bool(passed)}
