"""Scalar symbol functions: cutoffs, dyadic bumps, the oscillating symbol
e^{i z^a} z^{-b} with its frequency-localized pieces, the Riesz-mean symbol,
and the extrapolation remainder.

All cutoffs are built from one even "band" cutoff that vanishes for |u| <= 1
and equals 1 for |u| >= 2, with a configurable transition profile.  The
low-frequency bump and the dyadic bump are derived from it so that the
partition of unity

    sum_{k>=0} bump(|u| / 2^k) + low_bump(|u|) == 1

holds by exact telescoping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special


@dataclass(frozen=True)
class SymbolParams:
    """Oscillation exponent alpha in (0,1) and decay exponent beta > 0."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.beta <= 0.0:
            raise ValueError(f"beta must be positive, got {self.beta}")


@dataclass(frozen=True)
class CutoffProfile:
    """Shape of the transition ramp on the cutoff band.

    kind 'smoothstep_poly': polynomial ramp with `order` matched derivatives
    at both band edges (regularized incomplete beta).  kind 'smooth_exp':
    the classic exp(-1/x) C-infinity ramp; `order` is ignored.
    """

    kind: str = "smoothstep_poly"
    order: int = 7

    def __post_init__(self):
        if self.kind not in ("smoothstep_poly", "smooth_exp"):
            raise ValueError(f"unknown cutoff kind {self.kind!r}")
        if self.kind == "smoothstep_poly" and self.order < 3:
            raise ValueError(f"order must be >= 3, got {self.order}")

    def ramp(self, s):
        """Monotone 0 -> 1 transition on [0, 1], evaluated elementwise."""
        s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
        if self.kind == "smoothstep_poly":
            return special.betainc(self.order + 1, self.order + 1, s)
        with np.errstate(divide="ignore", over="ignore"):
            h0 = np.where(s > 0.0, np.exp(-1.0 / np.maximum(s, 1e-300)), 0.0)
            h1 = np.where(s < 1.0, np.exp(-1.0 / np.maximum(1.0 - s, 1e-300)), 0.0)
        return h0 / (h0 + h1)


DEFAULT_PROFILE = CutoffProfile()


def phi_cutoff(profile: CutoffProfile, lam):
    """Even band cutoff: 0 for |lam| <= 1, 1 for |lam| >= 2, monotone between."""
    return profile.ramp(np.abs(lam) - 1.0)


def psi_complement(profile: CutoffProfile, lam):
    """1 - phi_cutoff."""
    return 1.0 - phi_cutoff(profile, lam)


def psi0(profile: CutoffProfile, lam):
    """Low bump: 1 for |lam| <= 1/2, 0 for |lam| >= 1."""
    return 1.0 - phi_cutoff(profile, 2.0 * np.asarray(lam, dtype=float))


def dyadic_bump(profile: CutoffProfile, lam):
    """Even bump supported in 1/2 <= |lam| <= 2, equal to 1 at |lam| = 1.

    Defined as phi_cutoff(2 lam) - phi_cutoff(lam) so that dilates by powers
    of 2 telescope against psi0 into an exact partition of unity.
    """
    lam = np.asarray(lam, dtype=float)
    return phi_cutoff(profile, 2.0 * lam) - phi_cutoff(profile, lam)


def partition_residual(u: float, K: int, profile: CutoffProfile = DEFAULT_PROFILE) -> float:
    """|sum_{k=0}^{K} bump(|u|/2^k) + psi0(|u|) - 1|.

    K must satisfy 2^K >= |u|, otherwise the truncated sum genuinely misses
    mass and the residual reported is the true truncation error.
    """
    u = abs(float(u))
    k = np.arange(K + 1)
    total = float(np.sum(dyadic_bump(profile, u / 2.0**k))) + float(psi0(profile, u))
    return abs(total - 1.0)


def mu_symbol(params: SymbolParams, profile: CutoffProfile, t: float, lam):
    """Oscillating symbol e^{i(t lam)^a} (t lam)^{-b} cutoff(t lam).

    Vanishes wherever t*lam <= 1 (in particular at lam = 0, where the cutoff
    resolves the 0/0).
    """
    if t <= 0.0:
        raise ValueError(f"t must be positive, got {t}")
    z = t * np.abs(np.asarray(lam, dtype=float))
    cut = phi_cutoff(profile, z)
    zsafe = np.where(z > 1.0, z, 1.0)
    out = np.where(
        z > 1.0,
        np.exp(1j * zsafe**params.alpha) * zsafe ** (-params.beta) * cut,
        0.0 + 0.0j,
    )
    return out if out.ndim else complex(out)


def mu_dyadic(params: SymbolParams, profile: CutoffProfile, k: int, lam):
    """Frequency-localized piece e^{i|lam|^a} |lam|^{-b} bump(|lam| / 2^k).

    Supported where |lam| is within a factor 2 of 2^k.
    """
    if k < 0:
        raise ValueError(f"k must be a nonnegative integer, got {k}")
    z = np.abs(np.asarray(lam, dtype=float))
    bump = dyadic_bump(profile, z / 2.0**k)
    zsafe = np.where(z > 0.0, z, 1.0)
    out = np.where(
        bump > 0.0,
        np.exp(1j * zsafe**params.alpha) * zsafe ** (-params.beta) * bump,
        0.0 + 0.0j,
    )
    return out if out.ndim else complex(out)


# Region classification for the rescaled frequency variable.  The three
# bands deliberately overlap; c2 is a numerical stand-in for the (huge)
# theoretical constant and must be recorded in reports.
REGION_INNER = "E1"
REGION_OUTER = "E2"
REGION_MIDDLE = "E3"
REGION_OVERLAP = "overlap"

DEFAULT_C1 = 0.125
DEFAULT_C2 = 8.0


def gamma_region(
    tau: float,
    k: int,
    alpha: float,
    c1: float = DEFAULT_C1,
    c2: float = DEFAULT_C2,
) -> str:
    """Classify |tau| against the three dyadic-scale bands at scale 2^{k(alpha-1)}.

    Inner: |tau| <= c1 * 2^{k(alpha-1)}; outer: |tau| >= c2 * 2^{k(alpha-1)};
    middle: c1 * 2^{k(alpha-1)-1} <= |tau| <= c2 * 2^{k(alpha-1)+1}.
    Returns 'overlap' when more than one band contains tau.
    """
    if not 0.0 < c1 < c2:
        raise ValueError(f"need 0 < c1 < c2, got c1={c1}, c2={c2}")
    scale = 2.0 ** (k * (alpha - 1.0))
    a = abs(tau)
    in_inner = a <= c1 * scale
    in_outer = a >= c2 * scale
    in_middle = c1 * scale / 2.0 <= a <= c2 * scale * 2.0
    hits = [
        name
        for name, hit in (
            (REGION_INNER, in_inner),
            (REGION_OUTER, in_outer),
            (REGION_MIDDLE, in_middle),
        )
        if hit
    ]
    if len(hits) > 1:
        return REGION_OVERLAP
    return hits[0]


# ---------------------------------------------------------------------------
# Riesz-mean symbol: k * integral_0^1 (1-r)^{k-1} e^{izr} dr.
# Evaluated by quadrature; the endpoint weight is absorbed either by a
# Gauss-Jacobi rule (k >= 1) or by the substitution u = (1-r)^k (k < 1),
# with the node count doubled until two successive rules agree to 1e-12.

_jacobi_cache: dict = {}


def _jacobi_rule(k: float, n: int):
    key = (k, n)
    if key not in _jacobi_cache:
        # nodes/weights for integral_{-1}^{1} (1-x)^{k-1} f(x) dx
        x, w = special.roots_jacobi(n, k - 1.0, 0.0)
        # map to r in [0,1]: r=(x+1)/2, (1-x)^{k-1} dx -> 2^k scaling
        _jacobi_cache[key] = ((x + 1.0) / 2.0, w / 2.0**k)
    return _jacobi_cache[key]


_legendre_cache: dict = {}


def _legendre_rule(n: int):
    if n not in _legendre_cache:
        _legendre_cache[n] = special.roots_legendre(n)
    return _legendre_cache[n]


def _riesz_symbol_once(k: float, z: float, n: int) -> complex:
    if k >= 1.0:
        r, w = _jacobi_rule(k, n)
        return k * complex(np.sum(w * np.exp(1j * z * r)))
    # u-substitution removes the endpoint singularity for k < 1
    x, w = _legendre_rule(n)
    u = (x + 1.0) / 2.0
    vals = np.exp(1j * z * (1.0 - u ** (1.0 / k)))
    return complex(np.sum(w / 2.0 * vals))


def riesz_mean_symbol(k: float, alpha: float, z: float, tol: float = 1e-12) -> complex:
    """Per-frequency Riesz-mean factor k * integral_0^1 (1-r)^{k-1} e^{izr} dr.

    alpha enters only through z = t * lam^alpha and is accepted for interface
    symmetry with the diagonal operators; the value depends on (k, z) alone.
    """
    if k <= 0.0:
        raise ValueError(f"order k must be positive, got {k}")
    z = float(z)
    # quantized node counts keep the cached rules to a handful per order
    n = 64
    while n < 0.7 * abs(z) + 40:
        n *= 2
    prev = _riesz_symbol_once(k, z, n)
    for _ in range(6):
        n *= 2
        cur = _riesz_symbol_once(k, z, n)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise RuntimeError(f"Riesz symbol quadrature did not converge for k={k}, z={z}")


def riesz_mean_symbol_closed_form_k1(z: float) -> complex:
    """(e^{iz} - 1) / (iz), the k = 1 antiderivative; cross-check only."""
    if z == 0.0:
        return 1.0 + 0.0j
    return (np.exp(1j * z) - 1.0) / (1j * z)


def taylor_remainder(coeffs, w: float) -> complex:
    """sum_k c_k e^{ikw} - 1 for combination coefficients c_1..c_N.

    When the coefficients solve the extrapolation Vandermonde system this
    equals the order-N Taylor tail, so it vanishes to order N at w = 0.
    """
    c = np.asarray(coeffs, dtype=float)
    k = np.arange(1, c.size + 1)
    return complex(np.sum(c * np.exp(1j * k * w)) - 1.0)


def riesz_mean_symbol_series(k: float, z: float, terms: int = 60) -> complex:
    """Power-series oracle sum_{n>=0} (iz)^n k! n-weights; small |z| only.

    Uses k * integral (1-r)^{k-1} r^n dr = k * B(n+1, k) = n! k! / (n+k)!
    evaluated via gamma functions (valid for fractional k).
    """
    total = 0.0 + 0.0j
    for n in range(terms):
        # k * B(n+1, k) = Gamma(n+1) Gamma(k+1) / Gamma(n+k+1)
        weight = np.exp(
            special.gammaln(n + 1) + special.gammaln(k + 1) - special.gammaln(n + k + 1)
        )
        total += (1j * z) ** n / special.gamma(n + 1) * weight
    return complex(total)
