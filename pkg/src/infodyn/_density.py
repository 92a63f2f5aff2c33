"""Pointwise integrands shared by the information and hydrodynamic code.

Ratios such as (rho')**2 / rho are evaluated directly only where the density
is comfortably above FFT round-off. Below ``GRADIENT_FLOOR * max(rho)`` the
ratio is replaced by its limit at a zero of a smooth density,
``(rho')**2 / rho -> 2 rho''``. In Gaussian tails both forms are negligibly
small; at an exact node on a grid point the limit is the only sane value.
"""
import numpy as np

from .grid import spectral_derivative

# rho ln rho -> 0 below this (relative to max rho)
DENSITY_FLOOR = 1e-30
# ratio integrands switch to node limits below this (relative to max rho)
GRADIENT_FLOOR = 1e-16
# phase unwrapping is only attempted where rho exceeds this (relative)
NODE_THRESHOLD = 1e-10


def check_density(density, grid, space="position", norm_tol=1e-8):
    rho = np.asarray(density, dtype=float)
    if rho.shape != (grid.n,):
        raise ValueError(f"density has shape {rho.shape}, expected ({grid.n},)")
    if not np.all(np.isfinite(rho)):
        raise ValueError("density contains NaN or Inf")
    if rho.min() < -1e-12:
        raise ValueError(f"density is negative (min {rho.min():.3g})")
    h = grid.dx if space == "position" else grid.dk
    total = rho.sum() * h
    if abs(total - 1) > norm_tol:
        raise ValueError(f"density integrates to {total:.12g}, not 1")
    return np.clip(rho, 0.0, None)


def entropy_integrand(rho):
    """``-rho ln rho`` with the floor applied."""
    keep = rho > DENSITY_FLOOR * rho.max()
    out = np.zeros_like(rho)
    out[keep] = -rho[keep] * np.log(rho[keep])
    return out


def score_squared_integrand(rho, grid):
    """``(rho')**2 / rho`` with node limits; rho' and rho'' spectral."""
    d1 = spectral_derivative(rho, grid, 1)
    d2 = spectral_derivative(rho, grid, 2)
    keep = rho > GRADIENT_FLOOR * rho.max()
    safe = np.where(keep, rho, 1.0)
    return np.where(keep, d1 ** 2 / safe, 2 * np.maximum(d2, 0.0))
