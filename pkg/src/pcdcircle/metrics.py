"""Approximation-quality diagnostics for Dirac mixtures on the circle.

None of these feed back into the sampler.
"""

import numpy as np

from .densities import TWO_PI, canonical_angle
from .validation import check_angles

__all__ = [
    "circular_std",
    "circular_wasserstein",
    "trig_moment_continuous",
    "trig_moment_dm",
]


def trig_moment_dm(samples, n=1):
    """Trigonometric moment ``mean(exp(i n theta))`` of equally weighted samples."""
    if n < 1:
        raise ValueError("moment order must be >= 1")
    theta = check_angles(samples)
    return complex(np.mean(np.exp(1j * n * theta)))


def trig_moment_continuous(density, n=1, grid_size=4096):
    """Trigonometric moment of a continuous density by periodic trapezoid quadrature."""
    if n < 1:
        raise ValueError("moment order must be >= 1")
    if grid_size < 256:
        raise ValueError("grid_size must be at least 256")
    theta = np.arange(grid_size) * (TWO_PI / grid_size)
    f = density.pdf(theta)
    return complex(np.sum(f * np.exp(1j * n * theta)) * (TWO_PI / grid_size))


def circular_std(samples):
    """Circular standard deviation ``sqrt(-2 ln R)``."""
    r = abs(trig_moment_dm(samples, 1))
    return float(np.sqrt(-2.0 * np.log(max(r, 1e-300))))


def _atom_masses(theta, resolution):
    # split each atom linearly between its two neighbouring grid nodes
    h = TWO_PI / resolution
    pos = canonical_angle(theta) / h
    lo = np.floor(pos).astype(int)
    frac = pos - lo
    masses = np.zeros(resolution)
    np.add.at(masses, lo % resolution, (1.0 - frac) / len(theta))
    np.add.at(masses, (lo + 1) % resolution, frac / len(theta))
    return masses


def _reference_masses(density, resolution):
    theta = np.arange(resolution) * (TWO_PI / resolution)
    f = np.clip(density.pdf(theta), 0.0, None)
    return f / f.sum()


def cut_minimized_w1(a, b):
    """Circular W1 between two mass vectors on a uniform periodic grid.

    ``sum_k |G_k - c| * h`` with ``G`` the cumulative mass difference, minimized
    over the offset ``c``.  Each cut between grid cells fixes ``c = G_k``, so
    every cut is scanned; sorting plus prefix sums makes the scan O(R log R).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    h = TWO_PI / len(a)
    g = np.sort(np.cumsum(a - b))
    prefix = np.concatenate([[0.0], np.cumsum(g)])
    k = np.arange(len(g))
    below = g * k - prefix[:-1]
    above = (prefix[-1] - prefix[1:]) - g * (len(g) - 1 - k)
    return float(np.min(below + above) * h)


def circular_wasserstein(samples, density, resolution=3600):
    """Circular Wasserstein-1 distance between samples and a reference density.

    Both measures are discretized onto ``resolution`` equally spaced angles.

    Parameters
    ----------
    samples : array-like
        Angles ``(L,)`` or unit vectors ``(L, 2)``.
    density : CircularDensity
    resolution : int
        Number of grid cells; must be at least ``10 * L``.
    """
    theta = check_angles(samples)
    if resolution < 10 * len(theta):
        raise ValueError("resolution must be at least 10 * L")
    return cut_minimized_w1(_atom_masses(theta, resolution), _reference_masses(density, resolution))
