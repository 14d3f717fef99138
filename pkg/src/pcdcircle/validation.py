"""Input checking shared by the estimator, metrics and CLI."""

import numpy as np

from .densities import CircularDensity, canonical_angle, parse_density_spec


def check_density(density):
    """Accept a density object, a spec mapping, or spec JSON text."""
    if isinstance(density, CircularDensity):
        return density
    return parse_density_spec(density)


def check_angles(samples):
    """Angles in ``[0, 2*pi)`` from either ``(L,)`` angles or ``(L, 2)`` unit vectors."""
    arr = np.asarray(samples, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 2:
        norms = np.hypot(arr[:, 0], arr[:, 1])
        if not np.all(np.abs(norms - 1.0) <= 1e-9):
            raise ValueError("sample vectors must lie on the unit circle")
        arr = np.arctan2(arr[:, 1], arr[:, 0])
    elif arr.ndim != 1:
        raise ValueError(f"expected angles (L,) or unit vectors (L, 2), got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("need at least one sample")
    if not np.all(np.isfinite(arr)):
        raise ValueError("samples must be finite")
    return canonical_angle(arr)


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)
