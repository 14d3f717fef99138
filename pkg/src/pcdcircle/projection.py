"""Univariate projections of circular densities and sample sets.

Two projections along a direction ``u`` on the unit circle are supported:

``expmap``
    The circle is cut open at ``u`` and unrolled onto ``[0, 2*pi]``; a point
    at angle ``theta`` lands at ``r = (theta - angle(u)) mod 2*pi``.
``orthographic``
    The planar embedding is projected linearly, ``r = u . x`` in ``[-1, 1]``.
    Each ``r`` has two preimages, so the marginal picks up a ``1/|sin|``
    Jacobian with integrable poles at ``r = +-1``.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .densities import TWO_PI, canonical_angle

ORTHOGRAPHIC = "orthographic"
EXPMAP = "expmap"
MODES = (ORTHOGRAPHIC, EXPMAP)

ENDPOINT_EPS = 1e-6
DENSITY_CAP = 1e9


class NumericalError(ArithmeticError):
    """A density evaluated to a non-finite value."""

    def __init__(self, theta, value):
        self.theta = float(theta)
        super().__init__(f"density is {value!r} at theta={self.theta!r}")


def check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


@dataclass(frozen=True)
class Direction:
    """Unit vector ``u`` in the plane."""

    u: tuple

    def __post_init__(self):
        u = tuple(float(c) for c in self.u)
        if len(u) != 2 or abs(np.hypot(*u) - 1.0) > 1e-12:
            raise ValueError(f"direction must be a unit 2-vector, got {self.u!r}")
        object.__setattr__(self, "u", u)

    @classmethod
    def from_angle(cls, phi):
        return cls((np.cos(phi), np.sin(phi)))

    @property
    def angle(self):
        return float(np.arctan2(self.u[1], self.u[0]))


def _as_direction(direction):
    if isinstance(direction, Direction):
        return direction
    if np.ndim(direction) == 0:
        return Direction.from_angle(float(direction))
    return Direction(tuple(direction))


def _checked(density, theta):
    values = np.asarray(density.pdf(theta), dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        i = np.flatnonzero(bad.ravel())[0]
        raise NumericalError(np.ravel(theta)[i], values.ravel()[i])
    return values


@dataclass(frozen=True)
class UnivariateDensity:
    """A 1-D density with compact support ``[lo, hi]``.

    ``func`` is evaluated inside the support only; outside the density is zero.

    Cumulatives are built in an internal coordinate ``s``, related to ``r`` by
    a monotone map.  It is the identity here; projections with an endpoint
    singularity override it.
    """

    func: Callable
    support: tuple

    def pdf(self, r):
        r = np.asarray(r, dtype=float)
        lo, hi = self.support
        inside = (r >= lo) & (r <= hi)
        out = np.zeros(r.shape)
        if inside.any():
            out[inside] = self.func(r[inside])
        return out

    __call__ = pdf

    @property
    def width(self):
        return self.support[1] - self.support[0]

    @property
    def internal_support(self):
        return self.support

    def to_internal(self, r):
        return np.asarray(r, dtype=float)

    def from_internal(self, s):
        return np.asarray(s, dtype=float)

    def internal_pdf(self, s):
        return self.pdf(s)


@dataclass(frozen=True)
class ExpMapProjection(UnivariateDensity):
    density: object = None
    direction: Direction = None
    mode = EXPMAP


@dataclass(frozen=True)
class OrthographicProjection(UnivariateDensity):
    """Orthographic marginal.

    Internally the folded angle ``s = arccos(r)`` in ``[0, pi]`` is used; its
    density is the sum of the two preimage branches and has no pole, so the
    trapezoid rule stays accurate up to ``r = +-1``.  ``P(r <= x)`` equals the
    mass of ``s >= arccos(x)``.
    """

    density: object = None
    direction: Direction = None
    mode = ORTHOGRAPHIC

    @property
    def internal_support(self):
        return (0.0, np.pi)

    def to_internal(self, r):
        return np.arccos(np.clip(np.asarray(r, dtype=float), -1.0, 1.0))

    def from_internal(self, s):
        return np.cos(np.asarray(s, dtype=float))

    def internal_pdf(self, s):
        s = np.asarray(s, dtype=float)
        phi = self.direction.angle
        return _checked(self.density, phi + s) + _checked(self.density, phi - s)


def project_density(density, direction, mode=ORTHOGRAPHIC):
    """Marginal density of ``density`` along ``direction``.

    Parameters
    ----------
    density : CircularDensity
    direction : Direction, float or array-like
        A :class:`Direction`, an angle in radians, or a unit 2-vector.
    mode : {"orthographic", "expmap"}

    Returns
    -------
    UnivariateDensity
        Evaluates to zero outside the support (``[0, 2*pi]`` or ``[-1, 1]``).
    """
    check_mode(mode)
    direction = _as_direction(direction)
    phi = direction.angle
    if mode == EXPMAP:
        def func(r):
            return _checked(density, r + phi)

        return ExpMapProjection(func, (0.0, TWO_PI), density, direction)

    def func(r):
        r = np.clip(r, -1.0 + ENDPOINT_EPS, 1.0 - ENDPOINT_EPS)
        alpha = np.arccos(r)
        jac = np.sqrt((1.0 - r) * (1.0 + r))
        total = _checked(density, phi + alpha) + _checked(density, phi - alpha)
        return np.minimum(total / jac, DENSITY_CAP)

    return OrthographicProjection(func, (-1.0, 1.0), density, direction)


def angles_to_vectors(theta):
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def vectors_to_angles(x):
    x = np.asarray(x, dtype=float)
    return canonical_angle(np.arctan2(x[..., 1], x[..., 0]))


def project_samples(samples, direction, mode=ORTHOGRAPHIC):
    """Project points on the circle (``(L, 2)`` unit vectors) to ``r`` values."""
    check_mode(mode)
    u = _as_direction(direction).u
    x = np.asarray(samples, dtype=float).reshape(-1, 2)
    if mode == ORTHOGRAPHIC:
        # explicit products keep the result independent of BLAS threading
        return np.clip(x[:, 0] * u[0] + x[:, 1] * u[1], -1.0, 1.0)
    return canonical_angle(vectors_to_angles(x) - np.arctan2(u[1], u[0]))


def backproject_step(delta_r, direction, mode=ORTHOGRAPHIC, at=None):
    """Planar steps for 1-D steps ``delta_r``.

    Orthographic steps move along ``u``.  Exponential-map steps move along the
    counterclockwise tangent at the sample locations ``at`` (``(L, 2)``).
    """
    check_mode(mode)
    delta_r = np.asarray(delta_r, dtype=float)
    if mode == ORTHOGRAPHIC:
        u = np.asarray(_as_direction(direction).u)
        return delta_r[..., None] * u
    if at is None:
        raise ValueError("expmap backprojection needs the sample locations")
    at = np.asarray(at, dtype=float).reshape(delta_r.shape + (2,))
    tangent = np.stack([-at[..., 1], at[..., 0]], axis=-1)
    return delta_r[..., None] * tangent
