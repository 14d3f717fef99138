"""Deterministic sampling on the circle by projected cumulative matching.

Each iteration projects the density and the current samples onto ``N``
evenly rotated directions, asks the 1-D sampler for steps that match the
projected cumulatives, backprojects and averages those steps, applies them
with a decaying gain and pulls the samples back onto the circle.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from . import _rng
from .densities import TWO_PI
from .metrics import circular_wasserstein
from .projection import (
    ORTHOGRAPHIC,
    angles_to_vectors,
    backproject_step,
    check_mode,
    project_density,
    project_samples,
    vectors_to_angles,
)
from .univariate import DEFAULT_FIXED_POINTS, sample_projected
from .validation import check_angles, check_density, check_positive_int

__all__ = [
    "ConvergenceTrace",
    "DiracMixture",
    "PCDCircleSampler",
    "SamplerConfig",
    "init_samples",
    "iteration_step",
    "sample_circle",
]

EARLY_STOP_TOL = 1e-10
EARLY_STOP_PATIENCE = 5
TIE_BREAK = 1e-9


@dataclass(frozen=True)
class SamplerConfig:
    """Sampler settings.  Defaults: 200 iterations, 2 projections, decay 0.99, 30 grid points."""

    n_samples: int = 15
    n_iter: int = 200
    n_projections: int = 2
    decay: float = 0.99
    n_fixed_points: int = DEFAULT_FIXED_POINTS
    mode: str = ORTHOGRAPHIC
    adaptive_points: bool = True
    seed: int = 0
    angle_offset: float = 0.0
    early_stop: bool = False
    trace_metric: bool = False
    trace_resolution: int = 3600
    n_jobs: int = 1

    def __post_init__(self):
        check_positive_int(self.n_samples, "n_samples")
        check_positive_int(self.n_iter, "n_iter")
        check_positive_int(self.n_projections, "n_projections")
        check_positive_int(self.n_fixed_points, "n_fixed_points", minimum=2)
        check_positive_int(self.n_jobs, "n_jobs")
        if not 0.0 < self.decay <= 1.0:
            raise ValueError(f"decay must lie in (0, 1], got {self.decay!r}")
        check_mode(self.mode)
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an integer in [0, 2**64), got {self.seed!r}")
        if not np.isfinite(self.angle_offset):
            raise ValueError("angle_offset must be finite")

    def to_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class DiracMixture:
    """``L`` equally weighted unit vectors, shape ``(L, 2)``."""

    samples: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.samples, dtype=float).reshape(-1, 2)
        if len(x) < 1:
            raise ValueError("a Dirac mixture needs at least one sample")
        norms = np.hypot(x[:, 0], x[:, 1])
        if not np.all(np.abs(norms - 1.0) <= 1e-12):
            raise ValueError("samples must be unit vectors")
        object.__setattr__(self, "samples", x)

    @classmethod
    def from_angles(cls, theta):
        return cls(angles_to_vectors(theta))

    @property
    def angles(self):
        return vectors_to_angles(self.samples)

    def __len__(self):
        return len(self.samples)


@dataclass
class ConvergenceTrace:
    """Per-iteration gain, mean applied step norm and optional W1 to the reference."""

    lambdas: list = field(default_factory=list)
    mean_step_norm: list = field(default_factory=list)
    wasserstein: list = field(default_factory=list)
    n_degenerate: int = 0

    def __len__(self):
        return len(self.lambdas)

    def rows(self):
        for m, (lam, step, w1) in enumerate(
            zip(self.lambdas, self.mean_step_norm, self.wasserstein), start=1
        ):
            yield m, lam, step, w1


def _break_ties(theta):
    """Spread exactly coincident angles by +1e-9, -1e-9, +2e-9, ... rad."""
    theta = np.array(theta, dtype=float)
    order = np.argsort(theta, kind="stable")
    run = 0
    for prev, cur in zip(order, order[1:]):
        if theta[cur] == theta[prev] - _offset(run):
            run += 1
            theta[cur] += _offset(run)
        else:
            run = 0
    return theta


def _offset(k):
    return TIE_BREAK * ((k + 1) // 2) * (1 if k % 2 else -1) if k else 0.0


def init_samples(n_samples, seed=0, angle_offset=0.0):
    """``n_samples`` uniform random points on the circle from the counter-based generator."""
    n_samples = check_positive_int(n_samples, "n_samples")
    u = _rng.uniform(seed, _rng.STREAM_INIT, np.arange(n_samples))
    return DiracMixture.from_angles(TWO_PI * u + angle_offset)


def projection_angles(phi0, n_projections):
    """Evenly rotated projection angles ``pi * (n - 1) / N + phi0``."""
    return np.pi * np.arange(n_projections) / n_projections + phi0


def _projected_step(density, x, phi, config):
    proj = project_density(density, phi, config.mode)
    r = project_samples(x, phi, config.mode)
    dr = sample_projected(proj, r, config.n_fixed_points, config.adaptive_points)
    return backproject_step(dr, phi, config.mode, at=x)


def iteration_step(mixture, density, config, lam, phi0, executor=None):
    """One sweep over ``N`` projections followed by the damped update.

    Returns
    -------
    (DiracMixture, float, int)
        Updated samples, mean norm of the applied planar steps, and the number
        of samples left in place because their update hit the origin.
    """
    x = mixture.samples
    phis = projection_angles(phi0, config.n_projections)
    if executor is None:
        parts = [_projected_step(density, x, phi, config) for phi in phis]
    else:
        parts = list(executor.map(lambda phi: _projected_step(density, x, phi, config), phis))
    total = np.zeros_like(x)
    for part in parts:  # fixed order keeps the sum schedule-independent
        total += part
    step = lam * total / config.n_projections
    moved = x + step
    degenerate = (moved[:, 0] == 0.0) & (moved[:, 1] == 0.0)
    theta = np.arctan2(moved[:, 1], moved[:, 0])
    new = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    new[degenerate] = x[degenerate]
    mean_step = float(np.mean(np.hypot(step[:, 0], step[:, 1])))
    return DiracMixture(new), mean_step, int(degenerate.sum())


def sample_circle(density, config=None, init=None):
    """Deterministic samples approximating ``density``.

    Parameters
    ----------
    density : CircularDensity, mapping or JSON text
    config : SamplerConfig, optional
    init : array-like, optional
        Starting angles ``(L,)`` or unit vectors ``(L, 2)``; overrides the random
        start (``config.n_samples`` must match).

    Returns
    -------
    (DiracMixture, ConvergenceTrace)
    """
    density = check_density(density)
    config = SamplerConfig() if config is None else config
    if init is None:
        u = _rng.uniform(config.seed, _rng.STREAM_INIT, np.arange(config.n_samples))
        theta = TWO_PI * u + config.angle_offset
    else:
        theta = check_angles(init)
        if len(theta) != config.n_samples:
            raise ValueError(f"init has {len(theta)} samples, config expects {config.n_samples}")
    mixture = DiracMixture.from_angles(_break_ties(theta))

    phi0s = np.pi * _rng.uniform(config.seed, _rng.STREAM_PHI0, np.arange(config.n_iter))
    phi0s = phi0s + config.angle_offset
    trace = ConvergenceTrace()
    lam = 1.0
    quiet = 0
    executor = ThreadPoolExecutor(config.n_jobs) if config.n_jobs > 1 else None
    try:
        for m in range(config.n_iter):
            lam *= config.decay
            mixture, step, degenerate = iteration_step(
                mixture, density, config, lam, phi0s[m], executor
            )
            trace.lambdas.append(lam)
            trace.mean_step_norm.append(step)
            trace.n_degenerate += degenerate
            if config.trace_metric:
                trace.wasserstein.append(
                    circular_wasserstein(mixture.samples, density, config.trace_resolution)
                )
            else:
                trace.wasserstein.append(float("nan"))
            if config.early_stop:
                quiet = quiet + 1 if step < EARLY_STOP_TOL else 0
                if quiet >= EARLY_STOP_PATIENCE:
                    break
    finally:
        if executor is not None:
            executor.shutdown()
    return mixture, trace


class PCDCircleSampler(BaseEstimator):
    """Estimator wrapper around :func:`sample_circle`.

    ``fit`` takes the reference density (object, spec mapping or JSON text)
    in place of a data matrix.

    Attributes
    ----------
    samples_ : ndarray, shape (n_samples, 2)
    angles_ : ndarray, shape (n_samples,)
    trace_ : ConvergenceTrace
    n_iter_ : int
    density_ : CircularDensity
    """

    def __init__(
        self,
        n_samples=15,
        n_iter=200,
        n_projections=2,
        decay=0.99,
        n_fixed_points=DEFAULT_FIXED_POINTS,
        mode=ORTHOGRAPHIC,
        adaptive_points=True,
        seed=0,
        angle_offset=0.0,
        early_stop=False,
        trace_metric=False,
        n_jobs=1,
    ):
        self.n_samples = n_samples
        self.n_iter = n_iter
        self.n_projections = n_projections
        self.decay = decay
        self.n_fixed_points = n_fixed_points
        self.mode = mode
        self.adaptive_points = adaptive_points
        self.seed = seed
        self.angle_offset = angle_offset
        self.early_stop = early_stop
        self.trace_metric = trace_metric
        self.n_jobs = n_jobs

    def _config(self):
        return SamplerConfig(**self.get_params())

    def fit(self, X, y=None, init=None):
        """Run the sampler against the density ``X``."""
        self.density_ = check_density(X)
        mixture, trace = sample_circle(self.density_, self._config(), init=init)
        self.samples_ = mixture.samples
        self.angles_ = mixture.angles
        self.trace_ = trace
        self.n_iter_ = len(trace)
        return self

    def _check_fitted(self):
        if not hasattr(self, "samples_"):
            from sklearn.exceptions import NotFittedError

            raise NotFittedError("call fit before using this sampler")

    def sample(self, X):
        """Fit and return the sample angles."""
        return self.fit(X).angles_

    def transform(self, X=None):
        """Samples as unit vectors ``(n_samples, 2)``."""
        self._check_fitted()
        return self.samples_.copy()

    def fit_transform(self, X, y=None, **fit_params):
        return self.fit(X, **fit_params).transform()

    def score(self, X=None, y=None, resolution=3600):
        """Negative circular W1 to ``X`` (defaults to the fitted density)."""
        self._check_fitted()
        density = self.density_ if X is None else check_density(X)
        return -circular_wasserstein(self.samples_, density, resolution)

