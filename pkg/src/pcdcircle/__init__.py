"""Deterministic Dirac-mixture sampling of densities on the circle.

Samples are found by repeatedly matching the cumulative distributions of
one-dimensional projections of the density::

    >>> from pcdcircle import PCDCircleSampler, VonMises
    >>> sampler = PCDCircleSampler(n_samples=15, seed=0).fit(VonMises(mu=0.0, kappa=2.0))
    >>> sampler.angles_.shape
    (15,)
"""

__version__ = "0.1.0"

from .densities import (  # noqa: E402
    CircularDensity,
    DensitySpecError,
    DensityValidationError,
    Mixture,
    PiecewiseConstant,
    Tabulated,
    Uniform,
    VonMises,
    WrappedCauchy,
    WrappedExponential,
    WrappedLaplace,
    WrappedNormal,
    normalization_integral,
    parse_density_spec,
    rotate_density,
)
from .metrics import (  # noqa: E402
    circular_std,
    circular_wasserstein,
    trig_moment_continuous,
    trig_moment_dm,
)
from .projection import (  # noqa: E402
    Direction,
    NumericalError,
    backproject_step,
    project_density,
    project_samples,
)
from .sampler import (  # noqa: E402
    ConvergenceTrace,
    DiracMixture,
    PCDCircleSampler,
    SamplerConfig,
    init_samples,
    iteration_step,
    sample_circle,
)
from .univariate import invert_cdf, projected_cdf, sample_projected  # noqa: E402

__all__ = [
    "CircularDensity",
    "ConvergenceTrace",
    "DensitySpecError",
    "DensityValidationError",
    "DiracMixture",
    "Direction",
    "Mixture",
    "NumericalError",
    "PCDCircleSampler",
    "PiecewiseConstant",
    "SamplerConfig",
    "Tabulated",
    "Uniform",
    "VonMises",
    "WrappedCauchy",
    "WrappedExponential",
    "WrappedLaplace",
    "WrappedNormal",
    "backproject_step",
    "circular_std",
    "circular_wasserstein",
    "init_samples",
    "invert_cdf",
    "iteration_step",
    "normalization_integral",
    "parse_density_spec",
    "project_density",
    "project_samples",
    "projected_cdf",
    "rotate_density",
    "sample_circle",
    "sample_projected",
    "trig_moment_continuous",
    "trig_moment_dm",
]
