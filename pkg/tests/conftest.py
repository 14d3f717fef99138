import numpy as np
import pytest
from hypothesis import settings

from pcdcircle import (
    Mixture,
    PiecewiseConstant,
    Tabulated,
    Uniform,
    VonMises,
    WrappedCauchy,
    WrappedExponential,
    WrappedLaplace,
    WrappedNormal,
)

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

TWO_PI = 2.0 * np.pi
_G = np.linspace(0.0, TWO_PI, 72, endpoint=False)


def catalog():
    """One representative of each family, keyed by a short name."""
    return {
        "uniform": Uniform(),
        "von_mises": VonMises(1.0, 2.0),
        "wrapped_normal": WrappedNormal(4.0, 0.8),
        "wrapped_cauchy": WrappedCauchy(2.0, 0.6),
        "wrapped_exponential": WrappedExponential(0.5),
        "wrapped_laplace": WrappedLaplace(0.5, 1.0),
        "mixture": Mixture(((0.5, VonMises(1.0, 6.0)), (0.5, VonMises(4.0, 3.0)))),
        "piecewise_constant": PiecewiseConstant(
            (0.0, 1.0, 2.5, 4.0, TWO_PI), (0.05, 0.3, 0.1, 0.02)
        ),
        "tabulated": Tabulated(tuple(_G), tuple(1.0 + 0.9 * np.sin(3.0 * _G))),
    }


CATALOG = catalog()


@pytest.fixture(params=sorted(CATALOG))
def catalog_density(request):
    return CATALOG[request.param]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
