"""One-dimensional deterministic sampling by cumulative matching.

Given a 1-D density on a compact interval and the current sample positions,
the density is integrated with the composite trapezoidal rule on a fixed
homogeneous grid merged with the sample positions.  The resulting piecewise
quadratic CDF is inverted at the midpoint quantiles ``(2i - 1) / (2L)`` and
the sorted samples are paired with the sorted quantile locations, which is
the minimum-cost (Wasserstein) association in one dimension.
"""

from dataclasses import dataclass

import numpy as np

DEDUP_TOL = 1e-14
DEFAULT_FIXED_POINTS = 30


def deterministic_targets(n):
    """Midpoint quantile levels ``(2i - 1) / (2n)`` for ``i = 1..n``."""
    if n < 1:
        raise ValueError("need at least one target")
    return (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)


def build_evaluation_points(support, n_fixed, samples=()):
    """Uniform grid of ``n_fixed`` points over ``support`` merged with ``samples``.

    Samples are clipped into the support; the union is sorted and points closer
    than ``DEDUP_TOL`` to their predecessor are dropped.
    """
    if n_fixed < 2:
        raise ValueError("n_fixed must be at least 2")
    lo, hi = support
    grid = np.linspace(lo, hi, int(n_fixed))
    samples = np.clip(np.asarray(samples, dtype=float).ravel(), lo, hi)
    points = np.sort(np.concatenate([grid, samples]))
    keep = np.empty(len(points), dtype=bool)
    keep[0] = True
    keep[1:] = np.diff(points) > DEDUP_TOL
    return points[keep]


def cumtrapz(points, values):
    """Cumulative trapezoid integral starting at 0."""
    points = np.asarray(points, dtype=float)
    values = np.asarray(values, dtype=float)
    out = np.zeros(len(points))
    if len(points) > 1:
        out[1:] = np.cumsum(np.diff(points) * (values[1:] + values[:-1]) / 2.0)
    return out


def center_cdf(cumulative):
    """Shift a cumulative so its deficit ``1 - F[-1]`` is split evenly between both tails."""
    cumulative = np.asarray(cumulative, dtype=float)
    return cumulative + (1.0 - cumulative[-1]) / 2.0


@dataclass(frozen=True)
class PiecewiseCdf:
    """Trapezoid CDF: piecewise-linear density, piecewise-quadratic cumulative."""

    points: np.ndarray
    density: np.ndarray
    cumulative: np.ndarray

    @classmethod
    def from_values(cls, points, density, center=True):
        points = np.asarray(points, dtype=float)
        density = np.asarray(density, dtype=float)
        cumulative = cumtrapz(points, density)
        if center:
            cumulative = center_cdf(cumulative)
        return cls(points, density, cumulative)

    def __call__(self, x):
        """Evaluate the piecewise-quadratic CDF."""
        x = np.asarray(x, dtype=float)
        t, f, F = self.points, self.density, self.cumulative
        j = np.clip(np.searchsorted(t, x, side="right") - 1, 0, len(t) - 2)
        d = np.clip(x, t[0], t[-1]) - t[j]
        m = (f[j + 1] - f[j]) / (t[j + 1] - t[j])
        return F[j] + f[j] * d + 0.5 * m * d * d


def _segment_roots(fl, m, c):
    """Both roots of ``m/2 d^2 + fl d - c = 0`` (``c >= 0``), NaN where absent."""
    disc = fl * fl + 2.0 * m * c
    ok = disc >= 0.0
    s = np.sqrt(np.where(ok, disc, 0.0))
    q = fl + s
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        # cancellation-free form of the root nearest zero
        d1 = np.where(q > 0.0, 2.0 * c / q, np.where(m != 0.0, (-fl + s) / m, np.nan))
        d2 = np.where(m != 0.0, -q / m, np.nan)
    d1 = np.where(ok, d1, np.nan)
    d2 = np.where(ok, d2, np.nan)
    return d1, d2


def invert_cdf(cdf, targets, return_clamped=False):
    """Locations where the piecewise-quadratic ``cdf`` reaches ``targets``.

    The segment ``F[jl] <= p < F[jr]`` is found by binary search.  Inside it the
    quadratic is solved; a root inside the segment is preferred (if both are
    inside, the one nearest the secant solution), otherwise the secant of the
    CDF over the segment is inverted linearly.  Targets outside
    ``[F[0], F[-1]]`` are clamped to the support ends.

    Returns
    -------
    ndarray, or (ndarray, bool ndarray) when ``return_clamped`` is set
    """
    p = np.atleast_1d(np.asarray(targets, dtype=float))
    t, f, F = cdf.points, cdf.density, cdf.cumulative
    n = len(t)
    below = p < F[0]
    above = p >= F[-1]
    jl = np.clip(np.searchsorted(F, p, side="right") - 1, 0, n - 2)
    jr = jl + 1
    h = t[jr] - t[jl]
    dF = F[jr] - F[jl]
    c = p - F[jl]
    m = (f[jr] - f[jl]) / h

    with np.errstate(divide="ignore", invalid="ignore"):
        lin = np.where(dF > 0.0, c * h / dF, 0.5 * h)
    d1, d2 = _segment_roots(f[jl], m, c)
    slack = 1e-12 * h
    in1 = (d1 >= -slack) & (d1 <= h + slack)
    in2 = (d2 >= -slack) & (d2 <= h + slack)
    both = in1 & in2
    pick2 = both & (np.abs(d2 - lin) < np.abs(d1 - lin))
    d = np.where(in1 & ~pick2, d1, np.where(in2, d2, lin))
    d = np.where(dF > 0.0, d, 0.5 * h)
    x = t[jl] + np.clip(d, 0.0, h)

    x = np.where(below, t[0], np.where(above, t[-1], x))
    if return_clamped:
        return x, below | above
    return x


def sort_association(current, located):
    """Steps pairing sorted ``current`` values with sorted ``located`` values.

    The returned steps follow the order of ``current``.
    """
    current = np.asarray(current, dtype=float)
    order = np.argsort(current, kind="stable")
    steps = np.empty_like(current)
    steps[order] = np.sort(located) - current[order]
    return steps


def projected_cdf(dens, n_fixed=DEFAULT_FIXED_POINTS, samples=(), center=True):
    """Trapezoid CDF of ``dens`` in its internal coordinate.

    ``samples`` are positions in the projected coordinate ``r``.
    """
    fixed = np.sort(dens.to_internal(np.linspace(*dens.support, int(n_fixed))))
    s = dens.to_internal(samples) if len(np.atleast_1d(samples)) else np.empty(0)
    points = build_evaluation_points(dens.internal_support, 2, np.concatenate([fixed, s]))
    return PiecewiseCdf.from_values(points, dens.internal_pdf(points), center=center)


def projected_quantiles(dens, levels, n_fixed=DEFAULT_FIXED_POINTS, samples=()):
    """Locations ``r`` of the quantile ``levels`` of ``dens``, increasing.

    With a decreasing internal map the internal CDF is inverted at ``1 - p``.
    """
    cdf = projected_cdf(dens, n_fixed, samples)
    levels = np.asarray(levels, dtype=float)
    lo, hi = dens.internal_support
    decreasing = dens.from_internal(hi) < dens.from_internal(lo)
    return dens.from_internal(invert_cdf(cdf, 1.0 - levels if decreasing else levels))


def sample_projected(dens, current, n_fixed=DEFAULT_FIXED_POINTS, adaptive=True):
    """Steps moving ``current`` toward the deterministic quantiles of ``dens``.

    Parameters
    ----------
    dens : UnivariateDensity
    current : array-like, shape (L,)
        Current projected sample positions.
    n_fixed : int
        Size of the homogeneous evaluation grid.
    adaptive : bool
        Whether the current samples join the evaluation points.

    Returns
    -------
    ndarray, shape (L,)
        One step per sample, in the order of ``current``.
    """
    current = np.asarray(current, dtype=float).ravel()
    located = projected_quantiles(
        dens, deterministic_targets(len(current)), n_fixed, current if adaptive else ()
    )
    return sort_association(current, located)
