"""Continuous reference densities on the unit circle.

Every density is an immutable object exposing ``pdf(theta)`` for angles in
radians.  Densities are built either directly (``VonMises(mu=0, kappa=2)``)
or from a JSON-compatible spec document via :func:`parse_density_spec`::

    {"family": "von_mises", "mu": 0.0, "kappa": 500.0}
    {"family": "mixture", "components": [{"weight": 0.5, "spec": {...}}, ...]}

At construction the density is integrated over the circle.  If the integral
is off by more than ``NORMALIZATION_TOL`` the density is rescaled and its
``renormalized`` flag is set.
"""

import json
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi
NORMALIZATION_TOL = 1e-6
NORMALIZATION_GRID = 1 << 14

__all__ = [
    "CircularDensity",
    "DensitySpecError",
    "DensityValidationError",
    "Mixture",
    "PiecewiseConstant",
    "Tabulated",
    "Uniform",
    "VonMises",
    "WrappedCauchy",
    "WrappedExponential",
    "WrappedLaplace",
    "WrappedNormal",
    "canonical_angle",
    "i0e",
    "normalization_integral",
    "parse_density_spec",
    "rotate_density",
]


class DensitySpecError(ValueError):
    """Spec document does not match the schema.

    ``path`` names the offending field, e.g. ``components[1].weight``.
    """

    def __init__(self, message, path=""):
        self.message = message
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class DensityValidationError(DensitySpecError):
    """Density parameters are well-formed but describe no valid density."""


def canonical_angle(theta):
    """Reduce angles to ``[0, 2*pi)``."""
    theta = np.mod(theta, TWO_PI)
    # np.mod can round up to exactly 2*pi for tiny negative inputs
    return np.where(theta >= TWO_PI, 0.0, theta)


def i0e(kappa):
    """Exponentially scaled modified Bessel function ``exp(-kappa) * I0(kappa)``.

    Power series up to ``kappa = 50``, asymptotic expansion beyond.
    """
    kappa = float(kappa)
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    if kappa <= 50.0:
        q = 0.25 * kappa * kappa
        term = 1.0
        total = 1.0
        k = 0
        while True:
            k += 1
            term *= q / (k * k)
            total += term
            if term < 1e-17 * total:
                break
        return total * math.exp(-kappa)
    # I0(x) ~ e^x / sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    x8 = 8.0 * kappa
    term = 1.0
    total = 1.0
    for k in range(1, 30):
        term *= (2 * k - 1) ** 2 / (k * x8)
        total += term
        if term < 1e-17 * total:
            break
    return total / math.sqrt(TWO_PI * kappa)


def normalization_integral(density, grid_size=NORMALIZATION_GRID):
    """Trapezoid estimate of the raw (unscaled) density's integral over the circle.

    Uses ``grid_size`` uniformly spaced nodes on ``[0, 2*pi]``, both ends included.
    """
    if grid_size < 64:
        raise ValueError("grid_size must be at least 64")
    theta = np.linspace(0.0, TWO_PI, int(grid_size))
    values = density._raw_pdf(canonical_angle(theta))
    if np.all(values == values[0]):
        # the rule is exact for constants; skip the summation roundoff
        return float(values[0]) * TWO_PI
    return float(np.trapezoid(values, theta))


def _finite(value, path, *, positive=False, nonneg=False):
    if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)):
        raise DensitySpecError(f"expected a number, got {value!r}", path)
    value = float(value)
    if not math.isfinite(value):
        raise DensitySpecError(f"expected a finite number, got {value!r}", path)
    if positive and value <= 0:
        raise DensityValidationError(f"must be > 0, got {value}", path)
    if nonneg and value < 0:
        raise DensityValidationError(f"must be >= 0, got {value}", path)
    return value


@dataclass(frozen=True)
class CircularDensity:
    """Base class; subclasses implement ``_raw_pdf`` on canonical angles."""

    family = "abstract"

    renormalized: bool = field(default=False, init=False, compare=False)
    _scale: float = field(default=1.0, init=False, repr=False, compare=False)

    def __post_init__(self):
        self._validate()
        total = self._mass()
        if not (math.isfinite(total) and total > 0):
            raise DensityValidationError(
                f"density is not normalizable: integral over the circle is {total!r}"
            )
        if abs(total - 1.0) > NORMALIZATION_TOL:
            object.__setattr__(self, "_scale", 1.0 / total)
            object.__setattr__(self, "renormalized", True)

    def _validate(self):
        pass

    def _set(self, name, value):
        object.__setattr__(self, name, value)

    def _mass(self):
        return normalization_integral(self)

    def _raw_pdf(self, theta):
        raise NotImplementedError

    def pdf(self, theta):
        """Density at ``theta`` (radians, any range); array in, array out."""
        theta = np.asarray(theta, dtype=float)
        out = self._raw_pdf(canonical_angle(theta))
        if self._scale != 1.0:
            out = out * self._scale
        return out

    __call__ = pdf

    def to_dict(self):
        raise NotImplementedError

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)


@dataclass(frozen=True)
class Uniform(CircularDensity):
    family = "uniform"

    def _mass(self):
        return 1.0

    def _raw_pdf(self, theta):
        return np.full(np.shape(theta), 1.0 / TWO_PI)

    def to_dict(self):
        return {"family": self.family}


@dataclass(frozen=True)
class VonMises(CircularDensity):
    mu: float = 0.0
    kappa: float = 1.0
    family = "von_mises"

    def _validate(self):
        self._set("mu", _finite(self.mu, "mu"))
        self._set("kappa", _finite(self.kappa, "kappa", nonneg=True))

    def _raw_pdf(self, theta):
        norm = TWO_PI * i0e(self.kappa)
        return np.exp(self.kappa * (np.cos(theta - self.mu) - 1.0)) / norm

    def to_dict(self):
        return {"family": self.family, "mu": self.mu, "kappa": self.kappa}


def _wrapped_normal_terms(sigma):
    # tail of every omitted term stays below ~1e-14 relative to the peak
    return max(3, math.ceil(8.1 * sigma / TWO_PI) + 2)


def _wrapped_exp_tail_terms(lam):
    return math.ceil(-math.log(1e-14) / (TWO_PI * lam)) + 1


@dataclass(frozen=True)
class WrappedNormal(CircularDensity):
    mu: float = 0.0
    sigma: float = 1.0
    family = "wrapped_normal"

    def _validate(self):
        self._set("mu", _finite(self.mu, "mu"))
        self._set("sigma", _finite(self.sigma, "sigma", positive=True))

    def _raw_pdf(self, theta, n_terms=None):
        k_max = _wrapped_normal_terms(self.sigma) if n_terms is None else n_terms
        d = np.mod(np.asarray(theta) - self.mu, TWO_PI)
        k = np.arange(-k_max, k_max + 1, dtype=float)
        x = d[..., None] + TWO_PI * k
        terms = np.exp(-0.5 * (x / self.sigma) ** 2)
        return terms.sum(axis=-1) / (self.sigma * math.sqrt(TWO_PI))

    def to_dict(self):
        return {"family": self.family, "mu": self.mu, "sigma": self.sigma}


@dataclass(frozen=True)
class WrappedCauchy(CircularDensity):
    mu: float = 0.0
    rho: float = 0.5
    family = "wrapped_cauchy"

    def _validate(self):
        self._set("mu", _finite(self.mu, "mu"))
        rho = _finite(self.rho, "rho")
        self._set("rho", rho)
        if not 0.0 <= rho < 1.0:
            raise DensityValidationError(f"must lie in [0, 1), got {rho}", "rho")

    def _raw_pdf(self, theta):
        r = self.rho
        return (1.0 - r * r) / (TWO_PI * (1.0 + r * r - 2.0 * r * np.cos(theta - self.mu)))

    def to_dict(self):
        return {"family": self.family, "mu": self.mu, "rho": self.rho}


@dataclass(frozen=True)
class WrappedExponential(CircularDensity):
    """Exponential density on ``[0, inf)`` wrapped onto the circle (closed form)."""

    lam: float = 1.0
    family = "wrapped_exponential"

    def _validate(self):
        self._set("lam", _finite(self.lam, "lambda", positive=True))

    def _mass(self):
        # closed form is exact; the jump at 0 defeats a grid check
        return 1.0

    def _raw_pdf(self, theta):
        lam = self.lam
        return lam * np.exp(-lam * theta) / -np.expm1(-TWO_PI * lam)

    def to_dict(self):
        return {"family": self.family, "lambda": self.lam}


@dataclass(frozen=True)
class WrappedLaplace(CircularDensity):
    """Symmetric Laplace density ``lam/2 * exp(-lam |x - mu|)`` wrapped onto the circle."""

    mu: float = 0.0
    lam: float = 1.0
    family = "wrapped_laplace"

    def _validate(self):
        self._set("mu", _finite(self.mu, "mu"))
        self._set("lam", _finite(self.lam, "lambda", positive=True))

    def _raw_pdf(self, theta, n_terms=None):
        k_max = _wrapped_exp_tail_terms(self.lam) if n_terms is None else n_terms
        d = np.mod(np.asarray(theta) - self.mu, TWO_PI)
        k = np.arange(-k_max, k_max + 1, dtype=float)
        x = d[..., None] + TWO_PI * k
        return 0.5 * self.lam * np.exp(-self.lam * np.abs(x)).sum(axis=-1)

    def to_dict(self):
        return {"family": self.family, "mu": self.mu, "lambda": self.lam}


@dataclass(frozen=True)
class Mixture(CircularDensity):
    """Convex combination of component densities; ``components`` holds ``(weight, density)``."""

    components: tuple = ()
    family = "mixture"

    def __post_init__(self):
        object.__setattr__(
            self, "components", tuple((float(w), d) for w, d in self.components)
        )
        super().__post_init__()

    def _validate(self):
        if not self.components:
            raise DensitySpecError("mixture needs at least one component", "components")
        for i, (w, d) in enumerate(self.components):
            _finite(w, f"components[{i}].weight", nonneg=True)
            if not isinstance(d, CircularDensity):
                raise DensitySpecError("not a density", f"components[{i}].spec")
        total = math.fsum(w for w, _ in self.components)
        if abs(total - 1.0) > 1e-12:
            raise DensityValidationError(
                f"weights sum to {total:.12g}, expected 1", "components"
            )

    def _mass(self):
        return 1.0

    def _raw_pdf(self, theta):
        out = np.zeros(np.shape(theta))
        for w, d in self.components:
            out = out + w * d.pdf(theta)
        return out

    def to_dict(self):
        return {
            "family": self.family,
            "components": [{"weight": w, "spec": d.to_dict()} for w, d in self.components],
        }


@dataclass(frozen=True)
class PiecewiseConstant(CircularDensity):
    """Constant ``levels[i]`` on ``[edges[i], edges[i+1])``; zero outside ``[edges[0], edges[-1])``."""

    edges: tuple = (0.0, TWO_PI)
    levels: tuple = (1.0 / TWO_PI,)
    family = "piecewise_constant"

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(float(e) for e in self.edges))
        object.__setattr__(self, "levels", tuple(float(v) for v in self.levels))
        super().__post_init__()

    def _validate(self):
        edges, levels = self.edges, self.levels
        if len(edges) < 2:
            raise DensitySpecError("need at least two edges", "edges")
        if len(levels) != len(edges) - 1:
            raise DensitySpecError(
                f"expected {len(edges) - 1} levels for {len(edges)} edges, got {len(levels)}",
                "levels",
            )
        for i, e in enumerate(edges):
            _finite(e, f"edges[{i}]")
        for i, v in enumerate(levels):
            _finite(v, f"levels[{i}]", nonneg=True)
        if edges[0] < 0 or edges[-1] > TWO_PI:
            raise DensityValidationError("edges must lie in [0, 2*pi]", "edges")
        if any(b <= a for a, b in zip(edges, edges[1:])):
            raise DensityValidationError("edges must be strictly increasing", "edges")

    def _mass(self):
        # exact; a grid trapezoid smears the jumps
        return math.fsum(v * (b - a) for v, a, b in zip(self.levels, self.edges, self.edges[1:]))

    def _raw_pdf(self, theta):
        edges = np.asarray(self.edges)
        levels = np.append(np.asarray(self.levels), 0.0)
        idx = np.searchsorted(edges, theta, side="right") - 1
        return np.where(idx >= 0, levels[np.clip(idx, 0, len(levels) - 1)], 0.0)

    def to_dict(self):
        return {"family": self.family, "edges": list(self.edges), "levels": list(self.levels)}


@dataclass(frozen=True)
class Tabulated(CircularDensity):
    """Periodic piecewise-linear interpolation of ``(thetas, values)``; always renormalized."""

    thetas: tuple = ()
    values: tuple = ()
    family = "tabulated"

    def __post_init__(self):
        object.__setattr__(self, "thetas", tuple(float(t) for t in self.thetas))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        super().__post_init__()
        object.__setattr__(self, "_scale", 1.0 / self._mass())

    def _validate(self):
        if len(self.thetas) < 8:
            raise DensitySpecError("need at least 8 grid entries", "thetas")
        if len(self.values) != len(self.thetas):
            raise DensitySpecError("thetas and values differ in length", "values")
        for i, t in enumerate(self.thetas):
            _finite(t, f"thetas[{i}]")
        for i, v in enumerate(self.values):
            _finite(v, f"values[{i}]", nonneg=True)
        t = self.thetas
        if t[0] < 0 or t[-1] >= TWO_PI:
            raise DensityValidationError("thetas must lie in [0, 2*pi)", "thetas")
        if any(b <= a for a, b in zip(t, t[1:])):
            raise DensityValidationError("thetas must be strictly increasing", "thetas")

    def _nodes(self):
        t = np.append(self.thetas, self.thetas[0] + TWO_PI)
        v = np.append(self.values, self.values[0])
        return t, v

    def _mass(self):
        t, v = self._nodes()
        return float(np.sum(np.diff(t) * (v[1:] + v[:-1]) / 2.0))

    def _raw_pdf(self, theta):
        t, v = self._nodes()
        # shift angles below the first node up one period
        theta = np.where(theta < t[0], theta + TWO_PI, theta)
        return np.interp(theta, t, v)

    def to_dict(self):
        return {"family": self.family, "thetas": list(self.thetas), "values": list(self.values)}


@dataclass(frozen=True)
class _Rotated(CircularDensity):
    base: CircularDensity = None
    phi: float = 0.0
    family = "rotated"

    def _mass(self):
        return 1.0

    def _raw_pdf(self, theta):
        return self.base.pdf(theta - self.phi)

    def to_dict(self):
        raise TypeError("rotated densities have no spec-document form")


def rotate_density(density, phi):
    """Density of ``theta + phi`` where ``theta`` follows ``density``."""
    return _Rotated(base=density, phi=float(phi))


_FAMILIES = {
    "uniform": (Uniform, {}),
    "von_mises": (VonMises, {"mu": "mu", "kappa": "kappa"}),
    "wrapped_normal": (WrappedNormal, {"mu": "mu", "sigma": "sigma"}),
    "wrapped_cauchy": (WrappedCauchy, {"mu": "mu", "rho": "rho"}),
    "wrapped_exponential": (WrappedExponential, {"lambda": "lam"}),
    "wrapped_laplace": (WrappedLaplace, {"mu": "mu", "lambda": "lam"}),
}


def _number_list(doc, key, path):
    value = doc.get(key)
    if not isinstance(value, Sequence) or isinstance(value, (str, bytes)):
        raise DensitySpecError("expected a list of numbers", f"{path}{key}")
    return [_finite(v, f"{path}{key}[{i}]") for i, v in enumerate(value)]


def _build(doc, path=""):
    if not isinstance(doc, Mapping):
        raise DensitySpecError("expected an object", path or "<root>")
    family = doc.get("family")
    if not isinstance(family, str):
        raise DensitySpecError("missing or non-string family", f"{path}family")
    if family in _FAMILIES:
        cls, names = _FAMILIES[family]
        allowed = {"family", *names}
        extra = sorted(set(doc) - allowed)
        if extra:
            raise DensitySpecError(f"unknown field for {family}", f"{path}{extra[0]}")
        kwargs = {}
        for key, attr in names.items():
            if key not in doc:
                raise DensitySpecError("required field missing", f"{path}{key}")
            kwargs[attr] = _finite(doc[key], f"{path}{key}")
        try:
            return cls(**kwargs)
        except DensitySpecError as exc:
            raise type(exc)(exc.message, path + exc.path) from None
    if family == "mixture":
        comps = doc.get("components")
        if not isinstance(comps, Sequence) or isinstance(comps, (str, bytes)):
            raise DensitySpecError("expected a list", f"{path}components")
        built = []
        for i, comp in enumerate(comps):
            cpath = f"{path}components[{i}]"
            if not isinstance(comp, Mapping) or "weight" not in comp or "spec" not in comp:
                raise DensitySpecError("expected {weight, spec}", cpath)
            w = _finite(comp["weight"], f"{cpath}.weight", nonneg=True)
            built.append((w, _build(comp["spec"], f"{cpath}.spec.")))
        try:
            return Mixture(components=tuple(built))
        except DensitySpecError as exc:
            raise type(exc)(exc.message, path + exc.path) from None
    if family in ("piecewise_constant", "tabulated"):
        keys = ("edges", "levels") if family == "piecewise_constant" else ("thetas", "values")
        lists = [_number_list(doc, k, path) for k in keys]
        cls = PiecewiseConstant if family == "piecewise_constant" else Tabulated
        try:
            return cls(*lists)
        except DensitySpecError as exc:
            raise type(exc)(exc.message, path + exc.path) from None
    raise DensitySpecError(f"unknown family {family!r}", f"{path}family")


def parse_density_spec(doc):
    """Build a density from a spec document (JSON text or an already-parsed mapping)."""
    if isinstance(doc, CircularDensity):
        return doc
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise DensitySpecError(f"invalid JSON: {exc}") from None
    return _build(doc)
