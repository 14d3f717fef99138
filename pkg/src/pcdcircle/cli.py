"""Command-line front end.

::

    pcdcircle sample  --density vm.json --count 15 --seed 7 --out out/ [--plot out/fig.svg]
    pcdcircle sample  --manifest out/manifest.json --out rerun/
    pcdcircle eval    --samples out/samples.csv --density vm.json [--out metrics.json]
    pcdcircle project --density vm.json --angle 0.5 --mode expmap [--out table.csv]

``--density`` takes a path to a spec document or the JSON text itself.
Exit codes: 0 success, 2 input error, 3 numerical failure.
"""

import argparse
import csv
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .densities import TWO_PI, DensitySpecError, parse_density_spec
from .metrics import circular_wasserstein, trig_moment_continuous, trig_moment_dm
from .projection import MODES, ORTHOGRAPHIC, NumericalError, project_density
from .sampler import SamplerConfig, sample_circle
from .univariate import projected_cdf

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

SAMPLES_HEADER = ["index", "theta", "x", "y"]
TRACE_HEADER = ["iteration", "lambda", "mean_step_norm", "wasserstein"]


class InputError(Exception):
    """Bad user input; reported with exit code 2."""


def _fmt(value):
    return format(float(value), ".17g")


# -- readers and writers -----------------------------------------------------


def load_density(source):
    """Resolve ``--density``: inline JSON if it looks like an object, else a path.

    Returns ``(density, source_label)``.
    """
    text = source.strip()
    if text.startswith("{"):
        label = "inline"
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read density spec {source!r}: {exc.strerror}") from None
        label = source
    try:
        return parse_density_spec(text), label
    except DensitySpecError as exc:
        raise InputError(f"density spec: {exc}") from None


def write_samples_csv(path, angles):
    angles = np.asarray(angles, dtype=float)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SAMPLES_HEADER)
        for i, t in enumerate(angles):
            w.writerow([i, _fmt(t), _fmt(math.cos(t)), _fmt(math.sin(t))])


def read_samples_csv(path):
    """Angles from a samples file; rejects missing columns, bad rows and empty files."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read samples {path!r}: {exc.strerror}") from None
    if not rows or rows[0] != SAMPLES_HEADER:
        raise InputError(f"{path}: expected header {','.join(SAMPLES_HEADER)}")
    body = rows[1:]
    if not body:
        raise InputError(f"{path}: no samples")
    theta = []
    for n, row in enumerate(body, start=2):
        if len(row) != len(SAMPLES_HEADER):
            raise InputError(f"{path}:{n}: expected {len(SAMPLES_HEADER)} columns, got {len(row)}")
        try:
            value = float(row[1])
        except ValueError:
            raise InputError(f"{path}:{n}: theta is not a number") from None
        if not math.isfinite(value):
            raise InputError(f"{path}:{n}: theta is not finite")
        theta.append(value)
    return np.array(theta)


def write_trace_csv(path, trace):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_HEADER)
        for m, lam, step, w1 in trace.rows():
            w.writerow([m, _fmt(lam), _fmt(step), _fmt(w1)])


def read_trace_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != TRACE_HEADER:
        raise InputError(f"{path}: expected header {','.join(TRACE_HEADER)}")
    return np.array([[float(v) for v in row] for row in rows[1:]]).reshape(-1, 4)


def render_svg(density, angles, size=480, n_curve=720):
    """Static SVG: unit circle, density drawn radially, one spoke per sample.

    Spokes have the length of the density maximum, so the curve and the
    spokes share one radial scale.
    """
    c = size / 2.0
    base = size * 0.25
    theta = np.linspace(0.0, TWO_PI, n_curve, endpoint=False)
    f = density.pdf(theta)
    fmax = float(np.max(f))
    scale = base * 0.9 / fmax if fmax > 0 else 0.0

    def xy(t, rad):
        return c + rad * math.cos(t), c - rad * math.sin(t)

    curve = " ".join("%.2f,%.2f" % xy(t, base + scale * v) for t, v in zip(theta, f))
    spokes = []
    for t in np.asarray(angles, dtype=float):
        x0, y0 = xy(t, base)
        x1, y1 = xy(t, base + scale * fmax)
        spokes.append(
            f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" y2="{y1:.2f}" '
            'stroke="#c0392b" stroke-width="1.5"/>'
        )
    return "\n".join(
        [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}">',
            '<rect width="100%" height="100%" fill="white"/>',
            f'<circle cx="{c:.2f}" cy="{c:.2f}" r="{base:.2f}" fill="none" stroke="#555" '
            'stroke-width="1"/>',
            f'<polygon points="{curve}" fill="none" stroke="#1f4e9c" stroke-width="1.5"/>',
            *spokes,
            "</svg>",
            "",
        ]
    )


# -- commands ----------------------------------------------------------------


def _config_from_args(args):
    return SamplerConfig(
        n_samples=args.count,
        n_iter=args.iterations,
        n_projections=args.projections,
        decay=args.decay,
        n_fixed_points=args.fixed_points,
        mode=args.mode,
        adaptive_points=not args.no_adaptive_points,
        seed=args.seed,
        early_stop=args.early_stop,
        trace_metric=args.trace_metric,
        n_jobs=args.jobs,
    )


def _load_manifest(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        spec = doc["density"]["spec"]
        config = SamplerConfig(**doc["config"])
    except OSError as exc:
        raise InputError(f"cannot read manifest {path!r}: {exc.strerror}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"manifest {path}: {exc}") from None
    try:
        density = parse_density_spec(spec)
    except DensitySpecError as exc:
        raise InputError(f"manifest {path}: density spec: {exc}") from None
    return density, doc["density"].get("source", "manifest"), config


def cmd_sample(args):
    if args.manifest:
        density, source, config = _load_manifest(args.manifest)
    else:
        if args.density is None:
            raise InputError("--density or --manifest is required")
        density, source = load_density(args.density)
        try:
            config = _config_from_args(args)
        except ValueError as exc:
            raise InputError(str(exc)) from None

    os.makedirs(args.out, exist_ok=True)
    start = time.perf_counter()
    mixture, trace = sample_circle(density, config)
    duration = time.perf_counter() - start

    outputs = {
        "samples": os.path.join(args.out, "samples.csv"),
        "trace": os.path.join(args.out, "trace.csv"),
    }
    write_samples_csv(outputs["samples"], mixture.angles)
    write_trace_csv(outputs["trace"], trace)
    if args.plot:
        outputs["plot"] = args.plot
        parent = os.path.dirname(args.plot)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(args.plot, "w", encoding="utf-8") as fh:
            fh.write(render_svg(density, mixture.angles))
    manifest = {
        "tool": "pcdcircle",
        "version": __version__,
        "density": {"source": source, "spec": density.to_dict()},
        "config": config.to_dict(),
        "seed": config.seed,
        "outputs": outputs,
        "duration_s": duration,
        "degenerate_updates": trace.n_degenerate,
    }
    with open(os.path.join(args.out, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return EXIT_OK


def _moment(z):
    return {"re": z.real, "im": z.imag, "abs": abs(z)}


def cmd_eval(args):
    density, _ = load_density(args.density)
    theta = read_samples_csv(args.samples)
    if args.resolution < 10 * len(theta):
        raise InputError("--resolution must be at least 10 times the sample count")
    report = {
        "n_samples": len(theta),
        "wasserstein": circular_wasserstein(theta, density, args.resolution),
        "moments": [
            {
                "n": n,
                "samples": _moment(trig_moment_dm(theta, n)),
                "reference": _moment(trig_moment_continuous(density, n)),
                "gap": abs(trig_moment_dm(theta, n) - trig_moment_continuous(density, n)),
            }
            for n in range(1, 5)
        ],
    }
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def projection_table(density, angle, mode, n_points=201, n_quad=4097):
    """Rows ``(r, pdf, cdf)`` on a uniform grid over the projected support.

    The CDF is the uncentered trapezoid cumulative, so its last value is the
    quadrature estimate of the projected mass.
    """
    if n_points < 2:
        raise InputError("--points must be at least 2")
    proj = project_density(density, angle, mode)
    r = np.linspace(*proj.support, n_points)
    cdf = projected_cdf(proj, n_quad, center=False)
    s = proj.to_internal(r)
    lo, hi = proj.internal_support
    if proj.from_internal(hi) < proj.from_internal(lo):
        F = cdf.cumulative[-1] - cdf(s)
    else:
        F = cdf(s)
    return r, proj.pdf(r), F


def cmd_project(args):
    density, _ = load_density(args.density)
    r, f, F = projection_table(density, args.angle, args.mode, args.points)
    fh = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["r", "pdf", "cdf"])
        for row in zip(r, f, F):
            w.writerow([_fmt(v) for v in row])
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


# -- entry point -------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pcdcircle",
        description="Deterministic Dirac-mixture samples of circular densities.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="run the sampler")
    p.add_argument("--density", help="spec file path or inline JSON")
    p.add_argument("--manifest", help="re-run the configuration stored in a manifest")
    p.add_argument("--count", "-L", type=int, default=15)
    p.add_argument("--iterations", "-M", type=int, default=200)
    p.add_argument("--projections", "-N", type=int, default=2)
    p.add_argument("--decay", type=float, default=0.99)
    p.add_argument("--fixed-points", type=int, default=30)
    p.add_argument("--mode", choices=MODES, default=ORTHOGRAPHIC)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--plot", help="write an SVG plot to this path")
    p.add_argument("--no-adaptive-points", action="store_true",
                   help="integrate on the fixed grid only")
    p.add_argument("--trace-metric", action="store_true",
                   help="record W1 to the reference after every iteration")
    p.add_argument("--early-stop", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="threads for the projections")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("eval", help="compare samples with a density")
    p.add_argument("--samples", required=True)
    p.add_argument("--density", required=True)
    p.add_argument("--resolution", type=int, default=3600)
    p.add_argument("--out", help="metrics JSON path (default: stdout)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("project", help="tabulate a projected density and its CDF")
    p.add_argument("--density", required=True)
    p.add_argument("--angle", type=float, default=0.0, help="direction angle in radians")
    p.add_argument("--mode", choices=MODES, default=ORTHOGRAPHIC)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_project)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
