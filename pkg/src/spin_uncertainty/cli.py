"""Command-line front end: bound tables, region tracing, figure data and the invariant suite.

Every table goes through :func:`write_table`, which renders floats with 17
significant digits and prefixes ``#`` metadata lines, so identical
configurations give byte-identical files regardless of worker count.
Set ``SPINUNC_WORKERS`` to control the process pool (default: all cores).
"""
from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .asymptotics import convergence_table
from .constants import DEFAULT_SEED
from .entropic import mu_bound, mu_constant, psi_alpha_state, entropy_pair, region_sample_s1
from .measurement import calibration_error, measurement_profile, optimal_measurement, optimal_spec
from .prep_region import MinimizeOptions, c2_bound, power_mean_bound, trace_region
from .robertson import boundary_sheets
from .spin_core import make_spin_context, parse_spin
from .verification import CHECKS, run_check

__all__ = ["RunConfig", "main", "write_table", "worker_count"]

EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2
WORKERS_ENV = "SPINUNC_WORKERS"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    spin: str | None
    spin_max: str | None
    components: int
    grid: int | None
    seed: int
    out: str | None
    format: str
    quick: bool

    def config_hash(self) -> str:
        """Hash of the parameters that affect results (not the output location)."""
        d = asdict(self)
        d.pop("out")
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:16]


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return n


@contextmanager
def _mapper():
    """Order-preserving map over a process pool, or the builtin map for one worker."""
    n = worker_count()
    if n == 1:
        yield map
        return
    with ProcessPoolExecutor(max_workers=n) as pool:
        yield lambda fn, items: pool.map(fn, items, chunksize=4)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def write_table(columns: list[str], rows: list[list], config: RunConfig, *, name: str = "",
                suffix: str = "") -> str:
    """Render ``rows`` as CSV or JSON and write to ``config.out`` (with ``suffix``) or stdout."""
    meta = {"tool": "spin-uncertainty", "version": __version__, "table": name or config.command,
            "config_hash": config.config_hash(), "seed": config.seed}
    if config.format == "json":
        body = json.dumps({"meta": meta, "columns": columns,
                           "rows": [[_json_value(v) for v in r] for r in rows]}, indent=1) + "\n"
    else:
        buf = io.StringIO()
        for k, v in meta.items():
            buf.write(f"# {k}={v}\n")
        buf.write(",".join(columns) + "\n")
        for r in rows:
            buf.write(",".join(_fmt(v) for v in r) + "\n")
        body = buf.getvalue()
    if config.out is None:
        sys.stdout.write(body)
    else:
        path = Path(config.out)
        if suffix:
            path = path.with_name(f"{path.stem}_{suffix}{path.suffix}")
        path.write_text(body)
    return body


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    return str(v)


def _spin_list(config: RunConfig, default_max: str) -> list[Fraction]:
    """``--spin`` alone gives one spin; ``--spin-max`` gives 1/2, 1, ..., spin_max."""
    if config.spin is not None and config.spin_max is None:
        return [Fraction(parse_spin(config.spin), 2)]
    top = parse_spin(config.spin_max if config.spin_max is not None else default_max)
    if top < 1:
        raise UsageError("--spin-max must be at least 1/2")
    return [Fraction(k, 2) for k in range(1, top + 1)]


def _one_spin(config: RunConfig, default: str = "1") -> Fraction:
    return Fraction(parse_spin(config.spin if config.spin is not None else default), 2)


def _grid(config: RunConfig, default: int) -> int:
    g = default if config.grid is None else config.grid
    if g < 1:
        raise UsageError("--grid must be positive")
    return g


def cmd_bounds(config: RunConfig) -> int:
    columns = ["s", "sum_bound", "c2", "power_mean_p1", "power_mean_p2", "power_mean_pinf",
               "mu_constant", "mu_bound", "r_min", "delta_min_squared"]
    rows = []
    for s in _spin_list(config, "3"):
        ctx = make_spin_context(s)
        opt = optimal_measurement(s)
        rows.append([float(s), float(s), c2_bound(ctx), power_mean_bound(1, s), power_mean_bound(2, s),
                     power_mean_bound(math.inf, s), mu_constant(s), mu_bound(s), opt.r_min,
                     opt.delta_min_squared])
    write_table(columns, rows, config)
    return EXIT_OK


def cmd_region(config: RunConfig) -> int:
    s = _one_spin(config)
    k = config.components
    if k not in (2, 3):
        raise UsageError("--components must be 2 or 3")
    grid = _grid(config, 101 if k == 2 else 200)
    ctx = make_spin_context(s)
    opts = MinimizeOptions(seed=config.seed, restarts=4 if config.quick else 16)
    with _mapper() as map_fn:
        points = trace_region(ctx, k, grid, opts, map_fn=map_fn)
    names = ["v1", "v3"] if k == 2 else ["v1", "v2", "v3"]
    wnames = ["w" + n[1:] for n in names]
    rows = [list(p.weights.w) + list(p.variances) + [p.bound, p.converged] for p in points]
    write_table(wnames + names + ["bound", "converged"], rows, config)
    if config.out is not None:
        # companion tables only go to files; stdout carries a single table
        tangents = [list(p.weights.w) + [p.bound] for p in points]
        write_table(wnames + ["bound"], tangents, config, name="tangent_planes", suffix="tangents")
        if k == 3:
            v1 = np.linspace(1e-3, float(s * (s + 1)), 200)
            sheet = boundary_sheets(s, v1)["v3=0"]
            write_table(["v1", "v2", "v3"], sheet.tolist(), config, name="robertson_boundary",
                        suffix="boundary")
    # three variances of one state always sum to at least s
    worst = min(sum(p.variances) for p in points) - float(s) if k == 3 else 0.0
    if worst < -1e-9:
        print(f"error: variance sum below s by {-worst:.3g}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_measurement(config: RunConfig) -> int:
    spins = _spin_list(config, "6")
    rows = [[r["s"], r["r_min"], r["r_min_over_s"], r["delta_min_squared"]] for r in measurement_profile(spins)]
    write_table(["s", "r_min", "r_min_over_s", "delta_min_squared"], rows, config)
    if len(spins) == 1 and config.out is not None:
        ctx = make_spin_context(spins[0])
        per_m, _ = calibration_error(ctx, optimal_spec(spins[0]))
        write_table(["m", "calibration_squared"], [[float(m), v] for m, v in zip(ctx.m_values, per_m)],
                    config, name="calibration_profile", suffix="profile")
    return EXIT_OK


def _alpha_task(args):
    two_s, a = args
    ctx = make_spin_context(Fraction(two_s, 2))
    pair = entropy_pair(ctx, psi_alpha_state(ctx, a))
    return [a, pair.h1, pair.h2, pair.total]


def cmd_entropy(config: RunConfig) -> int:
    s = _one_spin(config)
    if s == 1:
        grid = _grid(config, 100)
        pairs = region_sample_s1(grid, n_random=0 if config.quick else grid * 10, seed=config.seed)
        rows = []
        for p in pairs:
            kind, *params = p.params
            params = (list(params) + [""] * 2)[:2]
            rows.append([kind] + params + [p.h1, p.h2, p.h3, p.total])
        write_table(["family", "param1", "param2", "h1", "h2", "h3", "sum"], rows, config)
        return EXIT_OK
    grid = _grid(config, 41)
    alphas = np.linspace(0, np.pi / 2, grid) if grid > 1 else np.array([np.pi / 4])
    with _mapper() as map_fn:
        rows = list(map_fn(_alpha_task, [(int(2 * s), float(a)) for a in alphas]))
    write_table(["alpha", "h1", "h2", "sum"], rows, config)
    return EXIT_OK


def cmd_asymptotics(config: RunConfig) -> int:
    if config.spin_max is not None:
        top = float(Fraction(parse_spin(config.spin_max), 2))
        spins = [s for s in (10, 20, 50, 100, 200, 500) if s <= top] or [top]
    else:
        spins = [10, 20, 50] if config.quick else [10, 20, 50, 100]
    table = convergence_table([0.5, 1.0, 2.0], spins)
    cols = ["s", "alpha", "nu1", "nu2", "nu3", "error", "ill_conditioned"]
    write_table(cols, [[r[c] for c in cols] for r in table], config)
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    names = sorted(CHECKS)
    with _mapper() as map_fn:
        results = list(map_fn(_verify_task, [(n, config.quick) for n in names]))
    width = max(map(len, names))
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name:<{width}}  {detail}")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_NUMERICAL


def _verify_task(args):
    return run_check(*args)


COMMANDS = {
    "bounds": cmd_bounds,
    "region": cmd_region,
    "measurement": cmd_measurement,
    "entropy": cmd_entropy,
    "asymptotics": cmd_asymptotics,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spin-uncertainty",
                                     description="Uncertainty bounds for quantum angular momentum.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "bounds": "closed-form bounds for one spin or a range of spins",
        "region": "trace the lower boundary of a variance region",
        "measurement": "optimal covariant joint measurement data",
        "entropy": "entropic uncertainty samples",
        "asymptotics": "large-spin convergence of squeezed states",
        "verify": "run the invariant suite and print a pass/fail matrix",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--spin", help="spin quantum number, e.g. 1, 0.5 or 3/2")
        p.add_argument("--spin-max", help="largest spin of a sweep starting at 1/2")
        p.add_argument("--components", type=int, default=3, help="number of components (2 or 3)")
        p.add_argument("--grid", type=int, help="number of grid points")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--quick", action="store_true", help="reduced sample sizes")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = RunConfig(command=args.command, spin=args.spin, spin_max=args.spin_max,
                       components=args.components, grid=args.grid, seed=args.seed,
                       out=args.out, format=args.format, quick=args.quick)
    try:
        return COMMANDS[config.command](config)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
