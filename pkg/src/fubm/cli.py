"""Command-line front end: ``fubm {curve,density,moments,support,verify}``.

Tables go to ``--out`` (or stdout) as CSV or JSON. Floats are written with
17 significant digits so that every value round-trips.

Exit codes: 0 success, 1 a verification check failed, 2 usage or domain
error, 3 numerical failure.
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import kernel
from .curve import build_curve, solve_xt
from .errors import ConstructionError, ConvergenceError, DomainError, check_time
from .moments import moment_report
from .spectrum import density_table
from .verify import run_suite

__all__ = ["RunConfig", "parse_grid", "build_parser", "run", "main"]

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

CURVE_HEADER = ("param", "regime", "x", "y", "abs_h", "arg_h", "residual")
DENSITY_HEADER = ("theta", "rho")
MOMENT_HEADER = (
    "n",
    "t",
    "m_sum",
    "m_contour_re",
    "m_contour_im",
    "m_density_re",
    "m_density_im",
    "max_discrepancy",
)
COMMANDS = ("curve", "density", "moments", "support", "verify")


@dataclass(frozen=True)
class RunConfig:
    command: str
    ts: tuple
    samples: int = 4096
    grid: int = 2001
    nmax: int = 30
    radius: float = 0.5
    tol: float = 1e-8
    out: Path = None
    format: str = "csv"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if not self.ts:
            raise DomainError("no t values given")
        for t in self.ts:
            check_time(t)
        for name in ("samples", "grid", "nmax"):
            if getattr(self, name) < 1:
                raise DomainError(f"--{name} must be positive")
        if self.grid % 2 == 0:
            raise DomainError("--grid must be odd")
        if not 0.0 < self.radius < 1.0:
            raise DomainError("--radius must lie in (0, 1)")
        if not self.tol > 0:
            raise DomainError("--tol must be positive")


def parse_grid(spec):
    """``start:stop:step`` to a tuple, including ``stop`` within half a step."""
    try:
        start, stop, step = (float(s) for s in spec.split(":"))
    except ValueError:
        raise DomainError(f"bad grid {spec!r}; expected start:stop:step") from None
    if not step > 0 or stop < start:
        raise DomainError(f"bad grid {spec!r}; need step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 0.5)) + 1
    return tuple(start + k * step for k in range(count))


def fmt(x):
    if isinstance(x, (str, int, np.integer)) and not isinstance(x, bool):
        return str(x)
    return format(float(x), ".17g")


def _json_default(x):
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _dump_json(obj):
    return json.dumps(obj, indent=2, default=_json_default) + "\n"


def _render(header, rows, form):
    if form == "json":
        return _dump_json([dict(zip(header, row)) for row in rows])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([fmt(v) for v in row] for row in rows)
    return buf.getvalue()


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _timestamp():
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def _curve_rows(t, samples):
    curve = build_curve(t, samples)
    z = curve.z
    abs_h = np.abs(kernel.h_eval(z, t))
    return [
        (curve.param[i], curve.regime[i], z[i].real, z[i].imag, abs_h[i], curve.phi[i], curve.residual[i])
        for i in range(len(z))
    ]


def _cmd_curve(cfg):
    rows = [row for t in cfg.ts for row in _curve_rows(t, cfg.samples)]
    _emit(_render(CURVE_HEADER, rows, cfg.format), cfg.out)


def _cmd_density(cfg):
    rows, summaries = [], []
    for t in cfg.ts:
        table = density_table(build_curve(t, cfg.samples), cfg.grid)
        rows.extend(zip(table.thetas, table.rho))
        summaries.append(dict(table.summary(), timestamp=_timestamp()))
    summary = summaries[0] if len(summaries) == 1 else summaries
    _emit(_render(DENSITY_HEADER, rows, cfg.format), cfg.out)
    if cfg.out is None:
        sys.stderr.write(_dump_json(summary))
    else:
        Path(cfg.out).with_suffix(".json").write_text(_dump_json(summary))


def _cmd_moments(cfg):
    rows = []
    for t in cfg.ts:
        table = density_table(build_curve(t, cfg.samples), cfg.grid)
        for n in range(1, cfg.nmax + 1):
            row = moment_report(n, table, cfg.radius).as_row()
            rows.append(tuple(row[k] for k in MOMENT_HEADER))
    _emit(_render(MOMENT_HEADER, rows, cfg.format), cfg.out)


def _cmd_support(cfg):
    out = []
    for t in cfg.ts:
        theta_t, beta = kernel.support_params(t)
        out.append({"t": t, "theta_t": theta_t, "beta": beta, "x_t": solve_xt(t)})
    _emit(_dump_json(out[0] if len(out) == 1 else out), cfg.out)


def _cmd_verify(cfg):
    checks = []
    for t in cfg.ts:
        _, _, found = run_suite(t, cfg.samples, cfg.grid, cfg.nmax, cfg.radius, cfg.tol)
        checks.extend(found)
    failed = [c for c in checks if not c.passed]
    report = {
        "timestamp": _timestamp(),
        "ts": list(cfg.ts),
        "tol": cfg.tol,
        "passed": not failed,
        "checks": [c.as_dict() for c in checks],
    }
    _emit(_dump_json(report), cfg.out)
    for c in failed:
        sys.stderr.write(f"FAIL {c.name} t={fmt(c.t)} residual={fmt(c.residual)} threshold={fmt(c.threshold)}\n")
    return EXIT_VERIFY if failed else EXIT_OK


_HANDLERS = {
    "curve": _cmd_curve,
    "density": _cmd_density,
    "moments": _cmd_moments,
    "support": _cmd_support,
    "verify": _cmd_verify,
}


def run(cfg):
    """Execute one command; returns the process exit status."""
    try:
        status = _HANDLERS[cfg.command](cfg)
    except DomainError as exc:
        sys.stderr.write(f"fubm: domain error: {exc}\n")
        return EXIT_USAGE
    except (ConstructionError, ConvergenceError, FloatingPointError) as exc:
        sys.stderr.write(f"fubm: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    return EXIT_OK if status is None else status


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fubm",
        description="Spectral curve, density and moments of the free unitary Brownian motion.",
    )
    parser.add_argument("command", choices=COMMANDS)
    when = parser.add_mutually_exclusive_group(required=True)
    when.add_argument("--t", type=float, help="time in (0, 4)")
    when.add_argument("--t-grid", help="start:stop:step, stop included within half a step")
    parser.add_argument("--samples", type=int, default=4096, help="curve samples (default 4096)")
    parser.add_argument("--grid", type=int, default=2001, help="odd density grid size (default 2001)")
    parser.add_argument("--nmax", type=int, default=30, help="highest moment order (default 30)")
    parser.add_argument("--radius", type=float, default=0.5, help="contour radius in (0, 1) (default 0.5)")
    parser.add_argument("--tol", type=float, default=1e-8, help="tolerance of the geometric checks (default 1e-8)")
    parser.add_argument("--out", type=Path, help="output file (default stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        ts = (args.t,) if args.t is not None else parse_grid(args.t_grid)
        cfg = RunConfig(
            command=args.command,
            ts=ts,
            samples=args.samples,
            grid=args.grid,
            nmax=args.nmax,
            radius=args.radius,
            tol=args.tol,
            out=args.out,
            format=args.format,
        )
    except DomainError as exc:
        sys.stderr.write(f"fubm: domain error: {exc}\n")
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
