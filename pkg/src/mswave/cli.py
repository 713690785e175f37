"""Command-line front end.

    mswave [--config PATH] [--set KEY=VALUE ...] [--output-dir DIR] COMMAND

Commands: ``simulate``, ``criterion``, ``kernel``, ``sweep`` and ``check``.
Exit status: 0 completed, 2 breaking detected, 3 resolution lost or step
underflow, 1 on any error (including bad usage).
"""

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import diagnostics, kernel, model, spectral
from .config import parse_config
from .errors import ConfigError, InvalidArgumentError, NumericalOverflowError, OutOfDomainError
from .initial import InitialCondition
from .model import Params, State
from .timestepper import Termination, integrate

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BREAKING = 2
EXIT_RESOLUTION = 3

EXIT_CODES = {
    Termination.COMPLETED: EXIT_OK,
    Termination.BREAKING_DETECTED: EXIT_BREAKING,
    Termination.RESOLUTION_LOST: EXIT_RESOLUTION,
    Termination.STEP_UNDERFLOW: EXIT_RESOLUTION,
}

SWEEP_AXES = ("epsilon", "mu", "ic.amplitude")
SWEEP_COLUMNS = ("value", "termination", "t_stop", "criterion_satisfied", "t_lower", "t_upper")
CHECK_THRESHOLD = 1e-9
KERNEL_THRESHOLD = 1e-10

# parameter grid exercised by `check` on top of the configured (epsilon, mu)
CHECK_MUS = (1.0, 12.0)
CHECK_EPSILONS = (0.1, 1.0)

DEFAULT_CHECK_CONFIG = """
epsilon = 0.1
mu = 1.0
t_end = 1.0
ic.kind = sine
ic.amplitude = 0.1
ic.mode = 1
"""


class CliError(Exception):
    """A failure reported as a one-line message with exit status 1."""


class _Parser(argparse.ArgumentParser):
    # argparse would exit with 2, which is reserved for breaking
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def fmt(x):
    return "%.17g" % x


def write_csv(path, records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(diagnostics.CSV_COLUMNS)
    for r in records:
        w.writerow([fmt(getattr(r, c)) for c in diagnostics.CSV_COLUMNS])
    Path(path).write_text(buf.getvalue(), encoding="utf-8", newline="")


def _clean(obj):
    """Make a JSON-safe copy: numpy scalars to Python, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if np.isfinite(obj) else None
    return obj


def dumps(doc):
    return json.dumps(_clean(doc), sort_keys=True, indent=2) + "\n"


def emit_json(doc, path=None):
    text = dumps(doc)
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="")


def check_writable(path):
    p = Path(path)
    parent = p.parent if str(p.parent) else Path(".")
    if not parent.is_dir():
        raise CliError(f"cannot write {path}: directory {parent} does not exist")
    if not os.access(parent, os.W_OK):
        raise CliError(f"cannot write {path}: directory {parent} is not writable")
    if p.exists() and (p.is_dir() or not os.access(p, os.W_OK)):
        raise CliError(f"cannot write {path}: not a writable file")


def prepare_output_dir(path):
    if path is None:
        return None
    p = Path(path)
    try:
        p.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create output directory {path}: {exc.strerror}") from None
    check_writable(p / "probe")
    return p


def _resolve(path, out_dir):
    if path is None:
        return None
    p = Path(path)
    if out_dir is not None and not p.is_absolute():
        p = out_dir / p
    return p


def load_config(args, required=True, default_text=None):
    if args.config is None:
        if default_text is None:
            if required:
                raise CliError("this command needs --config PATH")
            return None
        text = default_text
    else:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read config {args.config}: {exc.strerror}") from None
    return parse_config(text, args.overrides)


def initial_state(cfg):
    grid = spectral.make_grid(cfg.n)
    return State(cfg.ic.field(grid)), grid


def report_or_none(state, cfg, grid):
    """Breaking report for a nonconstant profile, otherwise None."""
    if not np.ptp(state.u) > 0:
        return None
    norms = kernel.kernel_norms(cfg.params.mu, grid)
    return diagnostics.breaking_report(state, cfg.params, norms, cfg.norms_source)


def simulate(cfg):
    """Run one configured integration; returns (summary dict, RunResult)."""
    state, grid = initial_state(cfg)
    report = report_or_none(state, cfg, grid)
    result = integrate(state, cfg.params, cfg.controls, dealias=cfg.dealias,
                       form=cfg.rhs_form, filter_order=cfg.filter_order)
    summary = {
        "termination": str(result.termination),
        "t_stop": result.t_stop,
        "accepted_steps": result.accepted_steps,
        "rejected_steps": result.rejected_steps,
        "breaking_report": report.as_dict() if report else None,
        "final_diagnostics": result.diagnostics[-1].as_dict(),
        "config": cfg.as_dict(),
    }
    return summary, result


def cmd_simulate(args):
    cfg = load_config(args)
    out_dir = prepare_output_dir(args.output_dir)
    base = out_dir if out_dir is not None else Path(".")
    csv_path = _resolve(cfg.output_csv, out_dir) or base / "diagnostics.csv"
    json_path = _resolve(cfg.output_json, out_dir) or base / "summary.json"
    for p in (csv_path, json_path):
        check_writable(p)
    summary, result = simulate(cfg)
    write_csv(csv_path, result.diagnostics)
    emit_json(summary, json_path)
    print(f"{result.termination} at t = {result.t_stop:.6g} "
          f"({result.accepted_steps} steps, {len(result.diagnostics)} samples)", file=sys.stderr)
    return EXIT_CODES[result.termination]


def _json_target(cfg, args):
    out_dir = prepare_output_dir(args.output_dir)
    path = _resolve(cfg.output_json, out_dir) if cfg is not None else None
    if path is not None:
        check_writable(path)
    return path


def cmd_criterion(args):
    cfg = load_config(args)
    target = _json_target(cfg, args)
    state, grid = initial_state(cfg)
    norms = kernel.kernel_norms(cfg.params.mu, grid)
    report = diagnostics.breaking_report(state, cfg.params, norms, cfg.norms_source)
    emit_json({"breaking_report": report.as_dict(), "kernel_norms": norms.as_dict(),
               "config": cfg.as_dict()}, target)
    return EXIT_OK


def kernel_document(mu, n):
    grid = spectral.make_grid(n)
    norms = kernel.kernel_norms(mu, grid)
    doc = norms.as_dict()
    doc.update(n=n,
               residual=kernel.residual_helmholtz_kernel(mu, grid),
               closed_form_discrepancy=kernel.closed_form_discrepancy(mu, grid))
    return doc


def cmd_kernel(args):
    target = None
    if args.output_dir is not None:
        target = prepare_output_dir(args.output_dir) / "kernel.json"
    emit_json(kernel_document(args.mu, args.n), target)
    return EXIT_OK


def _random_fixture(grid, seed):
    ic = InitialCondition(kind="fourier", amplitude=0.05, modes=3, seed=seed)
    return ic.field(grid)


def check_document(cfg):
    """Self-tests of the model at the configured size and parameters."""
    grid = spectral.make_grid(cfg.n)
    fixtures = {
        "sine": 0.1 * np.sin(2 * np.pi * grid.nodes),
        "random3": _random_fixture(grid, cfg.seed),
        "config_ic": cfg.ic.field(grid),
    }
    pairs = sorted({(cfg.params.epsilon, cfg.params.mu)}
                   | {(e, m) for e in CHECK_EPSILONS for m in CHECK_MUS})
    checks = []
    for eps, mu in pairs:
        params = Params(eps, mu)
        checks.append({"name": "kernel_residual", "fixture": None, "epsilon": eps, "mu": mu,
                       "value": kernel.residual_helmholtz_kernel(mu, grid),
                       "threshold": KERNEL_THRESHOLD})
        for name, u in fixtures.items():
            st = State(u)
            diff = model.rhs_nonlocal(st, params, cfg.dealias) - model.rhs_direct(st, params, cfg.dealias)
            checks.append({"name": "two_form", "fixture": name, "epsilon": eps, "mu": mu,
                           "value": float(np.max(np.abs(diff))), "threshold": CHECK_THRESHOLD})
            checks.append({"name": "identity", "fixture": name, "epsilon": eps, "mu": mu,
                           "value": model.identity_residual(st, params, cfg.dealias),
                           "threshold": CHECK_THRESHOLD})
    for c in checks:
        c["passed"] = bool(c["value"] <= c["threshold"])
    return {"n": cfg.n, "dealias": cfg.dealias, "checks": checks,
            "passed": all(c["passed"] for c in checks)}


def cmd_check(args):
    cfg = load_config(args, default_text=DEFAULT_CHECK_CONFIG)
    target = _json_target(cfg, args)
    doc = check_document(cfg)
    emit_json(doc, target)
    return EXIT_OK if doc["passed"] else EXIT_ERROR


def parse_values(items):
    values = []
    for item in items:
        for part in item.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                v = float(part)
            except ValueError:
                raise InvalidArgumentError(f"sweep value {part!r} is not a number") from None
            if not np.isfinite(v):
                raise InvalidArgumentError(f"sweep value {part!r} is not finite")
            values.append(v)
    if not values:
        raise InvalidArgumentError("sweep needs at least one value")
    return values


def _sweep_one(job):
    index, value, cfg = job
    row = {"value": value, "termination": "Error", "t_stop": None,
           "criterion_satisfied": None, "t_lower": None, "t_upper": None}
    try:
        summary, _ = simulate(cfg)
    except (ConfigError, InvalidArgumentError, NumericalOverflowError, OutOfDomainError) as exc:
        return index, row, {"error": str(exc), "value": value, "config": cfg.as_dict()}
    rep = summary["breaking_report"]
    row.update(termination=summary["termination"], t_stop=summary["t_stop"])
    if rep is not None:
        row.update(criterion_satisfied=rep["criterion_satisfied"],
                   t_lower=rep["t_lower"], t_upper=rep["t_upper"])
    summary["sweep"] = {"axis_value": value, "index": index}
    return index, row, summary


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt(v)
    return str(v)


def sweep_rows_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([_cell(r[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()


def worker_count(requested):
    if requested is None:
        env = os.environ.get("MSWAVE_WORKERS")
        if env is None:
            return 1
        try:
            requested = int(env)
        except ValueError:
            raise CliError(f"MSWAVE_WORKERS must be an integer, got {env!r}") from None
    if requested < 1:
        raise CliError(f"worker count must be at least 1, got {requested}")
    return requested


def cmd_sweep(args):
    if args.axis not in SWEEP_AXES:
        raise CliError(f"sweep axis must be one of {SWEEP_AXES}, got {args.axis!r}")
    values = parse_values(args.values)
    workers = worker_count(args.workers)
    load_config(args)  # the base document must be valid on its own
    text = Path(args.config).read_text(encoding="utf-8")
    out_dir = prepare_output_dir(args.output_dir) or Path(".")
    index_path = out_dir / "index.csv"
    check_writable(index_path)

    jobs = []
    errors = {}
    for i, v in enumerate(values):
        try:
            cfg = parse_config(text, list(args.overrides) + [(args.axis, v)])
            jobs.append((i, v, cfg))
        except ConfigError as exc:
            errors[i] = (v, str(exc))

    results = {}
    if workers == 1 or len(jobs) <= 1:
        for job in jobs:
            i, row, summary = _sweep_one(job)
            results[i] = (row, summary)
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            for i, row, summary in pool.map(_sweep_one, jobs):
                results[i] = (row, summary)
    for i, (v, msg) in errors.items():
        row = {"value": v, "termination": "Error", "t_stop": None,
               "criterion_satisfied": None, "t_lower": None, "t_upper": None}
        results[i] = (row, {"error": msg, "value": v})

    rows = []
    for i in range(len(values)):
        row, summary = results[i]
        rows.append(row)
        emit_json(summary, out_dir / f"summary_{i:03d}.json")
    index_path.write_text(sweep_rows_csv(rows), encoding="utf-8", newline="")
    failed = sum(r["termination"] == "Error" for r in rows)
    if failed:
        print(f"{failed} of {len(rows)} sweep runs failed", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="run configuration file")
    common.add_argument("--set", dest="overrides", action="append", default=argparse.SUPPRESS,
                        metavar="KEY=VALUE", help="override a configuration key (repeatable)")
    common.add_argument("--output-dir", default=argparse.SUPPRESS,
                        help="directory for output files")

    parser = _Parser(prog="mswave", parents=[common],
                     description="Pseudo-spectral solver and wave-breaking diagnostics "
                                 "for a moderate-amplitude shallow-water equation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("simulate", parents=[common], help="integrate one configured run")
    sub.add_parser("criterion", parents=[common], help="evaluate the breaking criterion for u0")
    k = sub.add_parser("kernel", parents=[common], help="Green's function norms and residual")
    k.add_argument("--mu", type=float, required=True)
    k.add_argument("--n", type=int, default=1024)
    s = sub.add_parser("sweep", parents=[common], help="run a one-parameter sweep")
    s.add_argument("--axis", required=True, choices=SWEEP_AXES)
    s.add_argument("--values", required=True, nargs="+",
                   help="values, space- or comma-separated")
    s.add_argument("--workers", type=int, default=None,
                   help="parallel worker processes (default: $MSWAVE_WORKERS or 1)")
    sub.add_parser("check", parents=[common], help="model self-tests; exit 0 iff all pass")
    return parser


COMMANDS = {
    "simulate": cmd_simulate,
    "criterion": cmd_criterion,
    "kernel": cmd_kernel,
    "sweep": cmd_sweep,
    "check": cmd_check,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("config", None), ("overrides", []), ("output_dir", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        return COMMANDS[args.command](args)
    except (CliError, ConfigError, InvalidArgumentError, OutOfDomainError,
            NumericalOverflowError, OSError) as exc:
        print(f"mswave: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
