"""Command-line experiment runner.

Exit codes: 0 success, 1 a hard check failed, 2 usage or configuration
error, 3 file I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from ._kernels import configure_threads
from .config import ConfigError, ExperimentConfig, load_config
from .core import BoundaryGrid, DomainError, FiniteBlaschkeProduct, default_test_functions
from .dynamics import iterate
from .norms import (bloch_norm_estimate, bmo_norm_estimate, dirichlet_closed, l2_comparison_bounds,
                    norm_l2_gram, norm_lp_quadrature, toeplitz_symbol_bounds, weighted_mass)
from .reporting import emit_report, load_reports
from .series import synthesize_partial_sums
from .verify import SUITES, all_hard_checks_pass, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("innerlab")


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def load_map(source: str) -> FiniteBlaschkeProduct:
    """A builtin name (``f1``, ``f2``, ``f3``) or a JSON file with ``zeros``/``rotation``.

    A missing file whose stem is a builtin name falls back to the builtin.
    """
    builtins = default_test_functions()
    if source in builtins:
        return builtins[source]
    path = Path(source)
    if not path.exists() and path.stem in builtins:
        return builtins[path.stem]
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"parse: {exc}"]) from None
    if isinstance(obj, dict) and "blaschke" in obj:
        obj = obj["blaschke"]
    if isinstance(obj, str):
        if obj not in builtins:
            raise ConfigError([f"blaschke: unknown builtin {obj!r}"])
        return builtins[obj]
    try:
        zeros = [complex(r, i) for r, i in obj["zeros"]]
        rot = complex(*obj.get("rotation", [1.0, 0.0]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError([f"blaschke: malformed map description ({exc})"]) from None
    bad = FiniteBlaschkeProduct.violations(zeros, rot)
    if bad:
        raise ConfigError([f"blaschke: {b}" for b in bad])
    return FiniteBlaschkeProduct(tuple(zeros), rot)


def _config(args) -> ExperimentConfig:
    return load_config(args.config) if args.config else ExperimentConfig()


def fmt_complex(w: complex) -> str:
    return f"{w.real:.17g}{w.imag:+.17g}i"


def cmd_eval(args) -> int:
    f = load_map(args.f)
    print(fmt_complex(complex(iterate(f, args.n, args.z))))
    return EXIT_OK


def cmd_series(args) -> int:
    cfg = _config(args)
    f = load_map(args.f) if args.f else cfg.blaschke
    M = args.grid or cfg.boundary_size
    if M & (M - 1):
        raise UsageError(f"--grid {M} is not a power of two")
    N = args.n or cfg.N
    fields = synthesize_partial_sums(f, cfg.coefficients.prefix(N), BoundaryGrid(M), N,
                                     checkpoints=cfg.checkpoints)
    out = Path(args.out)
    multi = len(fields) > 1
    for fld in fields:
        path = out.with_name(f"{out.stem}_N{fld.N}{out.suffix}") if multi else out
        if args.format == "csv":
            fld.to_csv(path)
        else:
            fld.to_binary(path)
    return EXIT_OK


def cmd_norms(args) -> int:
    cfg = _config(args)
    f = load_map(args.f) if args.f else cfg.blaschke
    a = cfg.coefficients.prefix(cfg.N)
    lam = f.derivative_at_zero
    fld = synthesize_partial_sums(f, a, BoundaryGrid(cfg.boundary_size))[-1]
    grid = cfg.disk()
    bmo = bmo_norm_estimate(f, a, grid)
    lo, hi = l2_comparison_bounds(lam)
    out = {
        "config_digest": cfg.digest(),
        "N": cfg.N,
        "l2_mass": float(np.sum(np.abs(a) ** 2)),
        "l2_gram": norm_l2_gram(a, lam),
        "l2_bounds": [lo, hi],
        "l2_quadrature": norm_lp_quadrature(fld.values, 2) ** 2,
        "l4_quadrature": norm_lp_quadrature(fld.values, 4),
        "bmoa": bmo.to_json(),
        "bloch": bloch_norm_estimate(f, a, grid, cfg.N).value,
    }
    try:
        out["dirichlet"] = dirichlet_closed(f, a)
        out["dirichlet_weighted_mass"] = weighted_mass(f, a)
        out["dirichlet_cfN"] = toeplitz_symbol_bounds(lam, f.degree).cfN
    except OverflowError as exc:
        out["dirichlet"] = f"overflow: {exc}"
    text = json.dumps(out, indent=2, sort_keys=True, default=str) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    reports = run_suite(cfg, args.suite)
    if not reports:
        raise UsageError("no checks selected")
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.check_id} margin={r.margin:.3e} tol={r.tolerance:.1e}"
              + (" [signature]" if r.label == "signature" else ""))
    targets = {"json": args.out or cfg.outputs.get("json"),
               "csv": args.csv or cfg.outputs.get("csv"),
               "plotdata": args.plotdata or cfg.outputs.get("plotdata")}
    for fmt, path in targets.items():
        if path:
            emit_report(reports, fmt, path)
    return EXIT_OK if all_hard_checks_pass(reports) else EXIT_FAIL


def cmd_report(args) -> int:
    reports = load_reports(args.input)
    if not reports:
        raise UsageError(f"{args.input} holds no reports")
    if not (args.csv or args.plotdata):
        raise UsageError("report needs --csv and/or --plotdata")
    if args.csv:
        emit_report(reports, "csv", args.csv)
    if args.plotdata:
        emit_report(reports, "plotdata", args.plotdata)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="innerlab", description="Iterated Blaschke series experiments.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, metavar="{eval,series,norms,verify,report}")

    e = sub.add_parser("eval", help="evaluate the n-th iterate at a point")
    e.add_argument("--f", required=True, help="builtin name or JSON file")
    e.add_argument("--z", required=True, type=parse_complex)
    e.add_argument("--n", type=int, default=1)
    e.set_defaults(run=cmd_eval)

    s = sub.add_parser("series", help="write the boundary field of F_N")
    s.add_argument("--config")
    s.add_argument("--f")
    s.add_argument("--grid", type=int, help="boundary grid size (power of two)")
    s.add_argument("--n", type=int, help="truncation")
    s.add_argument("--format", choices=("csv", "binary"), default="csv")
    s.add_argument("--out", required=True)
    s.set_defaults(run=cmd_series)

    n = sub.add_parser("norms", help="estimate all norms of F_N")
    n.add_argument("--config")
    n.add_argument("--f")
    n.add_argument("--out")
    n.set_defaults(run=cmd_norms)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--config")
    v.add_argument("--out", help="JSON report path")
    v.add_argument("--csv", help="CSV summary path")
    v.add_argument("--plotdata", help="directory for plot-data files")
    v.set_defaults(run=cmd_verify)

    r = sub.add_parser("report", help="render a JSON report as CSV and plot data")
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--csv")
    r.add_argument("--plotdata")
    r.set_defaults(run=cmd_report)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    configure_threads()
    try:
        return args.run(args)
    except ConfigError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, DomainError, ValueError) as exc:
        print(f"innerlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"innerlab: {exc}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    sys.exit(run())
