"""Command-line front end: ``sltrans <subcommand> --problem FILE [options]``.

Subcommands
-----------
validate  print the Delta table of every interface and the asymptotic case
char      omega and normalised omega on the scan grid
eigs      the N smallest eigenvalues
asym      asymptotic branch values for n = 1..N
compare   eigs + asym + branch matching
efun      sampled eigenfunctions for selected indices

Exit status: 0 success, 1 unreadable/invalid input, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import warnings
from contextlib import contextmanager

import numpy as np

from . import __version__
from .asymptotics import branches, classify_case, match_branches
from .characteristic import sample_grid
from .eigenfunctions import eigenfunction
from .eigensolver import default_grid_per_unit, find_eigenvalues
from .errors import NumericError, ParseError, ValidationError
from .integrator import DEFAULT_CONFIG, IntegratorConfig
from .problem import delta_table, load_problem, validate

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    """Reports option errors as :class:`ParseError` instead of exiting."""

    def error(self, message):
        raise ParseError(f"{self.prog}: {message}")


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (value > 0.0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {text}")
    return value


def _non_positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (value <= 0.0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"must be <= 0, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sltrans", description="Eigenvalues of Sturm-Liouville problems with transmission conditions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = _Parser(add_help=False)
    common.add_argument("--problem", required=True, help="JSON problem file")
    common.add_argument("--out", default="-", help="output CSV path (default: stdout)")
    common.add_argument("--strict", action="store_true", help="require every Delta_jk > 0")
    common.add_argument(
        "--rel-tol", type=_positive_float, default=DEFAULT_CONFIG.rel_tol,
        help=f"integrator relative tolerance (default {DEFAULT_CONFIG.rel_tol:g})",
    )
    common.add_argument(
        "--abs-tol", type=_positive_float, default=DEFAULT_CONFIG.abs_tol,
        help=f"integrator absolute tolerance, in units of the initial state (default {DEFAULT_CONFIG.abs_tol:g})",
    )

    scan = _Parser(add_help=False)
    scan.add_argument("--grid", type=_positive_int, help="samples per unit of s (default: from the total phase)")
    scan.add_argument(
        "--lambda-min", type=_non_positive_float,
        help="lower end of the negative-lambda window (default: from q and the boundary data)",
    )

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("validate", parents=[common], help="check the problem and print the Delta table")

    p = sub.add_parser("char", parents=[common, scan], help="omega on the scan grid")
    p.add_argument("--smax", type=_positive_float, required=True, help="largest s sampled")

    p = sub.add_parser("eigs", parents=[common, scan], help="smallest eigenvalues")
    p.add_argument("-n", type=_positive_int, default=10, help="number of eigenvalues (default 10)")
    p.add_argument("--smax", type=_positive_float, help="initial scan limit in s (extended automatically)")

    p = sub.add_parser("asym", parents=[common], help="asymptotic branch values")
    p.add_argument("-n", type=_positive_int, default=10, help="largest branch index n (default 10)")

    p = sub.add_parser("compare", parents=[common, scan], help="match eigenvalues to asymptotic branches")
    p.add_argument("-n", type=_positive_int, default=20, help="number of eigenvalues (default 20)")
    p.add_argument("--smax", type=_positive_float, help="initial scan limit in s (extended automatically)")

    p = sub.add_parser("efun", parents=[common, scan], help="sampled eigenfunctions")
    p.add_argument(
        "--index", type=_positive_int, action="append", required=True,
        help="1-based eigenvalue index; repeat for several (then --out must contain '{index}')",
    )
    p.add_argument("--points", type=_positive_int, default=101, help="samples per subinterval (default 101, min 2)")
    return parser


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


@contextmanager
def _open_out(path):
    if path == "-":
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _write_csv(path, header, rows):
    with _open_out(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _load(args):
    spec = load_problem(args.problem)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        problem = validate(spec, strict=args.strict)
    return problem, [str(w.message) for w in caught]


def _config(args):
    return IntegratorConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


def _cmd_validate(args, problem, notes):
    lines = [f"valid: r={problem.r}, case {classify_case(problem).value}"]
    for i, t in enumerate(problem.trans):
        table = delta_table(t)
        cells = ", ".join(f"D{j}{k}={table[(j, k)]:.6g}" for j, k in sorted(table))
        lines.append(f"interface {i + 1} (x={problem.xi[i]:.6g}): {cells}")
    lines.extend(f"warning: {msg}" for msg in notes)
    with _open_out(args.out) as fh:
        fh.write("\n".join(lines) + "\n")


def _char_grid(problem, args):
    g = args.grid or default_grid_per_unit(problem)
    parts = []
    if args.lambda_min is not None and args.lambda_min < 0.0:
        n_neg = max(16, math.ceil(g * math.sqrt(-args.lambda_min)))
        parts.append(np.linspace(args.lambda_min, 0.0, n_neg + 1))
    else:
        parts.append(np.zeros(1))
    s = np.arange(1, math.ceil(args.smax * g - 1e-9) + 1, dtype=float) / g
    parts.append(s * s)
    return np.concatenate(parts)


def _cmd_char(args, problem, notes):
    lams = _char_grid(problem, args)
    raw, normalized = sample_grid(problem, lams, _config(args))
    rows = (
        (lam, math.sqrt(lam) if lam >= 0.0 else None, w, wn)
        for lam, w, wn in zip(lams, raw, normalized)
    )
    _write_csv(args.out, ["lambda", "s", "omega", "omega_normalized"], rows)


def _eigenvalues(args, problem, count):
    return find_eigenvalues(
        problem,
        count,
        grid_per_unit=args.grid,
        lambda_min=args.lambda_min,
        cfg=_config(args),
        s_max=getattr(args, "smax", None),
    )


def _cmd_eigs(args, problem, notes):
    eigs = _eigenvalues(args, problem, args.n)
    rows = ((e.index, e.lam, e.s, e.residual, e.simple) for e in eigs)
    _write_csv(args.out, ["index", "lambda", "s", "residual", "simple"], rows)


def _cmd_asym(args, problem, notes):
    rows = ((br.j, n, br(n)) for br in branches(problem) for n in range(1, args.n + 1))
    _write_csv(args.out, ["branch", "n", "s_asymptotic"], rows)


def _cmd_compare(args, problem, notes):
    eigs = _eigenvalues(args, problem, args.n)
    match = match_branches(eigs, problem)
    by_eigen = {id(p.eigen): p for p in match.pairs}
    rows = []
    for e in eigs:
        p = by_eigen.get(id(e))
        if p is None:
            rows.append((e.index, e.s, None, None, None, None, None))
        else:
            rows.append((e.index, e.s, p.branch, p.n, p.s_asymptotic, p.error, p.error_times_n))
    _write_csv(
        args.out,
        ["index", "s_numeric", "branch", "n", "s_asymptotic", "error", "error_times_n"],
        rows,
    )
    worst = match.max_error_times_n()
    for br in branches(problem):
        value = worst.get(br.j)
        shown = "no matches" if value is None else format(value, ".6g")
        print(f"branch {br.j}: max(e_n*n) = {shown}", file=sys.stderr)
    if match.unmatched_numeric:
        print(f"unmatched eigenvalues: {len(match.unmatched_numeric)}", file=sys.stderr)


def _cmd_efun(args, problem, notes):
    indices = args.index
    if len(indices) > 1 and "{index}" not in args.out:
        raise ParseError("several --index values need an --out path containing '{index}'")
    if args.points < 2:
        raise ParseError("--points must be at least 2")
    eigs = _eigenvalues(args, problem, max(indices))
    for k in indices:
        samples = eigenfunction(problem, eigs[k - 1], args.points, _config(args))
        _write_csv(args.out.replace("{index}", str(k)), ["subinterval", "side", "x", "u", "du"], samples.rows())


_COMMANDS = {
    "validate": _cmd_validate,
    "char": _cmd_char,
    "eigs": _cmd_eigs,
    "asym": _cmd_asym,
    "compare": _cmd_compare,
    "efun": _cmd_efun,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        problem, notes = _load(args)
        _COMMANDS[args.command](args, problem, notes)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
