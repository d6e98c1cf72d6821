"""Command-line front door: evaluation, zero-finding, eigenvalue solving,
sweeps, and the verification suites, with deterministic CSV/JSON output.

Exit codes: 0 success, 1 usage error, 2 domain/hypothesis refusal,
3 convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

from . import __version__
from .eigen import eigenvalues, sweep_monotonicity
from .errors import ConvergenceError, DomainError, HypothesisError
from .oracle import eigenvalues_shooting
from .specfun import Params, coulomb_F, tricomi_Q, tricomi_psi
from .verify import run_suites
from .zeros import coulomb_zeros

_DEFAULT_TOL = 1e-12

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REFUSED = 2
EXIT_NO_CONVERGENCE = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_tol() -> float:
    raw = os.environ.get("CWEIG_TOL")
    if raw is None:
        return _DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError as exc:
        raise DomainError(f"CWEIG_TOL is not a number: {raw!r}") from exc
    if not tol > 0:
        raise DomainError(f"CWEIG_TOL must be > 0, got {raw!r}")
    return tol


def _fmt(x) -> str:
    """Shortest round-trip decimal representation."""
    return repr(float(x)) if isinstance(x, float) else str(x)


def _render(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(record["columns"])
    for row in record["rows"]:
        writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _emit(record: dict, args) -> None:
    text = _render(record, args.format)
    if args.output is None:
        sys.stdout.write(text)
        return
    out_dir = os.path.dirname(os.path.abspath(args.output))
    fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=".cweig-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, args.output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _record(command: str, params: dict, columns, rows, tol: float) -> dict:
    return {
        "command": command,
        "params": params,
        "columns": list(columns),
        "rows": [list(r) for r in rows],
        "meta": {"version": __version__, "tol": tol},
    }


def _cmd_eval(args) -> dict:
    tol = _default_tol()
    if args.fn in ("F", "Q"):
        missing = [n for n in ("L", "eta", "r") if getattr(args, n) is None]
        if missing:
            raise DomainError(
                f"--fn {args.fn} requires --L, --eta and --r (missing: "
                f"{', '.join('--' + m for m in missing)})"
            )
        if args.fn == "F":
            v = coulomb_F(args.L, args.eta, args.r)
        else:
            v = tricomi_Q(args.L, args.eta, args.r)
        params = {"fn": args.fn, "L": args.L, "eta": args.eta, "r": args.r}
    else:
        missing = [n for n in ("a", "c", "x") if getattr(args, n) is None]
        if missing:
            raise DomainError(
                f"--fn psi requires --a, --c and --x (missing: "
                f"{', '.join('--' + m for m in missing)})"
            )
        v = tricomi_psi(args.a, args.c, args.x)
        params = {"fn": "psi", "a": args.a, "c": args.c, "x": args.x}
    rows = [[v.value, v.derivative, v.abs_err]]
    return _record("eval", params, ("value", "derivative", "abs_err"), rows, tol)


def _cmd_zeros(args) -> dict:
    tol = _default_tol()
    seq = coulomb_zeros(args.L, args.eta, args.count, sign=args.sign)
    params = {"L": args.L, "eta": args.eta, "count": args.count,
              "sign": args.sign, "cert_radius": seq.tol}
    rows = [[n + 1, z] for n, z in enumerate(seq.zeros)]
    return _record("zeros", params, ("n", "zero"), rows, tol)


def _cmd_eigen(args) -> dict:
    tol = args.tol if args.tol is not None else _default_tol()
    p = Params(args.L, args.eta, args.alpha)
    pairs = eigenvalues(p, args.count, tol=tol, force=args.force)
    params = {"L": args.L, "eta": args.eta, "alpha": args.alpha,
              "count": args.count, "oracle": args.oracle}
    if args.oracle == "shooting":
        shot = eigenvalues_shooting(p, args.count)
        columns = ("rank", "lambda", "bracket_lo", "bracket_hi", "residual",
                   "lambda_shooting", "discrepancy")
        rows = [[e.n, e.lam, e.bracket[0], e.bracket[1], e.residual,
                 s.lam, abs(e.lam - s.lam)] for e, s in zip(pairs, shot)]
    else:
        columns = ("rank", "lambda", "bracket_lo", "bracket_hi", "residual")
        rows = [[e.n, e.lam, e.bracket[0], e.bracket[1], e.residual]
                for e in pairs]
    return _record("eigen", params, columns, rows, tol)


def _cmd_sweep(args) -> dict:
    tol = _default_tol()
    if not args.L_step > 0:
        raise DomainError(f"--L-step must be > 0, got {args.L_step}")
    grid = []
    L = args.L_min
    while L <= args.L_max + 1e-12:
        grid.append(round(L, 12))
        L += args.L_step
    if not grid:
        raise DomainError("empty L grid")
    result = sweep_monotonicity(grid, args.eta, args.alpha, args.rank)
    params = {"L_min": args.L_min, "L_max": args.L_max, "L_step": args.L_step,
              "eta": args.eta, "alpha": args.alpha, "rank": args.rank,
              "violations": result.violations,
              "errors": [list(e) for e in result.errors]}
    rows = [[L, lam if lam is not None else ""] for L, lam in result.rows]
    return _record("sweep", params, ("L", "lambda"), rows, tol)


def _cmd_verify(args) -> tuple:
    tol = _default_tol()
    suites = run_suites(args.suite)
    rows = []
    failed = False
    for s in suites:
        for c in s.checks:
            rows.append([s.suite, c.name, "pass" if c.passed else "FAIL",
                         c.detail])
        failed = failed or not s.passed
    record = _record("verify", {"suite": args.suite},
                     ("suite", "check", "status", "detail"), rows, tol)
    summary = "".join(
        f"suite {s.suite}: {'PASS' if s.passed else 'FAIL'} "
        f"({sum(c.passed for c in s.checks)}/{len(s.checks)} checks)\n"
        for s in suites
    )
    return record, summary, failed


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cweig",
                     description="Coulomb/Tricomi cross-product eigenvalue "
                                 "solver and verifier")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", metavar="PATH",
                        help="write output atomically to PATH")

    sp = sub.add_parser("eval", parents=[], help="evaluate F, Q, or psi")
    sp.add_argument("--fn", choices=("F", "Q", "psi"), required=True)
    sp.add_argument("--L", type=float)
    sp.add_argument("--eta", type=float)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--r", type=float)
    sp.add_argument("--a", type=float)
    sp.add_argument("--c", type=float)
    sp.add_argument("--x", type=float)
    common(sp)

    sp = sub.add_parser("zeros", help="zeros of the regular Coulomb function")
    sp.add_argument("--L", type=float, required=True)
    sp.add_argument("--eta", type=float, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--sign", choices=("positive", "negative"),
                    default="positive")
    common(sp)

    sp = sub.add_parser("eigen", help="cross-product eigenvalues")
    sp.add_argument("--L", type=float, required=True)
    sp.add_argument("--eta", type=float, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--oracle", choices=("none", "shooting"), default="none")
    sp.add_argument("--force", action="store_true",
                    help="solve outside the certified hypothesis domain")
    common(sp)

    sp = sub.add_parser("sweep", help="eigenvalue-vs-L monotonicity sweep")
    sp.add_argument("--L-min", dest="L_min", type=float, required=True)
    sp.add_argument("--L-max", dest="L_max", type=float, required=True)
    sp.add_argument("--L-step", dest="L_step", type=float, required=True)
    sp.add_argument("--eta", type=float, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--rank", type=int, required=True)
    common(sp)

    sp = sub.add_parser("verify", help="run invariant suites")
    sp.add_argument("--suite",
                    choices=("specfun", "zeros", "eigen", "oracle", "all"),
                    default="all")
    common(sp)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            record, summary, failed = _cmd_verify(args)
            _emit(record, args)
            sys.stderr.write(summary)
            return EXIT_NO_CONVERGENCE if failed else EXIT_OK
        handler = {"eval": _cmd_eval, "zeros": _cmd_zeros,
                   "eigen": _cmd_eigen, "sweep": _cmd_sweep}[args.command]
        _emit(handler(args), args)
        return EXIT_OK
    except HypothesisError as exc:
        sys.stderr.write(f"cweig: refused: {exc}\n")
        return EXIT_REFUSED
    except DomainError as exc:
        sys.stderr.write(f"cweig: domain error: {exc}\n")
        return EXIT_REFUSED
    except ConvergenceError as exc:
        sys.stderr.write(f"cweig: convergence failure: {exc}\n")
        return EXIT_NO_CONVERGENCE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
