"""Command-line front end: ``hyp32 eval | verify | table | list-identities``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import replace

from .identities import METHODS, REGISTRY, IdentityId, evaluate
from .numerics import Hyp32Error, Status, Tolerance, ValueWithError
from .series import Params3F2NegDiff, sum_3f2_series
from .transforms import eval_karlsson_z
from .verify import ORACLE, SampleConstraints, check_identity

__all__ = ["main", "run", "build_parser", "EXIT_CODES", "parse_complex"]

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_MALFORMED = 64
EXIT_CODES = {
    Status.OK: EXIT_OK,
    Status.NEAR_SINGULAR: 2,
    Status.DOMAIN_VIOLATION: 3,
    Status.SLOW_CONVERGENCE: 4,
}
METHOD_CHOICES = sorted(METHODS) + ["oracle", "auto", "ka"]


class _Malformed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


def parse_complex(text: str) -> complex:
    """"re" or "re,im" (no spaces) to a complex number."""
    parts = text.split(",")
    if len(parts) > 2 or any(p != p.strip() or not p for p in parts):
        raise argparse.ArgumentTypeError(f"expected re[,im], got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected re[,im], got {text!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError(f"non-finite component in {text!r}")
    return complex(vals[0], vals[1] if len(vals) == 2 else 0.0)


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _int_range(text: str) -> tuple[int, int]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    lo, hi = (_nonneg_int(p) for p in parts)
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _identity(text: str) -> IdentityId:
    key = text.lower()
    if key in METHODS:
        return METHODS[key]
    try:
        return IdentityId(text.upper())
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown identity {text!r}") from None


def _reference(text: str) -> str:
    if text.lower() == ORACLE:
        return ORACLE
    return _identity(text).value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hyp32", description=(
        "Evaluate and verify 3F2(a, b, c; b+1+m, c+1+n; 1) closed forms."))
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(p, default="text"):
        p.add_argument("--format", choices=["text", "json", "csv"], default=default)

    def abc(p):
        for name in ("a", "b", "c"):
            p.add_argument(f"--{name}", type=parse_complex, required=True, metavar="RE[,IM]")

    ev = sub.add_parser("eval", help="evaluate one point")
    abc(ev)
    ev.add_argument("--m", type=_nonneg_int, required=True)
    ev.add_argument("--n", type=_nonneg_int, required=True)
    ev.add_argument("--method", type=str.lower, choices=METHOD_CHOICES, default="auto")
    ev.add_argument("--z", type=parse_complex, default=None, metavar="RE[,IM]",
                    help="argument for the 2F1 reduction (default 1)")
    ev.add_argument("--tol", type=_positive_float, default=None)
    fmt(ev)

    ve = sub.add_parser("verify", help="seeded random check of one identity")
    ve.add_argument("--identity", type=_identity, required=True)
    ve.add_argument("--reference", type=_reference, default=ORACLE)
    ve.add_argument("--samples", type=_nonneg_int, default=200)
    ve.add_argument("--seed", type=int, default=42)
    ve.add_argument("--tol", type=_positive_float, default=1e-8)
    ve.add_argument("--workers", type=_nonneg_int, default=1)
    ve.add_argument("--m-range", type=_int_range, default=None)
    ve.add_argument("--n-range", type=_int_range, default=None)
    ve.add_argument("--min-decay", type=float, default=None)
    ve.add_argument("--lattice-margin", type=float, default=None)
    ve.add_argument("--real", action="store_true", help="real parameters only")
    fmt(ve, "json")

    ta = sub.add_parser("table", help="grid of values over m and n")
    abc(ta)
    ta.add_argument("--m-range", type=_int_range, required=True)
    ta.add_argument("--n-range", type=_int_range, required=True)
    ta.add_argument("--method", type=str.lower, choices=METHOD_CHOICES, default="auto")
    ta.add_argument("--tol", type=_positive_float, default=None)
    fmt(ta, "csv")

    li = sub.add_parser("list-identities", help="list the registered closed forms")
    fmt(li)
    return parser


def _tolerance(rel_tol: float | None) -> Tolerance:
    tol = Tolerance() if rel_tol is None else Tolerance(rel_tol=rel_tol)
    env = os.environ.get("HYP32_MAX_TERMS")
    if env is not None:
        try:
            max_terms = int(env)
        except ValueError:
            raise _Malformed(f"HYP32_MAX_TERMS must be an integer, got {env!r}") from None
        if max_terms < 1:
            raise _Malformed("HYP32_MAX_TERMS must be >= 1")
        tol = replace(tol, max_terms=max_terms)
    return tol


def _eval_z(p: Params3F2NegDiff, z: complex, method: str, tol: Tolerance):
    if method == "oracle":
        return sum_3f2_series(p.spec(z), tol), "oracle"
    if method not in ("auto", "ka"):
        raise _Malformed(f"method {method!r} is only defined at z = 1")
    return eval_karlsson_z(p, z), "ka"


def _eval_point(p: Params3F2NegDiff, method: str, z: complex | None, tol: Tolerance):
    if z is not None and z != 1:
        return _eval_z(p, z, method, tol)
    if method == "ka":
        raise _Malformed("method 'ka' needs --z")
    return evaluate(p, method, tol)


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\r\n").writerows(rows)
    return buf.getvalue()


def _eval_record(v: ValueWithError, method: str) -> dict:
    return {"value": {"re": v.value.real, "im": v.value.imag}, "abs_err": v.abs_err,
            "status": v.status.value, "method": method}


def _cmd_eval(args, out) -> int:
    tol = _tolerance(args.tol)
    p = Params3F2NegDiff(args.a, args.b, args.c, args.m, args.n)
    v, method = _eval_point(p, args.method, args.z, tol)
    rec = _eval_record(v, method)
    if args.format == "json":
        out.write(json.dumps(rec) + "\n")
    elif args.format == "csv":
        out.write(_csv([["re", "im", "abs_err", "status", "method"],
                        [repr(v.value.real), repr(v.value.imag), repr(v.abs_err),
                         v.status.value, method]]))
    else:
        out.write(f"value   {v.value.real!r} {v.value.imag:+.17g}i\n"
                  f"abs_err {v.abs_err:.3g}\nstatus  {v.status.value}\nmethod  {method}\n")
        if v.reason:
            out.write(f"note    {v.reason}\n")
    return EXIT_CODES[v.status]


def _cmd_verify(args, out) -> int:
    overrides = {}
    if args.m_range is not None:
        overrides["m_range"] = args.m_range
    if args.n_range is not None:
        overrides["n_range"] = args.n_range
    if args.min_decay is not None:
        overrides["min_decay"] = args.min_decay
    if args.lattice_margin is not None:
        overrides["lattice_margin"] = args.lattice_margin
    if args.real:
        overrides["allow_complex"] = False
    cons = SampleConstraints(**overrides)
    rep = check_identity(args.identity, cons, seed=args.seed, count=args.samples,
                         tol=args.tol, reference=args.reference, workers=args.workers)
    if args.format == "json":
        out.write(rep.to_json() + "\n")
    elif args.format == "csv":
        out.write(_csv([["identity", "reference", "samples", "seed", "tol", "max_rel_err",
                         "median_rel_err", "excluded", "failures"],
                        [rep.identity.value, rep.reference, rep.samples, rep.seed, rep.tol,
                         rep.max_rel_err, rep.median_rel_err, rep.excluded,
                         len(rep.failures)]]))
    else:
        verdict = "PASS" if rep.passed else "FAIL"
        out.write(f"{verdict} {rep.identity.value} vs {rep.reference}: {rep.samples} samples, "
                  f"seed {rep.seed}, max rel err {rep.max_rel_err:.3g} "
                  f"(median {rep.median_rel_err:.3g}, tol {rep.tol:g}), "
                  f"{rep.excluded} excluded, {len(rep.failures)} failures\n")
    return EXIT_OK if rep.passed else EXIT_FAILURES


_TABLE_COLUMNS = ["m", "n", "re", "im", "abs_err", "method", "status"]


def _cmd_table(args, out) -> int:
    tol = _tolerance(args.tol)
    rows = []
    worst = Status.OK
    for m in range(args.m_range[0], args.m_range[1] + 1):
        for n in range(args.n_range[0], args.n_range[1] + 1):
            try:
                p = Params3F2NegDiff(args.a, args.b, args.c, m, n)
                v, method = _eval_point(p, args.method, None, tol)
                row = [m, n, v.value.real, v.value.imag, v.abs_err, method, v.status.value]
                status = v.status
            except Hyp32Error as exc:
                status = exc.status
                row = [m, n, math.nan, math.nan, math.nan, args.method, status.value]
            worst = worst.worst(status)
            rows.append(row)
    if args.format == "json":
        out.write(json.dumps([dict(zip(_TABLE_COLUMNS, r)) for r in rows]) + "\n")
    elif args.format == "csv":
        out.write(_csv([_TABLE_COLUMNS] + [[repr(x) if isinstance(x, float) else x for x in r]
                                           for r in rows]))
    else:
        for r in rows:
            out.write(f"m={r[0]} n={r[1]} {r[2]!r} {r[3]:+.17g}i  err {r[4]:.3g}  "
                      f"{r[5]}  {r[6]}\n")
    return EXIT_CODES[worst]


def _cmd_list(args, out) -> int:
    tags = {v: k for k, v in METHODS.items()}
    rows = [[tags[info.tag], info.tag.value, info.label, info.summary]
            for info in REGISTRY.values()]
    if args.format == "json":
        out.write(json.dumps([dict(zip(["method", "id", "label", "summary"], r))
                              for r in rows]) + "\n")
    elif args.format == "csv":
        out.write(_csv([["method", "id", "label", "summary"]] + rows))
    else:
        for r in rows:
            out.write(f"{r[0]:<4} {r[2]:<20} {r[3]}\n")
    return EXIT_OK


_COMMANDS = {"eval": _cmd_eval, "verify": _cmd_verify, "table": _cmd_table,
             "list-identities": _cmd_list}


def main(argv: list[str] | None = None, out=None) -> int:
    """Run the CLI and return the exit code."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_MALFORMED
    try:
        return _COMMANDS[args.command](args, out)
    except _Malformed as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"hyp32: error: {exc}\n")
        return EXIT_MALFORMED
    except Hyp32Error as exc:
        sys.stderr.write(f"hyp32: {exc.status.value}: {exc}\n")
        return EXIT_CODES[exc.status]


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())
