"""Command-line front end: ``slope-kernel <subcommand> [options]``.

Every subcommand writes JSON by default (top-level ``"schema"`` field, big
integers as decimal strings); ``--format csv`` gives plot-ready columns.
Exit status: 0 success, 1 failed verification, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

import mpmath

from . import asymptotics, bijection, enumeration, identities, kernel
from .core import KNUTH_JUMPS, JumpSet, SeriesError

SCHEMA = "slope-kernel/1"


class UsageError(Exception):
    pass


def _env_precision() -> int:
    raw = os.environ.get("SLOPE_KERNEL_PRECISION", "256")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"SLOPE_KERNEL_PRECISION must be an integer, got {raw!r}")


def _jsonable(obj, digits: int = 30):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, mpmath.mpf):
        return mpmath.nstr(obj, digits)
    if isinstance(obj, mpmath.mpc):
        return [mpmath.nstr(obj.real, digits), mpmath.nstr(obj.imag, digits)]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v, digits) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(args, payload: dict, csv_header=None, csv_rows=None, plain=None) -> None:
    if args.format == "csv":
        if csv_rows is None:
            raise UsageError(f"{args.command} has no CSV form")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(csv_header)
        w.writerows(csv_rows)
        text = buf.getvalue()
    elif args.format == "plain" and plain is not None:
        text = plain + "\n"
    else:
        body = {"schema": SCHEMA, "command": args.command}
        body.update(payload)
        text = json.dumps(_jsonable(body), indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _positive(name, value, lo=0, hi=None):
    if value < lo or (hi is not None and value > hi):
        bound = f"[{lo}, {hi}]" if hi is not None else f">= {lo}"
        raise UsageError(f"--{name} must be in {bound}, got {value}")
    return value


def _jumps(spec: str) -> JumpSet:
    try:
        return JumpSet.parse(spec)
    except ValueError as exc:
        raise UsageError(f"bad jump set {spec!r} (expected e.g. '+5:1,-2:1'): {exc}")


# --- subcommands -----------------------------------------------------------


def cmd_count(args) -> int:
    jumps = _jumps(args.jumps)
    _positive("n-max", args.n_max, 0, 2000)
    floor = None if args.floor == "none" else int(args.floor)
    table = enumeration.build_counts(jumps, args.start, floor, args.n_max)
    rows = list(table.csv_rows())
    payload = {
        "jumps": args.jumps,
        "start": args.start,
        "floor": args.floor,
        "n_max": args.n_max,
        "rows": [{str(k): v for k, v in sorted(r.items())} for r in table.rows],
        "totals": [table.row_total(n) for n in range(args.n_max + 1)],
    }
    _emit(args, payload, ["n", "k", "count"], rows)
    return 0


def cmd_knuth(args) -> int:
    if args.n is not None:
        _positive("n", args.n, 1, 2000)
        a, b = enumeration.knuth_AB(args.n)
        with mpmath.workprec(128):
            ratio = mpmath.mpf(a) / b
        payload = {"n": args.n, "A": a, "B": b, "A_plus_B": a + b, "ratio": ratio}
        _emit(args, payload, ["n", "A", "B"], [[args.n, a, b]], plain=f"{a} {b}")
        return 0
    _positive("n-max", args.n_max, 1, 2000)
    a, b = enumeration.knuth_sequences(args.n_max)
    rows = [[n, a[n - 1], b[n - 1]] for n in range(1, args.n_max + 1)]
    payload = {"n_max": args.n_max, "A": a, "B": b}
    _emit(args, payload, ["n", "A", "B"], rows)
    return 0


def cmd_series(args) -> int:
    _positive("order", args.order, 0, 5000)
    kind = args.kind
    if kind in ("u1", "u2"):
        s = kernel.small_branch_series(kernel.KernelForm.of(KNUTH_JUMPS), args.order)[kind == "u2"]
    elif kind in ("F0", "G1"):
        s = kernel.series_F0_G1(args.order)[kind == "G1"]
    else:
        s = kernel.sym_power_series(args.order)
    rows = [[i, str(c)] for i, c in enumerate(s.coeffs)]
    _emit(args, {"kind": kind, "series": s.to_json()}, ["n", "value"], rows)
    return 0


def cmd_constants(args) -> int:
    _positive("precision", args.precision, 128, 100000)
    const = asymptotics.knuth_constants(args.precision)
    check = asymptotics.verify_minimal_polynomials(const)
    payload = const.to_json(args.digits)
    payload["minimal_polynomials"] = check
    _emit(args, payload, plain=mpmath.nstr(const.kappa1, 25) + " " + mpmath.nstr(const.kappa2, 25))
    return 0 if check["passed"] else 1


def cmd_verify(args) -> int:
    which = args.identity
    if which == "aplusb":
        report = identities.verify_aplusb(_positive("n-max", args.n_max, 1, 1000))
    elif which == "recurrence":
        report = identities.verify_hypergeometric_recurrence(_positive("n-max", args.n_max, 2, 1000))
    elif which == "series-vs-dp":
        report = identities.verify_three_routes(_positive("n-max", args.n_max, 1, 500))
    elif which == "thm61":
        report = identities.verify_thm61(args.a, args.c, _positive("n-max", args.n_max, 1, 8))
    elif which == "bijection":
        barrier = bijection.SlopeBarrier(args.a, args.c, args.b)
        report = bijection.verify_bijection(barrier, _positive("n-max", args.n_max, 0, 20))
    else:  # rotation
        with mpmath.workprec(args.precision):
            if args.z:
                try:
                    points = [mpmath.mpc(complex(args.z.replace(" ", "")))]
                except ValueError:
                    raise UsageError(f"cannot parse --z {args.z!r}")
            else:
                points = kernel.rotation_sample_points(args.points, args.precision)
        checks = [kernel.verify_rotation_law(z, args.precision) for z in points]
        report = {
            "identity": "rotation law",
            "points": [z for z in points],
            "residuals": checks,
            "passed": all(c["passed"] for c in checks),
        }
    _emit(args, {"report": report}, plain="PASS" if report["passed"] else "FAIL")
    return 0 if report["passed"] else 1


def cmd_duchon(args) -> int:
    _positive("n-max", args.n_max, 0, 20000)
    counts, areas = enumeration.excursion_area_sums(enumeration.DUCHON_JUMPS, args.n_max)
    lengths = list(range(0, args.n_max + 1, 5))
    exact = {n: Fraction(areas[n], 2 * counts[n]) for n in lengths if n}
    with mpmath.workprec(128):
        decimal = {n: mpmath.mpf(q.numerator) / q.denominator for n, q in exact.items()}
    payload = {
        "n_max": args.n_max,
        "counts": {n: counts[n] for n in lengths},
        "mean_area": decimal,
        "mean_area_exact": exact,
    }
    if args.extrapolate:
        if args.n_max < 500 or args.n_max % 5:
            raise UsageError("--extrapolate needs --n-max >= 500 and a multiple of 5")
        payload["K"] = asymptotics.duchon_area_constant(args.n_max, area_data=(counts, areas))
    rows = [[n, counts[n]] for n in lengths]
    _emit(args, payload, ["n", "value"], rows)
    return 0


def _read_sequence(path: str) -> list[int]:
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as exc:
        raise UsageError(str(exc))
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"sequence file must hold integers: {exc}")


def cmd_guess_rec(args) -> int:
    terms = _read_sequence(args.file)
    try:
        rec = identities.guess_precurrence(terms, args.max_order, args.max_degree, args.offset)
    except identities.InsufficientTermsError as exc:
        raise UsageError(str(exc))
    payload = {"terms": len(terms), "recurrence": rec.to_json() if rec else None}
    _emit(args, payload, plain=str(rec))
    return 0 if rec else 1


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slope-kernel", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "plain"], default="json")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="exact DP tables f[n][k]")
    p.add_argument("--jumps", default="+5:1,-2:1")
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--floor", default="0", help="lowest allowed altitude, or 'none'")
    p.add_argument("--n-max", type=int, default=20)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("knuth", parents=[common], help="A_n, B_n and their ratio")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--n", type=int)
    g.add_argument("--n-max", type=int, default=10)
    p.set_defaults(func=cmd_knuth)

    p = sub.add_parser("series", parents=[common], help="exact series coefficients")
    p.add_argument("kind", choices=["F0", "G1", "u1", "u2", "sympower"])
    p.add_argument("--order", type=int, default=20)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("constants", parents=[common], help="asymptotic constants report")
    p.add_argument("--precision", type=int, default=None)
    p.add_argument("--digits", type=int, default=None)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("verify", parents=[common], help="run one verification")
    p.add_argument("--identity", required=True,
                   choices=["aplusb", "recurrence", "thm61", "rotation", "bijection", "series-vs-dp"])
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--a", type=int, default=2)
    p.add_argument("--c", type=int, default=5)
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--z", help="complex point for the rotation law, e.g. 0.05+0.03j")
    p.add_argument("--points", type=int, default=3)
    p.add_argument("--precision", type=int, default=128)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("duchon", parents=[common], help="Duchon excursions and mean areas")
    p.add_argument("--n-max", type=int, default=60)
    p.add_argument("--extrapolate", action="store_true", help="fit the area constant K")
    p.set_defaults(func=cmd_duchon)

    p = sub.add_parser("guess-rec", parents=[common], help="P-recurrence from a sequence file")
    p.add_argument("file", help="integers separated by whitespace or commas; '-' for stdin")
    p.add_argument("--max-order", type=int, default=4)
    p.add_argument("--max-degree", type=int, default=8)
    p.add_argument("--offset", type=int, default=0, help="index of the first term")
    p.set_defaults(func=cmd_guess_rec)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if getattr(args, "precision", 0) is None:
            args.precision = _env_precision()
        return args.func(args)
    except (UsageError, SeriesError, ValueError) as exc:
        print(f"slope-kernel: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
