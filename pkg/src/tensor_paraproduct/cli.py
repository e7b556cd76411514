"""Command-line entry point.

Exit codes: 0 success, 1 a check failed, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .errors import EstimateUndefinedError, ParaproductError
from .fields import RingFieldSpec, decay_field, generate_ring
from .figure import run_figure
from .io import read_field, write_field
from .paraproduct import (DEFAULT_QUAD_ORDER, NONLINEARITIES, ScaleRange, decompose,
                          load_table_nonlinearity, residual_integral_form, residual_report,
                          telescoping_mixed_sum)
from .regularity import decay_report, estimate_alpha
from .tensor_ops import tensor_analyze
from .verify import SUITES, checks_csv, run_verify

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
EXTENSIONS = {"pgm": ".pgm", "csv": ".csv", "tpmx": ".tpmx"}


def _scales(text: str) -> ScaleRange:
    try:
        n, np_ = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N,N' as two integers, got {text!r}")
    return ScaleRange(n, np_)


def _add_input(p):
    p.add_argument("--input", type=Path, help="field file (.tpmx or .csv); default: ring field")
    p.add_argument("--alpha", type=float, default=0.4, help="ring exponent (default 0.4)")
    p.add_argument("--grid-level", type=int, default=9, help="ring grid level L (default 9)")


def _add_nonlinearity(p):
    p.add_argument("--nonlinearity", choices=[*NONLINEARITIES, "custom-table"], default="exp02")
    p.add_argument("--table", type=Path, help="CSV with columns u,A,dA,d2A for custom-table")
    p.add_argument("--scales", type=_scales, default=ScaleRange(4, 4), help="N,N' (default 4,4)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tensor-paraproduct",
                                     description="Multiscale tensor paraproduct toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a ring field or a seeded decay field")
    g.add_argument("--alpha", type=float, required=True)
    g.add_argument("--radius", type=float, default=0.3)
    g.add_argument("--grid-level", type=int, default=9)
    g.add_argument("--seed", type=int,
                   help="synthesise a random field with coefficient decay rate alpha+1/2 instead")
    g.add_argument("--format", choices=list(EXTENSIONS), default="tpmx")
    g.add_argument("--out", type=Path, required=True)

    d = sub.add_parser("decompose", help="split A(f) into approximation and residual")
    _add_input(d)
    _add_nonlinearity(d)
    d.add_argument("--format", choices=list(EXTENSIONS), default="tpmx")
    d.add_argument("--quad-order", type=int,
                   help="also evaluate the integral form at this order and report its deviation")
    d.add_argument("--out", type=Path, required=True, help="output directory")

    r = sub.add_parser("residual-report", help="decay statistics of the residual")
    _add_input(r)
    _add_nonlinearity(r)
    r.add_argument("--out", type=Path, help="CSV path (default stdout)")

    h = sub.add_parser("regularity", help="coefficient decay report and Hölder estimate")
    _add_input(h)
    h.add_argument("--scales", type=_scales, default=ScaleRange(6, 6))
    h.add_argument("--offset", type=float, default=0.5)
    h.add_argument("--out", type=Path, help="CSV path (default stdout)")

    v = sub.add_parser("verify", help="run an invariant suite")
    v.add_argument("suite", choices=[*SUITES, "all"])
    v.add_argument("--size", type=int, default=32)
    v.add_argument("--seed", type=int, default=7)
    v.add_argument("--out", type=Path, help="CSV report path")

    f = sub.add_parser("figure", help="render the ring-field image grid")
    f.add_argument("--out", type=Path, required=True, help="output directory")
    f.add_argument("--grid-level", type=int, default=9)
    return parser


def _load_input(args):
    if args.input is not None:
        return read_field(args.input)
    return generate_ring(RingFieldSpec(args.alpha, grid_level=args.grid_level))


def _load_nonlinearity(args):
    if args.nonlinearity == "custom-table":
        if args.table is None:
            raise ParaproductError("--nonlinearity custom-table needs --table")
        return load_table_nonlinearity(args.table)
    return NONLINEARITIES[args.nonlinearity]()


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, newline="\n")


def cmd_generate(args) -> int:
    if args.seed is None:
        field_ = generate_ring(RingFieldSpec(args.alpha, args.radius, args.grid_level))
    else:
        L = args.grid_level
        field_ = decay_field(L, L, args.alpha + 0.5, args.seed)
    write_field(args.out, field_, args.format)
    return EXIT_OK


def cmd_decompose(args) -> int:
    f = _load_input(args)
    A = _load_nonlinearity(args)
    dec = decompose(f, A, args.scales)
    args.out.mkdir(parents=True, exist_ok=True)
    ext = EXTENSIONS[args.format]
    parts = {"field": dec.field, "composed": dec.composed, "approx": dec.approx,
             "residual": dec.residual}
    with open(args.out / "manifest.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["component", "file"])
        for name, fld in parts.items():
            write_field(args.out / f"{name}{ext}", fld, args.format)
            w.writerow([name, f"{name}{ext}"])
    print(f"split_error {dec.split_error:.3e}")
    for key, corner in dec.boundary.items():
        print(f"corner {key[0]},{key[1]} mean {float(corner.values.mean())!r}")
    if args.quad_order is not None:
        tel = telescoping_mixed_sum(f, A, args.scales)
        integral = residual_integral_form(f, A, args.scales, args.quad_order)
        dev = abs(integral.values - (tel.total.values - dec.approx.values)).max()
        print(f"integral_form_deviation {dev:.3e}")
    return EXIT_OK


def cmd_residual_report(args) -> int:
    dec = decompose(_load_input(args), _load_nonlinearity(args), args.scales)
    rep = residual_report(dec, args.alpha)
    _emit(rep.to_csv(), args.out)
    for flag in rep.flags:
        print(f"note: {flag}", file=sys.stderr)
    return EXIT_OK


def cmd_regularity(args) -> int:
    f = _load_input(args)
    rep = decay_report(tensor_analyze(f, args.scales.N, args.scales.Np))
    _emit(rep.to_csv(), args.out)
    try:
        est = estimate_alpha(rep, args.offset)
    except EstimateUndefinedError as exc:
        print(f"alpha_hat undefined: {exc}", file=sys.stderr)
        return EXIT_CHECK
    print(f"alpha_hat {est.alpha_hat!r} norm {est.norm_value!r} offset {est.exponent_offset:g}",
          file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_verify(args.suite, args.size, args.seed)
    for c in checks:
        print(c.line())
    if args.out is not None:
        args.out.write_text(checks_csv(checks), newline="\n")
    ok = all(c.passed for c in checks)
    print(f"{args.suite}: {'PASS' if ok else 'FAIL'} ({sum(c.passed for c in checks)}/{len(checks)})")
    return EXIT_OK if ok else EXIT_CHECK


def cmd_figure(args) -> int:
    for path in run_figure(args.out, grid_level=args.grid_level):
        print(path)
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "decompose": cmd_decompose,
    "residual-report": cmd_residual_report,
    "regularity": cmd_regularity,
    "verify": cmd_verify,
    "figure": cmd_figure,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ParaproductError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
