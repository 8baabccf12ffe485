"""Command-line front end: ``densescan scan|verify|count|dims``.

Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 precondition
violation, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import nsf
from .chain import (
    ProcessingChain,
    chain_dims,
    eval_dilate,
    eval_relax,
    eval_slide,
    eval_stride,
    exact_scan,
    mixed_scan,
    relaxed_scan,
    shift_and_stitch,
)
from .complexity import emit_report
from .config import load_chain
from .errors import ParseError, PreconditionError
from .verify import Manifest, run_verification

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_PRECONDITION, EXIT_IO = 0, 1, 2, 3, 4

MODES = ("stride", "slide", "exact", "dilate", "relax", "relaxed-scan", "stitch", "mixed")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits with 2, which is our parse code too
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _parse_mode(mode: str, level: Optional[int]) -> tuple[str, Optional[int]]:
    name, _, suffix = mode.partition(":")
    if name not in MODES:
        raise ParseError(f"unknown mode {mode!r}; choose from {', '.join(MODES)} (mixed as mixed:<level>)")
    if name == "mixed":
        if suffix:
            try:
                level = int(suffix)
            except ValueError:
                raise ParseError(f"mixed level must be an integer, got {suffix!r}") from None
        if level is None:
            raise ParseError("mixed mode needs a level: --mode mixed:<l> or --level <l>")
    elif suffix:
        raise ParseError(f"mode {name} takes no suffix")
    return name, level


def _check_channels(chain: ProcessingChain, xi) -> None:
    m = len(chain.dummy)
    if xi and len(xi[0]) != m:
        raise PreconditionError(f"chain expects {m} channels, input has {len(xi[0])}")


def run_scan(chain: ProcessingChain, xi, mode: str, level: Optional[int]) -> nsf.Tensor:
    _check_channels(chain, xi)
    if mode == "stride":
        return nsf.from_signal(eval_stride(chain, xi))
    if mode == "slide":
        return nsf.from_fragmented(eval_slide(chain, xi))
    fn = {
        "exact": exact_scan,
        "dilate": eval_dilate,
        "relax": eval_relax,
        "relaxed-scan": relaxed_scan,
        "stitch": shift_and_stitch,
    }.get(mode)
    if fn is not None:
        return nsf.from_signal(fn(chain, xi))
    return nsf.from_signal(mixed_scan(chain, level, xi))


def cmd_scan(args) -> int:
    mode, level = _parse_mode(args.mode, args.level)
    chain = load_chain(args.chain)
    xi = nsf.to_signal(nsf.read(args.input))
    out = run_scan(chain, xi, mode, level)
    text = nsf.dumps(out)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    manifest = Manifest(
        seed=args.seed,
        trials=args.trials,
        max_layers=args.max_layers,
        max_c=args.max_c,
        max_k=args.max_k,
        max_d=args.max_d,
    )
    report = run_verification(manifest)
    text = report.text()
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_VERIFY


CSV_COLUMNS = (
    "D", "layer", "regime",
    "f_measured", "f_predicted", "g_measured", "g_predicted",
    "S_f_num", "S_f_den", "S_g_num", "S_g_den",
    "limit_f", "limit_g",
)


def count_csv(chain: ProcessingChain, d_from: int, d_to: int, d_step: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in emit_report(chain, d_from, d_to, d_step):
        sf = (row.S_f.numerator, row.S_f.denominator) if row.S_f is not None else ("", "")
        sg = (row.S_g.numerator, row.S_g.denominator) if row.S_g is not None else ("", "")
        writer.writerow(
            (row.D, row.layer, row.regime,
             row.f_measured, row.f_predicted, row.g_measured, row.g_predicted,
             *sf, *sg, row.limit_f, row.limit_g)
        )
    return buf.getvalue()


def _d_range(args, chain: ProcessingChain) -> tuple[int, int, int]:
    d_from = args.d_from if args.d_from is not None else chain.B
    d_to = args.d_to if args.d_to is not None else d_from
    if args.d_step < 1:
        raise ParseError("--d-step must be positive")
    return d_from, d_to, args.d_step


def cmd_count(args) -> int:
    chain = load_chain(args.chain)
    d_from, d_to, d_step = _d_range(args, chain)
    text = count_csv(chain, d_from, d_to, d_step)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def dims_table(chain: ProcessingChain, D: int) -> str:
    rep = chain_dims(chain, D)
    na = "n/a"
    lines = [f"D={D} B={rep.B} L={chain.L} k*={list(rep.kstar)}"]
    lines.append(f"{'j':>3} {'u':>5} {'U_row':>6} {'U_col':>6} {'V':>6} {'W':>6}")
    for j in range(chain.L + 1):
        row = rep.U_row[j] if rep.U_row else na
        col = rep.U_col[j] if rep.U_col else na
        w = rep.W[j] if rep.W else na
        lines.append(f"{j:>3} {rep.u[j]:>5} {row:>6} {col:>6} {rep.V[j]:>6} {w:>6}")
    if rep.U_row is None:
        lines.append(f"slide: not applicable ({rep.slide_reason})")
    if rep.W is None:
        lines.append(f"relax: not applicable ({rep.relax_reason})")
    for level, entry in sorted(rep.mixed.items()):
        if isinstance(entry, str):
            lines.append(f"mixed level {level}: not applicable ({entry})")
        else:
            shapes = ", ".join(f"{r}x{c}" for r, c in zip(*entry))
            lines.append(f"mixed level {level}: {shapes}")
    return "\n".join(lines) + "\n"


def cmd_dims(args) -> int:
    chain = load_chain(args.chain)
    d_from, d_to, d_step = _d_range(args, chain)
    text = "".join(dims_table(chain, D) for D in range(d_from, d_to + 1, d_step))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="densescan", description="Exact dense signal scanning with processing chains.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("scan", help="evaluate a chain on a signal file")
    s.add_argument("--chain", required=True)
    s.add_argument("--input", required=True)
    s.add_argument("--output")
    s.add_argument("--mode", default="exact", help="|".join(MODES[:-1]) + "|mixed:<level>")
    s.add_argument("--level", type=int)
    s.set_defaults(func=cmd_scan)

    v = sub.add_parser("verify", help="run the randomized oracle suites")
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--trials", type=int, default=200)
    v.add_argument("--max-layers", type=int, default=3)
    v.add_argument("--max-c", type=int, default=3)
    v.add_argument("--max-k", type=int, default=3)
    v.add_argument("--max-d", type=int, default=64)
    v.add_argument("--output")
    v.set_defaults(func=cmd_verify)

    for name, func, helptext in (
        ("count", cmd_count, "emit evaluation counts and speedups as CSV"),
        ("dims", cmd_dims, "print closed-form intermediate dimensions"),
    ):
        c = sub.add_parser(name, help=helptext)
        c.add_argument("--chain", required=True)
        c.add_argument("--d-from", type=int)
        c.add_argument("--d-to", type=int)
        c.add_argument("--d-step", type=int, default=1)
        c.add_argument("--output")
        c.set_defaults(func=func)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        name = exc.filename if exc.filename else ""
        print(f"I/O error: {exc.strerror or exc} {name}".rstrip(), file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
