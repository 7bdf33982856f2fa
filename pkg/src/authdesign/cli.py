"""Command line front end.

Exit status: 0 on success, 1 when an input fails validation, 2 on usage
errors (bad flags, unreadable files).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import authcode as ac
from . import formats
from .designs import (
    DesignError,
    EDFSpec,
    NoneFound,
    OrderedDesign,
    check_equitable,
    develop_bases,
    equitable_order,
    equitable_order_from_bases,
    equitable_order_splitting,
    validate_bibd,
    validate_edf,
    validate_splitting_bibd,
)
from .oracle import Attack, BudgetExceeded, GameSpec, best_strategy, monte_carlo
from .reproduce import run_all
from .threshold import SchemeError, ShareSecrecyError, robustness, share_secrecy
from .transform import ConversionError, authcode_to_threshold, dual, threshold_to_authcode


class Failure(Exception):
    """Validation failure; reported on stderr with exit status 1."""


class Usage(Exception):
    """Reported on stderr with exit status 2."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise Usage(f"cannot read {path}: {exc.strerror}") from None


def _parse(fn, path: str):
    try:
        return fn(_read(path))
    except (formats.ParseError, DesignError, ValueError) as exc:
        raise Failure(f"{path}: {exc}") from None


def _write(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _params_line(p) -> str:
    return f"v={p.v} b={p.b} r={p.r} k={p.k} lambda={p.lam} u={p.u} c={p.c}"


def cmd_gen(args) -> None:
    bb = _parse(formats.parse_baseblocks, args.base)
    c = bb.c
    if args.order == "keep":
        design = develop_bases(bb.bases, bb.n)
    elif bb.u == 1:
        # plain blocks: spread each block over c columns, one point per cell
        try:
            design = equitable_order(develop_bases(bb.bases, bb.n).blocks(), bb.n, bb.c)
        except DesignError as exc:
            raise Failure(str(exc)) from None
        c = 1
    else:
        try:
            design = equitable_order_from_bases(bb.bases, bb.n, bb.u, bb.c, budget=args.budget)
        except DesignError as exc:
            raise Failure(str(exc)) from None
        if isinstance(design, NoneFound):
            raise Failure(f"no equitable ordering found ({design.nodes} nodes searched)")
    _write(formats.emit_design(design, c), args.output)


def cmd_order(args) -> None:
    df = _parse(formats.parse_design, args.design)
    design, c = df.design, df.c
    try:
        if c == 1 or design.u == 1:
            blocks = design.blocks()
            k = len(blocks[0]) if blocks else 0
            result = equitable_order(blocks, design.v, k)
            c = 1
        else:
            result = equitable_order_splitting(design, design.u, c, budget=args.budget)
    except DesignError as exc:
        raise Failure(str(exc)) from None
    if isinstance(result, NoneFound):
        raise Failure(f"no equitable ordering found ({result.nodes} nodes searched, not a proof of nonexistence)")
    _write(formats.emit_design(result, c), args.output)


def _validate_design(design: OrderedDesign, c: int) -> list[str]:
    lines = []
    if c == 1 or design.u == 1:
        lines.append("bibd " + _params_line(validate_bibd(design)))
        if design.u > 1:
            lines.append(f"equitable = {_equitable(design)}")
    else:
        lines.append("splitting_bibd " + _params_line(validate_splitting_bibd(design, design.u, c)))
        lines.append(f"equitable = {_equitable(design)}")
    return lines


def _equitable(design: OrderedDesign) -> str:
    try:
        return str(check_equitable(design))
    except DesignError as exc:
        pos, point, count = exc.witness
        return f"fail position={pos} point={point} count={count}"


def cmd_validate(args) -> None:
    text = _read(args.file)
    try:
        kind = formats.detect(text)
    except formats.ParseError as exc:
        raise Failure(f"{args.file}: {exc}") from None
    try:
        if kind == "DESIGN":
            df = formats.parse_design(text)
            lines = _validate_design(df.design, df.c)
        elif kind == "BASEBLOCKS":
            bb = formats.parse_baseblocks(text)
            lines = []
            if len(bb.bases) == 1 and bb.c > 1:
                lam = validate_edf(EDFSpec(bb.n, bb.bases[0]))
                lines.append(f"edf n={bb.n} k={bb.u} c={bb.c} lambda={lam}")
            else:
                lines += _validate_design(develop_bases(bb.bases, bb.n), bb.c)
        elif kind == "AUTHCODE":
            code = formats.parse_authcode(text)
            c = ac.splitting_number(code)
            lines = [f"authcode v={code.v} b={code.b} u={code.u} splitting={'nonuniform' if c is None else c}"]
        else:
            scheme = formats.parse_threshold(text)
            share_secrecy(scheme)
            lines = [f"threshold22 s={scheme.n_secrets} a1={scheme.a1} a2={scheme.a2} rules={len(scheme.rules)}"]
    except (formats.ParseError, DesignError, SchemeError, ShareSecrecyError, ValueError) as exc:
        raise Failure(f"{args.file}: {exc}") from None
    _write("\n".join(lines) + "\n", None)


def cmd_analyze(args) -> None:
    code = _parse(formats.parse_authcode, args.authcode)
    if args.sourcedist:
        try:
            code = code.with_sources(formats.parse_dist(args.sourcedist))
        except ValueError as exc:
            raise Usage(f"--sourcedist: {exc}") from None
    report = ac.analyze(code)
    text = "# adversary values: per-observation optimal substitution, averaged\n" + report.to_text()
    _write(text, args.output)


def cmd_dual(args) -> None:
    code = _parse(formats.parse_authcode, args.authcode)
    try:
        d = dual(code)
    except ConversionError as exc:
        raise Failure(f"{args.authcode}: {exc}") from None
    _write(formats.emit_authcode(d), args.output)


def cmd_convert(args) -> None:
    if args.to_threshold:
        code = _parse(formats.parse_authcode, args.to_threshold)
        _write(formats.emit_threshold(authcode_to_threshold(code)), args.output)
    else:
        scheme = _parse(formats.parse_threshold, args.to_authcode)
        try:
            code = threshold_to_authcode(scheme)
        except ConversionError as exc:
            raise Failure(f"{args.to_authcode}: {exc}") from None
        _write(formats.emit_authcode(code), args.output)


def cmd_simulate(args) -> None:
    text = _read(args.file)
    try:
        kind = formats.detect(text)
        target = formats.parse_authcode(text) if kind == "AUTHCODE" else formats.parse_threshold(text)
    except (formats.ParseError, DesignError, ValueError) as exc:
        raise Failure(f"{args.file}: {exc}") from None
    try:
        spec = GameSpec(target, Attack(args.attack))
    except ValueError as exc:
        raise Usage(str(exc)) from None
    if args.trials < 1:
        raise Usage("--trials must be positive")
    if not 0 <= args.seed < 1 << 64:
        raise Usage("--seed must be an unsigned 64-bit integer")
    try:
        strategy = best_strategy(spec, budget=args.budget)
    except BudgetExceeded as exc:
        raise Failure(str(exc)) from None
    _write(monte_carlo(spec, strategy, args.trials, args.seed).line() + "\n", args.output)


def cmd_verify_paper(args) -> None:
    results = run_all()
    lines = []
    for r in results:
        lines.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.number}. {r.title}")
        for label in r.failures():
            lines.append(f"       failed: {label}")
        for note in r.notes:
            lines.append(f"       note: {note}")
    _write("\n".join(lines) + "\n", None)
    if not all(r.passed for r in results):
        raise Failure(f"{sum(not r.passed for r in results)} criteria failed")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 on usage errors already; keep its format
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="authdesign", description="Authentication codes and robust threshold schemes from designs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def out(sp):
        sp.add_argument("-o", "--output", help="write here instead of standard output")

    sp = sub.add_parser("gen", help="develop base blocks into a design")
    sp.add_argument("--base", required=True, help="%%BASEBLOCKS file")
    sp.add_argument("--order", choices=("keep", "equitable"), default="keep")
    sp.add_argument("--budget", type=int, default=200_000)
    out(sp)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("order", help="equitably order a design")
    sp.add_argument("design")
    sp.add_argument("--budget", type=int, default=200_000)
    out(sp)
    sp.set_defaults(func=cmd_order)

    sp = sub.add_parser("validate", help="validate any supported file")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("analyze", help="exact attack values of a code")
    sp.add_argument("authcode")
    sp.add_argument("--sourcedist", help="source probabilities, e.g. '1/2 1/4 1/4'")
    out(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("dual", help="dual code (keys and messages swapped)")
    sp.add_argument("authcode")
    out(sp)
    sp.set_defaults(func=cmd_dual)

    sp = sub.add_parser("convert", help="code <-> (2,2)-threshold scheme")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--to-threshold", metavar="AUTHCODE")
    g.add_argument("--to-authcode", metavar="THRESHOLD")
    out(sp)
    sp.set_defaults(func=cmd_convert)

    sp = sub.add_parser("simulate", help="Monte Carlo run of the best strategy")
    sp.add_argument("file", help="%%AUTHCODE or %%THRESHOLD22 file")
    sp.add_argument("--attack", required=True, choices=[a.value for a in Attack])
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--budget", type=int, default=10**7, help="enumeration budget for the strategy")
    out(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify-paper", help="run every reproduction check")
    sp.set_defaults(func=cmd_verify_paper)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except Failure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
