"""Command line interface: ``logcy validate|reduce|classify|equiv|enumerate|dot``.

Exit codes (stable):

    0  success; valid; Equivalent
    1  invalid divisor (validate, reduce, classify, dot); NotEquivalent (equiv)
    2  Unknown (equiv)
    3  unreadable or malformed input file
    4  reduction stuck at a non-minimal configuration
    5  not a minimal model, or no case of the enumeration matches
    6  unsupported request (lattice conversion, strict mode without areas)
    7  invalid divisor given to equiv
    8  command line usage error
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import corpus, dot, files
from .divisor import validate
from .equivalence import (
    DEFAULT_BUDGET,
    EQUIVALENT,
    INDEXED,
    NOT_EQUIVALENT,
    UNINDEXED,
    StrictNeedsAreas,
    decide,
)
from .lattice import AmbientLattice, Kind, LatticeError, format_combination
from .reduction import (
    InvalidDivisor,
    NoMatchingCase,
    NonMinimalAmbient,
    StuckNonMinimal,
    classify_minimal,
    reduce_to_minimal,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NOT_EQUIVALENT = 1
EXIT_UNKNOWN = 2
EXIT_INPUT = 3
EXIT_STUCK = 4
EXIT_NO_MATCH = 5
EXIT_UNSUPPORTED = 6
EXIT_EQUIV_INVALID = 7
EXIT_USAGE = 8


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(path: str):
    try:
        return files.read_divisor(path)
    except OSError as exc:
        raise _Fail(EXIT_INPUT, f"{path}: {exc.strerror}") from exc
    except files.ParseError as exc:
        raise _Fail(EXIT_INPUT, f"{path}: {exc}") from exc
    except LatticeError as exc:
        raise _Fail(EXIT_INPUT, f"{path}: {exc}") from exc


def _load_valid(path: str, code: int = EXIT_INVALID):
    D = _load(path)
    rep = validate(D)
    if not rep.ok:
        print(f"{path}: invalid")
        print(rep)
        raise _Fail(code, "")
    return D


def cmd_validate(args) -> int:
    D = _load(args.path)
    rep = validate(D)
    if rep.ok:
        print(f"{args.path}: valid ({D.lattice}, {D.k} components)")
        return EXIT_OK
    print(f"{args.path}: invalid")
    print(rep)
    return EXIT_INVALID


def cmd_reduce(args) -> int:
    D = _load_valid(args.path)
    try:
        trace = reduce_to_minimal(D, args.bound)
    except StuckNonMinimal as exc:
        print(f"stuck non-minimal: {exc}")
        if args.trace:
            _write_trace(args.trace, exc.trace)
        return EXIT_STUCK
    except (NoMatchingCase, NonMinimalAmbient) as exc:
        print(f"no matching case: {exc}")
        return EXIT_NO_MATCH
    for i, st in enumerate(trace.steps):
        tag = "Toric" if st.kind == "toric" else "NonToric"
        print(f"step {i + 1}: {tag}({st.component + 1}) contracts {st.contracted} in {st.source}")
    print(f"steps: {len(trace)}")
    print(f"exhaustive: {'yes' if trace.exhaustive else 'no'}")
    print(f"label: {trace.label}")
    if args.trace:
        _write_trace(args.trace, trace)
    return EXIT_OK


def _write_trace(path: str, trace) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(files.dumps_trace(trace))


def cmd_classify(args) -> int:
    D = _load_valid(args.path)
    try:
        print(classify_minimal(D))
    except NonMinimalAmbient as exc:
        print(f"not a minimal model: {exc}")
        return EXIT_NO_MATCH
    except NoMatchingCase as exc:
        print(f"no matching case: {exc}")
        return EXIT_NO_MATCH
    return EXIT_OK


def cmd_equiv(args) -> int:
    A = _load_valid(args.a, EXIT_EQUIV_INVALID)
    B = _load_valid(args.b, EXIT_EQUIV_INVALID)
    mode = INDEXED if args.indexed else UNINDEXED
    try:
        v = decide(A, B, mode=mode, strict=args.strict, budget=args.budget)
    except StrictNeedsAreas as exc:
        print(str(exc))
        return EXIT_UNSUPPORTED
    except InvalidDivisor as exc:
        print(exc)
        return EXIT_EQUIV_INVALID
    print(v)
    if v.witness is not None:
        names = v.witness.lattice.basis_names
        for nm, img in zip(names, v.witness.images):
            print(f"  {nm} -> {format_combination(img, names)}")
    for note in v.notes:
        print(f"note: {note}")
    if v.status == EQUIVALENT:
        return EXIT_OK
    if v.status == NOT_EQUIVALENT:
        return EXIT_NOT_EQUIVALENT
    return EXIT_UNKNOWN


def _param_range(text: str) -> range:
    try:
        lo, hi = text.split(":")
        return range(int(lo), int(hi) + 1)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from exc


def cmd_enumerate(args) -> int:
    if args.ambient == "all":
        ambients = None
    else:
        kind = Kind(args.ambient)
        twists = (0, 1) if kind is Kind.ELLIPTIC_RULED and args.twist is None else (args.twist or 0,)
        ambients = [AmbientLattice(kind, 0, t if kind is Kind.ELLIPTIC_RULED else 0) for t in twists]
    entries = corpus.build_corpus(
        ambients,
        ks=None if args.k is None else [args.k],
        params=args.param_range,
        blowups=args.blowups,
        seed=args.seed,
        max_length=args.max_length,
    )
    if args.out:
        corpus.write_corpus(entries, args.out)
        print(f"wrote {len(entries)} files to {args.out}")
    else:
        for e in entries:
            print(f"{e.filename}\t{e.label}\t{' '.join(map(str, e.moves)) or '-'}")
    return EXIT_OK


def cmd_dot(args) -> int:
    D = _load_valid(args.path)
    text = dot.to_dot(D)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # argparse's own status 2 would collide with Unknown
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="logcy",
        description="Homological equivalence of log Calabi-Yau divisors.",
        epilog="LOGCY_BOUND overrides the default degree bound of the exceptional class search.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a divisor file")
    s.add_argument("path")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("reduce", help="blow down to a minimal model")
    s.add_argument("path")
    s.add_argument("--trace", metavar="OUT", help="write the trace as JSON lines")
    s.add_argument("--bound", type=int, default=None, help="degree bound of the search")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("classify", help="label a minimal model")
    s.add_argument("path")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("equiv", help="decide homological equivalence")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--strict", action="store_true", help="also match areas")
    s.add_argument("--indexed", action="store_true", help="C1_j must go to C2_j")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("enumerate", help="write minimal models and random blow-ups")
    s.add_argument("--ambient", default="all", choices=["all"] + [k.value for k in Kind])
    s.add_argument("--twist", type=int, choices=(0, 1), default=None)
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--param-range", type=_param_range, default=range(-3, 4), metavar="LO:HI")
    s.add_argument("--blowups", type=int, default=0, metavar="N", help="blown-up variants per model")
    s.add_argument("--max-length", type=int, default=6)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", metavar="DIR")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("dot", help="export the dual graph")
    s.add_argument("path")
    s.add_argument("--out")
    s.set_defaults(func=cmd_dot)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fail as exc:
        if str(exc):
            print(str(exc), file=sys.stderr)
        return exc.code
    except LatticeError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())
