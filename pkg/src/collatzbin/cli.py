"""Command-line interface.

Batch-oriented subcommands over the library, one line of argparse glue
per capability. Inputs are decimal by default; --binary switches to raw
bit strings. Exit codes: 0 on success (including truncated iterations,
which are reported in the output, not as failures), 1 on domain errors,
2 on usage errors. The default step cap for orbit walks can be set with
the COLLATZBIN_CAP environment variable; --cap overrides it per call.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional

from . import collatz, compose, traceio, verify
from .bitnat import BinaryNat
from .classify import classify, hard_number
from .errors import (
    CapExceeded,
    CheckpointError,
    DomainError,
    ParityError,
    ResourceError,
)
from .powersum import derivation_trace, from_powersum, shift_powers

CAP_ENV_VAR = "COLLATZBIN_CAP"

__all__ = ["main", "CAP_ENV_VAR"]


def _default_cap() -> int:
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None:
        return collatz.DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise DomainError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise DomainError(f"{CAP_ENV_VAR} must be >= 1, got {cap}")
    return cap


def _parse_value(text: str, binary: bool) -> BinaryNat:
    return BinaryNat(text) if binary else BinaryNat.from_decimal(text)


def _cap_of(args) -> int:
    return args.cap if args.cap is not None else _default_cap()


def _cmd_trace(args) -> int:
    n = _parse_value(args.n, args.binary)
    cap = _cap_of(args)
    if args.format == "table":
        try:
            chain = collatz.odd_chain(n, cap)
        except CapExceeded:
            print("truncated")
            return 0
        out = traceio.render_table(chain)
    else:
        trace = collatz.sequence(n, cap)
        if args.format == "scratch":
            out = traceio.render_scratch(trace)
        elif args.format == "points":
            out = traceio.render_points(trace)
        else:
            out = traceio.render_machine(trace)
    sys.stdout.write(out)
    return 0


def _cmd_classify(args) -> int:
    n = _parse_value(args.n, args.binary)
    print(f"{classify(n).value} {n.bits}")
    return 0


def _cmd_path(args) -> int:
    n = _parse_value(args.n, args.binary)
    walk = " ".join(v.to_decimal() for v in compose.tree_path(n))
    steps = str(compose.decompose(n))
    print(f"{walk} / {steps}" if steps else f"{walk} /")
    return 0


def _cmd_decompose(args) -> int:
    n = _parse_value(args.n, args.binary)
    try:
        records = derivation_trace(n, _cap_of(args))
    except CapExceeded:
        print("truncated")
        return 0
    if args.format == "machine":
        sys.stdout.write(traceio.render_machine(records))
        return 0
    for rec in records:
        value = from_powersum(rec.before).to_decimal()
        nxt = from_powersum(shift_powers(rec.after, rec.shift)).to_decimal()
        print(f"{value} = {rec.before} -> {rec.raw} -> {rec.after} -> shift {rec.shift} -> {nxt}")
    return 0


def _cmd_stopping_time(args) -> int:
    n = _parse_value(args.n, args.binary)
    try:
        print(collatz.stopping_time(n, _cap_of(args)))
    except CapExceeded:
        print("truncated")
    return 0


def _cmd_hard(args) -> int:
    k = args.k
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    a = hard_number(k)
    t = a.mul3_add1()
    print(f"a_{k} = {a.to_decimal()} ({a.bits})")
    print(f"T(a_{k}) = {t.to_decimal()} ({t.bits})")
    value = a
    for _ in range(2 * k + 1):
        value, _kind = collatz.step(value)
    verdict = "ok" if value.is_one() else f"failed, landed on {value.to_decimal()}"
    print(f"T^{2 * k + 1}(a_{k}) = 1: {verdict}")
    return 0


def _cmd_verify(args) -> int:
    lo = _parse_value(args.lo, args.binary)
    hi = _parse_value(args.hi, args.binary)
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    if args.resume:
        state = verify.checkpoint_load(args.checkpoint)
        if (state.lo, state.hi) != (lo.to_int(), hi.to_int()):
            raise DomainError(
                f"checkpoint covers [{state.lo}, {state.hi}), not [{lo.to_decimal()}, {hi.to_decimal()})"
            )
        report = verify.checkpoint_resume(args.checkpoint, jobs=jobs)
    else:
        report = verify.verify_range(
            lo,
            hi,
            step_cap=args.cap if args.cap is not None else verify.DEFAULT_STEP_CAP,
            chunk_size=args.chunk,
            jobs=jobs,
            checkpoint_path=args.checkpoint,
        )
    sys.stdout.write(verify.summarize(report))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collatzbin",
        description="Binary-string toolkit for the 3n+1 map: traces, digit classes, "
        "tree paths, power-sum derivations, and range verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def value_arg(p, name="n"):
        p.add_argument(name, help="input value, decimal unless --binary")
        p.add_argument("--binary", action="store_true", help="read the value as a raw bit string")

    def cap_arg(p):
        p.add_argument(
            "--cap",
            type=int,
            default=None,
            metavar="K",
            help=f"step budget (default ${CAP_ENV_VAR} or {collatz.DEFAULT_CAP})",
        )

    p = sub.add_parser("trace", help="walk the orbit of n and render it")
    value_arg(p)
    cap_arg(p)
    p.add_argument(
        "--format",
        choices=("table", "scratch", "points", "machine"),
        default="scratch",
        help="table = odd chain rows, scratch = annotated orbit, "
        "points = index,value rows, machine = lossless records",
    )
    p.set_defaults(fn=_cmd_trace)

    p = sub.add_parser("classify", help="digit class of n")
    value_arg(p)
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("path", help="tree walk from 1 to n and its step string")
    value_arg(p)
    p.set_defaults(fn=_cmd_path)

    p = sub.add_parser("decompose", help="power-sum derivation of the reduced orbit")
    value_arg(p)
    cap_arg(p)
    p.add_argument(
        "--format",
        choices=("text", "machine"),
        default="text",
        help="text = one merge line per reduced step, machine = lossless records",
    )
    p.set_defaults(fn=_cmd_decompose)

    p = sub.add_parser("stopping-time", help="least m with T^m(n) = 1")
    value_arg(p)
    cap_arg(p)
    p.set_defaults(fn=_cmd_stopping_time)

    p = sub.add_parser("hard", help="k-th alternating number and its collapse")
    p.add_argument("k", type=int)
    p.set_defaults(fn=_cmd_hard)

    p = sub.add_parser("verify", help="check convergence for every n in [lo, hi)")
    p.add_argument("lo", help="inclusive lower bound")
    p.add_argument("hi", help="exclusive upper bound")
    p.add_argument("--binary", action="store_true", help="read bounds as raw bit strings")
    p.add_argument(
        "--cap",
        type=int,
        default=None,
        metavar="K",
        help=f"step budget per value (default {verify.DEFAULT_STEP_CAP})",
    )
    p.add_argument(
        "--chunk",
        type=int,
        default=verify.DEFAULT_CHUNK_SIZE,
        metavar="C",
        help="values per work chunk",
    )
    p.add_argument("--checkpoint", metavar="FILE", help="save resumable state here")
    p.add_argument(
        "--resume",
        action="store_true",
        help="continue from --checkpoint instead of starting over",
    )
    p.add_argument(
        "--jobs",
        type=int,
        default=None,
        metavar="J",
        help="worker processes (default: all processors)",
    )
    p.set_defaults(fn=_cmd_verify)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "resume", False) and not args.checkpoint:
        parser.error("--resume requires --checkpoint")
    try:
        return args.fn(args)
    except (DomainError, ParityError, ResourceError, CheckpointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
