"""Command-line entry point.

Exit codes: 0 success, 1 usage or parse error, 2 verification failed or
result inconclusive, 3 the input series is rational.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .certify import (
    CertificateFormatError,
    RationalSeriesError,
    ScreeningInconclusive,
    certificate_from_json,
    certificate_to_json,
    certify,
    format_ratio,
    verify,
)
from .evaluate import RoundingUndecidable, decimal, enclose_to_width
from .oracle import exclude_rationals, report_to_json
from .parser import SpecSyntaxError, parse_spec, render_spec
from .series import ChiSpec, SpecError, builtin_example

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2
EXIT_RATIONAL = 3


class _UsageError(Exception):
    pass


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def load_spec(args: argparse.Namespace) -> ChiSpec:
    if args.example is not None:
        return builtin_example(args.example)
    if args.file is not None:
        try:
            text = Path(args.file).read_text(encoding="utf-8")
        except OSError as exc:
            raise _UsageError(f"cannot read {args.file}: {exc.strerror}") from None
        return parse_spec(text)
    return parse_spec(args.spec)


def default_jobs() -> int:
    env = os.environ.get("CHI_JOBS")
    if env:
        try:
            return max(int(env), 1)
        except ValueError:
            _err(f"ignoring non-integer CHI_JOBS={env!r}")
    return os.cpu_count() or 1


def cmd_parse(args: argparse.Namespace) -> int:
    print(render_spec(load_spec(args)))
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    if args.digits < 1:
        raise _UsageError("--digits must be at least 1")
    spec = load_spec(args)
    try:
        print(decimal(spec, args.digits))
    except RoundingUndecidable as exc:
        _err(str(exc))
        return EXIT_FAILED
    if args.enclosure:
        enc = enclose_to_width(spec, Fraction(1, 10 ** (args.digits + 5)))
        print(f"terms_used: {enc.terms_used}")
        print(f"lo: {format_ratio(enc.interval.lo)}")
        print(f"hi: {format_ratio(enc.interval.hi)}")
    return EXIT_OK


def cmd_certify(args: argparse.Namespace) -> int:
    spec = load_spec(args)
    jobs = args.jobs if args.jobs is not None else default_jobs()
    try:
        cert = certify(spec, jobs=jobs)
    except RationalSeriesError as exc:
        print(exc)
        return EXIT_RATIONAL
    except ScreeningInconclusive as exc:
        _err(str(exc))
        return EXIT_FAILED
    if args.timestamp:
        cert = dataclasses.replace(cert, metadata={"created": _now()})
    text = certificate_to_json(cert)
    summary = (
        f"verdict: irrational  spec: {render_spec(spec)}  M: {cert.bound_M}  "
        f"records: {len(cert.screening)}  max terms_used: {cert.max_terms_used}  "
        f"b > M bound: {format_ratio(cert.large_b)} < 1"
    )
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(summary)
    else:
        sys.stdout.write(text)
        _err(summary)
    return EXIT_OK


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        text = Path(args.certificate).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise _UsageError(f"cannot read {args.certificate}: {exc}") from None
    try:
        cert = certificate_from_json(text)
    except CertificateFormatError as exc:
        raise _UsageError(f"malformed certificate: {exc}") from None
    outcome = verify(cert)
    if outcome.ok:
        print(
            f"ok: {len(cert.screening)} records verified for {render_spec(cert.spec)}, "
            f"b > {cert.bound_M} bound {format_ratio(cert.large_b)} < 1"
        )
        return EXIT_OK
    print(f"FAILED: {len(outcome.failures)} problem(s)")
    for where, reason in outcome.failures:
        print(f"  {where}: {reason}")
    return EXIT_FAILED


def cmd_exclude(args: argparse.Namespace) -> int:
    if args.max_den < 1:
        raise _UsageError("--max-den must be at least 1")
    spec = load_spec(args)
    try:
        report = exclude_rationals(spec, args.max_den)
    except RationalSeriesError as exc:
        print(exc)
        return EXIT_RATIONAL
    sys.stdout.write(report_to_json(report))
    return EXIT_OK if report.excluded else EXIT_FAILED


def _add_source(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--spec", help="inline spec, e.g. 'periodic[3,5,7]'")
    g.add_argument("--file", help="path to a .chi spec file")
    g.add_argument("--example", help="built-in example: example1, example3, example4")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        _err(f"{self.prog}: error: {message}")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chiseries", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", help="print the canonical form of a spec")
    _add_source(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval", help="certified decimal value")
    _add_source(p)
    p.add_argument("--digits", type=int, default=20)
    p.add_argument("--enclosure", action="store_true", help="also print exact endpoints")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("certify", help="write an irrationality certificate")
    _add_source(p)
    p.add_argument("-o", "--out", help="certificate path (default: stdout)")
    p.add_argument("--jobs", type=int, help="worker processes (default: $CHI_JOBS or CPU count)")
    p.add_argument("--timestamp", action="store_true", help="add a metadata block with the creation time")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="re-check a certificate")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("exclude", help="exclude rationals with small denominators")
    _add_source(p)
    p.add_argument("--max-den", type=int, required=True)
    p.set_defaults(func=cmd_exclude)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecSyntaxError as exc:
        _err(f"parse error: {exc}")
        return EXIT_USAGE
    except (SpecError, _UsageError) as exc:
        _err(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
