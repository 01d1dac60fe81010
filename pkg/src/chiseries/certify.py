"""Irrationality certificates for factorial series.

If the value were a/b, then X_b = b! * sum_{n>b} chi(n)/n! would be a positive
integer. For b > M the geometric comparison gives X_b < M/b < 1, so only the
denominators b = 1..M need to be screened: for each one we enclose X_b
between exact rationals and show the enclosure holds no integer.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, factorial, floor
from typing import Any, Optional

from .evaluate import Interval, scaled_partial_sum
from .parser import SpecSyntaxError, parse_spec, render_spec
from .series import ChiSpec, SeriesClass, classify, effective_bound, rational_shortcut

FORMAT_VERSION = "1"
SCREEN_DOUBLINGS = 12
MAX_REPORTED_GAPS = 10
# below this many records per worker a process pool costs more than it saves
RECORDS_PER_WORKER = 64


class RationalSeriesError(ValueError):
    def __init__(self, value: Fraction):
        super().__init__(f"series is rational: {format_ratio(value)}")
        self.value = value


class ScreeningInconclusive(ArithmeticError):
    def __init__(self, b: int, terms: int):
        super().__init__(f"screening inconclusive for b={b} (last N={terms})")
        self.b = b
        self.terms = terms


class CertificateFormatError(ValueError):
    """The certificate text is not structurally a certificate."""


def format_ratio(r: Fraction) -> str:
    return f"{r.numerator}/{r.denominator}"


def x_partial(spec: ChiSpec, b: int, N: int) -> Fraction:
    """Exact sum_{n=b+1}^{N} b! * chi(n)/n!."""
    if N <= b:
        raise ValueError(f"need N > b, got N={N}, b={b}")
    num, den = scaled_partial_sum(spec, b + 1, N)
    return Fraction(num, den)


def x_tail_width(M: int, b: int, N: int) -> Fraction:
    return Fraction(M * factorial(b), factorial(N) * N)


def x_enclosure(spec: ChiSpec, b: int, N: int) -> Interval:
    lo = x_partial(spec, b, N)
    return Interval(lo, lo + x_tail_width(effective_bound(spec), b, N))


def theorem_bound(spec: ChiSpec, b: int) -> Fraction:
    """M/b, a strict upper bound on X_b."""
    if b < 1:
        raise ValueError("b must be at least 1")
    return Fraction(effective_bound(spec), b)


def factorial_inequality_check(b: int, n: int) -> bool:
    """Exact test of b!/n! <= (1+b)^-(n-b); equality occurs only at n = b+1."""
    if n <= b:
        raise ValueError(f"need n > b, got n={n}, b={b}")
    return Fraction(factorial(b), factorial(n)) <= Fraction(1, (1 + b) ** (n - b))


def integer_free(x: Interval) -> bool:
    return floor(x.hi) < ceil(x.lo) or x.hi < 1


@dataclass(frozen=True)
class DenominatorRecord:
    b: int
    terms_used: int
    x_lo: Fraction
    x_hi: Fraction

    @property
    def excluded_integers(self) -> bool:
        return self.x_lo > 0 and integer_free(Interval(self.x_lo, self.x_hi))


@dataclass(frozen=True)
class LargeDenominatorArgument:
    """For b > M: X_b < M/b <= M/(M+1) < 1, so X_b is not a positive integer."""

    M: int

    @property
    def bound(self) -> Fraction:
        return Fraction(self.M, self.M + 1)

    def statements(self) -> list[str]:
        return [
            "if the value equals a/b then X_b = a*(b-1)! - sum_{n<=b} chi(n)*b!/n! is an integer",
            "X_b > 0 because the cycle contains a nonzero coefficient, hence X_b >= 1",
            f"for b > {self.M}: X_b < {self.M}/b <= {format_ratio(self.bound)} < 1",
        ]


@dataclass(frozen=True)
class Certificate:
    spec: ChiSpec
    bound_M: int
    screening: tuple[DenominatorRecord, ...]
    large_b: Fraction
    verdict: str = "irrational"
    format_version: str = FORMAT_VERSION
    metadata: Optional[dict] = field(default=None, compare=False)

    @property
    def large_b_argument(self) -> LargeDenominatorArgument:
        return LargeDenominatorArgument(self.bound_M)

    @property
    def max_terms_used(self) -> int:
        return max((r.terms_used for r in self.screening), default=0)


@dataclass(frozen=True)
class VerificationOutcome:
    failures: tuple[tuple[str, str], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures


def screening_start(spec: ChiSpec, b: int) -> int:
    return b + 2 * len(spec.cycle) + 8


def screening_cap(spec: ChiSpec, b: int) -> int:
    return screening_start(spec, b) * 2**SCREEN_DOUBLINGS


def screen_denominator(spec: ChiSpec, b: int) -> DenominatorRecord:
    """Find N for which the enclosure of X_b is positive and integer-free."""
    if b < 1:
        raise ValueError("b must be at least 1")
    if classify(spec) is not SeriesClass.CERTIFIABLE_IRRATIONAL:
        raise RationalSeriesError(rational_shortcut(spec))
    N = screening_start(spec, b)
    for _ in range(SCREEN_DOUBLINGS + 1):
        x = x_enclosure(spec, b, N)
        if x.lo > 0 and integer_free(x):
            return DenominatorRecord(b, N, x.lo, x.hi)
        N *= 2
    raise ScreeningInconclusive(b, N // 2)


def _screen_range(spec: ChiSpec, bs: list[int]) -> list[DenominatorRecord]:
    return [screen_denominator(spec, b) for b in bs]


def certify(spec: ChiSpec, jobs: int = 1) -> Certificate:
    if classify(spec) is SeriesClass.EVENTUALLY_ZERO:
        raise RationalSeriesError(rational_shortcut(spec))
    M = effective_bound(spec)
    bs = list(range(1, M + 1))
    workers = min(jobs, M // RECORDS_PER_WORKER)
    if workers > 1:
        chunks = [bs[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            parts = pool.map(_screen_range, [spec] * len(chunks), chunks)
            records = sorted((r for part in parts for r in part), key=lambda r: r.b)
    else:
        records = _screen_range(spec, bs)
    return Certificate(
        spec=spec,
        bound_M=M,
        screening=tuple(records),
        large_b=Fraction(M, M + 1),
    )


def verify(cert: Certificate) -> VerificationOutcome:
    """Replay every check in the certificate from the spec and terms_used alone."""
    failures: list[tuple[str, str]] = []

    def fail(where: str, reason: str) -> None:
        failures.append((where, reason))

    spec = cert.spec
    if cert.format_version != FORMAT_VERSION:
        fail("format_version", f"unsupported format version {cert.format_version!r}")
    if cert.verdict != "irrational":
        fail("verdict", f"unexpected verdict {cert.verdict!r}")
    if not any(spec.cycle):
        fail("spec", "cycle has no nonzero value; series is rational")
    M = effective_bound(spec)
    if cert.bound_M != M:
        fail("bound_M", f"bound_M {cert.bound_M} does not match spec bound {M}")

    # coverage of b = 1..M
    seen = [r.b for r in cert.screening]
    seen_set = set(seen)
    # M may be huge in a forged certificate; only scan as far as gaps can be named
    gaps = [b for b in range(1, min(M, len(seen) + MAX_REPORTED_GAPS) + 1) if b not in seen_set]
    for b in gaps[:MAX_REPORTED_GAPS]:
        fail(f"b={b}", f"screening gap at b={b}")
    if M > len(seen) + MAX_REPORTED_GAPS and len(gaps) < MAX_REPORTED_GAPS:
        fail("screening", f"{len(seen)} records cannot cover b=1..{M}")
    for b in sorted(b for b in seen_set if not 1 <= b <= M):
        fail(f"b={b}", f"record b={b} outside 1..{M}")
    for b in sorted({b for b in seen if seen.count(b) > 1}):
        fail(f"b={b}", f"duplicate record for b={b}")
    if seen != sorted(seen):
        fail("screening", "records not in increasing b order")

    for r in cert.screening:
        where = f"b={r.b}"
        if r.b < 1:
            continue
        if r.terms_used <= r.b:
            fail(where, f"terms_used {r.terms_used} must exceed b")
            continue
        if r.terms_used > screening_cap(spec, r.b):
            fail(where, f"terms_used {r.terms_used} exceeds the screening cap")
            continue
        lo = x_partial(spec, r.b, r.terms_used)
        hi = lo + x_tail_width(M, r.b, r.terms_used)
        if r.x_lo != lo or r.x_hi != hi:
            fail(where, "enclosure endpoint mismatch")
            continue
        if not lo > 0:
            fail(where, "enclosure not strictly positive")
        if not integer_free(Interval(lo, hi)):
            fail(where, "enclosure contains an integer")

    expected = Fraction(M, M + 1)
    if cert.large_b != expected:
        fail("large_b", f"bound {format_ratio(cert.large_b)} != {format_ratio(expected)}")
    elif not cert.large_b < 1:
        fail("large_b", "bound is not below 1")
    return VerificationOutcome(tuple(failures))


# --- serialization ---------------------------------------------------------


def certificate_to_dict(cert: Certificate) -> dict[str, Any]:
    out: dict[str, Any] = {
        "format_version": cert.format_version,
        "spec": render_spec(cert.spec),
        "bound_M": str(cert.bound_M),
        "screening": [
            {
                "b": str(r.b),
                "terms_used": str(r.terms_used),
                "x_lo": format_ratio(r.x_lo),
                "x_hi": format_ratio(r.x_hi),
            }
            for r in cert.screening
        ],
        "large_b": {"bound": format_ratio(cert.large_b)},
        "verdict": cert.verdict,
    }
    if cert.metadata:
        out["metadata"] = cert.metadata
    return out


def certificate_to_json(cert: Certificate) -> str:
    return json.dumps(certificate_to_dict(cert), indent=2, ensure_ascii=False) + "\n"


def _natural(value: Any, name: str) -> int:
    if not isinstance(value, str) or not value.isdigit() or not value.isascii():
        raise CertificateFormatError(f"{name}: expected a decimal string, got {value!r}")
    return int(value)


def parse_ratio(value: Any, name: str = "ratio") -> Fraction:
    if not isinstance(value, str) or value.count("/") != 1:
        raise CertificateFormatError(f"{name}: expected 'num/den', got {value!r}")
    num_s, den_s = value.split("/")
    neg = num_s.startswith("-")
    num = _natural(num_s[1:] if neg else num_s, name)
    den = _natural(den_s, name)
    if den == 0:
        raise CertificateFormatError(f"{name}: zero denominator")
    r = Fraction(-num if neg else num, den)
    if format_ratio(r) != value:
        raise CertificateFormatError(f"{name}: {value!r} is not in lowest terms")
    return r


def certificate_from_dict(data: Any) -> Certificate:
    if not isinstance(data, dict):
        raise CertificateFormatError("certificate must be a JSON object")
    try:
        version = data["format_version"]
        spec_text = data["spec"]
        bound = data["bound_M"]
        screening = data["screening"]
        large_b = data["large_b"]["bound"]
        verdict = data["verdict"]
    except (KeyError, TypeError) as exc:
        raise CertificateFormatError(f"missing field {exc}") from None
    if not isinstance(version, str) or not isinstance(verdict, str):
        raise CertificateFormatError("format_version and verdict must be strings")
    if not isinstance(spec_text, str):
        raise CertificateFormatError("spec must be a string")
    try:
        spec = parse_spec(spec_text)
    except SpecSyntaxError as exc:
        raise CertificateFormatError(f"spec: {exc}") from None
    if not isinstance(screening, list):
        raise CertificateFormatError("screening must be a list")
    records = []
    for i, item in enumerate(screening):
        if not isinstance(item, dict):
            raise CertificateFormatError(f"screening[{i}] must be an object")
        try:
            records.append(
                DenominatorRecord(
                    b=_natural(item["b"], f"screening[{i}].b"),
                    terms_used=_natural(item["terms_used"], f"screening[{i}].terms_used"),
                    x_lo=parse_ratio(item["x_lo"], f"screening[{i}].x_lo"),
                    x_hi=parse_ratio(item["x_hi"], f"screening[{i}].x_hi"),
                )
            )
        except KeyError as exc:
            raise CertificateFormatError(f"screening[{i}]: missing field {exc}") from None
    return Certificate(
        spec=spec,
        bound_M=_natural(bound, "bound_M"),
        screening=tuple(records),
        large_b=parse_ratio(large_b, "large_b.bound"),
        verdict=verdict,
        format_version=version,
        metadata=data.get("metadata"),
    )


def certificate_from_json(text: str) -> Certificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"invalid JSON: {exc}") from None
    return certificate_from_dict(data)
