"""Brute-force checks that do not share code paths with the evaluator.

The functions here sum terms directly with ``math.factorial`` and compare
fractions one by one. They back the ``exclude`` command and act as ground
truth in the test suite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, floor
from typing import Any

from .certify import RationalSeriesError, format_ratio
from .evaluate import Interval, enclose_to_width, enclose_value
from .parser import render_spec
from .series import ChiSpec, SeriesClass, chi_at, classify, rational_shortcut

EXCLUSION_RETRIES = 6

PROVEN_EXCLUDED = "proven-excluded"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Witness:
    q: int
    p: int
    side: str  # "below" if p/q < lo, "above" if p/q > hi


@dataclass(frozen=True)
class ExclusionReport:
    spec: ChiSpec
    max_denominator: int
    enclosure: Interval
    result: str
    witnesses: tuple[Witness, ...]

    @property
    def excluded(self) -> bool:
        return self.result == PROVEN_EXCLUDED


def nearest_numerator(q: int, x: Fraction) -> int:
    return floor(q * x + Fraction(1, 2))


def check_denominators(enclosure: Interval, Q: int) -> tuple[list[Witness], list[int]]:
    """For q = 1..Q, test the one candidate p/q that could lie in the enclosure.

    Valid when the enclosure is narrower than 1/(2Q^2). Returns witnesses and
    the denominators whose candidate fell inside.
    """
    mid = enclosure.midpoint
    witnesses, hits = [], []
    for q in range(1, Q + 1):
        p = nearest_numerator(q, mid)
        cand = Fraction(p, q)
        if cand < enclosure.lo:
            witnesses.append(Witness(q, p, "below"))
        elif cand > enclosure.hi:
            witnesses.append(Witness(q, p, "above"))
        else:
            hits.append(q)
    return witnesses, hits


def exclude_rationals(spec: ChiSpec, Q: int) -> ExclusionReport:
    """Prove that no p/q with q <= Q equals the series value."""
    if Q < 1:
        raise ValueError("Q must be at least 1")
    if classify(spec) is not SeriesClass.CERTIFIABLE_IRRATIONAL:
        raise RationalSeriesError(rational_shortcut(spec))
    # strict: width <= 1/(2Q^2 + 1) < 1/(2Q^2)
    enc = enclose_to_width(spec, Fraction(1, 2 * Q * Q + 1))
    N = enc.terms_used
    for _ in range(EXCLUSION_RETRIES + 1):
        witnesses, hits = check_denominators(enc.interval, Q)
        if not hits:
            return ExclusionReport(spec, Q, enc.interval, PROVEN_EXCLUDED, tuple(witnesses))
        N *= 2
        enc = enclose_value(spec, N)
    return ExclusionReport(spec, Q, enc.interval, INCONCLUSIVE, tuple(witnesses))


def geometric_tail_closed_form(M: int, b: int) -> Fraction:
    """M * sum_{n>=1} (1+b)^-n = M * 1/(1 - 1/(1+b)) * 1/(b+1) = M/b."""
    if b < 1:
        raise ValueError("b must be at least 1")
    r = Fraction(1, 1 + b)
    return M * (1 / (1 - r)) * r


def deep_tail_probe(spec: ChiSpec, N: int, depth: int) -> Fraction:
    """Exact sum of chi(n)/n! for n in N+1 .. N+depth, a lower bound on the tail."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    return sum(
        (Fraction(chi_at(spec, n), factorial(n)) for n in range(N + 1, N + depth + 1)),
        Fraction(0),
    )


def direct_sum(spec: ChiSpec, N: int) -> Fraction:
    """Term-by-term sum of chi(n)/n! for n = 0..N."""
    return sum((Fraction(chi_at(spec, n), factorial(n)) for n in range(N + 1)), Fraction(0))


def report_to_dict(report: ExclusionReport) -> dict[str, Any]:
    return {
        "format_version": "1",
        "spec": render_spec(report.spec),
        "max_denominator": str(report.max_denominator),
        "enclosure": {
            "lo": format_ratio(report.enclosure.lo),
            "hi": format_ratio(report.enclosure.hi),
        },
        "result": report.result,
        "witnesses": [
            {"q": str(w.q), "p": str(w.p), "side": w.side} for w in report.witnesses
        ],
    }


def report_to_json(report: ExclusionReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"
