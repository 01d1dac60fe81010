"""Exact partial sums, tail bounds and certified decimal output."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, floor

from .series import ChiSpec, chi_at, effective_bound

# extra doublings of N allowed when deciding a rounding
ROUNDING_REFINEMENTS = 12


class RoundingUndecidable(ArithmeticError):
    pass


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class ValueEnclosure:
    interval: Interval
    terms_used: int
    tail_bound: Fraction


def scaled_partial_sum(spec: ChiSpec, start: int, stop: int) -> tuple[int, int]:
    """Return (num, den) with num/den = sum_{n=start}^{stop} chi(n) * (start-1)!/n!.

    den is stop!/(start-1)!. Horner form keeps everything over one common
    denominator: each step multiplies the running numerator by n.
    """
    num, den = 0, 1
    for n in range(start, stop + 1):
        num = num * n + chi_at(spec, n)
        den *= n
    return num, den


def partial_sum(spec: ChiSpec, N: int) -> Fraction:
    """Exact sum of chi(n)/n! for n = 0..N."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    num, den = scaled_partial_sum(spec, 1, N)
    # the n = 0 term has weight N!/0! = den
    return Fraction(chi_at(spec, 0) * den + num, den)


def tail_bound(spec: ChiSpec, N: int) -> Fraction:
    """M/(N*N!), an upper bound on sum_{n>N} chi(n)/n!.

    Each term chi(n)/n! <= M/(N! (N+1)^(n-N)); the geometric majorant sums to M/(N*N!).
    """
    if N < 1:
        raise ValueError("tail bound requires N >= 1")
    return Fraction(effective_bound(spec), N * factorial(N))


def enclose_value(spec: ChiSpec, N: int) -> ValueEnclosure:
    tail = tail_bound(spec, N)
    lo = partial_sum(spec, N)
    return ValueEnclosure(Interval(lo, lo + tail), N, tail)


def min_terms_for_width(M: int, eps: Fraction) -> int:
    """Smallest N >= 1 with M/(N*N!) <= eps."""
    if eps <= 0:
        raise ValueError("eps must be positive")

    def ok(n: int) -> bool:
        return Fraction(M, n * factorial(n)) <= eps

    hi = 1
    while not ok(hi):
        hi *= 2
    lo = hi // 2  # ok(lo) is False unless lo == 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return max(hi, 1)


def enclose_to_width(spec: ChiSpec, eps: Fraction) -> ValueEnclosure:
    eps = Fraction(eps)
    return enclose_value(spec, min_terms_for_width(effective_bound(spec), eps))


def _round_half_point_free(x: Interval) -> int | None:
    """Common nearest integer of every point of x, or None if a half-integer lies in x."""
    # nearest integer to t is floor(t + 1/2); it is constant on x iff no k + 1/2 is in x
    lo_r = floor(x.lo + Fraction(1, 2))
    hi_r = floor(x.hi + Fraction(1, 2))
    if lo_r != hi_r:
        return None
    if x.lo + Fraction(1, 2) == lo_r:
        # lower endpoint sits exactly on a rounding boundary
        return None
    return lo_r


def _format_scaled(units: int, k: int) -> str:
    whole, frac = divmod(units, 10**k)
    return f"{whole}.{frac:0{k}d}"


def decimal(spec: ChiSpec, k: int) -> str:
    """The value rounded to nearest with exactly k fractional digits.

    The enclosure is refined until all of it rounds to the same string.
    Raises RoundingUndecidable if it still straddles a boundary after
    ROUNDING_REFINEMENTS doublings of the term count.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    scale = 10**k
    enc = enclose_to_width(spec, Fraction(1, scale * 100))
    N = enc.terms_used
    for _ in range(ROUNDING_REFINEMENTS + 1):
        scaled = Interval(enc.interval.lo * scale, enc.interval.hi * scale)
        units = _round_half_point_free(scaled)
        if units is not None:
            return _format_scaled(units, k)
        N *= 2
        enc = enclose_value(spec, N)
    raise RoundingUndecidable(
        f"rounding undecidable at {k} digits: value lies on a rounding boundary"
    )
