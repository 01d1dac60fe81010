"""Coefficient sequences for factorial series.

A series is described by a finite prefix followed by a repeating cycle of
nonnegative integers. The value it denotes is sum(chi(n) / n!) over n >= 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence


class SpecError(ValueError):
    """Raised when a ChiSpec would violate its invariants."""


class SeriesClass(enum.Enum):
    EVENTUALLY_ZERO = "EventuallyZero"
    CERTIFIABLE_IRRATIONAL = "CertifiableIrrational"


@dataclass(frozen=True)
class ChiSpec:
    """Prefix + periodic cycle description of the coefficient sequence."""

    prefix: tuple[int, ...] = ()
    cycle: tuple[int, ...] = field(default=(1,))
    declared_bound: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        for v in self.prefix + self.cycle:
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise SpecError(f"coefficients must be nonnegative integers, got {v!r}")
        if not self.cycle:
            raise SpecError("cycle must be nonempty")
        if self.declared_bound is not None:
            bound = self.declared_bound
            if not isinstance(bound, int) or isinstance(bound, bool) or bound < 1:
                raise SpecError(f"bound must be a positive integer, got {bound!r}")
            for v in self.prefix + self.cycle:
                if v > bound:
                    raise SpecError(f"value {v} exceeds bound {bound}")


def chi_at(spec: ChiSpec, n: int) -> int:
    if n < 0:
        raise ValueError("index must be nonnegative")
    k = len(spec.prefix)
    if n < k:
        return spec.prefix[n]
    return spec.cycle[(n - k) % len(spec.cycle)]


def effective_bound(spec: ChiSpec) -> int:
    """The bound M: declared if present, else the largest coefficient, never below 1."""
    if spec.declared_bound is not None:
        return spec.declared_bound
    return max(max(spec.prefix + spec.cycle), 1)


def classify(spec: ChiSpec) -> SeriesClass:
    if any(spec.cycle):
        return SeriesClass.CERTIFIABLE_IRRATIONAL
    return SeriesClass.EVENTUALLY_ZERO


def rational_shortcut(spec: ChiSpec) -> Optional[Fraction]:
    """Exact value of an eventually-zero series, or None for any other spec."""
    if classify(spec) is not SeriesClass.EVENTUALLY_ZERO:
        return None
    return sum(
        (Fraction(v, factorial(n)) for n, v in enumerate(spec.prefix)),
        Fraction(0),
    )


def subtract_e(spec: ChiSpec) -> ChiSpec:
    """Spec for the value minus e, obtained by lowering every coefficient by one."""
    if any(v == 0 for v in spec.prefix + spec.cycle):
        raise SpecError("subtract_e requires χ(n) ≥ 1 for all n")
    bound = spec.declared_bound
    # bound >= max value >= 1; a declared bound of 1 means every value is 1
    new_bound = None if bound is None else max(bound - 1, 1)
    return ChiSpec(
        prefix=tuple(v - 1 for v in spec.prefix),
        cycle=tuple(v - 1 for v in spec.cycle),
        declared_bound=new_bound,
    )


def _primes_up_to(limit: int) -> list[int]:
    sieve = [True] * (limit + 1)
    sieve[0:2] = [False, False]
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = [False] * len(sieve[p * p :: p])
    return [p for p, is_p in enumerate(sieve) if is_p]


BUILTIN_EXAMPLES: dict[str, ChiSpec] = {
    "example1": ChiSpec(cycle=(3, 5, 7)),
    "example3": ChiSpec(cycle=tuple(_primes_up_to(101))),
    # 1 + cos(n*pi) alternates 2, 0
    "example4": ChiSpec(cycle=(2, 0)),
}


def builtin_example(name: str) -> ChiSpec:
    try:
        return BUILTIN_EXAMPLES[name]
    except KeyError:
        valid = ", ".join(sorted(BUILTIN_EXAMPLES))
        raise SpecError(f"unknown example {name!r}; valid names: {valid}") from None


def make_spec(
    cycle: Sequence[int],
    prefix: Sequence[int] = (),
    bound: Optional[int] = None,
) -> ChiSpec:
    return ChiSpec(prefix=tuple(prefix), cycle=tuple(cycle), declared_bound=bound)
