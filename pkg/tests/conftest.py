"""Shared oracles and strategies.

The reference values here are computed with plain term-by-term Fraction
sums and never touch the package's evaluator.
"""

from fractions import Fraction
from math import factorial, floor

import pytest
from hypothesis import strategies as st

from chiseries import ChiSpec


def ref_series(coeff, terms):
    return sum((Fraction(coeff(n), factorial(n)) for n in range(terms)), Fraction(0))


def ref_e(terms=100):
    return ref_series(lambda n: 1, terms)


def ref_inv_e(terms=200):
    return ref_series(lambda n: (-1) ** n, terms)


def round_digits(x, k):
    units = floor(x * 10**k + Fraction(1, 2))
    whole, frac = divmod(units, 10**k)
    return f"{whole}.{frac:0{k}d}"


def spec_strategy(max_len=6, max_value=50, nonzero_cycle=False, max_prefix=4, bounded=True):
    values = st.integers(0, max_value)
    cycles = st.lists(values, min_size=1, max_size=max_len)
    if nonzero_cycle:
        cycles = cycles.filter(any)

    @st.composite
    def build(draw):
        prefix = draw(st.lists(values, max_size=max_prefix))
        cycle = draw(cycles)
        bound = None
        if bounded and draw(st.booleans()):
            bound = max(prefix + cycle + [1]) + draw(st.integers(0, 20))
        return ChiSpec(tuple(prefix), tuple(cycle), bound)

    return build()


@pytest.fixture
def e_ref():
    return ref_e()


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: exit criteria for the build")


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" in rep.nodeid and rep.when == "call" or (
                outcome == "error" and "test_acceptance.py" in rep.nodeid
            ):
                lines.append((rep.nodeid, "PASS" if outcome == "passed" else "FAIL"))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, status in sorted(lines):
        terminalreporter.write_line(f"{status}  {nodeid.split('::', 1)[1]}")
