import dataclasses
import json
import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from chiseries import (
    ChiSpec,
    CertificateFormatError,
    RationalSeriesError,
    builtin_example,
    certificate_from_json,
    certificate_to_json,
    certify,
    effective_bound,
    factorial_inequality_check,
    screen_denominator,
    theorem_bound,
    verify,
    x_enclosure,
    x_partial,
)
from chiseries.certify import DenominatorRecord, integer_free, screening_start
from chiseries.oracle import direct_sum

from conftest import ref_e, ref_inv_e, spec_strategy

E1 = ChiSpec(cycle=(3, 5, 7))
E4 = ChiSpec(cycle=(2, 0))
E = ChiSpec(cycle=(1,))


def test_x_partial_examples():
    assert x_partial(E, 1, 3) == Fraction(2, 3)
    assert x_partial(E4, 2, 4) == Fraction(1, 6)
    assert x_partial(ChiSpec((0,) * 7, (0, 1)), 5, 6) == 0
    with pytest.raises(ValueError):
        x_partial(E, 3, 3)


@given(spec_strategy(), st.integers(1, 30), st.integers(1, 30))
def test_x_partial_matches_direct(spec, b, extra):
    N = b + extra
    expected = factorial(b) * (direct_sum(spec, N) - direct_sum(spec, b))
    assert x_partial(spec, b, N) == expected


def test_x_enclosure_examples():
    x = x_enclosure(E, 3, 40)
    assert 6 * ref_e(100) - 16 in x
    assert x.width < Fraction(1, 10**40)
    assert x_enclosure(E1, 8, 40).hi < Fraction(7, 8)
    x = x_enclosure(ChiSpec((1,), (0,)), 1, 2)
    assert x.lo == 0 and x.hi == Fraction(1, 4)


def test_theorem_bound():
    assert theorem_bound(E1, 8) == Fraction(7, 8)
    assert theorem_bound(E1, 7) == 1
    assert theorem_bound(builtin_example("example3"), 102) == Fraction(101, 102)


def test_factorial_inequality():
    assert factorial_inequality_check(2, 3)
    assert Fraction(factorial(2), factorial(3)) == Fraction(1, 3)
    assert factorial_inequality_check(2, 4)
    assert Fraction(2, 24) < Fraction(1, 9)
    assert factorial_inequality_check(20, 40)
    with pytest.raises(ValueError):
        factorial_inequality_check(3, 3)


def test_screen_examples():
    r = screen_denominator(E1, 1)
    true_x1 = direct_sum(E1, 200) - 8
    assert r.x_lo <= true_x1 <= r.x_hi
    assert r.excluded_integers and r.terms_used == 1 + 2 * 3 + 8

    r = screen_denominator(E, 1)
    assert r.x_lo <= ref_e(100) - 2 <= r.x_hi
    assert 0 < r.x_lo and r.x_hi < 1

    r = screen_denominator(E4, 3)
    true_x3 = 6 * (ref_e(200) + ref_inv_e(200) - 3)
    assert r.x_lo <= true_x3 <= r.x_hi
    assert 0 < r.x_lo and r.x_hi < 1


def test_screen_refines_past_long_zero_prefix():
    spec = ChiSpec((0,) * 40, (1,))
    r = screen_denominator(spec, 1)
    assert r.terms_used > screening_start(spec, 1)
    assert r.excluded_integers


def test_certify_examples():
    c1 = certify(E1)
    assert [r.b for r in c1.screening] == list(range(1, 8))
    assert c1.verdict == "irrational"
    assert c1.large_b == Fraction(7, 8)
    c4 = certify(builtin_example("example4"))
    assert c4.bound_M == 2 and len(c4.screening) == 2
    with pytest.raises(RationalSeriesError) as info:
        certify(ChiSpec((3,), (0,)))
    assert info.value.value == 3
    assert "3/1" in str(info.value)


def test_certify_parallel_matches_serial():
    spec = ChiSpec(cycle=(1, 200))
    assert certify(spec, jobs=3) == certify(spec, jobs=1)


def test_verify_accepts_fresh():
    for name in ("example1", "example3", "example4"):
        assert verify(certify(builtin_example(name))).ok


def test_verify_detects_lowered_hi():
    cert = certify(E1)
    r = cert.screening[2]
    bad = dataclasses.replace(r, x_hi=r.x_lo - Fraction(1, 10**6))
    forged = dataclasses.replace(cert, screening=cert.screening[:2] + (bad,) + cert.screening[3:])
    out = verify(forged)
    assert not out.ok
    assert ("b=3", "enclosure endpoint mismatch") in out.failures


def test_verify_detects_gap():
    cert = certify(E1)
    forged = dataclasses.replace(cert, screening=cert.screening[:3] + cert.screening[4:])
    out = verify(forged)
    assert ("b=4", "screening gap at b=4") in out.failures


def test_verify_rejects_rational_spec():
    cert = certify(E1)
    forged = dataclasses.replace(cert, spec=ChiSpec((3,), (0,), 7))
    assert not verify(forged).ok


def test_verify_rejects_integer_containing_record():
    # consistent arithmetic but an enclosure too wide to exclude an integer
    spec = E1
    N = 3
    lo = x_partial(spec, 1, N)
    hi = lo + Fraction(7 * 1, factorial(N) * N)
    assert not integer_free(type(x_enclosure(spec, 1, N))(lo, hi))
    cert = certify(spec)
    forged = dataclasses.replace(
        cert, screening=(DenominatorRecord(1, N, lo, hi),) + cert.screening[1:]
    )
    assert ("b=1", "enclosure contains an integer") in verify(forged).failures


def test_json_layout():
    text = certificate_to_json(certify(builtin_example("example4")))
    assert text.endswith("\n")
    data = json.loads(text)
    assert list(data) == ["format_version", "spec", "bound_M", "screening", "large_b", "verdict"]
    assert data["spec"] == "periodic[2,0]"
    assert data["bound_M"] == "2"
    assert data["large_b"] == {"bound": "2/3"}
    assert list(data["screening"][0]) == ["b", "terms_used", "x_lo", "x_hi"]
    assert certificate_from_json(text) == certify(builtin_example("example4"))


def test_json_deterministic():
    a = certificate_to_json(certify(E1))
    b = certificate_to_json(certify(E1, jobs=2))
    assert a == b


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("verdict"),
        lambda d: d.__setitem__("bound_M", 7),
        lambda d: d["screening"][0].__setitem__("x_lo", "2/4"),
        lambda d: d["screening"][0].__setitem__("x_lo", "1/0"),
        lambda d: d.__setitem__("spec", "periodic["),
        lambda d: d.__setitem__("screening", {}),
    ],
)
def test_json_malformed(mutate):
    data = json.loads(certificate_to_json(certify(E1)))
    mutate(data)
    with pytest.raises(CertificateFormatError):
        certificate_from_json(json.dumps(data))


def test_json_truncated():
    text = certificate_to_json(certify(E1))
    with pytest.raises(CertificateFormatError):
        certificate_from_json(text[: len(text) // 2])


@settings(max_examples=40, deadline=None)
@given(spec_strategy(max_len=4, max_value=12, nonzero_cycle=True))
def test_certify_verify_round_trip(spec):
    cert = certify(spec)
    assert len(cert.screening) == effective_bound(spec)
    assert verify(certificate_from_json(certificate_to_json(cert))).ok


@settings(max_examples=60)
@given(spec_strategy(nonzero_cycle=True), st.integers(1, 30), st.integers(0, 20))
def test_nested_refinement_and_positivity(spec, b, extra):
    N = screening_start(spec, b) + len(spec.prefix) + extra
    coarse = x_enclosure(spec, b, N)
    fine = x_enclosure(spec, b, N + 25)
    assert coarse.lo <= fine.lo and fine.hi <= coarse.hi
    assert fine.lo > 0


@given(spec_strategy(nonzero_cycle=True), st.integers(1, 50))
def test_bound_chain_above_M(spec, offset):
    M = effective_bound(spec)
    b = M + offset
    N = screening_start(spec, b) + len(spec.prefix)
    assert x_enclosure(spec, b, N).hi < theorem_bound(spec, b) < 1


@given(
    st.integers(0, 10**6),
    st.integers(1, 12),
    st.lists(st.integers(0, 50), min_size=1, max_size=6),
)
def test_integrality_identity(a, b, chis):
    spec = ChiSpec(tuple(chis), (0,))
    r = Fraction(a, b)
    x = factorial(b) * r - sum(
        Fraction(factorial(b) * chis[n], factorial(n)) for n in range(min(b + 1, len(chis)))
    )
    assert x.denominator == 1
    # a finite series with value a'/b has X_b = b! * tail exactly an integer
    value = direct_sum(spec, len(chis))
    bb = value.denominator
    tail = factorial(bb) * (value - direct_sum(spec, bb))
    assert tail.denominator == 1


def test_single_field_mutation_flips_ok():
    rng = random.Random(7)
    cert = certify(E1)
    for _ in range(30):
        i = rng.randrange(len(cert.screening))
        r = cert.screening[i]
        field = rng.choice(["b", "terms_used", "x_lo", "x_hi"])
        value = getattr(r, field)
        delta = rng.choice([1, -1]) * (1 if isinstance(value, int) else Fraction(1, 10**rng.randint(1, 60)))
        bad = dataclasses.replace(r, **{field: value + delta})
        screening = cert.screening[:i] + (bad,) + cert.screening[i + 1 :]
        assert not verify(dataclasses.replace(cert, screening=screening)).ok
    assert not verify(dataclasses.replace(cert, bound_M=8)).ok
    assert not verify(dataclasses.replace(cert, large_b=Fraction(8, 9))).ok
    assert not verify(dataclasses.replace(cert, verdict="rational")).ok
