from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polylift.errors import DomainMismatch, ParseError
from polylift.scalar import Domain, QuadScalar, format_scalar, parse_domain, parse_scalar, sign, sqrt

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=40)
quads = st.builds(lambda a, b: QuadScalar(a, b, 3), rationals, rationals)


@given(quads, quads, quads)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    assert x - x == 0
    if x != 0:
        assert x * (1 / x) == 1
        assert (y / x) * x == y


@given(quads, rationals)
def test_mixed_with_rationals(x, q):
    assert x + q - q == x
    assert (x * q) == (q * x)
    if q != 0:
        assert x / q * q == x


def test_sign_against_high_precision():
    import random

    rng = random.Random(7)
    mpmath.mp.dps = 60
    for _ in range(10_000):
        a = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 1000))
        b = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 1000))
        if rng.random() < 0.2:
            # near-cancelling pairs stress the exact rule
            b = Fraction(round(-float(a) * 1000 / 3 ** 0.5), 1000)
        x = QuadScalar(a, b, 3)
        v = mpmath.mpf(a.numerator) / a.denominator + mpmath.mpf(b.numerator) / b.denominator * mpmath.sqrt(3)
        expected = 0 if v == 0 else (1 if v > 0 else -1)
        assert x.sign() == expected


def test_sign_rule_cases():
    assert sign(QuadScalar(1, 1, 3)) == 1
    assert sign(QuadScalar(-1, -1, 3)) == -1
    assert sign(QuadScalar(2, -1, 3)) == 1  # 2 > sqrt 3
    assert sign(QuadScalar(1, -1, 3)) == -1
    assert sign(QuadScalar(0, -2, 3)) == -1
    assert sign(QuadScalar(0, 0, 3)) == 0
    assert sqrt(3) * sqrt(3) == 3


@pytest.mark.parametrize("text, value", [
    ("7", Fraction(7)),
    ("-3/4", Fraction(-3, 4)),
    ("sqrt(3)", QuadScalar(0, 1, 3)),
    ("-1+sqrt(3)", QuadScalar(-1, 1, 3)),
    ("1/2*sqrt(3)", QuadScalar(0, Fraction(1, 2), 3)),
    ("1/2-3/4*sqrt(3)", QuadScalar(Fraction(1, 2), Fraction(-3, 4), 3)),
])
def test_parse(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("bad", ["", "1/0", "abc", "1+", "2sqrt(3)", "1//2", "sqrt(x)"])
def test_parse_rejects(bad):
    with pytest.raises(ParseError):
        parse_scalar(bad)


@given(quads)
def test_format_round_trip(x):
    text = format_scalar(x)
    assert " " not in text
    assert parse_scalar(text) == x
    assert format_scalar(parse_scalar(text)) == text


def test_canonical_text():
    assert format_scalar(QuadScalar(-1, 1, 3)) == "-1+1*sqrt(3)"
    assert format_scalar(QuadScalar(Fraction(1, 2), Fraction(-1, 2), 3)) == "1/2-1/2*sqrt(3)"
    assert format_scalar(Fraction(6, 4)) == "3/2"


def test_mixed_radicands_rejected():
    with pytest.raises(DomainMismatch):
        QuadScalar(1, 1, 2) + QuadScalar(1, 1, 3)
    with pytest.raises(DomainMismatch):
        Domain(3).parse("sqrt(2)")
    with pytest.raises(DomainMismatch):
        Domain.of([sqrt(2), sqrt(3)])
    with pytest.raises(DomainMismatch):
        Domain().parse("sqrt(3)")


def test_domains():
    assert parse_domain("Q") == Domain()
    assert parse_domain("Q(sqrt 3)") == Domain(3)
    assert parse_domain("Q(sqrt(3))") == Domain(3)
    assert str(Domain(3)) == "Q(sqrt 3)"
    with pytest.raises(ParseError):
        parse_domain("R")
    with pytest.raises(ParseError):
        Domain(12)


@settings(max_examples=50)
@given(rationals)
def test_rationals_reduced(q):
    x = QuadScalar(q, 1, 3) - sqrt(3)
    assert x == q
    assert Fraction(q).denominator > 0
