from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from thompson_links.analysis import (BinaryExpansion, InsufficientPrecision, PLMap, PLMapError,
                                     compose, digits, evaluate, first_zero_after, fixes,
                                     fixes_interval, from_pl_map, inverse_map, is_in_commutator,
                                     is_in_rectangular, parse_binary, parse_number,
                                     parse_rational, to_pl_map)
from thompson_links.group import Element, generator, parse_word
from thompson_links.trees import ParseError

from conftest import elements

x0, x1 = generator(0), generator(1)


def brute_evaluate(g: Element, x: Fraction) -> Fraction:
    """Independent oracle: find the leaf interval containing x and map it affinely."""
    for u, v in g.branches:
        a = Fraction(int(u, 2), 2 ** len(u)) if u else Fraction(0)
        b = Fraction(int(v, 2), 2 ** len(v)) if v else Fraction(0)
        if a <= x <= a + Fraction(1, 2 ** len(u)):
            return b + (x - a) * Fraction(2 ** len(u), 2 ** len(v))
    raise AssertionError


def test_x0_map():
    m = to_pl_map(x0)
    assert m.breakpoints == ((0, 0), (Fraction(1, 4), Fraction(1, 2)), (Fraction(1, 2), Fraction(3, 4)), (1, 1))
    assert m.slopes() == [2, 1, Fraction(1, 2)]
    assert evaluate(x0, Fraction(1, 3)) == Fraction(7, 12)


@given(elements(), st.fractions(0, 1))
def test_evaluate_matches_leaf_oracle(g, x):
    assert evaluate(g, x) == brute_evaluate(g, x)


@given(elements(), elements(), st.lists(st.fractions(0, 1), min_size=1, max_size=10))
def test_homomorphism(a, b, xs):
    m = compose(to_pl_map(a), to_pl_map(b))
    assert m == to_pl_map(a * b)
    for x in xs:
        assert evaluate(a * b, x) == evaluate(b, evaluate(a, x))


@given(elements())
def test_round_trip_through_pl_maps(g):
    assert from_pl_map(to_pl_map(g)) == g
    assert inverse_map(to_pl_map(g)) == to_pl_map(g.inverse())


@pytest.mark.parametrize("pts", [
    [(0, 0), (1, 1), (1, 1)],
    [(0, 0), (Fraction(1, 3), Fraction(1, 3)), (1, 1)],
    [(0, 0), (Fraction(1, 2), Fraction(1, 8)), (1, 1)],
    [(0, 0), (Fraction(1, 2), Fraction(3, 8)), (1, 1)],
    [(0, Fraction(1, 2)), (1, 1)],
])
def test_pl_map_validation(pts):
    with pytest.raises(PLMapError):
        PLMap(tuple(pts))


def test_evaluate_out_of_range():
    with pytest.raises(ValueError):
        evaluate(x0, Fraction(3, 2))


def test_fixes():
    assert fixes(x0, 0) and fixes(x0, 1)
    assert not fixes(x0, Fraction(1, 2))
    assert fixes(x1, Fraction(1, 3))
    assert fixes_interval(x1, 0, Fraction(1, 2))
    assert not fixes_interval(x1, 0, Fraction(3, 4))


def test_membership():
    assert not is_in_commutator(x0)
    comm = x0.inverse() * x1.inverse() * x0 * x1
    assert is_in_commutator(comm)
    assert is_in_rectangular(x0, 1, 1)
    assert not is_in_rectangular(x0, 2, 1)
    assert is_in_rectangular(x0 ** 2, 2, 2)
    assert is_in_rectangular(x1, 5, 1)       # x1 is the identity near 0
    with pytest.raises(ValueError):
        is_in_rectangular(x0, 0, 1)


def test_relators_are_trivial():
    a, b = x0 * x1.inverse(), x0.inverse() * x1 * x0
    c = x0 ** -2 * x1 * x0 ** 2
    for u, v in ((a, b), (a, c)):
        r = u.inverse() * v.inverse() * u * v
        assert r.is_identity() and is_in_commutator(r)


def test_digits():
    assert digits(Fraction(1, 3), 6) == "010101"
    assert digits(Fraction(15, 32), 7) == "0111100"
    assert str(BinaryExpansion.of(Fraction(11, 24))) == "0.011(10)"
    assert BinaryExpansion.of(Fraction(11, 24)).value() == Fraction(11, 24)


@given(st.fractions(0, 1, max_denominator=2 ** 10).filter(lambda r: r < 1))
@settings(deadline=None)
def test_expansion_round_trip(r):
    e = BinaryExpansion.of(r)
    assert e.value() == r
    assert parse_binary(str(e)).value() == r


def test_truncated_expansions():
    e = parse_binary("0.0111...")
    assert e.truncated and e.interval() == (Fraction(7, 16), Fraction(1, 2))
    with pytest.raises(InsufficientPrecision):
        e.digit(4)
    with pytest.raises(InsufficientPrecision):
        first_zero_after(e, 1)
    assert first_zero_after(parse_binary("0.01110..."), 1) == 4


def test_first_zero_after_all_ones_tail():
    e = BinaryExpansion("01", "1")
    with pytest.raises(ValueError):
        first_zero_after(e, 1)
    assert first_zero_after(e, 0) == 0


def test_literals():
    assert parse_rational(" 3/ 4 ") == Fraction(3, 4)
    assert parse_number("0.0111(01)") == Fraction(11, 24)
    assert parse_number("0.01111") == Fraction(15, 32)
    assert isinstance(parse_number("0.01..."), BinaryExpansion)
    for bad in ("1/0", "abc", "0.2", "0.1(1)..."):
        with pytest.raises(ParseError):
            parse_number(bad)


def test_wreath_generator_parses():
    a = parse_word("x1^2 x2^-1 x1^-1")
    assert fixes_interval(a, 0, Fraction(1, 2))
