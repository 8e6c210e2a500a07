from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import lv
from lextrop import INF, HahnSeries, ParseError, RankMismatch, hs_add, hs_mul, lex_min, nu_mon, parse_hahn, project


def series(k: int):
    term = st.tuples(st.lists(st.integers(-2, 2), min_size=k, max_size=k), st.integers(-9, 9))
    return st.lists(term, max_size=6).map(lambda ts: HahnSeries([(lv("(" + ",".join(map(str, e)) + ")"), c) for e, c in ts], k))


def test_sum_cancels_terms():
    f = parse_hahn("t^(0,1)")
    g = parse_hahn("-t^(0,1)+t^(1,0)")
    assert hs_add(f, g) == parse_hahn("t^(1,0)")


def test_sum_identities():
    f = parse_hahn("3*t^(0,1)+5*t^(1,0)")
    zero = HahnSeries.zero(2)
    assert f + zero == f
    assert (f + (-f)).terms == ()
    assert (f - f).is_zero()


def test_product_expansion():
    f = parse_hahn("t^(0,1)+t^(1,0)")
    g = parse_hahn("t^(0,1)-t^(1,0)")
    assert hs_mul(f, g) == parse_hahn("t^(0,2)-t^(2,0)")


def test_product_identities():
    f = parse_hahn("3*t^(0,1)+5*t^(1,0)")
    assert f * HahnSeries.constant(1, 2) == f
    assert (f * HahnSeries.zero(2)).is_zero()


def test_monomial_valuation_examples():
    assert nu_mon(parse_hahn("3*t^(0,1)+5*t^(1,0)")) == lv("(0,1)")
    assert nu_mon(HahnSeries.zero(2)) is INF
    assert nu_mon(HahnSeries.constant(7, 2)) == lv("(0,0)")


def test_zero_coefficients_are_pruned():
    f = HahnSeries([(lv("(0,1)"), 0), (lv("(1,0)"), 2)], 2)
    assert f.support() == (lv("(1,0)"),)


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        parse_hahn("t^(0,1)") + parse_hahn("t^(1)")
    with pytest.raises(RankMismatch):
        HahnSeries([(lv("(1)"), 1)], 2)
    with pytest.raises(ValueError):
        HahnSeries([(INF, 1)], 2)


def test_text_round_trip():
    f = parse_hahn("3*t^(0,1)+5*t^(1,0)")
    assert str(f) == "3*t^(0,1)+5*t^(1,0)"
    assert parse_hahn(str(f)) == f
    assert parse_hahn("-1/2*t^(0,0)+7") == HahnSeries.constant(Fraction(13, 2), 2)


@pytest.mark.parametrize("text", ["3*t^(0,1) 5*t^(1,0)", "t^(0,1)+t^(1)", "", "t^(inf)", "x"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_hahn(text)


def test_parse_zero_needs_rank():
    with pytest.raises(ParseError):
        parse_hahn("0")
    assert parse_hahn("0", 2).is_zero()


@given(st.integers(1, 3).flatmap(lambda k: st.tuples(series(k), series(k), series(k))))
def test_ring_laws(fgh):
    f, g, h = fgh
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f
    assert f + g == g + f


@given(st.integers(1, 3).flatmap(lambda k: st.tuples(series(k), series(k))))
def test_valuation_laws(fg):
    f, g = fg
    assert nu_mon(f * g) == nu_mon(f) + nu_mon(g)
    assert nu_mon(f + g) >= lex_min((nu_mon(f), nu_mon(g)))
    if nu_mon(f) != nu_mon(g):
        assert nu_mon(f + g) == lex_min((nu_mon(f), nu_mon(g)))


@given(series(3), st.integers(1, 3))
def test_truncation_can_only_raise_the_projected_valuation(f, j):
    truncated = f.truncate(j)
    assert nu_mon(truncated) >= project(nu_mon(f), j)
    lead = project(nu_mon(f), j)
    survivors = [c for e, c in f.terms if project(e, j) == lead]
    if not f.is_zero() and sum(survivors) != 0:
        assert nu_mon(truncated) == lead


def test_truncation_cancellation_example():
    f = parse_hahn("t^(0,0)-t^(0,1)")
    assert project(nu_mon(f), 1) == lv("(0)")
    assert nu_mon(f.truncate(1)) is INF
