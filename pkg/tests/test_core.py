from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slope_kernel.core import (
    KNUTH_JUMPS,
    DUCHON_JUMPS,
    JumpSet,
    SeriesError,
    TruncSeries,
    binomial,
    check_rational_square,
    poly_from_jumps,
    series_add,
    series_div_unit,
    series_mul,
)

from oracles import naive_series_mul


def S(*coeffs, order=None, q=1):
    return TruncSeries.from_coeffs([F(c) for c in coeffs], order, q)


def same_upto(a, b):
    n = min(a.order, b.order)
    return a.truncate(n) == b.truncate(n)


# --- series examples -------------------------------------------------------


def test_difference_of_squares():
    assert series_mul(S(1, 1, order=2), S(1, -1, order=2)).coeffs == (1, 0, -1)


def test_square_of_branch_head():
    u = S(*([0, 1] + [0] * 6 + [F(1, 2)]), order=16)
    sq = (u * u).truncate(16)
    expected = [0] * 17
    expected[2], expected[9], expected[16] = 1, 1, F(1, 4)
    assert list(sq.coeffs) == expected


def test_div_by_unit_geometric():
    out = series_div_unit(S(0, 0, 1, 0), S(1, 1, 0, 0))
    assert out.order == 3
    assert list(out.coeffs) == [0, 0, 1, -1]


def test_div_cancels_shared_valuation():
    a = S(0, 0, 2, 4, 0, 0)
    b = S(0, 0, 1, 0, 0, 0)
    out = series_div_unit(a, b)
    assert list(out.coeffs[:2]) == [2, 4]


def test_div_unremovable_zero():
    with pytest.raises(SeriesError):
        series_div_unit(S(1, 1, 0), S(0, 1, 0))


def test_mismatched_ramification():
    with pytest.raises(SeriesError):
        series_add(S(1, 1), S(1, 1, q=2))


def test_no_coefficient_beyond_order():
    s = S(1, 2, 3)
    with pytest.raises(SeriesError):
        s[3]
    prod = S(1, 1, order=2) * S(1, 1, 1, 1, 1, order=4)
    assert prod.order == 2


def test_order_grows_with_valuation():
    # t**3 * (1 + t + O(t**3)) is known through t**5
    assert (TruncSeries.monomial(1, 3, 10) * S(1, 1, 0)).order == 5


def test_deramify_and_json_roundtrip():
    s = S(1, 0, F(2, 3), 0, 5, q=2)
    z = s.deramify()
    assert z.q == 1 and list(z.coeffs) == [1, F(2, 3), 5]
    assert TruncSeries.from_json(s.to_json()) == s
    assert s.to_json()["coeffs"][2] == ["2", "3"]
    with pytest.raises(SeriesError):
        S(0, 1, q=2).deramify()


def test_scalar_ops_and_power():
    s = S(1, 1, 0, 0)
    assert (s**3).coeffs == (1, 3, 3, 1)
    assert (s / 2).coeffs == (F(1, 2), F(1, 2), 0, 0)
    assert (2 - s).coeffs == (1, -1, 0, 0)


# --- property tests --------------------------------------------------------

coef = st.fractions(min_value=-5, max_value=5, max_denominator=7)
series = st.lists(coef, min_size=1, max_size=8).map(lambda cs: S(*cs))


@settings(max_examples=60, deadline=None)
@given(series, series, series)
def test_ring_axioms(a, b, c):
    assert same_upto(a * b, b * a)
    assert same_upto(a + b, b + a)
    assert same_upto((a * b) * c, a * (b * c))
    assert same_upto(a * (b + c), a * b + a * c)


@settings(max_examples=60, deadline=None)
@given(series, series)
def test_mul_matches_naive(a, b):
    prod = a * b
    naive = naive_series_mul(list(a.coeffs), list(b.coeffs), prod.order + 1)
    assert list(prod.coeffs) == naive


@settings(max_examples=60, deadline=None)
@given(series, st.lists(coef, min_size=1, max_size=8))
def test_div_inverts_mul(a, tail):
    b = S(1, *tail[1:], order=a.order) if len(tail) > 1 else S(1, order=a.order)
    b = b.truncate(a.order) if b.order > a.order else b.extend(a.order)
    assert same_upto((a * b) / b, a)


# --- binomial and jump sets ------------------------------------------------


@pytest.mark.parametrize("n,k,v", [(6, 2, 15), (13, 4, 715), (5, 7, 0)])
def test_binomial_examples(n, k, v):
    assert binomial(n, k) == v


def test_binomial_pascal():
    for n in range(1, 201):
        for k in range(1, n + 1):
            assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)


def test_jumpset_parse_and_period():
    js = JumpSet.parse("+5:1,-2:1")
    assert js == KNUTH_JUMPS
    assert js.period == 7 and js.is_unit
    assert DUCHON_JUMPS.period == 5
    assert JumpSet.parse("+5,-2:3/2").weight(-2) == F(3, 2)
    assert str(KNUTH_JUMPS) == "-2:1,+5:1"
    assert KNUTH_JUMPS.reversed() == JumpSet.unit(2, -5)


@pytest.mark.parametrize("bad", ["", "+5", "+5:0,-2", "+5,+5,-2", "5:x,-2", "+1,+2"])
def test_jumpset_rejects(bad):
    with pytest.raises(ValueError):
        JumpSet.parse(bad)


def test_jumpset_polynomial():
    assert KNUTH_JUMPS.evaluate(F(1, 2)) == 4 + F(1, 32)
    assert KNUTH_JUMPS.derivative(F(1), 1) == 3
    assert poly_from_jumps(KNUTH_JUMPS) == (2, {0: 1, 7: 1})
    assert poly_from_jumps(DUCHON_JUMPS) == (3, {0: 1, 5: 1})


def test_rational_square():
    assert check_rational_square(F(9, 4)) == F(3, 2)
    with pytest.raises(ValueError):
        check_rational_square(F(2))
