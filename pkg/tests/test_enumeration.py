from fractions import Fraction as F
from math import comb

import pytest

from slope_kernel.core import DUCHON_JUMPS, KNUTH_JUMPS, JumpSet
from slope_kernel.enumeration import (
    brute_force_counts,
    brute_force_ne_below_line,
    build_area_table,
    build_counts,
    count_ne_below_line,
    duchon_excursions,
    duchon_mean_area,
    endpoint_counts,
    excursion_area_sums,
    knuth_AB,
    knuth_sequences,
)

from oracles import brute_mean_area, brute_meanders


def test_build_counts_examples():
    t = build_counts(KNUTH_JUMPS, 3, 0, 1)
    assert t.rows[0] == {3: 1}
    assert t.rows[1] == {8: 1, 1: 1}
    assert build_counts(KNUTH_JUMPS, 4, 0, 5).count(5, 1) == 3


@pytest.mark.parametrize("jumps", [KNUTH_JUMPS, DUCHON_JUMPS, JumpSet.parse("+1:2,-1:1,+3:1/2")])
@pytest.mark.parametrize("start,floor", [(0, None), (0, 0), (3, 0), (4, 1)])
def test_dp_matches_exhaustive(jumps, start, floor):
    n_max = 18 if len(jumps.jumps) == 2 else 11
    table = build_counts(jumps, start, floor, n_max)
    for n in range(n_max + 1):
        assert table.rows[n] == brute_force_counts(jumps, start, floor, n)


def test_walk_row_sums():
    table = build_counts(KNUTH_JUMPS, 0, None, 60)
    assert all(table.row_total(n) == 2**n for n in range(61))


def test_row_bound_and_nonnegative():
    table = build_counts(DUCHON_JUMPS, 0, 0, 40)
    for n, row in enumerate(table.rows):
        assert all(v > 0 for v in row.values())
        assert table.row_total(n) <= 2**n
        assert max(row) <= 2 * n


def test_support_periodicity():
    f0 = endpoint_counts(KNUTH_JUMPS, 3, 0, 100)
    g1 = endpoint_counts(KNUTH_JUMPS, 4, 1, 100)
    for n in range(101):
        if n % 7 != 5:
            assert f0[n] == 0 and g1[n] == 0
        else:
            assert f0[n] > 0 and g1[n] > 0


def test_endpoint_counts_match_table():
    table = build_counts(KNUTH_JUMPS, 4, 0, 60)
    assert endpoint_counts(KNUTH_JUMPS, 4, 1, 60) == [table.count(n, 1) for n in range(61)]


def test_knuth_small():
    assert knuth_AB(1) == (3, 2)
    a, b = knuth_AB(2)
    assert a + b == 110
    assert (a, b) == (brute_meanders((5, -2), 4, 1, 12), brute_meanders((5, -2), 3, 0, 12))
    a, b = knuth_AB(3)
    assert a + b == 3876
    with pytest.raises(ValueError):
        knuth_AB(0)
    seqs = knuth_sequences(3)
    assert seqs == ([3, 67, 2374], [2, 43, 1502])


@pytest.mark.parametrize("abc", [(2, 5), (2, 3), (1, 2)])
def test_time_reversal_meanders(abc):
    a, c = abc
    fwd, bwd = JumpSet.unit(a, -c), JumpSet.unit(-a, c)
    for b in range(1, 4):
        assert endpoint_counts(fwd, b, 0, 30) == endpoint_counts(bwd, 0, b, 30)


def test_ne_below_line_examples():
    assert count_ne_below_line(2, 5, 2, (0, 0)) == 1
    assert count_ne_below_line(2, 5, 1, (0, 1)) == 0
    # (4,1) under y = (2x+2)/5: the North step may happen once x >= 2
    assert count_ne_below_line(2, 5, 2, (4, 1)) == brute_force_ne_below_line(2, 5, 2, (4, 1)) == 3


@pytest.mark.parametrize("touching", [False, True])
def test_ne_below_line_vs_brute(touching):
    for a, c in ((2, 5), (2, 3), (1, 2)):
        for k in range(1, 6):
            for x in range(9):
                for y in range(6):
                    assert count_ne_below_line(a, c, k, (x, y), touching) == brute_force_ne_below_line(
                        a, c, k, (x, y), touching
                    )
    assert count_ne_below_line(1, 1, 0, (3, 3), True) == comb(6, 3) // 4  # Catalan


def test_duchon_counts():
    assert [duchon_excursions(n) for n in (0, 5, 7, 10)] == [1, 2, 0, 23]
    assert duchon_excursions(10) == brute_meanders((2, -3), 0, 0, 10)
    counts, _ = excursion_area_sums(DUCHON_JUMPS, 60)
    assert all(counts[n] == 0 for n in range(61) if n % 5)


def test_duchon_mean_area():
    assert duchon_mean_area(5) == F(25, 2)
    assert duchon_mean_area(10) == brute_mean_area((2, -3), 10)[1] == F(865, 23)
    assert duchon_mean_area(15) == brute_mean_area((2, -3), 15)[1]
    for bad in (0, 7, -5):
        with pytest.raises(ValueError):
            duchon_mean_area(bad)


def test_area_table_matches_streaming():
    table = build_area_table(DUCHON_JUMPS, 0, 0, 40)
    counts, areas = excursion_area_sums(DUCHON_JUMPS, 40)
    for n in range(0, 41, 5):
        assert table.counts.count(n, 0) == counts[n]
        assert table.twice_area[n].get(0, 0) == areas[n]
    assert table.mean_area(10, 0) == F(865, 23)


def test_csv_rows():
    rows = list(build_counts(KNUTH_JUMPS, 0, 0, 2).csv_rows())
    assert rows == [(0, 0, "1"), (1, 5, "1"), (2, 3, "1"), (2, 10, "1")]
