import itertools

import pytest

from slope_kernel.bijection import (
    DirectedPath,
    NEPath,
    SlopeBarrier,
    directed_to_ne,
    ne_to_directed,
    verify_bijection,
    verify_time_reversal,
)

B252 = SlopeBarrier(2, 5, 2)


def test_east_step():
    w = ne_to_directed(NEPath("E"), B252)
    assert w == DirectedPath(2, (2,))
    assert w.altitudes() == [2, 4]


def test_north_step_leaves_region():
    w = ne_to_directed(NEPath("N"), B252)
    assert w.jumps == (-5,)
    assert w.altitudes()[-1] == -3
    assert not B252.below(0, 1)


def test_empty_path():
    assert ne_to_directed(NEPath(""), B252) == DirectedPath(2, ())


def test_inverse_examples():
    assert directed_to_ne(DirectedPath(2, (2,)), B252) == NEPath("E")
    assert directed_to_ne(DirectedPath(2, (2, 2, -5)), B252) == NEPath("EEN")
    with pytest.raises(ValueError):
        directed_to_ne(DirectedPath(2, (3,)), B252)
    with pytest.raises(ValueError):
        directed_to_ne(DirectedPath(1, (2,)), B252)


def test_barrier_validation():
    with pytest.raises(ValueError):
        SlopeBarrier(2, 4, 2)
    with pytest.raises(ValueError):
        SlopeBarrier(0, 5, 1)
    SlopeBarrier(5, 2, 1)  # a > c is allowed by the map
    with pytest.raises(ValueError):
        NEPath("EX")


@pytest.mark.parametrize("barrier", [B252, SlopeBarrier(2, 3, 2), SlopeBarrier(1, 2, 1)])
def test_roundtrip_and_altitude_formula(barrier):
    for n in range(9):
        for word in itertools.product("EN", repeat=n):
            path = NEPath("".join(word))
            walk = ne_to_directed(path, barrier)
            assert directed_to_ne(walk, barrier) == path
            assert walk.altitudes() == [barrier.altitude(x, y) for x, y in path.points()]


def test_verify_small():
    r = verify_bijection(B252, 0)
    assert r["passed"] and r["counts"][0] == {"n": 0, "ne_below": 1, "walks_positive": 1}
    for barrier in (B252, SlopeBarrier(2, 3, 2)):
        r = verify_bijection(barrier, 10)
        assert r["passed"] and r["roundtrip"]


def test_touching_is_shifted_barrier():
    # touching the line y = (2x+3)/5 is staying strictly below y = (2x+4)/5
    touch = SlopeBarrier(2, 5, 3)
    strict = SlopeBarrier(2, 5, 4)
    for n in range(10):
        for word in itertools.product("EN", repeat=n):
            pts = NEPath("".join(word)).points()
            assert all(touch.below(x, y, True) for x, y in pts) == all(strict.below(x, y) for x, y in pts)


@pytest.mark.parametrize("abc", [(2, 5, 2), (2, 3, 2), (1, 2, 1), (3, 4, 1)])
def test_time_reversal(abc):
    assert verify_time_reversal(SlopeBarrier(*abc), 16)["passed"]
