"""Independent reference computations used only by the tests."""
import itertools
from fractions import Fraction
from math import comb


def naive_series_mul(a, b, n):
    return [sum(a[i] * b[k - i] for i in range(k + 1) if i < len(a) and k - i < len(b)) for k in range(n)]


def brute_meanders(deltas, start, end, n):
    """Count jump words of length n from start to end never going below 0."""
    total = 0
    for word in itertools.product(deltas, repeat=n):
        alt = start
        for d in word:
            alt += d
            if alt < 0:
                break
        else:
            total += alt == end
    return total


def brute_mean_area(deltas, n):
    """Exact mean trapezoidal area of floor-0 excursions of length n."""
    count = twice = 0
    for word in itertools.product(deltas, repeat=n):
        alt, acc = 0, 0
        for d in word:
            nxt = alt + d
            if nxt < 0:
                break
            acc += alt + nxt
            alt = nxt
        else:
            if alt == 0:
                count += 1
                twice += acc
    return count, Fraction(twice, 2 * count) if count else None


def catalan_like(n):
    """2/(7n-1) C(7n-1, 2n) by plain rational arithmetic."""
    return Fraction(2, 7 * n - 1) * comb(7 * n - 1, 2 * n)
