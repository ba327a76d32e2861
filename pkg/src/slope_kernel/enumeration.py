"""Exact counting of directed walks, bridges, meanders and excursions.

The dynamic programs here are the ground truth the closed forms are checked
against.  Two styles coexist:

* :func:`build_counts` / :func:`build_area_table` keep the whole
  ``(length, altitude)`` table and are meant for small and medium lengths;
* :func:`endpoint_counts` and :func:`excursion_area_sums` stream one row at a
  time and discard altitudes that can no longer reach the target, which keeps
  the long runs (path length ~1500) in memory.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .core import DUCHON_JUMPS, KNUTH_JUMPS, JumpSet

__all__ = [
    "CountTable",
    "AreaTable",
    "build_counts",
    "build_area_table",
    "brute_force_counts",
    "endpoint_counts",
    "knuth_AB",
    "knuth_sequences",
    "count_ne_below_line",
    "brute_force_ne_below_line",
    "duchon_excursions",
    "duchon_mean_area",
    "excursion_area_sums",
]


def _weights(jumps: JumpSet):
    # unit weights stay in int arithmetic
    return [(d, 1 if w == 1 else w) for d, w in jumps.jumps]


@dataclass(frozen=True)
class CountTable:
    """Counts ``f[n][k]`` of weighted paths of length ``n`` ending at altitude ``k``.

    ``floor=None`` means unconstrained (walks and bridges); otherwise every
    altitude along the path, start included, must be ``>= floor``.
    """

    jumps: JumpSet
    floor: Optional[int]
    start: int
    rows: tuple[dict[int, int], ...] = field(repr=False)

    @property
    def n_max(self) -> int:
        return len(self.rows) - 1

    def count(self, n: int, k: int):
        return self.rows[n].get(k, 0)

    def row_total(self, n: int):
        return sum(self.rows[n].values())

    def csv_rows(self) -> Iterator[tuple[int, int, str]]:
        for n, row in enumerate(self.rows):
            for k in sorted(row):
                yield n, k, str(row[k])


@dataclass(frozen=True)
class AreaTable:
    """Like :class:`CountTable` plus summed twice-areas (trapezoid rule)."""

    counts: CountTable
    twice_area: tuple[dict[int, int], ...] = field(repr=False)

    def mean_area(self, n: int, k: int) -> Fraction:
        c = self.counts.count(n, k)
        if not c:
            raise ValueError(f"no paths of length {n} ending at altitude {k}")
        return Fraction(self.twice_area[n].get(k, 0), 2 * c)


def build_counts(jumps: JumpSet, start: int, floor: Optional[int], n_max: int) -> CountTable:
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    steps = _weights(jumps)
    if floor is not None and start < floor:
        rows = [{} for _ in range(n_max + 1)]
        return CountTable(jumps, floor, start, tuple(rows))
    row = {start: 1}
    rows = [row]
    for _ in range(n_max):
        nxt: dict[int, int] = {}
        for k, c in row.items():
            for d, w in steps:
                j = k + d
                if floor is not None and j < floor:
                    continue
                nxt[j] = nxt.get(j, 0) + c * w
        row = nxt
        rows.append(row)
    return CountTable(jumps, floor, start, tuple(rows))


def build_area_table(jumps: JumpSet, start: int, floor: Optional[int], n_max: int) -> AreaTable:
    steps = _weights(jumps)
    row, area = {start: 1}, {start: 0}
    rows, areas = [row], [area]
    if floor is not None and start < floor:
        row, area = {}, {}
        rows, areas = [row], [area]
    for _ in range(n_max):
        nxt: dict[int, int] = {}
        nxt_area: dict[int, int] = {}
        for k, c in row.items():
            a = area[k]
            for d, w in steps:
                j = k + d
                if floor is not None and j < floor:
                    continue
                nxt[j] = nxt.get(j, 0) + c * w
                nxt_area[j] = nxt_area.get(j, 0) + (a + (k + j) * c) * w
        row, area = nxt, nxt_area
        rows.append(row)
        areas.append(area)
    return AreaTable(CountTable(jumps, floor, start, tuple(rows)), tuple(areas))


def brute_force_counts(jumps: JumpSet, start: int, floor: Optional[int], n: int) -> dict[int, int]:
    """Altitude histogram after ``n`` steps by explicit enumeration of all jump words."""
    hist: dict[int, int] = {}
    steps = _weights(jumps)
    for word in itertools.product(steps, repeat=n):
        alt, weight = start, 1
        if floor is not None and alt < floor:
            continue
        for d, w in word:
            alt += d
            weight *= w
            if floor is not None and alt < floor:
                break
        else:
            hist[alt] = hist.get(alt, 0) + weight
    return hist


def endpoint_counts(jumps: JumpSet, start: int, end: int, n_max: int, floor: Optional[int] = 0) -> list:
    """``[count(n, end) for n in 0..n_max]`` by a streaming DP.

    Altitudes from which ``end`` is unreachable within the remaining budget are
    dropped; this cannot change any reported count.
    """
    if floor is None:
        raise ValueError("endpoint_counts needs a floor; use build_counts for walks")
    steps = _weights(jumps)
    down, up = -jumps.min_delta, jumps.max_delta
    base = floor
    if start < floor:
        return [0] * (n_max + 1)
    row = [0] * (start - base + 1)
    row[start - base] = 1
    out = [1 if start == end else 0]
    for i in range(1, n_max + 1):
        remaining = n_max - i
        hi = min(start + i * up, end + remaining * down)
        lo = max(base, end - remaining * up)
        if hi < lo:
            out.extend([0] * (n_max - i + 1))
            break
        width = hi - base + 1
        nxt = [0] * width
        for k_idx, c in enumerate(row):
            if not c:
                continue
            for d, w in steps:
                j = k_idx + d
                if j < 0 or j >= width or j + base < lo:
                    continue
                nxt[j] += c * w if w != 1 else c
        row = nxt
        e = end - base
        out.append(row[e] if 0 <= e < len(row) else 0)
    return out


def knuth_sequences(n_max: int) -> tuple[list[int], list[int]]:
    """``(A, B)`` with ``A[n-1] = A_n``, ``B[n-1] = B_n`` for ``n = 1..n_max``.

    ``A_n`` counts meanders of length ``7n-2`` with jumps ``-2, +5`` from
    altitude 4 to 1, ``B_n`` those from 3 to 0.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    length = 7 * n_max - 2
    g1 = endpoint_counts(KNUTH_JUMPS, 4, 1, length)
    f0 = endpoint_counts(KNUTH_JUMPS, 3, 0, length)
    a = [g1[7 * n - 2] for n in range(1, n_max + 1)]
    b = [f0[7 * n - 2] for n in range(1, n_max + 1)]
    return a, b


def knuth_AB(n: int) -> tuple[int, int]:
    if n < 1:
        raise ValueError("knuth_AB is defined for n >= 1")
    a, b = knuth_sequences(n)
    return a[-1], b[-1]


def count_ne_below_line(a: int, c: int, k: int, endpoint: tuple[int, int], touching: bool = False) -> int:
    """North/East paths from the origin to ``endpoint`` below ``y = (a x + k) / c``.

    Strict mode requires ``c*y < a*x + k`` at every lattice point visited;
    touching mode relaxes it to ``<=``.
    """
    x_end, y_end = endpoint
    if x_end < 0 or y_end < 0:
        return 0

    def ok(x: int, y: int) -> bool:
        lhs, rhs = c * y, a * x + k
        return lhs <= rhs if touching else lhs < rhs

    prev = [0] * (x_end + 1)
    for y in range(y_end + 1):
        cur = [0] * (x_end + 1)
        for x in range(x_end + 1):
            if not ok(x, y):
                continue
            if x == 0 and y == 0:
                cur[x] = 1
            else:
                cur[x] = (cur[x - 1] if x else 0) + prev[x]
        prev = cur
    return prev[x_end]


def brute_force_ne_below_line(a: int, c: int, k: int, endpoint: tuple[int, int], touching: bool = False) -> int:
    """Same count as :func:`count_ne_below_line`, by listing every N/E word."""
    x_end, y_end = endpoint
    total = 0
    for north in itertools.combinations(range(x_end + y_end), y_end):
        x = y = 0
        good = (0 < k) if not touching else (0 <= k)
        north = set(north)
        for i in range(x_end + y_end):
            if not good:
                break
            if i in north:
                y += 1
            else:
                x += 1
            good = c * y < a * x + k if not touching else c * y <= a * x + k
        total += good
    return total


def duchon_excursions(n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return endpoint_counts(DUCHON_JUMPS, 0, 0, n)[n]


def excursion_area_sums(jumps: JumpSet, n_max: int) -> tuple[list[int], list[int]]:
    """Excursion counts and summed twice-areas for every length ``0..n_max``.

    One forward pass from altitude 0 with floor 0; rows are pruned to the
    altitudes that can still return to 0 by length ``n_max``.
    """
    steps = _weights(jumps)
    down, up = -jumps.min_delta, jumps.max_delta
    counts, areas = [1], [0]
    row, area = [1], [0]
    for i in range(1, n_max + 1):
        hi = min(i * up, (n_max - i) * down)
        if hi < 0:
            counts.append(0)
            areas.append(0)
            row, area = [], []
            continue
        nxt = [0] * (hi + 1)
        nxt_area = [0] * (hi + 1)
        for k, c in enumerate(row):
            if not c:
                continue
            a = area[k]
            for d, w in steps:
                j = k + d
                if j < 0 or j > hi:
                    continue
                if w == 1:
                    nxt[j] += c
                    nxt_area[j] += a + (k + j) * c
                else:
                    nxt[j] += c * w
                    nxt_area[j] += (a + (k + j) * c) * w
        row, area = nxt, nxt_area
        counts.append(row[0])
        areas.append(area[0])
    return counts, areas


def duchon_mean_area(n: int) -> Fraction:
    """Mean trapezoidal area of Duchon excursions (jumps ``+2, -3``) of length ``n``."""
    if n <= 0 or n % 5:
        raise ValueError(f"no Duchon excursions of length {n}")
    counts, areas = excursion_area_sums(DUCHON_JUMPS, n)
    return Fraction(areas[n], 2 * counts[n])
