"""North/East paths under a rational-slope line versus directed walks.

The affine map ``(x, y) -> (x + y, a x - c y + b)`` sends a North/East path
from the origin to a walk with jumps ``+a`` (East) and ``-c`` (North) that
starts at altitude ``b``.  A lattice point lies strictly below the line
``y = (a x + b) / c`` exactly when its image altitude is at least 1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

from .core import JumpSet
from .enumeration import endpoint_counts

__all__ = [
    "SlopeBarrier",
    "NEPath",
    "DirectedPath",
    "ne_to_directed",
    "directed_to_ne",
    "verify_bijection",
    "verify_time_reversal",
]


@dataclass(frozen=True)
class SlopeBarrier:
    """The line ``y = (a x + b) / c`` with positive integers and ``gcd(a, b, c) = 1``."""

    a: int
    c: int
    b: int

    def __post_init__(self):
        for name in ("a", "c", "b"):
            v = getattr(self, name)
            if not isinstance(v, int) or v <= 0:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if gcd(gcd(self.a, self.b), self.c) != 1:
            raise ValueError(f"gcd(a, b, c) must be 1 for barrier {self}")

    def altitude(self, x: int, y: int) -> int:
        return self.a * x - self.c * y + self.b

    def below(self, x: int, y: int, touching: bool = False) -> bool:
        return self.altitude(x, y) >= (0 if touching else 1)


@dataclass(frozen=True)
class NEPath:
    steps: str = ""

    def __post_init__(self):
        bad = set(self.steps) - {"E", "N"}
        if bad:
            raise ValueError(f"NE paths use only 'E' and 'N', got {sorted(bad)}")

    def __len__(self):
        return len(self.steps)

    def points(self) -> list[tuple[int, int]]:
        x = y = 0
        pts = [(0, 0)]
        for s in self.steps:
            if s == "E":
                x += 1
            else:
                y += 1
            pts.append((x, y))
        return pts


@dataclass(frozen=True)
class DirectedPath:
    start_altitude: int
    jumps: tuple[int, ...] = ()

    def __len__(self):
        return len(self.jumps)

    def altitudes(self) -> list[int]:
        out = [self.start_altitude]
        for j in self.jumps:
            out.append(out[-1] + j)
        return out


def ne_to_directed(path: NEPath, barrier: SlopeBarrier) -> DirectedPath:
    step = {"E": barrier.a, "N": -barrier.c}
    return DirectedPath(barrier.b, tuple(step[s] for s in path.steps))


def directed_to_ne(path: DirectedPath, barrier: SlopeBarrier) -> NEPath:
    if path.start_altitude != barrier.b:
        raise ValueError(f"walk starts at altitude {path.start_altitude}, barrier needs {barrier.b}")
    letters = []
    for j in path.jumps:
        if j == barrier.a:
            letters.append("E")
        elif j == -barrier.c:
            letters.append("N")
        else:
            raise ValueError(f"jump {j} is neither +{barrier.a} nor -{barrier.c}")
    return NEPath("".join(letters))


def verify_bijection(barrier: SlopeBarrier, n_max: int, roundtrip_max: int | None = None) -> dict:
    """Exhaustive check of the map on every word of length ``<= n_max``.

    For each length, counts NE paths strictly below the line and walks from
    ``b`` with altitudes ``>= 1``, both by listing all ``2**n`` words; also
    checks the round trip and the affine altitude formula pointwise on words
    of length ``<= roundtrip_max`` (defaults to ``n_max``).
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if roundtrip_max is None:
        roundtrip_max = n_max
    rows, failures = [], []
    roundtrip_ok = True
    for n in range(n_max + 1):
        ne_count = walk_count = 0
        for word in itertools.product("EN", repeat=n):
            path = NEPath("".join(word))
            pts = path.points()
            if all(barrier.below(x, y) for x, y in pts):
                ne_count += 1
            walk = ne_to_directed(path, barrier)
            alts = walk.altitudes()
            if all(h >= 1 for h in alts):
                walk_count += 1
            if n <= roundtrip_max:
                if directed_to_ne(walk, barrier) != path:
                    roundtrip_ok = False
                    failures.append(f"round trip fails on {path.steps!r}")
                if any(h != barrier.altitude(x, y) for h, (x, y) in zip(alts, pts)):
                    roundtrip_ok = False
                    failures.append(f"altitude formula fails on {path.steps!r}")
        rows.append({"n": n, "ne_below": ne_count, "walks_positive": walk_count})
        if ne_count != walk_count:
            failures.append(f"length {n}: {ne_count} NE paths vs {walk_count} walks")
    return {
        "barrier": [barrier.a, barrier.c, barrier.b],
        "n_max": n_max,
        "roundtrip_max": roundtrip_max,
        "counts": rows,
        "roundtrip": roundtrip_ok,
        "passed": not failures,
        "failures": failures[:10],
    }


def verify_time_reversal(barrier: SlopeBarrier, n_max: int) -> dict:
    """Walks ``b -> 0`` with jumps ``{+a, -c}`` versus ``0 -> b`` with ``{-a, +c}``, floor 0."""
    forward = JumpSet.unit(barrier.a, -barrier.c)
    backward = JumpSet.unit(-barrier.a, barrier.c)
    there = endpoint_counts(forward, barrier.b, 0, n_max)
    back = endpoint_counts(backward, 0, barrier.b, n_max)
    bad = [n for n in range(n_max + 1) if there[n] != back[n]]
    return {
        "barrier": [barrier.a, barrier.c, barrier.b],
        "n_max": n_max,
        "counts": [str(v) for v in there],
        "passed": not bad,
        "counterexample": bad[0] if bad else None,
    }
