"""Exact arithmetic substrate: jump sets, truncated series, binomials.

Everything symbolic in the package runs on :class:`fractions.Fraction`; the
numeric layer (mpmath) lives in :mod:`slope_kernel.kernel` and
:mod:`slope_kernel.asymptotics` and never feeds back into these types.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable

__all__ = [
    "JumpSet",
    "TruncSeries",
    "SeriesError",
    "binomial",
    "KNUTH_JUMPS",
    "DUCHON_JUMPS",
]


class SeriesError(ValueError):
    """Raised on invalid truncated-series arithmetic."""


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient; zero when ``k > n``."""
    if n < 0 or k < 0:
        raise ValueError("binomial arguments must be nonnegative")
    return math.comb(n, k)


_JUMP_RE = re.compile(r"^\s*([+-]?\d+)\s*(?::\s*(\d+(?:/\d+)?)\s*)?$")


@dataclass(frozen=True)
class JumpSet:
    """Finite set of signed jumps with positive rational weights.

    Encodes the Laurent polynomial ``P(u) = sum(weight * u**delta)``.
    """

    jumps: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        if not self.jumps:
            raise ValueError("jump set must be nonempty")
        deltas = [d for d, _ in self.jumps]
        if len(set(deltas)) != len(deltas):
            raise ValueError("jump deltas must be distinct")
        if any(w <= 0 for _, w in self.jumps):
            raise ValueError("jump weights must be strictly positive")
        if min(deltas) >= 0 or max(deltas) <= 0:
            raise ValueError("need at least one negative and one positive jump")
        normalized = tuple(sorted((int(d), Fraction(w)) for d, w in self.jumps))
        object.__setattr__(self, "jumps", normalized)

    @classmethod
    def unit(cls, *deltas: int) -> "JumpSet":
        return cls(tuple((d, Fraction(1)) for d in deltas))

    @classmethod
    def parse(cls, text: str) -> "JumpSet":
        """Parse ``"+5:1,-2:1"`` (weights optional, default 1)."""
        jumps = []
        for part in text.split(","):
            match = _JUMP_RE.match(part)
            if not match:
                raise ValueError(f"malformed jump spec {part!r}; expected e.g. '+5:1,-2:1'")
            weight = Fraction(match.group(2)) if match.group(2) else Fraction(1)
            jumps.append((int(match.group(1)), weight))
        return cls(tuple(jumps))

    def __str__(self) -> str:
        return ",".join(f"{d:+d}:{w}" for d, w in self.jumps)

    @property
    def deltas(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.jumps)

    @property
    def min_delta(self) -> int:
        return self.jumps[0][0]

    @property
    def max_delta(self) -> int:
        return self.jumps[-1][0]

    @property
    def is_unit(self) -> bool:
        return all(w == 1 for _, w in self.jumps)

    @property
    def period(self) -> int:
        base = self.min_delta
        return reduce(math.gcd, (d - base for d in self.deltas))

    def weight(self, delta: int) -> Fraction:
        for d, w in self.jumps:
            if d == delta:
                return w
        return Fraction(0)

    def reversed(self) -> "JumpSet":
        """Time reversal: every jump ``d`` becomes ``-d``."""
        return JumpSet(tuple((-d, w) for d, w in self.jumps))

    def evaluate(self, u):
        """``P(u)`` for any numeric type supporting ``**`` with negative ints."""
        return sum(w * u**d for d, w in self.jumps)

    def derivative(self, u, order: int = 1):
        """``P^(order)(u)``."""
        total = 0
        for d, w in self.jumps:
            falling = 1
            for i in range(order):
                falling *= d - i
            if falling:
                total += w * falling * u ** (d - order)
        return total


KNUTH_JUMPS = JumpSet.unit(-2, 5)
DUCHON_JUMPS = JumpSet.unit(-3, 2)


@dataclass(frozen=True)
class TruncSeries:
    """Truncated series ``sum coeffs[i] * t**i + O(t**(order+1))`` with ``z = t**q``.

    Coefficients are exact rationals. ``order`` is the largest index whose
    coefficient is known to be correct; arithmetic propagates it pessimistically.
    """

    coeffs: tuple[Fraction, ...]
    order: int
    q: int = 1

    def __post_init__(self):
        if self.q < 1:
            raise SeriesError("ramification must be a positive integer")
        if self.order < -1:
            raise SeriesError("order must be >= -1")
        cs = tuple(Fraction(c) for c in self.coeffs[: self.order + 1])
        cs = cs + (Fraction(0),) * (self.order + 1 - len(cs))
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, order: int | None = None, q: int = 1) -> "TruncSeries":
        coeffs = tuple(coeffs)
        if order is None:
            order = len(coeffs) - 1
        return cls(coeffs, order, q)

    @classmethod
    def monomial(cls, coeff, power: int, order: int, q: int = 1) -> "TruncSeries":
        cs = [0] * (order + 1)
        if power <= order:
            cs[power] = coeff
        return cls(tuple(cs), order, q)

    def __getitem__(self, i: int) -> Fraction:
        if i < 0:
            return Fraction(0)
        if i > self.order:
            raise SeriesError(f"coefficient {i} beyond truncation order {self.order}")
        return self.coeffs[i]

    def __len__(self) -> int:
        return self.order + 1

    def valuation(self) -> int:
        """Index of the first nonzero coefficient, ``order + 1`` if none is known."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return self.order + 1

    def _check(self, other: "TruncSeries"):
        if self.q != other.q:
            raise SeriesError(f"mismatched ramification {self.q} vs {other.q}")

    def _coerce(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return TruncSeries.monomial(other, 0, self.order, self.q)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        return TruncSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), order, self.q)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(tuple(-c for c in self.coeffs), self.order, self.q)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncSeries(tuple(c * other for c in self.coeffs), self.order, self.q)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        # a known-zero prefix of one factor extends the valid range of the product
        order = min(self.order + other.valuation(), other.order + self.valuation())
        out = [0] * (order + 1)
        b = [(j, c) for j, c in enumerate(other.coeffs) if c]
        for i, a in enumerate(self.coeffs):
            if not a or i > order:
                continue
            limit = order - i
            for j, c in b:
                if j > limit:
                    break
                out[i + j] += a * c
        return TruncSeries(tuple(out), order, self.q)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise SeriesError("only nonnegative integer powers are supported")
        result = TruncSeries.monomial(1, 0, self.order + self.valuation() * n, self.q)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("series division by zero scalar")
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_div_unit(self, other)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by ``t**k``; negative ``k`` requires the low coefficients to vanish."""
        if k >= 0:
            return TruncSeries((Fraction(0),) * k + self.coeffs, self.order + k, self.q)
        if any(self.coeffs[: -k]):
            raise SeriesError(f"cannot divide by t^{-k}: nonzero low-order coefficients")
        return TruncSeries(self.coeffs[-k:], self.order + k, self.q)

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise SeriesError(f"cannot truncate to {order} > known order {self.order}")
        return TruncSeries(self.coeffs[: order + 1], order, self.q)

    def extend(self, order: int) -> "TruncSeries":
        """Pad with zeros, asserting the series is known to that order (polynomials)."""
        return TruncSeries(self.coeffs, max(order, self.order), self.q)

    def compose_poly(self, poly: dict[int, Fraction]) -> "TruncSeries":
        """``sum(c * self**e)`` for a polynomial given as ``{exponent: coeff}``."""
        top = max(poly)
        acc = TruncSeries.monomial(poly.get(top, 0), 0, self.order, self.q)
        for e in range(top - 1, -1, -1):
            acc = acc * self + poly.get(e, 0)
        return acc

    def deramify(self) -> "TruncSeries":
        """Re-express a series in ``t`` supported on multiples of ``q`` as a series in ``z``."""
        if self.q == 1:
            return self
        bad = [i for i, c in enumerate(self.coeffs) if c and i % self.q]
        if bad:
            raise SeriesError(f"coefficient at t^{bad[0]} is not a power of z")
        return TruncSeries(self.coeffs[:: self.q], self.order // self.q, 1)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def evaluate(self, x):
        """Evaluate the truncated polynomial at ``x`` (Horner)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_json(self, variable: str | None = None) -> dict:
        if variable is None:
            variable = "z" if self.q == 1 else "t"
        return {
            "variable": variable,
            "ramification": self.q,
            "order": self.order,
            "coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TruncSeries":
        coeffs = [Fraction(int(n), int(d)) for n, d in data["coeffs"]]
        return cls(tuple(coeffs), int(data.get("order", len(coeffs) - 1)), int(data["ramification"]))


def series_add(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a + b


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a * b


def series_div_unit(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Quotient ``a / b``.

    ``b`` must be a unit, or share its valuation ``v`` with (at most) the
    valuation of ``a``; the common factor ``t**v`` is cancelled first.
    """
    a._check(b)
    v = b.valuation()
    if v > b.order:
        raise SeriesError("division by a series with no known nonzero coefficient")
    if v:
        if a.valuation() < v:
            raise SeriesError(f"numerator valuation {a.valuation()} below divisor valuation {v}")
        a, b = a.shift(-v), b.shift(-v)
    order = min(a.order, b.order)
    lead = b.coeffs[0]
    inv = 1 / lead
    tail = [(j, c) for j, c in enumerate(b.coeffs) if j and c]
    quot: list[Fraction] = []
    for n in range(order + 1):
        acc = a.coeffs[n]
        for j, c in tail:
            if j > n:
                break
            qn = quot[n - j]
            if qn:
                acc -= c * qn
        quot.append(acc * inv)
    return TruncSeries(tuple(quot), order, a.q)


def poly_from_jumps(jumps: JumpSet) -> tuple[int, dict[int, Fraction]]:
    """Kernel normal form: ``1 - z P(u) = 0`` iff ``u**m = z * Q(u)``.

    Returns ``(m, Q)`` with ``Q`` as ``{exponent: coeff}`` and ``Q(0) != 0``.
    """
    m = -jumps.min_delta
    return m, {d + m: w for d, w in jumps.jumps}


def check_rational_square(x: Fraction) -> Fraction:
    """Exact square root of a rational square, else ``SeriesError``."""
    x = Fraction(x)
    if x < 0:
        raise SeriesError(f"{x} is negative")
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n != x.numerator or d * d != x.denominator:
        raise SeriesError(f"{x} is not the square of a rational")
    return Fraction(n, d)
