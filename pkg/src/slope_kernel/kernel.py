"""Kernel method: small branches of ``1 - z P(u) = 0``, symbolically and numerically.

Symbolic side: for kernels with two small roots (``min delta = -2``) the
branches are Puiseux series in ``t = sqrt(z)``.  Writing ``u = t w`` turns
``u**2 = z Q(u)`` into ``w**2 = Q(t w)``, solved by Newton iteration on exact
truncated series.

Numeric side: all roots of ``u**m - z Q(u)`` by Aberth iteration at a chosen
mpmath precision, split into small/large by modulus, and labelled ``u1``/``u2``
by continuation from ``z ~ 0`` along a ray.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .core import KNUTH_JUMPS, JumpSet, SeriesError, TruncSeries, check_rational_square, poly_from_jumps

__all__ = [
    "KernelForm",
    "BranchValue",
    "BranchAmbiguityError",
    "BranchMatchingError",
    "small_branch_series",
    "closed_form_F0_F1",
    "series_F0_G1",
    "sym_power_series",
    "kernel_roots",
    "numeric_branches",
    "labelled_small_branches",
    "track_small_branches",
    "verify_rotation_law",
    "rotation_sample_points",
    "polyroots_aberth",
]


class BranchAmbiguityError(ArithmeticError):
    """Small and large roots cannot be told apart by modulus at this point."""


class BranchMatchingError(ArithmeticError):
    """Continuation failed to identify ``u1``/``u2`` among the small roots."""


@dataclass(frozen=True)
class KernelForm:
    """``1 - z P(u) = 0``  <=>  ``u**m = z Q(u)``."""

    jumps: JumpSet
    m: int
    Q: dict

    @classmethod
    def of(cls, jumps: JumpSet = KNUTH_JUMPS) -> "KernelForm":
        m, q = poly_from_jumps(jumps)
        return cls(jumps, m, q)

    @property
    def degree(self) -> int:
        return max(self.Q)

    def poly_coeffs(self, z) -> list:
        """Coefficients (constant first) of ``u**m - z Q(u)`` in ``u``."""
        cs = [-z * self.Q.get(i, 0) for i in range(self.degree + 1)]
        cs[self.m] += 1
        return cs

    def root_product(self) -> Fraction:
        """Vieta: product of all roots, independent of ``z``."""
        d = self.degree
        return (-1) ** d * Fraction(self.Q[0]) / Fraction(self.Q[d])


# ---------------------------------------------------------------------------
# symbolic branches


def small_branch_series(kernel: KernelForm | None = None, order: int = 32) -> tuple[TruncSeries, TruncSeries]:
    """Puiseux expansions of the two small roots in ``t`` (``z = t**2``) to ``O(t**(order+1))``.

    ``u1`` is the branch with ``u1 / t -> +sqrt(Q(0))``.
    """
    kernel = kernel or KernelForm.of()
    if kernel.m != 2:
        raise SeriesError(f"symbolic branches need m = 2, got m = {kernel.m}")
    lead = check_rational_square(kernel.Q[0])
    q_poly = {e: Fraction(c) for e, c in kernel.Q.items()}
    dq_poly = {e - 1: e * c for e, c in q_poly.items() if e}
    target = order - 1  # u = t * w
    branches = []
    for sign in (1, -1):
        w = TruncSeries.monomial(sign * lead, 0, 0, q=2)
        known = 0
        while known < target:
            known = min(2 * known + 1, target)
            w = w.extend(known)
            u = w.shift(1).truncate(known)
            g = w * w - u.compose_poly(q_poly)
            dg = 2 * w - u.compose_poly(dq_poly).shift(1).truncate(known)
            w = (w - g / dg).truncate(known)
        branches.append(w.shift(1))
    return branches[0], branches[1]


def closed_form_F0_F1(start: int, order: int, kernel: KernelForm | None = None) -> tuple[TruncSeries, TruncSeries]:
    """Kernel-method solution ``(F_0, F_1)`` in ``z`` for meanders from altitude ``start``.

    Valid when ``-2`` is the only negative jump.  Substituting both small
    branches into the functional equation gives
    ``z p (F_0 + u_i F_1) = u_i**2 f_0(u_i)`` with ``p`` the weight of ``-2``.
    """
    kernel = kernel or KernelForm.of()
    if kernel.m != 2 or any(d < 0 and d != -2 for d in kernel.jumps.deltas):
        raise SeriesError("closed forms implemented for kernels whose only negative jump is -2")
    p = kernel.jumps.weight(-2)
    t_order = 2 * order + 2 * start + 8
    u1, u2 = small_branch_series(kernel, t_order)
    r1, r2 = u1 ** (start + 2), u2 ** (start + 2)
    diff = (u1 - u2).shift(2)  # z * (u1 - u2)
    f0 = -(u1 * u2 * (u1 ** (start + 1) - u2 ** (start + 1))) / diff / p
    f1 = (r1 - r2) / diff / p
    return f0.truncate(2 * order).deramify(), f1.truncate(2 * order).deramify()


def series_F0_G1(order: int) -> tuple[TruncSeries, TruncSeries]:
    """``F_0`` (3 -> 0) and ``G_1`` (4 -> 1) for jumps ``-2, +5`` up to ``z**order``."""
    f0, _ = closed_form_F0_F1(3, order)
    _, g1 = closed_form_F0_F1(4, order)
    return f0, g1


def sym_power_series(order: int, power: int = 5) -> TruncSeries:
    """``u1**power + u2**power`` as a series in ``z`` up to ``z**order``."""
    u1, u2 = small_branch_series(KernelForm.of(), 2 * order + 2)
    return (u1**power + u2**power).truncate(2 * order).deramify()


# ---------------------------------------------------------------------------
# numeric roots


def _horner(cs, x):
    acc = 0
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def polyroots_aberth(coeffs, prec: int, start=None, radius=None, maxiter: int = 500):
    """All roots of ``sum(coeffs[i] * x**i)`` by Aberth–Ehrlich iteration.

    Runs at ``prec + 32`` bits.  ``start`` may supply initial guesses (warm
    start); otherwise they sit on a circle of ``radius`` (default: geometric
    mean of the root moduli).  Returns ``(roots, residuals)``.
    """
    with mpmath.workprec(prec + 32):
        cs = [mpmath.mpc(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        deg = len(cs) - 1
        if deg < 1:
            raise ValueError("polynomial has no roots")
        dcs = [i * cs[i] for i in range(1, deg + 1)]
        if start is None:
            if radius is None:
                radius = abs(cs[0] / cs[-1]) ** (mpmath.mpf(1) / deg) if cs[0] != 0 else mpmath.mpf(1)
            # offset angle avoids starting on a symmetry axis of the kernel
            xs = [radius * mpmath.expj(2 * mpmath.pi * (j + mpmath.mpf("0.3")) / deg) for j in range(deg)]
        else:
            xs = [mpmath.mpc(x) for x in start]
        tol = mpmath.mpf(2) ** (-(prec + 24))
        eps = mpmath.mpf(2) ** (-(prec + 32))
        abs_cs = [abs(c) for c in cs]
        for _ in range(maxiter):
            worst = 0
            settled = True
            new = list(xs)
            for i in range(deg):
                x = new[i]
                p = _horner(cs, x)
                if p == 0:
                    continue
                # backward-error test: residual at rounding level (needed at double roots)
                if abs(p) > 8 * deg * eps * _horner(abs_cs, abs(x)):
                    settled = False
                dp = _horner(dcs, x)
                ratio = p / dp if dp != 0 else mpmath.mpc(tol)
                s = sum(1 / (x - new[j]) for j in range(deg) if j != i)
                step = ratio / (1 - ratio * s)
                new[i] = x - step
                worst = max(worst, abs(step) / max(abs(new[i]), 1))
            xs = new
            if worst < tol or settled:
                break
        else:
            raise ArithmeticError("Aberth iteration did not converge")
        residuals = [abs(_horner(cs, x)) for x in xs]
    with mpmath.workprec(prec):
        return [+x for x in xs], [+r for r in residuals]


@dataclass(frozen=True)
class BranchValue:
    z: mpmath.mpc
    roots: tuple
    small_indices: tuple
    large_indices: tuple
    residuals: tuple
    prec: int

    @property
    def small(self) -> list:
        return [self.roots[i] for i in self.small_indices]

    @property
    def large(self) -> list:
        return [self.roots[i] for i in self.large_indices]


def kernel_roots(jumps: JumpSet, z, prec: int = 128, start=None):
    """All ``m + max(delta)`` roots of ``u**m = z Q(u)`` with residuals (unclassified)."""
    kernel = KernelForm.of(jumps)
    with mpmath.workprec(prec + 32):
        z = mpmath.mpc(z)
        cs = kernel.poly_coeffs(z)
        cs = [mpmath.mpc(c) for c in cs]
    return polyroots_aberth(cs, prec, start=start)


def numeric_branches(jumps: JumpSet, z, prec: int = 128, start=None) -> BranchValue:
    """Roots at ``z`` classified by modulus: the ``m`` smallest are the small branches.

    Raises :class:`BranchAmbiguityError` when the ``m``-th and ``(m+1)``-th
    moduli are within a relative gap of ``2**(-prec/4)``.
    """
    if z == 0:
        raise ValueError("z must be nonzero")
    m = -jumps.min_delta
    roots, residuals = kernel_roots(jumps, z, prec, start)
    with mpmath.workprec(prec):
        order = sorted(range(len(roots)), key=lambda i: abs(roots[i]))
        inner, outer = abs(roots[order[m - 1]]), abs(roots[order[m]])
        gap = (outer - inner) / outer
        if gap < mpmath.mpf(2) ** (-prec / 4):
            raise BranchAmbiguityError(
                f"|u| ranks {m} and {m + 1} differ by relative {mpmath.nstr(gap, 5)} at z={mpmath.nstr(z, 10)}"
            )
        return BranchValue(mpmath.mpc(z), tuple(roots), tuple(order[:m]), tuple(order[m:]), tuple(residuals), prec)


def track_small_branches(points, prec: int = 128, jumps: JumpSet = KNUTH_JUMPS, steps: int = 32) -> list:
    """``[(u1(z), u2(z)) for z in points]`` on the principal sheet (two small roots).

    The points must lie on one ray from the origin, in increasing modulus.
    Both branches are followed outward from ``|points[0]| / 1000``, where
    ``u1 ~ +sqrt(z Q(0))`` fixes the labels; ``steps`` geometric substeps lead
    to the first point.  Every stop re-solves the kernel (warm-started) and
    matches the two small roots to the previous pair; a match that is not
    clear-cut raises :class:`BranchMatchingError`.
    """
    if -jumps.min_delta != 2:
        raise ValueError("labelling implemented for two small branches")
    lead = mpmath.sqrt(jumps.weight(-2))
    out = []
    with mpmath.workprec(prec + 16):
        points = [mpmath.mpc(p) for p in points]
        if not points or any(p == 0 for p in points):
            raise ValueError("points must be nonzero")
        direction = points[0] / abs(points[0])
        r0 = abs(points[0]) / 1000
        bv = numeric_branches(jumps, r0 * direction, prec)
        s0 = mpmath.sqrt(r0 * direction) * lead
        a, b = bv.small
        u1, u2 = (a, b) if abs(a - s0) < abs(b - s0) else (b, a)
        if not abs(u1 - s0) < abs(u1 + s0) / 4:
            raise BranchMatchingError("initial branch identification failed")
        r1 = abs(points[0])
        path = [(r0 * (r1 / r0) ** (mpmath.mpf(j) / steps) * direction, False) for j in range(1, steps)]
        path += [(p, True) for p in points]
        warm = list(bv.roots)
        for zj, wanted in path:
            bv = numeric_branches(jumps, zj, prec, start=warm)
            warm = list(bv.roots)
            a, b = bv.small
            straight = abs(a - u1) + abs(b - u2)
            crossed = abs(a - u2) + abs(b - u1)
            if straight * 4 < crossed:
                u1, u2 = a, b
            elif crossed * 4 < straight:
                u1, u2 = b, a
            else:
                raise BranchMatchingError(f"ambiguous branch match at z={mpmath.nstr(zj, 10)}")
            if wanted:
                out.append((u1, u2))
    with mpmath.workprec(prec):
        return [(+x, +y) for x, y in out]


def labelled_small_branches(z, prec: int = 128, jumps: JumpSet = KNUTH_JUMPS) -> tuple:
    """``(u1(z), u2(z))`` on the principal sheet; see :func:`track_small_branches`."""
    return track_small_branches([z], prec, jumps)[0]


def verify_rotation_law(z, prec: int = 128) -> dict:
    """Residuals of ``u1(wz) = w**-3 u2(z)``, ``u2(wz) = w**-3 u1(z)`` and conjugation symmetry.

    ``w = exp(2 pi i / 7)``; ``z`` must satisfy ``|z| <= rho`` and
    ``0 < arg z < pi - 2 pi / 7``.
    """
    with mpmath.workprec(prec + 16):
        z = mpmath.mpc(z)
        omega = mpmath.expj(2 * mpmath.pi / 7)
        rho = mpmath.root(mpmath.mpf(12500) / 823543, 7)
        arg = mpmath.arg(z)
        if abs(z) > rho * (1 + mpmath.mpf(2) ** (-prec // 2)) or not 0 < arg < mpmath.pi - 2 * mpmath.pi / 7:
            raise ValueError("z outside the rotation-law domain")
        u1, u2 = labelled_small_branches(z, prec)
        r1, r2 = labelled_small_branches(omega * z, prec)
        c1, c2 = labelled_small_branches(mpmath.conj(z), prec)
        w3 = omega**-3
        out = {
            "rotation_u1": abs(r1 - w3 * u2),
            "rotation_u2": abs(r2 - w3 * u1),
            "conjugation_u1": abs(c1 - mpmath.conj(u1)),
            "conjugation_u2": abs(c2 - mpmath.conj(u2)),
        }
    with mpmath.workprec(prec):
        out = {k: +v for k, v in out.items()}
        out["tolerance"] = 10 * mpmath.mpf(2) ** (-prec / 2)
        out["passed"] = all(v < out["tolerance"] for k, v in out.items() if k != "tolerance")
    return out


def rotation_sample_points(count: int = 20, prec: int = 128) -> list:
    """Deterministic points ``rho * r * exp(i theta)`` spread over the rotation-law domain.

    Radii stay in ``[0.1, 0.95]`` and angles strictly inside
    ``(0, pi - 2 pi / 7)`` so no sample sits on a dominant singularity.
    """
    with mpmath.workprec(prec):
        rho = mpmath.root(mpmath.mpf(12500) / 823543, 7)
        theta_max = mpmath.pi - 2 * mpmath.pi / 7
        golden = (mpmath.sqrt(5) - 1) / 2
        pts = []
        for j in range(count):
            r = mpmath.mpf("0.1") + mpmath.mpf("0.85") * (j + mpmath.mpf(1) / 2) / count
            frac = mpmath.frac(golden * (j + 1))
            theta = theta_max * (mpmath.mpf("0.02") + mpmath.mpf("0.96") * frac)
            pts.append(rho * r * mpmath.expj(theta))
        return pts
