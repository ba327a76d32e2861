"""High-precision structural and asymptotic constants, and empirical checks.

Covers the saddle point ``tau`` of the jump polynomial, the radius ``rho``,
the regular small root ``tau2 = u2(rho)``, Knuth's ratio constants and the
local Puiseux behaviour of the small branches at the seven dominant
singularities ``zeta_k = rho * omega**k``.  The empirical side fits exact
counts from :mod:`slope_kernel.enumeration` against the predicted expansions.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import sympy

from .core import DUCHON_JUMPS, KNUTH_JUMPS, JumpSet
from .enumeration import excursion_area_sums, knuth_sequences
from .kernel import kernel_roots, track_small_branches

__all__ = [
    "DEFAULT_PRECISION",
    "KAPPA1_POLY",
    "KAPPA2_POLY",
    "TAU2_POLY",
    "AsymptoticConstants",
    "LocalExpansion",
    "structural_constants",
    "tau2",
    "knuth_constants",
    "verify_minimal_polynomials",
    "unique_real_root",
    "fit_local_expansion",
    "ratio_convergence",
    "leading_constant_check",
    "duchon_area_constant",
]

DEFAULT_PRECISION = int(os.environ.get("SLOPE_KERNEL_PRECISION", 256))

# coefficients, highest degree first
KAPPA1_POLY = (23, -41, 10, -6, -1, -1)
KAPPA2_POLY = (11571875, -5363750, 628250, -97580, 5180, -142)  # root is (7/3) kappa2
TAU2_POLY = (500, 3900, 13540, 27708, 37500, 3125)  # in x = t**7
RHO7 = Fraction(12500, 823543)


def _tol(prec: int):
    return mpmath.mpf(2) ** (-prec // 2)


def _weights(jumps: JumpSet):
    return [(d, mpmath.mpf(w.numerator) / w.denominator) for d, w in jumps.jumps]


def _P(jumps: JumpSet, u, order: int = 0):
    total = 0
    for d, w in _weights(jumps):
        falling = 1
        for i in range(order):
            falling *= d - i
        if falling:
            total += w * falling * u ** (d - order)
    return total


def structural_constants(jumps: JumpSet = KNUTH_JUMPS, prec: int = DEFAULT_PRECISION):
    """``(tau, rho, residual)``: positive root of ``P'`` and ``1 / P(tau)``.

    ``P'`` changes sign exactly once on the positive axis; a sign-change
    bracket is refined by Newton steps that fall back to bisection whenever
    they leave the bracket.
    """
    with mpmath.workprec(prec + 32):
        f = lambda u: _P(jumps, u, 1)
        lo = hi = mpmath.mpf(1)
        while f(lo) >= 0:
            lo /= 2
        while f(hi) <= 0:
            hi *= 2
        x = (lo + hi) / 2
        for _ in range(4 * prec):
            fx = f(x)
            if fx == 0:
                break
            if fx < 0:
                lo = x
            else:
                hi = x
            newton = x - fx / _P(jumps, x, 2)
            x_new = newton if lo < newton < hi else (lo + hi) / 2
            if abs(x_new - x) <= abs(x) * mpmath.mpf(2) ** (-(prec + 24)):
                x = x_new
                break
            x = x_new
        tau = x
        rho = 1 / _P(jumps, tau)
        residual = abs(f(tau))
    if residual > _tol(prec):
        raise ArithmeticError("precision too low to certify tau")
    with mpmath.workprec(prec):
        return +tau, +rho, +residual


def unique_real_root(coeffs, prec: int = DEFAULT_PRECISION):
    """The single real root of an integer polynomial (coefficients highest first).

    Uniqueness is established exactly (sympy real-root isolation); the
    isolating interval is then refined by bisection at ``prec`` bits.
    """
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(coeffs), x)
    intervals = poly.intervals()
    if len(intervals) != 1 or intervals[0][1] != 1:
        raise ArithmeticError(f"expected exactly one simple real root, got {intervals}")
    (lo, hi), _ = intervals[0]
    with mpmath.workprec(prec + 16):
        f = lambda t: mpmath.polyval(list(coeffs), t)
        lo, hi = mpmath.mpf(lo.p) / lo.q, mpmath.mpf(hi.p) / hi.q
        if lo == hi:
            return lo
        flo = f(lo)
        for _ in range(prec + 24):
            mid = (lo + hi) / 2
            fm = f(mid)
            if fm == 0:
                lo = hi = mid
                break
            if (fm < 0) == (flo < 0):
                lo, flo = mid, fm
            else:
                hi = mid
        root = (lo + hi) / 2
    with mpmath.workprec(prec):
        return +root


def tau2(prec: int = DEFAULT_PRECISION, return_checks: bool = False):
    """``u2(rho)`` for the slope-2/5 kernel, determined two independent ways.

    Route 1 takes the smallest-modulus root of ``u**2 = rho (1 + u**7)``;
    route 2 the real root of the quintic in ``t**7``.  They must agree.
    """
    with mpmath.workprec(prec + 32):
        rho = mpmath.root(mpmath.mpf(RHO7.numerator) / RHO7.denominator, 7)
        roots, _ = kernel_roots(KNUTH_JUMPS, rho, prec + 32)
        kernel_route = min(roots, key=abs)
        # simple root: polish by Newton on the real axis
        x = kernel_route.real
        for _ in range(8):
            x -= (x**2 - rho * (1 + x**7)) / (2 * x - 7 * rho * x**6)
        kernel_route = x
        poly_route = -mpmath.root(-unique_real_root(TAU2_POLY, prec + 32), 7)
        diff = abs(kernel_route - poly_route)
        residual = abs(mpmath.polyval(list(TAU2_POLY), poly_route**7))
    if diff > _tol(prec):
        raise ArithmeticError(f"tau2 determinations disagree by {mpmath.nstr(diff, 5)}")
    with mpmath.workprec(prec):
        value = +kernel_route
        if return_checks:
            return value, {"route_difference": +diff, "poly35_residual": +residual}
        return value


@dataclass(frozen=True)
class AsymptoticConstants:
    tau: mpmath.mpf
    rho: mpmath.mpf
    P_at_tau: mpmath.mpf
    tau2: mpmath.mpf
    mu: mpmath.mpf
    alpha1: mpmath.mpf
    alpha2: mpmath.mpf
    beta1: mpmath.mpf
    beta2: mpmath.mpf
    kappa1: mpmath.mpf
    kappa2: mpmath.mpf
    prec: int
    residuals: dict = field(default_factory=dict)

    def to_json(self, digits: int | None = None) -> dict:
        digits = digits or int(self.prec * 0.30103) - 2
        names = ["tau", "rho", "P_at_tau", "tau2", "mu", "alpha1", "alpha2", "beta1", "beta2", "kappa1", "kappa2"]
        return {
            "precision_bits": self.prec,
            "digits": digits,
            "constants": {n: mpmath.nstr(getattr(self, n), digits, strip_zeros=False) for n in names},
            "residuals": {k: mpmath.nstr(v, 5) for k, v in sorted(self.residuals.items())},
        }


def knuth_constants(prec: int = DEFAULT_PRECISION) -> AsymptoticConstants:
    """All constants of the ``A_n``, ``B_n`` expansions, with internal cross-checks."""
    if prec < 128:
        raise ValueError("knuth_constants needs at least 128 bits")
    with mpmath.workprec(prec + 32):
        tau, rho, tau_res = structural_constants(KNUTH_JUMPS, prec + 32)
        t2, checks = tau2(prec + 32, return_checks=True)
        mu = t2 / tau
        s5 = mpmath.sqrt(5)
        a1 = (mu**4 + 2 * mu**3 + 3 * mu**2 + 4 * mu + 5) / s5
        b1 = s5 - a1
        t27 = t2**7
        # the -1/10 prefactor multiplies both numerator terms; reading the two
        # displayed fragments as a plain sum contradicts the kappa2(kappa1) form
        a2 = (-(5 * t27 * (13 * mu**4 + 22 * mu**3 + 29 * mu**2 + 36 * mu + 45)
                + 2 * (15 * mu**4 + 20 * mu**3 + 13 * mu**2 - 8 * mu - 45))
              / (10 * s5 * (5 * t27 - 2)))
        b2 = -mpmath.mpf(9) / 10 * s5 - a2
        k1 = a1 / b1
        k1_alt = -5 / (mu**4 + 2 * mu**3 + 3 * mu**2 + 4 * mu) - 1
        k2 = -mpmath.mpf(3) / 14 * (a2 * b1 - a1 * b2) / b1**2
        k2_alt = mpmath.mpf(3) / 9800 * (13 - 236 * k1 - 194 * k1**2 - 388 * k1**3 + 437 * k1**4)
        residuals = {
            "tau_Pprime": tau_res,
            "rho_P_tau": abs(rho * _P(KNUTH_JUMPS, tau) - 1),
            "rho7_exact": abs(rho**7 - mpmath.mpf(RHO7.numerator) / RHO7.denominator),
            "tau_closed_form": abs(tau - mpmath.root(mpmath.mpf(2) / 5, 7)),
            "tau2_routes": checks["route_difference"],
            "tau2_poly35": checks["poly35_residual"],
            "kappa1_forms": abs(k1 - k1_alt),
            "kappa2_forms": abs(k2 - k2_alt),
        }
        p_tau = _P(KNUTH_JUMPS, tau)
    tol = _tol(prec)
    bad = {k: v for k, v in residuals.items() if v > tol}
    if bad:
        raise ArithmeticError(f"constant cross-checks failed: {bad}")
    with mpmath.workprec(prec):
        return AsymptoticConstants(
            tau=+tau, rho=+rho, P_at_tau=+p_tau, tau2=+t2, mu=+mu,
            alpha1=+a1, alpha2=+a2, beta1=+b1, beta2=+b2, kappa1=+k1, kappa2=+k2,
            prec=prec, residuals={k: +v for k, v in residuals.items()},
        )


def verify_minimal_polynomials(constants: AsymptoticConstants) -> dict:
    prec = constants.prec
    with mpmath.workprec(prec):
        k1_res = abs(mpmath.polyval(list(KAPPA1_POLY), constants.kappa1))
        k2_res = abs(mpmath.polyval(list(KAPPA2_POLY), mpmath.mpf(7) / 3 * constants.kappa2))
        k1_root = unique_real_root(KAPPA1_POLY, prec)
        k2_root = unique_real_root(KAPPA2_POLY, prec) * 3 / 7
        tol = _tol(prec)
        report = {
            "kappa1_residual": k1_res,
            "kappa2_residual": k2_res,
            "kappa1_vs_isolated_root": abs(k1_root - constants.kappa1),
            "kappa2_vs_isolated_root": abs(k2_root - constants.kappa2),
            "tolerance": tol,
        }
        report["passed"] = all(v <= tol for k, v in report.items() if k != "tolerance")
    return report


@dataclass(frozen=True)
class LocalExpansion:
    k: int
    singular_branch: str
    sqrt_coeff: mpmath.mpc  # C_k
    linear_coeff_singular: mpmath.mpc
    three_halves_coeff: mpmath.mpc  # C'_k
    regular_linear_coeff: mpmath.mpc  # D_k
    predicted_C: mpmath.mpc
    predicted_D: mpmath.mpc
    fit_residual: mpmath.mpf

    @property
    def ratio_three_halves(self):
        return self.three_halves_coeff / self.sqrt_coeff


def _lstsq(rows, rhs):
    # columns like eps**(i/2) span many decades; equilibrate before QR
    ncols = len(rows[0])
    scale = [max(abs(r[j]) for r in rows) or 1 for j in range(ncols)]
    a = mpmath.matrix([[r[j] / scale[j] for j in range(ncols)] for r in rows])
    b = mpmath.matrix(rhs)
    x, res = mpmath.qr_solve(a, b)
    return [x[j] / scale[j] for j in range(ncols)], res


def fit_local_expansion(k: int, prec: int = DEFAULT_PRECISION, eps_max="1e-3", eps_min="1e-7",
                        points: int = 16, terms: int = 8) -> LocalExpansion:
    """Fit the small branches near ``zeta_k = rho * omega**k`` (``k = 1..7``).

    Samples ``z = zeta_k (1 - eps)`` on a geometric ``eps`` grid, labels the
    branches by continuation along the ray, and least-squares fits the
    singular branch in powers of ``sqrt(eps)`` and the regular one in powers
    of ``eps``.
    """
    if not 1 <= k <= 7:
        raise ValueError("k must be in 1..7")
    const = knuth_constants(prec)
    with mpmath.workprec(prec):
        omega = mpmath.expj(2 * mpmath.pi / 7)
        # principal argument, so the ray stays inside the slit disk
        angle = 2 * mpmath.pi * (k % 7) / 7
        if angle > mpmath.pi:
            angle -= 2 * mpmath.pi
        zeta = const.rho * mpmath.expj(angle)
        hi, lo = mpmath.mpf(eps_max), mpmath.mpf(eps_min)
        eps = [hi * (lo / hi) ** (mpmath.mpf(j) / (points - 1)) for j in range(points)]
        pairs = track_small_branches([zeta * (1 - e) for e in eps], prec)
        rot = omega ** (-3 * k)
        sing_val, reg_val = const.tau * rot, const.tau2 * rot
        u1_near = abs(pairs[-1][0] - sing_val) < abs(pairs[-1][1] - sing_val)
        singular = "u1" if u1_near else "u2"
        s_idx = 0 if u1_near else 1
        ys = [p[s_idx] - sing_val for p in pairs]
        yr = [p[1 - s_idx] - reg_val for p in pairs]
        coeffs_s, res_s = _lstsq([[e ** (mpmath.mpf(i) / 2) for i in range(1, terms + 1)] for e in eps], ys)
        coeffs_r, res_r = _lstsq([[e**i for i in range(1, terms + 1)] for e in eps], yr)
        c_pred = -const.tau / mpmath.sqrt(5) * rot
        t27 = const.tau2**7
        d_pred = const.tau2 * (t27 + 1) / (5 * t27 - 2) * rot
        return LocalExpansion(
            k=k,
            singular_branch=singular,
            sqrt_coeff=coeffs_s[0],
            linear_coeff_singular=coeffs_s[1],
            three_halves_coeff=coeffs_s[2],
            regular_linear_coeff=coeffs_r[0],
            predicted_C=c_pred,
            predicted_D=d_pred,
            fit_residual=max(res_s, res_r),
        )


def _richardson(ns, values, powers, prec: int = 128):
    """Least-squares fit ``value ~ sum c_j * n**(-p_j)``; returns the coefficients."""
    with mpmath.workprec(prec):
        rows = [[mpmath.mpf(n) ** (-p) for p in powers] for n in ns]
        coeffs, _ = _lstsq(rows, [mpmath.mpf(v) for v in values])
        return coeffs


def ratio_convergence(n_max: int = 100, constants: AsymptoticConstants | None = None, sequences=None) -> dict:
    """Compare ``A_n / B_n`` with ``kappa1 - kappa2 / n`` on exact DP data."""
    constants = constants or knuth_constants(128)
    a, b = sequences or knuth_sequences(n_max)
    with mpmath.workprec(128):
        k1, k2 = constants.kappa1, constants.kappa2
        ratios = {n: mpmath.mpf(a[n - 1]) / b[n - 1] for n in range(1, n_max + 1)}
        err = {n: ratios[n] - k1 + k2 / n for n in ratios}
        lo = max(1, n_max // 4)
        window = range(lo, n_max + 1)
        scaled = {n: n**2 * abs(err[n]) for n in window}
        tail = [n for n in range(max(2, n_max // 2), n_max + 1)]
        k1_est, minus_k2, _ = _richardson(tail, [ratios[n] for n in tail], [0, 1, 2])
        decay = abs(err[n_max // 2]) / abs(err[n_max]) if n_max >= 2 else None
        return {
            "n_max": n_max,
            "ratio_first": ratios[1],
            "kappa1_est": k1_est,
            "kappa2_est": -minus_k2,
            "scaled_error_min": min(scaled.values()),
            "scaled_error_max": max(scaled.values()),
            "scaled_error": scaled,
            "decay_ratio": decay,
        }


def leading_constant_check(n_max: int = 200, sequences=None) -> dict:
    """Extrapolate ``(A_n + B_n) rho**(7n) n**(3/2)`` towards ``sqrt(5 / (7**3 pi))``."""
    if n_max < 50:
        raise ValueError("n_max must be >= 50")
    a, b = sequences or knuth_sequences(n_max)
    with mpmath.workprec(192):
        scale = mpmath.mpf(RHO7.numerator) / RHO7.denominator
        values = {n: (a[n - 1] + b[n - 1]) * scale**n * mpmath.mpf(n) ** 1.5 for n in range(1, n_max + 1)}
        tail = list(range(n_max // 2, n_max + 1))
        est = _richardson(tail, [values[n] for n in tail], [0, 1, 2, 3], 192)[0]
        target = mpmath.sqrt(5 / (343 * mpmath.pi))
        return {
            "n_max": n_max,
            "raw_at_n_max": values[n_max],
            "extrapolated": est,
            "target": target,
            "relative_error": abs(est / target - 1),
        }


def duchon_area_constant(n_max: int = 1500, n_min: int | None = None, area_data=None) -> dict:
    """Fit the mean Duchon excursion area with ``n**1.5 (c0 + c1 / sqrt(n))``.

    ``c0`` is the constant for the ``+2, -3`` walk model (trapezoidal area,
    length ``n``).  The club constant ``K`` lives in the North/East picture:
    the affine bijection scales areas by ``1 / (a + c) = 1/5`` and a path of
    length ``n`` ends at ``(3m, 2m)`` with ``m = n / 5``, so ``K = sqrt(5) c0``.
    """
    if n_max % 5 or n_max < 500:
        raise ValueError("n_max must be a multiple of 5 and >= 500")
    counts, areas = area_data or excursion_area_sums(DUCHON_JUMPS, n_max)
    n_min = n_min or n_max // 3
    ns = [n for n in range(n_min - n_min % 5 + 5, n_max + 1, 5)]
    with mpmath.workprec(128):
        vals = [mpmath.mpf(areas[n]) / (2 * counts[n]) / mpmath.mpf(n) ** 1.5 for n in ns]
        c0, c1 = _richardson(ns, vals, [0, mpmath.mpf(1) / 2])
        k_est = c0 * mpmath.sqrt(5)
        target = mpmath.sqrt(15 * mpmath.pi) / 2
        return {
            "n_max": n_max,
            "walk_model_constant": c0,
            "walk_model_target": target / mpmath.sqrt(5),
            "correction": c1,
            "K_est": k_est,
            "K_target": target,
            "relative_error": abs(k_est / target - 1),
        }
