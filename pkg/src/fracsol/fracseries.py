"""Exact calculus on generalized power series sum_j c_j z^(gamma + rho j).

These are the verification backbone: termwise Riemann-Liouville
differentiation and Euler-operator application are exact on the exponent
lattice, so solution identities can be checked coefficient by
coefficient instead of through quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateLeadingError,
    ExponentOutOfRangeError,
    NoConvergenceError,
    PoleError,
)
from .gammafn import gamma_ratio, is_nonpositive_integer, ln_gamma_vec

#: tolerance for recognizing coincident exponents when aligning series
EXPONENT_TOL = 1e-12

DEFAULT_ORDER_VERIFY = 50
DEFAULT_ORDER_EVAL = 200


@dataclass(frozen=True)
class FracPowerSeries:
    """Truncated generalized power series sum_j coeffs[j] * z^(gamma0 + rho j)."""

    gamma0: float
    rho: float
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "gamma0", float(self.gamma0))
        object.__setattr__(self, "rho", float(self.rho))
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        if self.rho <= 0:
            raise ValueError("exponent step rho must be positive")
        if not all(np.isfinite(c.real) and np.isfinite(c.imag) for c in self.coeffs):
            raise ValueError("series coefficients must be finite")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def exponent(self, j: int) -> float:
        return self.gamma0 + self.rho * j

    def scaled(self, factor) -> "FracPowerSeries":
        return FracPowerSeries(self.gamma0, self.rho, tuple(factor * c for c in self.coeffs))


def rl_derivative(series: FracPowerSeries, alpha: float) -> FracPowerSeries:
    """Termwise Riemann-Liouville derivative of fractional order alpha > 0.

    z^p maps to Gamma(p+1)/Gamma(p+1-alpha) z^(p-alpha); exponents where
    p - alpha is a negative integer are annihilated (kernel of D^alpha).
    """
    if alpha <= 0:
        raise ValueError("rl_derivative requires alpha > 0")
    if series.gamma0 <= -1.0:
        raise ExponentOutOfRangeError(
            f"leading exponent {series.gamma0:g} <= -1 is not RL-differentiable"
        )
    new = []
    for j, c in enumerate(series.coeffs):
        p = series.exponent(j)
        ratio = _gamma_ratio_complexsafe(p + 1.0, p + 1.0 - alpha)
        new.append(c * ratio)
    return FracPowerSeries(series.gamma0 - alpha, series.rho, tuple(new))


def _gamma_ratio_complexsafe(pnum: float, pden: float) -> float:
    # gamma_ratio with both arguments real; numerator pole cannot occur for
    # lattice exponents above -1, but guard anyway.
    try:
        return gamma_ratio(pnum, pden)
    except PoleError:
        raise ExponentOutOfRangeError(
            f"exponent lattice hit a numerator gamma pole at {pnum:g}"
        )


@dataclass(frozen=True)
class EulerPolynomialOperator:
    """Operator z^m (a_n z^n d^n/dz^n + ... + a_1 z d/dz + a_0).

    On z^p the bracket acts as multiplication by the characteristic
    polynomial P(p) = sum_i a_i p(p-1)...(p-i+1) = a_n prod_j (p - s_j);
    the z^m prefactor raises every exponent by time_weight.
    """

    coeffs: tuple  # a_0 .. a_n
    time_weight: int = 0
    roots: tuple = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(a) for a in self.coeffs))
        if self.time_weight < 0 or self.time_weight != int(self.time_weight):
            raise ValueError("time_weight must be a non-negative integer")
        if self.roots is None:
            object.__setattr__(self, "roots", _char_roots(self.coeffs))
        else:
            object.__setattr__(self, "roots", tuple(complex(s) for s in self.roots))
            self._check_root_form()

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    def char_value(self, s) -> complex:
        """P(s) via the falling-factorial expansion (exact in the coefficients)."""
        s = complex(s)
        total = 0.0 + 0.0j
        ff = 1.0 + 0.0j
        for i, a in enumerate(self.coeffs):
            total += a * ff
            ff *= s - i
        return total

    def char_monomials(self) -> np.ndarray:
        """Monomial coefficients of P(s), lowest degree first."""
        return _char_monomials(self.coeffs)

    def _check_root_form(self):
        for s in self.roots:
            probe = abs(self.char_value(s))
            norm = max(1.0, max(abs(a) for a in self.coeffs)) * max(1.0, abs(s)) ** max(
                1, self.degree
            )
            if probe > 1e-8 * norm:
                raise ValueError(
                    f"root form disagrees with coefficients: |P({s})| = {probe:g}"
                )


def _char_monomials(coeffs) -> np.ndarray:
    acc = np.zeros(1)
    ff = np.array([1.0])
    for i, a in enumerate(coeffs):
        acc = np.polynomial.polynomial.polyadd(acc, a * ff)
        ff = np.polynomial.polynomial.polymul(ff, np.array([-float(i), 1.0]))
    return acc


def _char_roots(coeffs) -> tuple:
    """Roots of the characteristic polynomial of an Euler operator."""
    n = len(coeffs) - 1
    if n == 0:
        return ()
    c = _char_monomials(tuple(float(a) for a in coeffs))
    if abs(c[-1]) == 0.0:
        raise DegenerateLeadingError("leading coefficient a_n vanishes")
    if n == 1:
        return (complex(-c[0] / c[1]),)
    if n == 2:
        a, b, cc = c[2], c[1], c[0]
        disc = complex(b * b - 4.0 * a * cc)
        sq = np.sqrt(disc)
        # stable quadratic formula
        qq = -0.5 * (b + (sq if b.real >= 0 else -sq))
        r1 = qq / a
        r2 = cc / qq if qq != 0 else 0.0 + 0.0j
        return (complex(r1), complex(r2))
    roots = np.polynomial.polynomial.polyroots(c)
    deriv = np.polynomial.polynomial.polyder(c)
    refined = []
    for r in roots:
        pv = np.polynomial.polynomial.polyval(r, c)
        dv = np.polynomial.polynomial.polyval(r, deriv)
        if dv != 0:
            r = r - pv / dv  # one Newton step
        refined.append(complex(r))
    return tuple(refined)


def euler_apply(op: EulerPolynomialOperator, series: FracPowerSeries) -> FracPowerSeries:
    """Apply the operator termwise: c_j -> c_j * P(gamma0 + rho j), exponents + m."""
    new = tuple(c * op.char_value(series.exponent(j)) for j, c in enumerate(series.coeffs))
    return FracPowerSeries(series.gamma0 + op.time_weight, series.rho, new)


def eval_series(series: FracPowerSeries, z: float) -> complex:
    """Compensated summation of the truncated series at z > 0.

    Raises NoConvergenceError when the retained tail is still growing and
    non-negligible, which signals z outside the empirical convergence range.
    """
    if z <= 0:
        raise ValueError("eval_series requires z > 0")
    logz = math.log(z)
    total = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    mags = []
    for j, c in enumerate(series.coeffs):
        term = c * complex(np.exp(series.exponent(j) * logz))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        mags.append(abs(term))
    if len(mags) >= 4:
        tail = mags[-3:]
        if tail[-1] > tail[0] and tail[-1] > 1e-12 * max(abs(total), 1e-300):
            raise NoConvergenceError(
                f"series tail not decaying at z = {z:g} (last |term| = {tail[-1]:g})"
            )
    return total


def gamma_product_identity_check(a: float, m: int, b) -> tuple:
    """Both sides of the gamma product identity
    Gamma(1+ab+m)^{-1} prod_i Gamma(i/a+b+1) = (a^m Gamma(1+ab))^{-1} prod_i Gamma(i/a+b).

    Returns (lhs, rhs); raises PoleError when any argument sits on a pole.
    When either side would overflow a double, both are jointly rescaled by a
    common factor, which leaves their relative difference unchanged.
    """
    if a <= 0:
        raise ValueError("requires a > 0")
    if m < 1 or m != int(m):
        raise ValueError("m must be a positive integer")
    b = complex(b)
    args = [1.0 + a * b + m, 1.0 + a * b]
    args += [i / a + b + 1.0 for i in range(1, m + 1)]
    args += [i / a + b for i in range(1, m + 1)]
    for w in args:
        if is_nonpositive_integer(w):
            raise PoleError(f"gamma argument {w} at a pole")
    log_lhs = -complex(ln_gamma_vec(1.0 + a * b + m))
    for i in range(1, m + 1):
        log_lhs += complex(ln_gamma_vec(i / a + b + 1.0))
    log_rhs = -m * math.log(a) - complex(ln_gamma_vec(1.0 + a * b))
    for i in range(1, m + 1):
        log_rhs += complex(ln_gamma_vec(i / a + b))
    shift = max(log_lhs.real, log_rhs.real)
    if abs(shift) < 700.0:
        shift = 0.0
    lhs = complex(np.exp(log_lhs - shift))
    rhs = complex(np.exp(log_rhs - shift))
    if abs(b.imag) == 0.0:
        return lhs.real, rhs.real
    return lhs, rhs


def align_series(sa: FracPowerSeries, sb: FracPowerSeries):
    """Index offset aligning the exponent lattices of two series.

    Returns (offset, n_overlap) such that sa.exponent(j + offset) matches
    sb.exponent(j).  Raises ExponentMisalignmentError when the lattices
    are incompatible.
    """
    from .errors import ExponentMisalignmentError

    if abs(sa.rho - sb.rho) > EXPONENT_TOL * max(1.0, abs(sa.rho)):
        raise ExponentMisalignmentError(
            f"exponent steps differ: {sa.rho:g} vs {sb.rho:g}"
        )
    off = (sb.gamma0 - sa.gamma0) / sa.rho
    offset = round(off)
    if abs(off - offset) > 1e-9:
        raise ExponentMisalignmentError(
            f"leading exponents {sa.gamma0:g}, {sb.gamma0:g} not on a common lattice"
        )
    n_overlap = min(len(sa.coeffs) - offset, len(sb.coeffs))
    return offset, max(0, n_overlap)
