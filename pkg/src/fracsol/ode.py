"""Explicit solutions of the model fractional Euler-type ODE

    D^alpha y(z) = z^m (a_n z^n y^(n) + ... + a_1 z y' + a_0 y),  z > 0.

Two branches: alpha < n gives a single Fox-H solution, alpha > n gives
[alpha]+1 generalized-Wright series members.  alpha = n is rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import foxh, fracseries, wright
from .errors import (
    BranchMismatchError,
    ComplexRootsError,
    DegenerateLeadingError,
)
from .foxh import HFunctionSpec, eval_mellin_barnes
from .fracseries import DEFAULT_ORDER_VERIFY, EulerPolynomialOperator, FracPowerSeries
from .gammafn import ln_gamma_vec
from .wright import WrightSpec

_REAL_ROOT_TOL = 1e-9


@dataclass(frozen=True)
class OdeProblem:
    """(alpha, m, a_0..a_n) fully specifying the model equation."""

    alpha: float
    m: int
    a_coeffs: tuple  # a_0 .. a_n, leading a_n > 0

    def __post_init__(self):
        object.__setattr__(self, "a_coeffs", tuple(float(a) for a in self.a_coeffs))
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.m < 0 or self.m != int(self.m):
            raise ValueError("m must be a non-negative integer")
        if len(self.a_coeffs) < 1:
            raise ValueError("need at least a_0")
        if self.a_coeffs[-1] <= 0:
            raise DegenerateLeadingError("leading coefficient a_n must be positive")
        if self.alpha == self.n:
            raise BranchMismatchError(
                f"alpha = n = {self.n}: neither solution branch applies"
            )

    @property
    def n(self) -> int:
        return len(self.a_coeffs) - 1

    def operator(self) -> EulerPolynomialOperator:
        return EulerPolynomialOperator(coeffs=self.a_coeffs, time_weight=self.m)


@dataclass(frozen=True)
class CharPoly:
    """Characteristic polynomial in expanded monomial form plus its roots."""

    monomials: tuple  # lowest degree first
    roots: tuple


def characteristic_poly(problem: OdeProblem) -> CharPoly:
    """P(s) = a_n s(s-1)...(s-n+1) + ... + a_1 s + a_0, expanded, with roots.

    Closed forms for n <= 2, companion-matrix eigenvalues plus one Newton
    step for n >= 3; residual checked against the coefficient norm.
    """
    op = problem.operator()
    mono = op.char_monomials()
    roots = op.roots
    norm = float(np.max(np.abs(mono)))
    for s in roots:
        if abs(op.char_value(s)) > 1e-10 * norm * max(1.0, abs(s)) ** problem.n:
            raise ArithmeticError(f"characteristic root {s} failed residual check")
    return CharPoly(monomials=tuple(float(c) for c in mono), roots=roots)


@dataclass(frozen=True)
class SmallAlphaForm:
    """y(z) = c1 * H[ arg_coef * z^(-(alpha+m)) ] for alpha < n."""

    spec: HFunctionSpec
    arg_coef: float
    power: float  # alpha + m

    def evaluate(self, z: float, c1=1.0) -> complex:
        return c1 * eval_mellin_barnes(self.spec, self.arg_coef * z ** (-self.power))


@dataclass(frozen=True)
class LargeAlphaMember:
    """One series member z^(alpha-k) * Psi[ lam * z^(alpha+m) ] for alpha > n."""

    k: int
    spec: WrightSpec
    lam: float
    leading_exponent: float  # alpha - k
    power: float  # alpha + m

    def evaluate(self, z: float) -> complex:
        return z ** self.leading_exponent * wright.evaluate(self.spec, self.lam * z ** self.power)

    def series(self, order: int = DEFAULT_ORDER_VERIFY) -> FracPowerSeries:
        """Coefficient image on the lattice gamma = alpha - k, rho = alpha + m."""
        coeffs = []
        for j in range(order + 1):
            term = wright.series_term(self.spec, 1.0, j)  # gamma-product / j!
            coeffs.append(term * self.lam**j)
        return FracPowerSeries(self.leading_exponent, self.power, tuple(coeffs))


@dataclass(frozen=True)
class OdeSolution:
    """Tagged solution: a single H-form (alpha < n) or Wright members (alpha > n)."""

    problem: OdeProblem
    roots: tuple
    constants: tuple
    small: SmallAlphaForm = None
    members: tuple = ()

    @property
    def branch(self) -> str:
        return "small-alpha" if self.small is not None else "large-alpha"

    def evaluate(self, z: float) -> complex:
        if self.small is not None:
            return self.small.evaluate(z, self.constants[0])
        return sum(
            c * mem.evaluate(z) for c, mem in zip(self.constants, self.members)
        )


def _roots_real(roots) -> bool:
    return all(abs(s.imag) <= _REAL_ROOT_TOL * max(1.0, abs(s)) for s in roots)


def solve_small_alpha(problem: OdeProblem, constants=None) -> OdeSolution:
    """H-function solution for 0 < alpha < n (real characteristic roots only)."""
    if not problem.alpha < problem.n:
        raise BranchMismatchError(f"alpha = {problem.alpha} is not < n = {problem.n}")
    cp = characteristic_poly(problem)
    if not _roots_real(cp.roots):
        raise ComplexRootsError(
            "characteristic roots are complex; H contour evaluator declines "
            "(use the series verification path)"
        )
    rho = problem.alpha + problem.m
    lower = tuple((-s.real / rho, 1.0) for s in cp.roots) + tuple(
        (j / rho, 1.0) for j in range(1, problem.m + 1)
    )
    spec = HFunctionSpec(
        m=problem.m + problem.n,
        l=0,
        upper=((1.0, rho),),
        lower=lower,
    )
    an = problem.a_coeffs[-1]
    arg_coef = 1.0 / (an * rho ** (problem.m + problem.n))
    constants = (1.0,) if constants is None else tuple(constants)
    return OdeSolution(
        problem=problem,
        roots=cp.roots,
        constants=constants,
        small=SmallAlphaForm(spec=spec, arg_coef=arg_coef, power=rho),
    )


def solve_large_alpha(problem: OdeProblem, constants=None) -> OdeSolution:
    """Wright-series solution members for alpha > n, k = 1..[alpha]+1."""
    if not problem.alpha > problem.n:
        raise BranchMismatchError(f"alpha = {problem.alpha} is not > n = {problem.n}")
    cp = characteristic_poly(problem)
    alpha, m, n = problem.alpha, problem.m, problem.n
    rho = alpha + m
    an = problem.a_coeffs[-1]
    lam = an * rho ** (m + n)
    nmem = int(math.floor(alpha)) + 1
    members = []
    for k in range(1, nmem + 1):
        upper = tuple(((alpha - k - s) / rho, 1.0) for s in cp.roots)
        upper += tuple(((alpha - k + i) / rho, 1.0) for i in range(1, m + 1))
        upper += ((1.0, 1.0),)
        spec = WrightSpec(upper=upper, lower=((1.0 + alpha - k, rho),))
        members.append(
            LargeAlphaMember(
                k=k, spec=spec, lam=lam, leading_exponent=alpha - k, power=rho
            )
        )
    if constants is None:
        constants = (1.0,) * nmem
    return OdeSolution(
        problem=problem, roots=cp.roots, constants=tuple(constants), members=tuple(members)
    )


def solve(problem: OdeProblem, constants=None) -> OdeSolution:
    """Dispatch on the branch condition alpha < n vs alpha > n."""
    if problem.alpha < problem.n:
        return solve_small_alpha(problem, constants)
    return solve_large_alpha(problem, constants)
