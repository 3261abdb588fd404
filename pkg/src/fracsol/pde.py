"""Similarity-reduction solver for the time-fractional anomalous
diffusion equation

    D_t^alpha u = t^m (A x^d u_xx + B x^(d-1) u_x + C x^(d-2) u),  x, t > 0.

The substitution u = x^a phi(x^((d-2)/(alpha+m)) t) collapses the PDE to
the model fractional ODE handled by :mod:`fracsol.ode`; the three result
branches (Fox-H form for 0 < alpha < 2, Wright series for alpha > 2,
the d = 2 series in t alone) are materialized here, together with the
alpha = 1 exponential closed form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import wright
from .errors import (
    ComplexDiscriminantError,
    ComplexRootsError,
    DegenerateDError,
    DomainError,
    UnsupportedAlphaError,
)
from .foxh import HFunctionSpec, eval_mellin_barnes
from .fracseries import DEFAULT_ORDER_VERIFY, EulerPolynomialOperator, FracPowerSeries
from .ode import OdeProblem
from .wright import WrightSpec

_REAL_TOL = 1e-9

#: adopted d = 2 series parameters (lower parameter indexed per member k)
D2_FORM_MEMBER_INDEXED = "member-indexed"
#: the alternative display with lower parameter (alpha-1, alpha+m), argument K t^(alpha+m)
D2_FORM_FIXED_OFFSET = "fixed-offset"


@dataclass(frozen=True)
class DiffusionProblem:
    """(alpha, m, d, A, B, C, a, constants) specifying the diffusion equation."""

    alpha: float
    m: int
    d: float
    A: float
    B: float = 0.0
    C: float = 0.0
    a: float = 0.0
    constants: tuple = None

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.m < 0 or self.m != int(self.m):
            raise ValueError("m must be a non-negative integer")
        if self.A <= 0:
            raise ValueError("A must be positive")
        if self.constants is not None:
            object.__setattr__(self, "constants", tuple(complex(c) for c in self.constants))

    @property
    def K(self) -> float:
        return self.A * self.a**2 - self.A * self.a + self.B * self.a + self.C

    @property
    def rho(self) -> float:
        return self.alpha + self.m

    def constant(self, k: int) -> complex:
        """c_k (1-based); defaults to 1 when not supplied."""
        if self.constants is None or k - 1 >= len(self.constants):
            return 1.0 + 0.0j
        return self.constants[k - 1]


@dataclass(frozen=True)
class SimilarityMap:
    """u(x,t) = x^a phi(z) with reduced variable z = x^z_exponent * t."""

    a: float
    z_exponent: float

    def z(self, x: float, t: float) -> float:
        return x**self.z_exponent * t


def s_roots(problem: DiffusionProblem):
    """The closed-form root pair of the reduced characteristic equation.

    s_{1,2} = (alpha+m)/(2(2-d)) * (B/A + 2a - 1 +/- sqrt((1-B/A)^2 - 4C/A)).
    """
    if problem.d == 2:
        raise DegenerateDError("s_roots undefined for d = 2; use the d = 2 branch")
    A, B, C, a = problem.A, problem.B, problem.C, problem.a
    disc = (1.0 - B / A) ** 2 - 4.0 * C / A
    sq = cmath.sqrt(disc)
    pref = problem.rho / (2.0 * (2.0 - problem.d))
    s1 = pref * ((B / A + 2.0 * a - 1.0) + sq)
    s2 = pref * ((B / A + 2.0 * a - 1.0) - sq)
    return complex(s1), complex(s2)


def similarity_reduce(problem: DiffusionProblem):
    """The n = 2 OdeProblem of the reduced equation plus the ansatz map."""
    if problem.d == 2:
        raise DegenerateDError("similarity reduction degenerates at d = 2")
    A, B, d, a = problem.A, problem.B, problem.d, problem.a
    rho = problem.rho
    a2 = A * (d - 2.0) ** 2 / rho**2
    a1 = ((d - 2.0) / rho) * (A * (d - 2.0) / rho + B + A * (2.0 * a - 1.0))
    a0 = problem.K
    ode = OdeProblem(alpha=problem.alpha, m=problem.m, a_coeffs=(a0, a1, a2))
    return ode, SimilarityMap(a=a, z_exponent=(d - 2.0) / rho)


@dataclass(frozen=True)
class FoxHForm:
    """u = c1 x^a H[ arg_coef * x^(2-d) / t^(alpha+m) ] (fractional-order branch)."""

    spec: HFunctionSpec
    arg_coef: float
    a: float
    d: float
    rho: float
    roots_real: bool

    def argument(self, x: float, t: float) -> float:
        return self.arg_coef * x ** (2.0 - self.d) * t ** (-self.rho)


@dataclass(frozen=True)
class WrightMember:
    """c_k x^x_exponent t^t_exponent Psi[ arg_coef x^(d-2) t^(alpha+m) ]."""

    k: int
    spec: WrightSpec
    x_exponent: float
    t_exponent: float
    arg_coef: float
    x_arg_exponent: float  # d-2 off the d = 2 branch, 0 on it
    rho: float

    def argument(self, x: float, t: float) -> float:
        return self.arg_coef * x**self.x_arg_exponent * t**self.rho


@dataclass(frozen=True)
class WrightSeriesForm:
    members: tuple


@dataclass(frozen=True)
class ClosedFormExp:
    """u = c x^x_exponent t^t_exponent exp(-exp_coef x^(2-d) t^-(1+m))."""

    x_exponent: float
    t_exponent: float
    exp_coef: float
    d: float
    m: int


@dataclass(frozen=True)
class PdeSolution:
    """Constructed solution with its root pair, K and ansatz bookkeeping."""

    problem: DiffusionProblem
    form: object  # FoxHForm | WrightSeriesForm | ClosedFormExp
    s1: complex
    s2: complex
    K: float


def solve(problem: DiffusionProblem, d2_form: str = D2_FORM_MEMBER_INDEXED) -> PdeSolution:
    """Construct the solution representation for the applicable branch."""
    alpha, m, d = problem.alpha, problem.m, problem.d
    rho = problem.rho
    if d == 2:
        return _solve_d2(problem, d2_form)
    s1, s2 = s_roots(problem)
    if alpha == 2:
        raise UnsupportedAlphaError("alpha = 2 with d != 2 is covered by no branch")
    roots_real = max(abs(s1.imag), abs(s2.imag)) <= _REAL_TOL * max(1.0, abs(s1), abs(s2))
    if alpha < 2:
        lower = (
            (-s1.real / rho if roots_real else float("nan"), 1.0),
            (-s2.real / rho if roots_real else float("nan"), 1.0),
        ) + tuple((j / rho, 1.0) for j in range(1, m + 1))
        if roots_real:
            spec = HFunctionSpec(m=m + 2, l=0, upper=((1.0, rho),), lower=lower)
        else:
            spec = None  # evaluation will be declined
        arg_coef = 1.0 / (problem.A * (d - 2.0) ** 2 * rho**m)
        form = FoxHForm(
            spec=spec, arg_coef=arg_coef, a=problem.a, d=d, rho=rho, roots_real=roots_real
        )
        return PdeSolution(problem=problem, form=form, s1=s1, s2=s2, K=problem.K)
    # alpha > 2: Wright series members
    lam = problem.A * (d - 2.0) ** 2 * rho**m
    members = []
    for k in range(1, int(math.floor(alpha)) + 2):
        upper = (
            ((alpha - k - s1) / rho, 1.0),
            ((alpha - k - s2) / rho, 1.0),
        ) + tuple(((alpha - k + i) / rho, 1.0) for i in range(1, m + 1)) + ((1.0, 1.0),)
        spec = WrightSpec(upper=upper, lower=((1.0 + alpha - k, rho),))
        members.append(
            WrightMember(
                k=k,
                spec=spec,
                x_exponent=problem.a + (d - 2.0) * (alpha - k) / rho,
                t_exponent=alpha - k,
                arg_coef=lam,
                x_arg_exponent=d - 2.0,
                rho=rho,
            )
        )
    return PdeSolution(
        problem=problem, form=WrightSeriesForm(members=tuple(members)), s1=s1, s2=s2, K=problem.K
    )


def _solve_d2(problem: DiffusionProblem, d2_form: str) -> PdeSolution:
    alpha, m = problem.alpha, problem.m
    rho = problem.rho
    members = []
    for k in range(1, int(math.floor(alpha)) + 2):
        tail = tuple(((alpha - k + i) / rho, 1.0) for i in range(1, m + 1)) + ((1.0, 1.0),)
        if d2_form == D2_FORM_MEMBER_INDEXED:
            spec = WrightSpec(upper=tail, lower=((1.0 + alpha - k, rho),))
            arg_coef = problem.K * rho**m
        elif d2_form == D2_FORM_FIXED_OFFSET:
            spec = WrightSpec(upper=tail, lower=((alpha - 1.0, rho),))
            arg_coef = problem.K
        else:
            raise ValueError(f"unknown d2_form {d2_form!r}")
        members.append(
            WrightMember(
                k=k,
                spec=spec,
                x_exponent=problem.a,
                t_exponent=alpha - k,
                arg_coef=arg_coef,
                x_arg_exponent=0.0,
                rho=rho,
            )
        )
    return PdeSolution(
        problem=problem,
        form=WrightSeriesForm(members=tuple(members)),
        s1=complex("nan"),
        s2=complex("nan"),
        K=problem.K,
    )


def exp_closed_form(problem: DiffusionProblem, sign: int = +1) -> PdeSolution:
    """alpha = 1 exponential closed form (both sign branches).

    u = c x^{-(1/2)(B/A - 1 +/- sqrt(D))} t^{-((1+m)/(d-2))(d-2 +/- sqrt(D))}
        exp(-(1+m) x^(2-d) / (A (d-2)^2 t^(1+m))),   D = (1-B/A)^2 - 4C/A.
    """
    if problem.alpha != 1:
        raise UnsupportedAlphaError("exp closed form requires alpha = 1")
    if problem.d == 2:
        raise DegenerateDError("exp closed form requires d != 2")
    A, B, C, d, m = problem.A, problem.B, problem.C, problem.d, problem.m
    disc = (1.0 - B / A) ** 2 - 4.0 * C / A
    if disc < 0:
        raise ComplexDiscriminantError(f"discriminant {disc:g} < 0")
    sq = sign * math.sqrt(disc)
    x_exp = -0.5 * (B / A - 1.0 + sq)
    t_exp = -((1.0 + m) / (d - 2.0)) * (d - 2.0 + sq)
    q = (1.0 + m) / (A * (d - 2.0) ** 2)
    s1, s2 = s_roots(problem)
    form = ClosedFormExp(x_exponent=x_exp, t_exponent=t_exp, exp_coef=q, d=d, m=m)
    return PdeSolution(problem=problem, form=form, s1=s1, s2=s2, K=problem.K)


def evaluate(sol: PdeSolution, x: float, t: float) -> complex:
    """Evaluate a solution at a point of the open quadrant x, t > 0."""
    if x <= 0 or t <= 0:
        raise DomainError(f"(x, t) = ({x}, {t}) outside the domain x > 0, t > 0")
    form = sol.form
    prob = sol.problem
    if isinstance(form, ClosedFormExp):
        return (
            prob.constant(1)
            * x**form.x_exponent
            * t**form.t_exponent
            * math.exp(-form.exp_coef * x ** (2.0 - form.d) * t ** (-(1.0 + form.m)))
        )
    if isinstance(form, FoxHForm):
        if not form.roots_real:
            raise ComplexRootsError(
                "H-form has complex lower parameters; contour evaluation declined"
            )
        return prob.constant(1) * x**form.a * eval_mellin_barnes(
            form.spec, form.argument(x, t)
        )
    total = 0.0 + 0.0j
    for mem in form.members:
        total += (
            prob.constant(mem.k)
            * x**mem.x_exponent
            * t**mem.t_exponent
            * wright.evaluate(mem.spec, mem.argument(x, t))
        )
    return total


def series_members(sol: PdeSolution, order: int = DEFAULT_ORDER_VERIFY):
    """Coefficient images of the Wright members in the reduced variable,
    paired with the Euler operator of the reduced equation.

    Returns a list of (FracPowerSeries, EulerPolynomialOperator).  The
    series live on the lattice gamma = alpha - k, rho = alpha + m of the
    reduced variable z; the operator encodes the right side of the reduced
    ODE (for d = 2 the operator is the constant K with time weight m).
    """
    if not isinstance(sol.form, WrightSeriesForm):
        raise ValueError("series_members applies to Wright-series solutions")
    prob = sol.problem
    if prob.d == 2:
        op = EulerPolynomialOperator(coeffs=(prob.K,), time_weight=prob.m, roots=())
    else:
        ode_problem, _ = similarity_reduce(prob)
        op = ode_problem.operator()
    out = []
    for mem in sol.form.members:
        coeffs = []
        lam = mem.arg_coef
        for j in range(order + 1):
            coeffs.append(wright.series_term(mem.spec, 1.0, j) * lam**j)
        out.append(
            (FracPowerSeries(mem.t_exponent, mem.rho, tuple(coeffs)), op)
        )
    return out
