"""Tests for the fractional ODE solver: characteristic polynomial, the H-form
branch (order below n) and the Wright-series branch (order above n)."""

import math

import pytest
from numpy.testing import assert_allclose

from fracsol import foxh, wright
from fracsol.errors import (
    BranchMismatchError,
    ComplexRootsError,
    DegenerateLeadingError,
)
from fracsol.fracseries import euler_apply, eval_series, rl_derivative
from fracsol.ode import (
    OdeProblem,
    characteristic_poly,
    solve,
    solve_large_alpha,
    solve_small_alpha,
)


class TestOdeProblem:
    def test_rejects_nonpositive_leading(self):
        with pytest.raises(DegenerateLeadingError):
            OdeProblem(alpha=0.5, m=0, a_coeffs=(0.0, -1.0))

    def test_rejects_alpha_equal_n(self):
        with pytest.raises(BranchMismatchError):
            solve(OdeProblem(alpha=2.0, m=0, a_coeffs=(0.0, 0.0, 1.0)))


class TestCharacteristicPoly:
    def test_pure_second_order(self):
        # a2 z^2 y'': P(s) = s(s-1), roots {0, 1}
        cp = characteristic_poly(OdeProblem(alpha=0.5, m=0, a_coeffs=(0.0, 0.0, 1.0)))
        assert sorted(r.real for r in cp.roots) == pytest.approx([0.0, 1.0])

    def test_linear(self):
        # a1 z y' - 2 y: P(s) = s - 2
        cp = characteristic_poly(OdeProblem(alpha=0.5, m=0, a_coeffs=(-2.0, 1.0)))
        assert [complex(r) for r in cp.roots] == pytest.approx([2.0 + 0j])

    def test_double_root(self):
        # z^2 y'' + z y': P(s) = s(s-1) + s = s^2, double root 0
        cp = characteristic_poly(OdeProblem(alpha=0.5, m=0, a_coeffs=(0.0, 1.0, 1.0)))
        assert [complex(r) for r in cp.roots] == pytest.approx([0.0 + 0j, 0.0 + 0j])


class TestSmallAlphaBranch:
    def test_structure(self):
        # n=2, m=1, alpha=0.8: q = m+n = 3, argument divisor a2 * 1.8^3
        prob = OdeProblem(alpha=0.8, m=1, a_coeffs=(0.0, 0.0, 1.0))
        sol = solve_small_alpha(prob)
        spec = sol.small.spec
        assert (spec.m, spec.l, spec.p, spec.q) == (3, 0, 1, 3)
        assert spec.upper == ((1.0, pytest.approx(1.8)),)
        assert sol.small.arg_coef == pytest.approx(1.0 / 1.8**3)

    def test_lower_parameters(self):
        # roots {0, 1} of a2 z^2 y'': lower entries (-s_j/rho, 1)
        prob = OdeProblem(alpha=0.5, m=0, a_coeffs=(0.0, 0.0, 1.0))
        sol = solve_small_alpha(prob)
        firsts = sorted(b for b, _ in sol.small.spec.lower)
        assert firsts == pytest.approx([-1 / 0.5, 0.0])

    def test_h_kernel_decay(self):
        # the H-function underlying the solution decays at large argument
        prob = OdeProblem(alpha=0.8, m=1, a_coeffs=(0.0, 0.0, 1.0))
        sol = solve_small_alpha(prob)
        spec = sol.small.spec
        v5 = abs(foxh.eval_mellin_barnes(spec, 5.0))
        v10 = abs(foxh.eval_mellin_barnes(spec, 10.0))
        assert v10 < v5

    def test_branch_guard(self):
        with pytest.raises(BranchMismatchError):
            solve_small_alpha(OdeProblem(alpha=2.5, m=0, a_coeffs=(0.0, 0.0, 1.0)))

    def test_complex_roots_rejected(self):
        # z^2 y'' - z y' + y: P(s) = s^2 - 2s + 1... use one with complex roots:
        # P(s) = s(s-1) + s + 1 = s^2 + 1, roots +-i
        prob = OdeProblem(alpha=0.5, m=0, a_coeffs=(1.0, 1.0, 1.0))
        with pytest.raises(ComplexRootsError):
            solve_small_alpha(prob)


class TestLargeAlphaBranch:
    def test_member_count(self):
        prob = OdeProblem(alpha=2.5, m=0, a_coeffs=(0.0, 0.0, 1.0))
        sol = solve_large_alpha(prob)
        assert len(sol.members) == 3  # floor(2.5) + 1

    def test_leading_exponents(self):
        # member k has prefactor z^{alpha-k}; k=1 gives gamma0 = 1.5, rho = 2.5
        prob = OdeProblem(alpha=2.5, m=0, a_coeffs=(0.0, 0.0, 1.0))
        sol = solve_large_alpha(prob)
        s = sol.members[0].series(order=5)
        assert s.gamma0 == pytest.approx(1.5)
        assert s.rho == pytest.approx(2.5)

    def test_series_entire(self):
        # Delta = (alpha+m) - (n+m+1) = alpha - n - 1 > -1 whenever alpha > n
        prob = OdeProblem(alpha=2.5, m=1, a_coeffs=(0.0, 0.0, 1.0))
        sol = solve_large_alpha(prob)
        for member in sol.members:
            verdict = wright.convergence(member.spec)
            assert verdict.delta == pytest.approx(prob.alpha - prob.n - 1)
            assert verdict.radius == math.inf

    def test_branch_guard(self):
        with pytest.raises(BranchMismatchError):
            solve_large_alpha(OdeProblem(alpha=0.5, m=0, a_coeffs=(0.0, 0.0, 1.0)))

    @pytest.mark.parametrize("k_idx", [0, 1, 2])
    def test_coefficient_residual(self, k_idx):
        # the solution property at coefficient level: D^alpha u matches the Euler-operator
        # image of u termwise
        # a_1 = 0.3 keeps the characteristic roots {0, 0.7} clear of the
        # degenerate coincidence s_i = alpha - k (which poles the k-th member)
        prob = OdeProblem(alpha=2.5, m=1, a_coeffs=(0.0, 0.3, 1.0))
        sol = solve_large_alpha(prob)
        member = sol.members[k_idx]
        u = member.series(order=25)
        lhs = rl_derivative(u, prob.alpha)
        rhs_series = euler_apply(prob.operator(), u)
        # align: euler image exponents sit one rho-step above the lhs start
        worst = 0.0
        for j in range(20):
            a = complex(lhs.coeffs[j + 1])
            b = complex(rhs_series.coeffs[j])
            worst = max(worst, abs(a - b) / max(abs(a), abs(b), 1e-300))
        assert worst < 1e-10

    def test_member_eval_matches_series(self):
        # two independent summation paths: Wright evaluator vs power series
        prob = OdeProblem(alpha=2.5, m=0, a_coeffs=(0.0, 0.0, 1.0))
        sol = solve_large_alpha(prob)
        member = sol.members[0]
        z = 0.5
        direct = complex(member.evaluate(z))
        summed = complex(eval_series(member.series(order=60), z))
        assert_allclose(direct, summed, rtol=1e-10)


class TestDispatch:
    def test_small(self):
        sol = solve(OdeProblem(alpha=0.5, m=0, a_coeffs=(0.0, 0.0, 1.0)))
        assert sol.branch == "small-alpha"

    def test_large(self):
        sol = solve(OdeProblem(alpha=3.2, m=0, a_coeffs=(0.0, 0.0, 1.0)))
        assert sol.branch == "large-alpha"


class TestRootPermutationInvariance:
    @pytest.mark.parametrize("z", [0.5, 2.0])
    def test_lower_order_irrelevant(self, z):
        prob = OdeProblem(alpha=0.8, m=1, a_coeffs=(0.0, 0.5, 1.0))
        sol = solve_small_alpha(prob)
        spec = sol.small.spec
        perm = foxh.HFunctionSpec(
            m=spec.m, l=0, upper=spec.upper, lower=tuple(reversed(spec.lower))
        )
        assert_allclose(
            foxh.eval_mellin_barnes(spec, z),
            foxh.eval_mellin_barnes(perm, z),
            rtol=1e-10,
        )
