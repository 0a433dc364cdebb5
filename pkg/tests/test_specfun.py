"""Gamma machinery, Pochhammer symbols, Jacobi polynomials, quadrature, 3F2."""

import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.integrate
import scipy.special
import sympy

from crosp.errors import DomainError
from crosp.specfun import (
    Hyp3F2Params,
    beta,
    falling,
    gauss_jacobi,
    hyp3f2_unit,
    jacobi_at_one,
    jacobi_eval,
    log_gamma,
    reg_inc_beta,
    rising,
    signed_log_gamma,
    watson_rhs,
)

SQRT_PI = math.sqrt(math.pi)


class TestLogGamma:
    def test_at_one(self):
        assert log_gamma(1.0) == 0.0

    def test_at_half(self):
        assert log_gamma(0.5) == pytest.approx(math.log(SQRT_PI), rel=1e-15)

    def test_recursion_from_half(self):
        # Gamma(7.5) built by the product recursion Gamma(x+1) = x Gamma(x)
        value = SQRT_PI
        for k in range(7):
            value *= 0.5 + k
        assert log_gamma(7.5) == pytest.approx(math.log(value), rel=1e-14)

    @pytest.mark.parametrize("x", [1e-3, 0.02, 0.7, 1.5, 33.0, 420.0, 1e3])
    def test_accuracy_against_symbolic(self, x):
        exact = float(sympy.loggamma(sympy.Rational(x).limit_denominator(10**6)).evalf(30))
        assert log_gamma(x) == pytest.approx(exact, rel=1e-13, abs=1e-14)

    @pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            log_gamma(x)


class TestSignedLogGamma:
    @pytest.mark.parametrize("x,sign", [(-0.5, -1), (-1.5, 1), (-2.5, -1), (0.3, 1)])
    def test_signs(self, x, sign):
        _, s = signed_log_gamma(x)
        assert s == sign

    def test_reflection_formulas(self):
        # Gamma(1-z) Gamma(z) = pi / sin(pi z) and the half-shifted variant
        for z in (0.3, 0.75, 1.6, 2.2, -0.7, 3.45):
            lg1, s1 = signed_log_gamma(1 - z)
            lg2, s2 = signed_log_gamma(z)
            lhs = s1 * s2 * math.exp(lg1 + lg2)
            assert lhs == pytest.approx(math.pi / math.sin(math.pi * z), rel=1e-12)
            lg3, s3 = signed_log_gamma(0.5 - z)
            lg4, s4 = signed_log_gamma(0.5 + z)
            lhs2 = s3 * s4 * math.exp(lg3 + lg4)
            assert lhs2 == pytest.approx(math.pi / math.cos(math.pi * z), rel=1e-12)

    def test_pole(self):
        with pytest.raises(DomainError):
            signed_log_gamma(-3)


class TestBeta:
    def test_unit(self):
        assert beta(1, 1) == pytest.approx(1.0, rel=1e-15)

    def test_half_half(self):
        assert beta(0.5, 0.5) == pytest.approx(math.pi, rel=1e-14)

    def test_five_halves(self):
        # Gamma(5/2) Gamma(1) / Gamma(7/2) = 2/5 by the recursion
        assert beta(2.5, 1.0) == pytest.approx(0.4, rel=1e-14)

    def test_duplication_formula(self):
        for z in (0.3, 1.0, 2.7, 10.0):
            lhs = log_gamma(2 * z)
            rhs = (log_gamma(z) + log_gamma(z + 0.5)
                   + (2 * z - 1) * math.log(2) - 0.5 * math.log(math.pi))
            assert abs(lhs - rhs) <= 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            beta(0, 1)


class TestRegIncBeta:
    def test_uniform_case(self):
        assert reg_inc_beta(0.3, 1, 1) == pytest.approx(0.3, abs=1e-15)

    def test_symmetry_half(self):
        assert reg_inc_beta(0.5, 0.5, 0.5) == pytest.approx(0.5, abs=1e-13)

    def test_against_quadrature(self):
        a, b, x = 1.0, 0.5, 0.25
        integral, _ = scipy.integrate.quad(
            lambda s: s ** (a - 1) * (1 - s) ** (b - 1), 0, x)
        assert reg_inc_beta(x, a, b) == pytest.approx(integral / beta(a, b), abs=1e-12)

    def test_monotone_and_endpoints(self):
        xs = np.linspace(0, 1, 101)
        vals = reg_inc_beta(xs, 2.5, 0.75)
        assert vals[0] == 0.0 and vals[-1] == pytest.approx(1.0, abs=1e-15)
        assert np.all(np.diff(vals) >= 0)

    def test_domain(self):
        with pytest.raises(DomainError):
            reg_inc_beta(1.2, 1, 1)


class TestPochhammer:
    def test_rising_empty(self):
        assert rising(3.7, 0) == 1

    def test_rising_integer(self):
        assert rising(3, 4) == 360

    def test_rising_half(self):
        assert rising(Fraction(1, 2), 2) == Fraction(3, 4)

    def test_falling(self):
        assert falling(5, 2) == 20
        assert falling(2, 3) == 0
        assert falling(1.0, 0) == 1

    @pytest.mark.parametrize("a", [Fraction(2, 3), Fraction(-7, 4), 5, Fraction(0)])
    @pytest.mark.parametrize("k", [0, 1, 2, 5, 9])
    def test_duality_exact(self, a, k):
        assert falling(a, k) == (-1) ** k * rising(-a, k)

    def test_product_identity_exact(self):
        # (2a+2b+2)_{2n} = 2^{2n} (a+b+1)_n (a+b+3/2)_n
        grid = [Fraction(0), Fraction(1, 3), Fraction(5, 7), Fraction(-1, 4), Fraction(2)]
        for a in grid:
            for b in grid:
                for n in range(9):
                    lhs = rising(2 * a + 2 * b + 2, 2 * n)
                    rhs = (4**n * rising(a + b + 1, n)
                           * rising(a + b + Fraction(3, 2), n))
                    assert lhs == rhs


def _rodrigues_poly(n, a, b):
    """Symbolic Jacobi polynomial from the derivative formula."""
    t = sympy.Symbol("t")
    inner = (1 - t) ** (n + a) * (1 + t) ** (n + b)
    expr = ((-1) ** n / (2**n * sympy.factorial(n))
            * (1 - t) ** (-a) * (1 + t) ** (-b) * sympy.diff(inner, t, n))
    return sympy.Poly(sympy.expand(sympy.simplify(expr)), t)


class TestJacobi:
    def test_degree_zero(self):
        assert jacobi_eval(0, 0.3, 0.7, -0.2) == 1.0

    def test_degree_one_legendre(self):
        assert jacobi_eval(1, 0, 0, 0.5) == pytest.approx(0.5, abs=1e-15)

    def test_value_at_one_binomial(self):
        assert jacobi_eval(2, 1, 1, 1.0) == pytest.approx(3.0, rel=1e-14)

    @pytest.mark.parametrize("a", [0, sympy.Rational(1, 2), 1, 2])
    @pytest.mark.parametrize("b", [0, sympy.Rational(1, 2), 1, 2])
    def test_against_rodrigues(self, a, b):
        ts = np.cos(np.pi * np.arange(21) / 20)
        for n in range(7):
            poly = _rodrigues_poly(n, a, b)
            for t in ts:
                expected = float(poly.eval(sympy.Float(t, 25)))
                assert abs(jacobi_eval(n, float(a), float(b), t) - expected) <= 1e-11

    def test_bound_by_value_at_one(self):
        # holds for alpha >= beta >= 0, which covers every catalog space
        rng = np.random.default_rng(0)
        for _ in range(200):
            b = float(rng.uniform(0, 4))
            a = b + float(rng.uniform(0, 3))
            n = int(rng.integers(0, 12))
            t = float(rng.uniform(-1, 1))
            assert abs(jacobi_eval(n, a, b, t)) <= jacobi_at_one(n, a, b) * (1 + 1e-12)

    def test_bound_can_fail_with_swapped_parameters(self):
        # with beta > alpha the magnitude peaks at t = -1; degree 1 at (0, 1/2)
        assert abs(jacobi_eval(1, 0.0, 0.5, -1.0)) > jacobi_at_one(1, 0.0, 0.5)

    def test_domain(self):
        with pytest.raises(DomainError):
            jacobi_eval(-1, 0, 0, 0.0)
        with pytest.raises(DomainError):
            jacobi_eval(2, 0, 0, 1.5)


class TestJacobiAtOne:
    def test_trivial(self):
        assert jacobi_at_one(0, 2.3) == pytest.approx(1.0)

    def test_integer(self):
        assert jacobi_at_one(2, 1) == pytest.approx(3.0, rel=1e-14)

    def test_half(self):
        assert jacobi_at_one(3, 0.5) == pytest.approx(35 / 16, rel=1e-13)

    def test_negative_alpha_product_form(self):
        # (-0.5)(0.5)(1.5) / 3! between the gamma poles
        assert jacobi_at_one(3, -1.5) == pytest.approx(-0.0625, rel=1e-13)

    def test_domain(self):
        with pytest.raises(DomainError):
            jacobi_at_one(1, -2.5)


def _moment(alpha, beta_, j):
    """Integral of (1-t)^alpha (1+t)^beta t^j over [-1, 1].

    Binomial-beta expansion evaluated in exact arithmetic (the alternating
    sum cancels catastrophically in floats for larger j).
    """
    a = sympy.nsimplify(alpha)
    b = sympy.nsimplify(beta_)
    total = sum(
        sympy.binomial(j, i) * (-2) ** i * sympy.beta(a + i + 1, b + 1)
        for i in range(j + 1)
    )
    return float((2 ** (a + b + 1) * total).evalf(40))


class TestGaussJacobi:
    def test_one_node_legendre(self):
        rule = gauss_jacobi(1, 0, 0)
        assert rule.nodes[0] == pytest.approx(0.0, abs=1e-15)
        assert rule.weights[0] == pytest.approx(2.0, rel=1e-14)

    def test_one_node_shifted(self):
        rule = gauss_jacobi(1, 1, 0)
        assert rule.nodes[0] == pytest.approx(-1 / 3, rel=1e-14)
        assert rule.weights[0] == pytest.approx(2.0, rel=1e-14)

    def test_monomial_legendre(self):
        rule = gauss_jacobi(5, 0, 0)
        assert rule.integrate(lambda t: t**8) == pytest.approx(2 / 9, abs=1e-14)

    @pytest.mark.parametrize("alpha,beta_", [(0, 0), (1, 0), (0.5, 1.5), (2, 3), (-0.5, -0.5)])
    @pytest.mark.parametrize("m", [1, 2, 4, 7])
    def test_moment_exactness(self, alpha, beta_, m):
        rule = gauss_jacobi(m, alpha, beta_)
        for j in range(2 * m):
            quad = rule.integrate(lambda t: t**j)
            assert quad == pytest.approx(_moment(alpha, beta_, j), rel=1e-12, abs=1e-13)

    @pytest.mark.parametrize("alpha,beta_", [(0, 0), (1.5, 0.5), (3, 1)])
    def test_total_mass(self, alpha, beta_):
        rule = gauss_jacobi(9, alpha, beta_)
        expected = 2 ** (alpha + beta_ + 1) * beta(alpha + 1, beta_ + 1)
        assert rule.total_mass == pytest.approx(expected, rel=1e-13)
        assert np.all(np.diff(rule.nodes) > 0)

    def test_against_scipy(self):
        rule = gauss_jacobi(12, 1.25, 0.75)
        nodes, weights = scipy.special.roots_jacobi(12, 1.25, 0.75)
        assert np.allclose(rule.nodes, nodes, atol=1e-12)
        assert np.allclose(rule.weights, weights, atol=1e-12)

    def test_orthogonality(self):
        for alpha, beta_ in ((0, 0), (1, 0.5), (2.5, 1)):
            rule = gauss_jacobi(12, alpha, beta_)
            for n in range(9):
                for m in range(n + 1, 9):
                    val = float(np.dot(
                        rule.weights,
                        [jacobi_eval(n, alpha, beta_, t) * jacobi_eval(m, alpha, beta_, t)
                         for t in rule.nodes],
                    ))
                    assert abs(val) <= 1e-11

    def test_domain(self):
        with pytest.raises(DomainError):
            gauss_jacobi(0, 0, 0)
        with pytest.raises(DomainError):
            gauss_jacobi(3, -1, 0)


class TestHyp3F2:
    def test_zero_numerator(self):
        assert hyp3f2_unit(Hyp3F2Params(0, 0.4, 1.2, 0.7, 2.4)) == 1.0

    def test_two_term(self):
        assert hyp3f2_unit(Hyp3F2Params(-1, 1, 1, 2, 2)) == pytest.approx(0.75, rel=1e-15)

    def test_three_term_float(self):
        # hand-computed terminating sum: 1 - 24/7 + 9/14 = -25/14
        p = Hyp3F2Params(-2, 2.4, -1.3, 0.7, -2.6)
        assert hyp3f2_unit(p) == pytest.approx(-25 / 14, rel=1e-14)

    def test_three_term_exact(self):
        p = Hyp3F2Params(Fraction(-2), Fraction(12, 5), Fraction(-13, 10),
                         Fraction(7, 10), Fraction(-13, 5))
        assert hyp3f2_unit(p, mode="exact") == Fraction(-25, 14)

    def test_denominator_hits_zero(self):
        with pytest.raises(DomainError):
            hyp3f2_unit(Hyp3F2Params(-3, 1.0, 1.0, -2, 2.0))

    def test_deep_negative_denominator_allowed(self):
        # terminates at K=1 before the denominator pole at -3 is reached
        val = hyp3f2_unit(Hyp3F2Params(-1, 1.0, 1.0, -3, 2.0))
        assert val == pytest.approx(1 + 1 / 6, rel=1e-14)

    def test_divergent_rejected(self):
        with pytest.raises(DomainError):
            hyp3f2_unit(Hyp3F2Params(1.0, 1.0, 1.0, 1.0, 1.5))

    def test_exact_requires_terminating(self):
        with pytest.raises(DomainError):
            hyp3f2_unit(Hyp3F2Params(1, 1, 1, 3, 3), mode="exact")

    def test_nonterminating_converges(self):
        # gentle case: terms decay like k^{-3.5}
        val = hyp3f2_unit(Hyp3F2Params(0.5, 0.5, 0.5, 2.0, 2.0))
        ref = float(sympy.hyper((sympy.Rational(1, 2),) * 3, (2, 2), 1).evalf(25))
        assert val == pytest.approx(ref, rel=1e-12)


class TestWatson:
    def test_unit_series_cancellation(self):
        # at a = 0 the series is 1; the gamma quotient must cancel to 1
        assert watson_rhs(0, 0.4, 1.2) == pytest.approx(1.0, rel=1e-13)

    def test_terminating_match(self):
        # n=1, alpha=-0.7, beta=-0.6 -> (a,b,c) = (-2, -0.2, -0.3)
        a, b, c = -2, -0.2, -0.3
        series = hyp3f2_unit(Hyp3F2Params(a, b, c, (a + b + 1) / 2, 2 * c))
        assert watson_rhs(a, b, c) == pytest.approx(series, rel=1e-12)
        assert series == pytest.approx(1.25, rel=1e-13)  # hand-computed

    def test_equal_upper_parameters(self):
        a = b = 0.3
        c = 1.0
        series = hyp3f2_unit(Hyp3F2Params(a, b, c, (a + b + 1) / 2, 2 * c))
        # direct summation carries a ~1e-9 truncation tail at the 1e-16
        # term-ratio stopping rule (terms decay like k^{-2.2})
        assert watson_rhs(a, b, c) == pytest.approx(series, rel=5e-9)

    def test_convergence_condition_enforced(self):
        # terminating instance violating 2c - a - b + 1 > 0: the closed form
        # is rejected even though the series itself is a finite sum
        with pytest.raises(DomainError):
            watson_rhs(-2, 2.4, -1.3)

    def test_pole_rejected(self):
        with pytest.raises(DomainError):
            watson_rhs(-1.0, 0.5, -0.25)  # c + 1/2 = 1/4 > 0, but (a+1)/2 = 0
