"""Scalar special functions and quadrature.

Gamma/beta machinery, Pochhammer symbols, Jacobi polynomials, Gauss-Jacobi
rules, and generalized hypergeometric series at unit argument together with
Watson's closed form.  Everything here is pure and re-entrant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betainc as _betainc

from .errors import DomainError

__all__ = [
    "Hyp3F2Params",
    "QuadratureRule",
    "log_gamma",
    "signed_log_gamma",
    "beta",
    "reg_inc_beta",
    "rising",
    "falling",
    "jacobi_eval",
    "jacobi_at_one",
    "gauss_jacobi",
    "hyp3f2_unit",
    "watson_rhs",
]


def log_gamma(x):
    """Natural log of Gamma(x) for x > 0."""
    if x <= 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def _is_nonpositive_int(x) -> bool:
    if isinstance(x, Fraction):
        return x.denominator == 1 and x <= 0
    return x <= 0 and float(x) == int(x)


def signed_log_gamma(x):
    """(log |Gamma(x)|, sign) for any non-pole real x.

    Nonpositive integers are poles and raise a domain error.
    """
    if _is_nonpositive_int(x):
        raise DomainError(f"Gamma pole at {x}")
    x = float(x)
    if x > 0:
        return math.lgamma(x), 1.0
    # Gamma alternates sign between consecutive nonpositive integers.
    sign = -1.0 if math.floor(-x) % 2 == 0 else 1.0
    return math.lgamma(x), sign


def beta(a, b):
    """Euler beta B(a, b) for a, b > 0."""
    if a <= 0 or b <= 0:
        raise DomainError(f"beta requires positive arguments, got ({a}, {b})")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def reg_inc_beta(x, a, b):
    """Regularized incomplete beta I_x(a, b) on [0, 1]."""
    if a <= 0 or b <= 0:
        raise DomainError(f"reg_inc_beta requires positive a, b, got ({a}, {b})")
    if isinstance(x, np.ndarray):
        if np.any(x < 0) or np.any(x > 1):
            raise DomainError("reg_inc_beta requires x in [0, 1]")
        return _betainc(a, b, x)
    if x < 0 or x > 1:
        raise DomainError(f"reg_inc_beta requires x in [0, 1], got {x}")
    return float(_betainc(a, b, x))


def rising(a, k):
    """Rising factorial (a)_k = a (a+1) ... (a+k-1); exact for exact inputs."""
    if k < 0 or k != int(k):
        raise DomainError(f"rising requires a nonnegative integer k, got {k}")
    out = 1
    for i in range(int(k)):
        out = out * (a + i)
    return out


def falling(a, k):
    """Falling factorial a (a-1) ... (a-k+1) = (-1)^k (-a)_k."""
    if k < 0 or k != int(k):
        raise DomainError(f"falling requires a nonnegative integer k, got {k}")
    out = 1
    for i in range(int(k)):
        out = out * (a - i)
    return out


def jacobi_eval(n, alpha, beta_, t):
    """Jacobi polynomial P_n^{(alpha, beta)}(t) by the three-term recurrence.

    Valid for alpha, beta > -1 and t in [-1, 1].
    """
    if n < 0 or n != int(n):
        raise DomainError(f"jacobi_eval requires integer n >= 0, got {n}")
    if alpha <= -1 or beta_ <= -1:
        raise DomainError(f"jacobi_eval requires alpha, beta > -1, got ({alpha}, {beta_})")
    if t < -1 or t > 1:
        raise DomainError(f"jacobi_eval requires t in [-1, 1], got {t}")
    n = int(n)
    if n == 0:
        return 1.0
    p_prev = 1.0
    p_cur = (alpha + 1) + (alpha + beta_ + 2) * (t - 1) / 2
    for m in range(2, n + 1):
        ab = alpha + beta_
        c1 = 2 * m * (m + ab) * (2 * m + ab - 2)
        c2 = 2 * m + ab - 1
        c3 = (2 * m + ab) * (2 * m + ab - 2)
        c4 = alpha * alpha - beta_ * beta_
        c5 = 2 * (m + alpha - 1) * (m + beta_ - 1) * (2 * m + ab)
        p_prev, p_cur = p_cur, (c2 * (c3 * t + c4) * p_cur - c5 * p_prev) / c1
    if alpha >= beta_ >= 0:
        # the value at t = 1 dominates on [-1, 1] only when alpha >= beta
        # (with beta > alpha the magnitude peaks at t = -1 instead)
        assert abs(p_cur) <= jacobi_at_one(n, alpha, beta_) * (1 + 1e-12) + 1e-300
    return p_cur


def jacobi_at_one(n, alpha, beta_=None):
    """P_n^{(alpha, beta)}(1) = Gamma(alpha+n+1) / (Gamma(n+1) Gamma(alpha+1))."""
    if n < 0 or n != int(n):
        raise DomainError(f"jacobi_at_one requires integer n >= 0, got {n}")
    if alpha + n + 1 <= 0:
        raise DomainError(f"jacobi_at_one requires alpha + n + 1 > 0, got alpha={alpha}")
    # independent of beta; the argument is kept for signature symmetry
    if alpha + 1 <= 0:
        # alpha in (-n-1, -1]: use a pole-free product form
        out = 1.0
        for i in range(1, int(n) + 1):
            out *= (alpha + i) / i
        return out
    return math.exp(math.lgamma(alpha + n + 1) - math.lgamma(n + 1) - math.lgamma(alpha + 1))


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for the weight (1-t)^alpha (1+t)^beta on [-1, 1]."""

    alpha: float
    beta: float
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f):
        """Integral of f against the weight (f evaluated on the nodes)."""
        return float(np.dot(self.weights, f(self.nodes)))

    @property
    def total_mass(self):
        return float(self.weights.sum())


def gauss_jacobi(m, alpha, beta_):
    """m-node Gauss-Jacobi rule, exact on polynomials of degree <= 2m - 1.

    Built from the Jacobi recurrence coefficients via the symmetric
    tridiagonal eigenvalue method.
    """
    if m < 1 or m != int(m):
        raise DomainError(f"gauss_jacobi requires m >= 1, got {m}")
    if alpha <= -1 or beta_ <= -1:
        raise DomainError(f"gauss_jacobi requires alpha, beta > -1, got ({alpha}, {beta_})")
    m = int(m)
    ab = alpha + beta_
    k = np.arange(m, dtype=float)
    diag = np.empty(m)
    diag[0] = (beta_ - alpha) / (ab + 2)
    if m > 1:
        kk = k[1:]
        diag[1:] = (beta_**2 - alpha**2) / ((2 * kk + ab) * (2 * kk + ab + 2))
    off = np.empty(max(m - 1, 0))
    if m > 1:
        off[0] = math.sqrt(4 * (alpha + 1) * (beta_ + 1) / ((ab + 2) ** 2 * (ab + 3)))
        kk = k[2:]
        off[1:] = np.sqrt(
            4 * kk * (kk + alpha) * (kk + beta_) * (kk + ab)
            / ((2 * kk + ab) ** 2 * ((2 * kk + ab) ** 2 - 1))
        )
    mu0 = 2 ** (ab + 1) * beta(alpha + 1, beta_ + 1)
    if m == 1:
        return QuadratureRule(alpha, beta_, np.array([diag[0]]), np.array([mu0]))
    nodes, vecs = eigh_tridiagonal(diag, off)
    weights = mu0 * vecs[0, :] ** 2
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(alpha, beta_, nodes, weights)


@dataclass(frozen=True)
class Hyp3F2Params:
    """Parameters of a 3F2 series at unit argument: a, b, c over d, e."""

    a: float
    b: float
    c: float
    d: float
    e: float

    def terminating_order(self):
        """Smallest K with a numerator parameter equal to -K, or None."""
        ks = [int(-p) for p in (self.a, self.b, self.c) if _is_nonpositive_int(p)]
        return min(ks) if ks else None

    def validate(self):
        K = self.terminating_order()
        for q in (self.d, self.e):
            if _is_nonpositive_int(q):
                if K is None or -int(q) < K:
                    raise DomainError(
                        f"denominator parameter {q} hits zero before the series terminates"
                    )
        if K is None:
            s = self.d + self.e - self.a - self.b - self.c
            if s <= 0:
                raise DomainError(
                    f"nonterminating series requires d + e - a - b - c > 0, got {s}"
                )


def hyp3f2_unit(params: Hyp3F2Params, mode: str = "float"):
    """Sum of the 3F2 series at z = 1.

    Terminating series are summed term by term (exactly, in rational
    arithmetic, when ``mode='exact'`` and all parameters are rational).
    Nonterminating series use compensated summation and stop once the next
    term falls below 1e-16 of the partial sum.
    """
    params.validate()
    K = params.terminating_order()
    if mode == "exact":
        if K is None:
            raise DomainError("exact mode requires a terminating series")
        a, b, c, d, e = (Fraction(p) for p in
                         (params.a, params.b, params.c, params.d, params.e))
        total = Fraction(0)
        term = Fraction(1)
        for k in range(K + 1):
            total += term
            if k < K:
                term = term * (a + k) * (b + k) * (c + k) / ((d + k) * (e + k) * (k + 1))
        return total
    if mode != "float":
        raise DomainError(f"unknown mode {mode!r}")
    a, b, c, d, e = (float(p) for p in
                     (params.a, params.b, params.c, params.d, params.e))
    if K is not None:
        terms = []
        term = 1.0
        for k in range(K + 1):
            terms.append(term)
            if k < K:
                term = term * (a + k) * (b + k) * (c + k) / ((d + k) * (e + k) * (k + 1))
        return math.fsum(terms)
    total = 1.0
    comp = 0.0
    term = 1.0
    k = 0
    # scalar loop first; switch to vectorized blocks if convergence is slow
    while k < 10_000:
        term = term * (a + k) * (b + k) * (c + k) / ((d + k) * (e + k) * (k + 1))
        k += 1
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if abs(term) < 1e-16 * abs(total):
            return total
    block = 100_000
    while k < 200_000_000:
        j = np.arange(k, k + block, dtype=float)
        ratios = (a + j) * (b + j) * (c + j) / ((d + j) * (e + j) * (j + 1))
        terms = term * np.cumprod(ratios)
        # comp holds the running excess of the compensated sum
        total = math.fsum([total, -comp, math.fsum(terms)])
        comp = 0.0
        term = terms[-1]
        k += block
        if abs(term) < 1e-16 * abs(total):
            return total
    raise DomainError("3F2 series converges too slowly to sum reliably")


def watson_rhs(a, b, c):
    """Gamma-quotient closed form for 3F2(a, b, c; (a+b+1)/2, 2c; 1).

    Requires 2c - a - b + 1 > 0; with the convergence condition violated the
    closed form is not valid even for terminating series.
    """
    if 2 * c - a - b + 1 <= 0:
        raise DomainError(
            f"watson_rhs requires 2c - a - b + 1 > 0, got {2 * c - a - b + 1}"
        )
    num = (0.5, c + 0.5, (a + b + 1) / 2, c - (a + b - 1) / 2)
    den = ((a + 1) / 2, (b + 1) / 2, c - (a - 1) / 2, c - (b - 1) / 2)
    log_total = 0.0
    sign = 1.0
    for x in num:
        lg, s = signed_log_gamma(x)
        log_total += lg
        sign *= s
    for x in den:
        lg, s = signed_log_gamma(x)
        log_total -= lg
        sign *= s
    return sign * math.exp(log_total)
