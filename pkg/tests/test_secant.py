"""
Tests for secant bundles and the psi-maps to X_n.
"""

from fractions import Fraction
from math import comb

import pytest

from conecalc import secant
from conecalc.blowup import Family, degree, make_space, product, standard_generators, to_num
from conecalc.errors import ConecalcError, DomainError, GradingError, InvariantError
from conecalc.expression import parse_class
from conecalc.ring import FormalSum
from conecalc.secant import (
    GENERATORS,
    PsiMaps,
    incidence_coefficient,
    make_secant_ring,
    psi_maps,
    psi_pullback,
    psi_pushforward,
    s2_class,
    secant_degree,
)


def fs(coeff, **exps):
    return FormalSum.monomial(GENERATORS, coeff, **exps)


@pytest.mark.parametrize("n", range(4, 11))
def test_relation_from_chern_series(n):
    """The P(E_{n,2}) relation is zeta^2 - (n-1)*h*zeta + C(n,2)*h^2."""
    ring = make_secant_ring(n, 2)
    assert ring.relation() == fs(1, zeta=2) - fs(n - 1, zeta=1, h=1) + fs(comb(n, 2), h=2)


def test_products_on_p_e_5_2():
    """zeta^2 and zeta^3 reduce with the n = 5 relation."""
    ring = make_secant_ring(5, 2)
    zeta = ring.zeta()
    assert ring.mul(zeta, zeta) == fs(4, zeta=1, h=1) - fs(10, h=2)
    assert ring.power(zeta, 3) == fs(6, h=2, zeta=1)
    assert ring.degree(ring.point_class()) == 1


@pytest.mark.parametrize("n", range(3, 11))
def test_incidence_coefficient(n):
    """deg((2*zeta - m*h)*zeta^2) = 0 forces m = n - 2."""
    assert incidence_coefficient(n) == n - 2


@pytest.mark.parametrize("n", range(4, 11))
def test_secant_line_degree(n):
    """deg(zeta^3) on P(E_{n,2}) is C(n-1,2)."""
    assert secant_degree(n, 2) == comb(n - 1, 2)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_middle_secant_degree(k):
    """deg(zeta^(2k-1)) on P(E_{2k,k}) is k+1."""
    assert secant_degree(2 * k, k) == k + 1


@pytest.mark.parametrize("n", range(2, 8))
def test_curve_degree(n):
    """P(E_{n,1}) is the curve itself, of degree n."""
    assert secant_degree(n, 1) == n


def test_secant_degree_domain():
    with pytest.raises(DomainError):
        secant_degree(4, 3)
    with pytest.raises(DomainError):
        make_secant_ring(3, 3)


def test_degree_rejects_lower_codimension():
    ring = make_secant_ring(5, 2)
    with pytest.raises(GradingError):
        ring.degree(ring.h())


def test_pullback_table_n5():
    """psi^* of the degree-one and degree-two generators of X_5."""
    table = psi_maps(5).pullback_table()
    assert table["H"] == fs(1, zeta=1)
    assert table["E"] == fs(2, zeta=1) - fs(3, h=1)
    assert table["j(h1)"] == fs(1, zeta=1, h=1) - fs(4, h=2)
    assert table["j(h2)"] == fs(3, zeta=1, h=1) + fs(3, h=2)


def test_pullback_of_h_times_e():
    """psi^*(H*E) = 5*h*zeta - 20*h^2 at n = 5."""
    X = make_space(Family.RNC, r=5)
    assert psi_pullback(product(X.H(), X.E(), X), 5) == fs(5, zeta=1, h=1) - fs(20, h=2)


@pytest.mark.parametrize("n", range(5, 9))
def test_pushforward_closed_forms(n):
    """psi_*(h), psi_*(1) and psi_*(zeta) match their closed forms."""
    X = make_space(Family.RNC, r=n)
    P = make_secant_ring(n, 2)

    def j(h2, h1=0, coeff=1):
        return X.j_monomial(h2=h2, h1=h1, coeff=coeff)

    push_h = X.H(n - 2) * (n - 1) - j(n - 3) - j(n - 4, 1, 2 * n)
    push_1 = X.H(n - 3) * comb(n - 1, 2) - j(n - 4, 0, n - 2) - j(n - 5, 1, (n + 2) * (n - 2))
    push_zeta = X.H(n - 2) * comb(n - 1, 2) - j(n - 4, 1, n * (n - 2))

    assert to_num(psi_pushforward(P.h(), n), X, n - 2) == to_num(push_h, X, n - 2)
    assert to_num(psi_pushforward(P.one(), n), X, n - 3) == to_num(push_1, X, n - 3)
    assert to_num(psi_pushforward(P.zeta(), n), X, n - 2) == to_num(push_zeta, X, n - 2)


def test_pushforward_of_zeta_n5_expression():
    """psi_*(zeta) at n = 5 is 6*H^3 - 15*j(h2*h1) numerically."""
    X = make_space(Family.RNC, r=5)
    expected = parse_class("6*H^3 - 15*j(h2*h1)", X)
    assert to_num(psi_pushforward(make_secant_ring(5, 2).zeta(), 5), X, 3) == to_num(expected, X, 3)


@pytest.mark.parametrize("n", range(5, 9))
def test_pullback_multiplicative(n):
    """psi^*(x*y) = psi^*x * psi^*y on codimension one and two generators."""
    X = make_space(Family.RNC, r=n)
    psi = psi_maps(n)
    gens = standard_generators(X, 1) + standard_generators(X, 2)
    for x in gens:
        for y in gens:
            assert psi.pullback(product(x, y, X)) == psi.target.mul(psi.pullback(x), psi.pullback(y))


@pytest.mark.parametrize("n", range(5, 9))
def test_projection_formula(n):
    """deg(psi_*(gamma) * beta) = deg(gamma * psi^*beta) on the full grid."""
    X = make_space(Family.RNC, r=n)
    psi = psi_maps(n)
    P = psi.target
    for c in range(P.dimension + 1):
        for gamma in P.numerical_basis(c):
            pushed = psi.pushforward(gamma)
            for beta in standard_generators(X, P.dimension - c):
                assert degree(product(pushed, beta, X), X) == P.degree(P.mul(gamma, psi.pullback(beta)))


def test_s2_class_in_x4_is_secant_divisor():
    """psi_*(1) in X_4 is 3H - 2E."""
    X = make_space(Family.RNC, r=4)
    assert to_num(s2_class(4), X, 1) == (Fraction(3), Fraction(-2))


def test_pushforward_errors():
    """Inhomogeneous input and wrong target codimension raise GradingError."""
    P = make_secant_ring(5, 2)
    psi = psi_maps(5)
    with pytest.raises(GradingError):
        psi.pushforward(P.zeta() + P.one())
    with pytest.raises(GradingError):
        psi.pushforward(P.h(), target_codim=2)
    assert psi.pushforward(FormalSum.zero(GENERATORS)).is_zero()


def test_psi_maps_need_n_at_least_4():
    with pytest.raises(DomainError):
        PsiMaps(3)


class _FlatRing:
    """Ring stand-in on which every degree vanishes."""

    def zeta(self):
        return FormalSum.monomial(GENERATORS, zeta=1)

    def h(self):
        return FormalSum.monomial(GENERATORS, h=1)

    def power(self, x, exponent):
        return x

    def mul(self, x, y):
        return x

    def degree(self, x):
        return Fraction(0)


def test_vanishing_incidence_degree_is_invariant_error(monkeypatch):
    """A zero deg(h*zeta^2) raises InvariantError, not a bare ArithmeticError."""
    monkeypatch.setattr(secant, "make_secant_ring", lambda n, k: _FlatRing())
    with pytest.raises(InvariantError) as info:
        incidence_coefficient(5)
    assert isinstance(info.value, ConecalcError)
    assert "n=5" in str(info.value)
