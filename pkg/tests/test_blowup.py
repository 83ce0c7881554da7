"""
Tests for the blow-up intersection rings.

The product oracle below is a direct implementation of the multiplication
table on the standard monomials H^a and j(h2^p*h1^q); it only reads the
public terms of conecalc classes.
"""

from fractions import Fraction

import numpy as np
import pytest

from conecalc.blowup import (
    BlowupPresentation,
    Family,
    MixedClass,
    degree,
    from_num,
    make_space,
    numerical_basis,
    pairing,
    pairing_matrix,
    power,
    product,
    standard_generators,
    to_num,
)
from conecalc.errors import DomainError, GradingError


# -- oracle --------------------------------------------------------------


def oracle_product(x, y, r, d, a):
    """Multiply {("A", k) | ("J", p, q): coeff} dictionaries on Bl_C P^r."""
    m = r - 2
    out = {}

    def put(key, value):
        if key[0] == "A" and key[1] > r:
            return
        if key[0] == "J" and (key[1] > m or key[2] > 1):
            return
        out[key] = out.get(key, 0) + value

    for kx, cx in x.items():
        for ky, cy in y.items():
            c = cx * cy
            if kx[0] == "A" and ky[0] == "A":
                put(("A", kx[1] + ky[1]), c)
            elif kx[0] == "A" or ky[0] == "A":
                amb, exc = (kx, ky) if kx[0] == "A" else (ky, kx)
                k, (_, p, q) = amb[1], exc
                if k == 0:
                    put(("J", p, q), c)
                elif k == 1 and q == 0:
                    put(("J", p, 1), c * d)
            else:
                p, q = kx[1] + ky[1], kx[2] + ky[2]
                # j(u)*j(v) = -j((h2 - a*h1)*u*v)
                put(("J", p + 1, q), -c)
                put(("J", p, q + 1), c * a)
    return {k: v for k, v in out.items() if v != 0}


def as_oracle(x: MixedClass):
    out = {}
    for mono, coeff in x.ambient.items():
        out[("A", mono.exponent("H"))] = coeff
    for mono, coeff in x.exceptional.items():
        out[("J", mono.exponent("h2"), mono.exponent("h1"))] = coeff
    return out


def random_class(rng, S):
    total = MixedClass.zero()
    for _ in range(int(rng.integers(1, 4))):
        coeff = int(rng.integers(-5, 6))
        if rng.random() < 0.5:
            total = total + S.H(int(rng.integers(0, S.r + 1))) * coeff
        else:
            h2 = int(rng.integers(0, S.m + 1))
            h1 = int(rng.integers(0, 2))
            total = total + S.j_monomial(h2=h2, h1=h1, coeff=coeff)
    return total


@pytest.mark.parametrize("r, seed", [(4, 101), (5, 202)])
def test_products_match_oracle(r, seed):
    """200 random products per space agree with the oracle."""
    rng = np.random.default_rng(seed)
    X = make_space(Family.RNC, r=r)
    for _ in range(200):
        x, y = random_class(rng, X), random_class(rng, X)
        expected = oracle_product(as_oracle(x), as_oracle(y), X.r, X.d, X.twist)
        assert as_oracle(product(x, y, X)) == expected


# -- presentation ------------------------------------------------------------


def test_h_times_e_uses_curve_degree():
    """H*E = d*j(h1) with d = r for the rational normal curve."""
    X = make_space(Family.RNC, r=5)
    assert product(X.H(), X.E(), X) == X.j_monomial(h1=1, coeff=5)


def test_exceptional_powers_in_x4():
    """E^2 = j(6*h1 - h2) and E^4 = 18*j(h2^2*h1) on X_4."""
    X = make_space(Family.RNC, r=4)
    assert power(X.E(), 2, X) == X.j_monomial(h1=1, coeff=6) - X.j_monomial(h2=1)
    assert power(X.E(), 4, X) == X.j_monomial(h2=2, h1=1, coeff=18)


def test_h_times_j_h2_in_x5():
    X = make_space(Family.RNC, r=5)
    assert product(X.H(), X.j_monomial(h2=1), X) == X.j_monomial(h2=1, h1=1, coeff=5)


@pytest.mark.parametrize(
    "r, x, y, expected",
    [
        (5, {}, {"h2": 3}, 7),
        (6, {}, {"h2": 3, "h1": 1}, -1),
    ],
)
def test_exceptional_degrees(r, x, y, expected):
    """deg(E*j(h2^3)) = 7 on X_5 and deg(E*j(h2^3*h1)) = -1 on X_6."""
    X = make_space(Family.RNC, r=r)
    assert degree(product(X.j_monomial(**x), X.j_monomial(**y), X), X) == expected


def test_curve_degree_coefficient_is_forced():
    """With H*j(alpha) = j((r+1)*h1*alpha) the numerical relation fails."""
    r = 4

    def relation(S):
        return S.j_monomial(h2=r - 2) - S.H(r - 1) * r + S.j_monomial(h2=r - 3, h1=1, coeff=r + 2)

    variant = BlowupPresentation(Family.RNC, r, r + 1, r + 2)
    assert pairing(relation(variant), variant.H(), variant) == 1
    X = make_space(Family.RNC, r=r)
    assert pairing(relation(X), X.H(), X) == 0


def test_point_classes_have_degree_one():
    """H^r and j(h2^(r-2)*h1) are the point classes."""
    X = make_space("RNC", r=5)
    for point in X.point_classes():
        assert degree(point, X) == 1


@pytest.mark.parametrize(
    "family, kwargs, d, a",
    [
        (Family.RNC, {"r": 3}, 3, 5),
        (Family.QUADRIC_CURVE, {"d": 3}, 3, 5),
        (Family.P3_CURVE, {"d": 4, "twist": 7}, 4, 7),
        (Family.P3_CURVE, {"d": 2, "twist": 3}, 2, 3),
    ],
)
def test_exceptional_self_intersections(family, kwargs, d, a):
    """deg(E^2*H) = -d and deg(E^3) = -2a on threefold blow-ups."""
    S = make_space(family, **kwargs)
    assert degree(product(power(S.E(), 2, S), S.H(), S), S) == -d
    assert degree(power(S.E(), 3, S), S) == -2 * a


@pytest.mark.parametrize(
    "family, kwargs",
    [
        (Family.RNC, {"r": 2}),
        (Family.RNC, {"r": 4, "d": 5}),
        (Family.LINE, {"r": 4, "twist": 2}),
        (Family.QUADRIC_CURVE, {"d": 2}),
        (Family.P3_CURVE, {"d": 3}),
        ("SURFACE", {"r": 3}),
    ],
)
def test_make_space_rejects_bad_parameters(family, kwargs):
    """Out-of-range parameters raise DomainError."""
    with pytest.raises(DomainError):
        make_space(family, **kwargs)


def test_mixed_codimension_is_grading_error():
    """codim and degree reject inhomogeneous classes."""
    X = make_space(Family.RNC, r=4)
    mixed = X.H() + X.H(2)
    with pytest.raises(GradingError):
        mixed.codim
    with pytest.raises(GradingError):
        degree(X.H(2), X)


def test_render():
    """Classes render with E for j(1) and j(...) for the rest."""
    X = make_space(Family.RNC, r=4)
    assert (X.H() * 3 - X.E() * 2).render() == "3*H - 2*E"
    assert X.j_monomial(h2=2, h1=1, coeff=-4).render() == "-4*j(h2^2*h1)"
    assert MixedClass.zero().render() == "0"


# -- numerical groups --------------------------------------------------------


@pytest.mark.parametrize("r", range(4, 11))
def test_numerical_relation_in_codim_r_minus_1(r):
    """j(h2^(r-2)) - r*H^(r-1) + (r+2)*j(h2^(r-3)*h1) lies in the pairing kernel."""
    X = make_space(Family.RNC, r=r)
    relation = (
        X.j_monomial(h2=r - 2) - X.H(r - 1) * r + X.j_monomial(h2=r - 3, h1=1, coeff=r + 2)
    )
    assert pairing(relation, X.H(), X) == 0
    assert pairing(relation, X.E(), X) == 0
    assert numerical_basis(X, r - 1).relations == ((-r, 1, r + 2),)


@pytest.mark.parametrize("r", range(4, 11))
def test_numerical_ranks(r):
    """Num ranks are 1, 2, 3, ..., 3, 2, 1."""
    X = make_space(Family.RNC, r=r)
    ranks = [numerical_basis(X, k).rank for k in range(r + 1)]
    assert ranks == [1, 2] + [3] * (r - 3) + [2, 1]


def test_to_num_from_num_inverse():
    """from_num inverts to_num on the chosen basis."""
    X = make_space(Family.RNC, r=6)
    coords = (Fraction(1), Fraction(-2), Fraction(7, 3))
    assert to_num(from_num(coords, X, 3), X, 3) == coords


def test_to_num_rejects_wrong_codimension():
    X = make_space(Family.RNC, r=5)
    with pytest.raises(GradingError):
        to_num(X.H(2), X, 3)


def test_line_blowup_projection_class():
    """(H - E)^(r-1) is numerically zero on W_r."""
    W = make_space(Family.LINE, r=5)
    x = power(W.H() - W.E(), 4, W)
    assert not any(to_num(x, W, 4))
    assert degree(power(W.H() - W.E(), 5, W), W) == 0


def test_standard_generators_drop_out_of_range():
    """Codimension 1 has no j(h1) generator and codimension r has no j(h2^(r-1))."""
    X = make_space(Family.RNC, r=4)
    assert len(standard_generators(X, 1)) == 2
    assert len(standard_generators(X, 4)) == 2
    with pytest.raises(DomainError):
        standard_generators(X, 5)


def test_pairing_matrix_recompute():
    """Stored pairings match a fresh computation."""
    X = make_space(Family.RNC, r=5)
    data = pairing_matrix(X, 2)
    assert data.recompute()
    assert data.matrix == ((1, 0, 0), (0, 7, -1), (0, -1, 0))
    assert data.row_labels == ["H^2", "j(h2)", "j(h1)"]
    assert pairing_matrix(X, 0).matrix == ((1, 1),)


def test_x4_divisor_curve_pairings():
    X = make_space(Family.RNC, r=4)
    curve = X.j_monomial(h2=1, h1=1)
    assert pairing(X.E(), curve, X) == -1
    assert pairing(X.H(), curve, X) == 0
    assert pairing(X.H(), X.H(3), X) == 1
    assert pairing(X.E(), X.H(3), X) == 0


def test_w4_relation_in_kernel():
    """H^3 - j(h2^2 + h2*h1) pairs to zero with Num^1 of W_4."""
    W = make_space(Family.LINE, r=4)
    relation = W.H(3) - W.j_monomial(h2=2) - W.j_monomial(h2=1, h1=1)
    assert pairing(relation, W.H(), W) == 0
    assert pairing(relation, W.E(), W) == 0
    assert numerical_basis(W, 3).rank == 2


def test_to_num_coordinates_in_x6():
    """Coordinates on the basis chosen by numerical_basis."""
    X = make_space(Family.RNC, r=6)
    test_class = X.H(3) - X.j_monomial(h2=1, h1=1, coeff=4)
    assert to_num(test_class, X, 3) == (1, 0, -4)
    assert to_num(X.j_monomial(h2=4), X, 5) == (6, -8)
    assert to_num(MixedClass.zero(), X, 5) == (0, 0)
