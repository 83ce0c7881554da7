"""
Tests for the graded ring core.
"""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from conecalc.errors import DomainError, GeneratorMismatchError
from conecalc.ring import (
    FormalSum,
    Monomial,
    RewriteSystem,
    add,
    free_mul,
    inv_one_plus,
    mul,
    normal_form,
    power,
    substitute,
)

EXC = ("h2", "h1")
SEC = ("zeta", "h")


def exceptional_rules(m: int) -> RewriteSystem:
    return RewriteSystem(EXC).with_truncation("h1", 2).with_truncation("h2", m + 1)


def secant_rules_n5() -> RewriteSystem:
    # zeta^2 = 4*h*zeta - 10*h^2 on P(E_{5,2})
    replacement = FormalSum.monomial(SEC, 4, zeta=1, h=1) - FormalSum.monomial(SEC, 10, h=2)
    return RewriteSystem(SEC).with_truncation("h", 3).with_substitution(Monomial.of(zeta=2), replacement)


def random_sum(rng, generators, max_exp=3, max_terms=5) -> FormalSum:
    terms = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        exps = {g: int(rng.integers(0, max_exp + 1)) for g in generators}
        terms[Monomial.of(**exps)] = int(rng.integers(-9, 10))
    return FormalSum(generators, terms)


def test_add_merges_terms():
    """Like terms combine and additive inverses cancel."""
    h1 = FormalSum.monomial(EXC, h1=1)
    assert add(h1, -h1).is_zero()

    H = ("H",)
    assert FormalSum.monomial(H, 2, H=1) + FormalSum.monomial(H, 3, H=1) == FormalSum.monomial(H, 5, H=1)

    a = FormalSum.monomial(EXC, h2=1) - FormalSum.monomial(EXC, 6, h1=1)
    assert a + FormalSum.monomial(EXC, 6, h1=1) == FormalSum.monomial(EXC, h2=1)


def test_add_generator_mismatch():
    """Sums over different generator tuples cannot be added."""
    with pytest.raises(GeneratorMismatchError):
        add(FormalSum.monomial(EXC, h1=1), FormalSum.monomial(SEC, h=1))


def test_zero_coefficients_not_stored():
    """Canonical form drops zero coefficients."""
    s = FormalSum(EXC, {Monomial.of(h1=1): 0, Monomial.of(h2=1): 2})
    assert len(s) == 1
    assert s.coefficient(h1=1) == 0


def test_negative_exponent_rejected():
    """Monomials only take nonnegative exponents."""
    with pytest.raises(ValueError):
        Monomial.of(h1=-1)


def test_truncation_products():
    """h1*h1 vanishes and h2^4 truncates in the r=5 exceptional ring."""
    rules = exceptional_rules(3)
    h1 = FormalSum.monomial(EXC, h1=1)
    assert mul(h1, h1, rules).is_zero()
    assert normal_form(FormalSum.monomial(EXC, h2=4), rules).is_zero()
    one = FormalSum.constant(EXC, 1)
    x = FormalSum.monomial(EXC, 3, h2=2, h1=1)
    assert mul(x, one, rules) == x


def test_secant_relation_products():
    """zeta^2 and zeta^3 on P(E_{5,2}) reduce as expected."""
    rules = secant_rules_n5()
    zeta = FormalSum.monomial(SEC, zeta=1)
    expected_sq = FormalSum.monomial(SEC, 4, zeta=1, h=1) - FormalSum.monomial(SEC, 10, h=2)
    assert mul(zeta, zeta, rules) == expected_sq
    assert power(zeta, 3, rules) == FormalSum.monomial(SEC, 6, h=2, zeta=1)


def test_normal_form_idempotent():
    """Normal forms are fixed points."""
    rng = np.random.default_rng(11)
    rules = secant_rules_n5()
    for _ in range(30):
        a = normal_form(random_sum(rng, SEC, max_exp=4), rules)
        assert normal_form(a, rules) == a


def test_normal_form_order_independent():
    """Permuting the rule list does not change normal forms."""
    rng = np.random.default_rng(12)
    rules = secant_rules_n5()
    for order in itertools.permutations(range(len(rules.rules))):
        reordered = rules.reordered(order)
        for _ in range(10):
            a = random_sum(rng, SEC, max_exp=4)
            assert normal_form(a, reordered) == normal_form(a, rules)


def test_reordered_requires_permutation():
    """reordered rejects anything but a permutation."""
    with pytest.raises(ValueError):
        secant_rules_n5().reordered([0, 0])


@pytest.mark.parametrize("rules", [exceptional_rules(2), exceptional_rules(3), secant_rules_n5()])
def test_ring_axioms(rules):
    """Commutativity, associativity and distributivity after normal form."""
    rng = np.random.default_rng(7)
    gens = rules.generators
    for _ in range(25):
        a, b, c = (random_sum(rng, gens) for _ in range(3))
        assert mul(a, b, rules) == mul(b, a, rules)
        assert mul(mul(a, b, rules), c, rules) == mul(a, mul(b, c, rules), rules)
        assert mul(a, b + c, rules) == normal_form(mul(a, b, rules) + mul(a, c, rules), rules)


def test_grading_of_products():
    """Products of homogeneous classes stay homogeneous of the summed degree."""
    rng = np.random.default_rng(3)
    rules = exceptional_rules(3)
    for _ in range(30):
        a = random_sum(rng, EXC).homogeneous_component(int(rng.integers(0, 3)))
        b = random_sum(rng, EXC).homogeneous_component(int(rng.integers(0, 3)))
        if a.is_zero() or b.is_zero():
            continue
        product = mul(a, b, rules)
        assert product.degrees() <= {next(iter(a.degrees())) + next(iter(b.degrees()))}


@pytest.mark.parametrize(
    "m, t, expected",
    [
        (3, 3, [1, -3, 6]),
        (1, 2, [1, -1]),
        (4, 3, [1, -4, 10]),
    ],
)
def test_inv_one_plus_values(m, t, expected):
    """Truncated (1+h)^(-m) matches the binomial series."""
    series = inv_one_plus("h", m, t)
    assert [series.coefficient(h=j) for j in range(t)] == expected


@pytest.mark.parametrize("m, t", [(1, 1), (2, 4), (5, 3), (7, 6)])
def test_inv_one_plus_inverts(m, t):
    """inv_one_plus(g, m, t) * (1+g)^m is 1 modulo g^t."""
    rules = RewriteSystem(("g",)).with_truncation("g", t)
    one_plus = FormalSum.constant(("g",), 1) + FormalSum.monomial(("g",), g=1)
    product = mul(inv_one_plus("g", m, t), power(one_plus, m, rules), rules)
    assert product == FormalSum.constant(("g",), 1)


def test_inv_one_plus_rejects_bad_truncation():
    """Truncation and power must be positive."""
    with pytest.raises(DomainError):
        inv_one_plus("h", 2, 0)
    with pytest.raises(DomainError):
        inv_one_plus("h", 0, 2)


def test_substitute_ring_map():
    """Substituting H -> 3*h1 kills H^2 modulo h1^2."""
    rules = exceptional_rules(2)
    image = {"H": FormalSum.monomial(EXC, 3, h1=1)}
    assert substitute(FormalSum.monomial(("H",), H=2), image, rules).is_zero()
    assert substitute(FormalSum.monomial(("H",), 2, H=1), image, rules) == FormalSum.monomial(EXC, 6, h1=1)


def test_free_mul_does_not_reduce():
    """free_mul keeps monomials that a rewrite system would truncate."""
    h1 = FormalSum.monomial(EXC, h1=1)
    assert free_mul(h1, h1) == FormalSum.monomial(EXC, h1=2)


def test_render_order():
    """Rendering follows descending powers of the declared generators."""
    s = FormalSum.monomial(SEC, -10, h=2) + FormalSum.monomial(SEC, 4, zeta=1, h=1)
    assert s.render() == "4*zeta*h - 10*h^2"
    assert FormalSum.zero(SEC).render() == "0"
    assert (FormalSum.monomial(SEC, Fraction(1, 2), h=1)).render() == "1/2*h"
