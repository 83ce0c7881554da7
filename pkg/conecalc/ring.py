"""
Exact graded commutative algebra.

Monomials, formal sums with rational coefficients, rewriting to normal form
under truncation and substitution rules, and truncated inversion of
(1 + g)^m. Every value here is immutable.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from types import MappingProxyType
from typing import (
    Dict,
    FrozenSet,
    Iterator,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from conecalc.errors import DomainError, GeneratorMismatchError

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class Monomial:
    """Sparse product of generator powers; absent generators have exponent 0."""

    exponents: Tuple[Tuple[str, int], ...] = ()

    @classmethod
    def of(cls, **exponents: int) -> "Monomial":
        return cls.from_mapping(exponents)

    @classmethod
    def from_mapping(cls, exponents: Mapping[str, int]) -> "Monomial":
        for name, exp in exponents.items():
            if exp < 0:
                raise ValueError(f"Negative exponent {exp} for generator {name}")
        return cls(tuple(sorted((g, int(e)) for g, e in exponents.items() if e)))

    def exponent(self, name: str) -> int:
        for g, e in self.exponents:
            if g == name:
                return e
        return 0

    def as_dict(self) -> Dict[str, int]:
        return dict(self.exponents)

    def names(self) -> FrozenSet[str]:
        return frozenset(g for g, _ in self.exponents)

    def degree(self, weights: Optional[Mapping[str, int]] = None) -> int:
        """Weighted total degree; every generator has weight 1 unless stated."""
        if weights is None:
            return sum(e for _, e in self.exponents)
        return sum(weights.get(g, 1) * e for g, e in self.exponents)

    def __mul__(self, other: "Monomial") -> "Monomial":
        merged = self.as_dict()
        for g, e in other.exponents:
            merged[g] = merged.get(g, 0) + e
        return Monomial.from_mapping(merged)

    def divides(self, other: "Monomial") -> bool:
        return all(other.exponent(g) >= e for g, e in self.exponents)

    def quotient(self, divisor: "Monomial") -> "Monomial":
        if not divisor.divides(self):
            raise ValueError(f"{divisor} does not divide {self}")
        rest = self.as_dict()
        for g, e in divisor.exponents:
            rest[g] -= e
        return Monomial.from_mapping(rest)

    def render(self, order: Sequence[str]) -> str:
        if not self.exponents:
            return "1"
        ranked = sorted(
            self.exponents,
            key=lambda item: order.index(item[0]) if item[0] in order else len(order),
        )
        return "*".join(g if e == 1 else f"{g}^{e}" for g, e in ranked)

    def __str__(self) -> str:
        return self.render([g for g, _ in self.exponents])


ONE = Monomial()


class FormalSum:
    """Finite linear combination of monomials over a fixed generator tuple.

    Zero coefficients are never stored. The generator tuple also fixes the
    canonical rendering order: descending powers of the first generator,
    then the second, and so on.
    """

    __slots__ = ("_generators", "_terms")

    def __init__(
        self,
        generators: Sequence[str],
        terms: Optional[Mapping[Monomial, Scalar]] = None,
    ):
        gens = tuple(generators)
        allowed = set(gens)
        clean: Dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            value = Fraction(coeff)
            if value == 0:
                continue
            unknown = mono.names() - allowed
            if unknown:
                raise GeneratorMismatchError(
                    f"Monomial {mono} uses {sorted(unknown)} outside generators {gens}"
                )
            clean[mono] = value
        self._generators = gens
        self._terms = clean

    @classmethod
    def zero(cls, generators: Sequence[str]) -> "FormalSum":
        return cls(generators)

    @classmethod
    def constant(cls, generators: Sequence[str], value: Scalar) -> "FormalSum":
        return cls(generators, {ONE: value})

    @classmethod
    def monomial(
        cls, generators: Sequence[str], coeff: Scalar = 1, **exponents: int
    ) -> "FormalSum":
        return cls(generators, {Monomial.of(**exponents): coeff})

    @property
    def generators(self) -> Tuple[str, ...]:
        return self._generators

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def coefficient(self, mono: Optional[Monomial] = None, **exponents: int) -> Fraction:
        key = mono if mono is not None else Monomial.of(**exponents)
        return self._terms.get(key, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degrees(self, weights: Optional[Mapping[str, int]] = None) -> Set[int]:
        return {mono.degree(weights) for mono in self._terms}

    def is_homogeneous(self, weights: Optional[Mapping[str, int]] = None) -> bool:
        return len(self.degrees(weights)) <= 1

    def homogeneous_component(
        self, k: int, weights: Optional[Mapping[str, int]] = None
    ) -> "FormalSum":
        return FormalSum(
            self._generators,
            {m: c for m, c in self._terms.items() if m.degree(weights) == k},
        )

    def over(self, generators: Sequence[str]) -> "FormalSum":
        """The same sum re-tagged with a (larger) generator tuple."""
        return FormalSum(generators, self._terms)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def _check_compatible(self, other: "FormalSum") -> None:
        if self._generators != other._generators:
            raise GeneratorMismatchError(
                f"Generator sets differ: {self._generators} vs {other._generators}"
            )

    def __add__(self, other: Union["FormalSum", Scalar]) -> "FormalSum":
        if not isinstance(other, FormalSum):
            other = FormalSum.constant(self._generators, other)
        return add(self, other)

    def __radd__(self, other: Scalar) -> "FormalSum":
        return self.__add__(other)

    def __neg__(self) -> "FormalSum":
        return FormalSum(self._generators, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Union["FormalSum", Scalar]) -> "FormalSum":
        if not isinstance(other, FormalSum):
            other = FormalSum.constant(self._generators, other)
        return add(self, -other)

    def __rsub__(self, other: Scalar) -> "FormalSum":
        return (-self).__add__(other)

    def __mul__(self, scalar: Scalar) -> "FormalSum":
        if isinstance(scalar, FormalSum):
            raise TypeError("Use mul() or free_mul() to multiply formal sums")
        value = Fraction(scalar)
        return FormalSum(self._generators, {m: value * c for m, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = FormalSum.constant(self._generators, other)
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self._generators == other._generators and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._generators, frozenset(self._terms.items())))

    def sorted_terms(self) -> Tuple[Tuple[Monomial, Fraction], ...]:
        gens = self._generators
        return tuple(
            sorted(
                self._terms.items(),
                key=lambda item: tuple(-item[0].exponent(g) for g in gens),
            )
        )

    def render(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for mono, coeff in self.sorted_terms():
            magnitude = abs(coeff)
            body = mono.render(self._generators)
            if body == "1":
                text = str(magnitude)
            elif magnitude == 1:
                text = body
            else:
                text = f"{magnitude}*{body}"
            sign = "-" if coeff < 0 else "+"
            pieces.append((sign, text))
        first_sign, first_text = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_text
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"FormalSum({self._generators!r}, {self.render()!r})"


@dataclass(frozen=True)
class Rule:
    """Rewrite `pattern -> replacement`; a missing replacement truncates to 0."""

    pattern: Monomial
    replacement: Optional[FormalSum] = None

    def __str__(self) -> str:
        target = "0" if self.replacement is None else self.replacement.render()
        return f"{self.pattern} -> {target}"


@dataclass(frozen=True)
class RewriteSystem:
    """Ordered rule list over a generator tuple.

    Every rule either truncates a monomial or replaces it by terms of lower
    degree in the pattern's generator, so rewriting terminates.
    """

    generators: Tuple[str, ...]
    rules: Tuple[Rule, ...] = ()

    def with_truncation(self, generator: str, power: int) -> "RewriteSystem":
        if power < 1:
            raise DomainError(f"Truncation power must be positive, got {power}")
        rule = Rule(Monomial.of(**{generator: power}))
        return RewriteSystem(self.generators, self.rules + (rule,))

    def with_substitution(
        self, pattern: Monomial, replacement: FormalSum
    ) -> "RewriteSystem":
        if replacement.generators != self.generators:
            replacement = replacement.over(self.generators)
        return RewriteSystem(self.generators, self.rules + (Rule(pattern, replacement),))

    def reordered(self, order: Sequence[int]) -> "RewriteSystem":
        if sorted(order) != list(range(len(self.rules))):
            raise ValueError(f"Not a permutation of the rules: {list(order)}")
        return RewriteSystem(self.generators, tuple(self.rules[i] for i in order))

    def match(self, mono: Monomial) -> Optional[Rule]:
        for rule in self.rules:
            if rule.pattern.divides(mono):
                return rule
        return None


def add(a: FormalSum, b: FormalSum) -> FormalSum:
    """Coefficient-wise sum.

    Raises:
        GeneratorMismatchError: If a and b use different generator tuples
    """
    a._check_compatible(b)
    merged: Dict[Monomial, Fraction] = dict(a.terms)
    for mono, coeff in b.items():
        merged[mono] = merged.get(mono, Fraction(0)) + coeff
    return FormalSum(a.generators, merged)


def free_mul(a: FormalSum, b: FormalSum) -> FormalSum:
    """Product in the free commutative algebra, without any reduction."""
    a._check_compatible(b)
    product: Dict[Monomial, Fraction] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            key = ma * mb
            product[key] = product.get(key, Fraction(0)) + ca * cb
    return FormalSum(a.generators, product)


def normal_form(a: FormalSum, rw: RewriteSystem) -> FormalSum:
    """Apply the rules of rw until none matches.

    Rules are tried in list order on every monomial; the result does not
    depend on that order for the systems built in this package.
    """
    if a.generators != rw.generators:
        raise GeneratorMismatchError(
            f"Rewrite system over {rw.generators} applied to sum over {a.generators}"
        )
    pending: Dict[Monomial, Fraction] = dict(a.terms)
    result: Dict[Monomial, Fraction] = {}
    while pending:
        mono, coeff = pending.popitem()
        if coeff == 0:
            continue
        rule = rw.match(mono)
        if rule is None:
            result[mono] = result.get(mono, Fraction(0)) + coeff
            continue
        if rule.replacement is None:
            continue
        rest = mono.quotient(rule.pattern)
        for rep_mono, rep_coeff in rule.replacement.items():
            key = rest * rep_mono
            pending[key] = pending.get(key, Fraction(0)) + coeff * rep_coeff
    return FormalSum(a.generators, result)


def mul(a: FormalSum, b: FormalSum, rw: RewriteSystem) -> FormalSum:
    """Free product of a and b reduced to normal form under rw."""
    return normal_form(free_mul(a, b), rw)


def power(a: FormalSum, exponent: int, rw: RewriteSystem) -> FormalSum:
    if exponent < 0:
        raise DomainError(f"Negative power {exponent}")
    result = FormalSum.constant(a.generators, 1)
    for _ in range(exponent):
        result = mul(result, a, rw)
    return normal_form(result, rw)


def substitute(
    a: FormalSum, images: Mapping[str, FormalSum], rw: RewriteSystem
) -> FormalSum:
    """Evaluate the ring map sending each generator g of a to images[g].

    Args:
        a: Sum to map
        images: Image of every generator a actually uses, over rw's generators
        rw: Rewrite system of the target ring

    Returns:
        The image of a, in normal form
    """
    cache: Dict[Tuple[str, int], FormalSum] = {}

    def image_power(name: str, exp: int) -> FormalSum:
        key = (name, exp)
        if key not in cache:
            if name not in images:
                raise GeneratorMismatchError(f"No image given for generator {name}")
            cache[key] = power(images[name], exp, rw)
        return cache[key]

    total = FormalSum.zero(rw.generators)
    for mono, coeff in a.items():
        term = FormalSum.constant(rw.generators, coeff)
        for name, exp in mono.exponents:
            term = mul(term, image_power(name, exp), rw)
        total = total + term
    return total


def inv_one_plus(
    g: str,
    power: int,
    truncation: int,
    generators: Optional[Sequence[str]] = None,
) -> FormalSum:
    """Truncated expansion of (1 + g)^(-power) modulo g^truncation.

    Args:
        g: Generator name
        power: Exponent m >= 1
        truncation: Number of terms t >= 1 kept
        generators: Generator tuple of the result (defaults to (g,))

    Returns:
        Sum over j < t of C(m-1+j, j) (-g)^j

    Raises:
        DomainError: If truncation or power is not positive
    """
    if truncation < 1:
        raise DomainError(f"Truncation must be positive, got {truncation}")
    if power < 1:
        raise DomainError(f"Power must be positive, got {power}")
    gens = tuple(generators) if generators is not None else (g,)
    if g not in gens:
        raise GeneratorMismatchError(f"Generator {g} not among {gens}")
    terms = {
        Monomial.of(**{g: j}): (-1) ** j * comb(power - 1 + j, j)
        for j in range(truncation)
    }
    return FormalSum(gens, terms)
