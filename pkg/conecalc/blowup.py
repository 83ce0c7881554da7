"""
Intersection rings of blow-ups of projective space along rational curves.

A class on X = Bl_C P^r is a pair (ambient polynomial in H, exceptional
polynomial in h1, h2) where the exceptional part stands for its pushforward
j_* from E = P^1 x P^(r-2). Products follow

    H^a * H^b       = H^(a+b)
    H * j(alpha)    = j(d * h1 * alpha)
    j(beta)*j(gamma) = -j(xi * beta * gamma),   xi = h2 - a*h1

with H^(r+1) = h1^2 = h2^(r-1) = 0. Numerical groups are obtained by
quotienting by the kernel of the degree pairing.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import List, Optional, Sequence, Tuple, Union

from conecalc import linalg
from conecalc.errors import DomainError, GradingError
from conecalc.ring import (
    FormalSum,
    RewriteSystem,
    Scalar,
    mul,
    normal_form,
    substitute,
)

logger = logging.getLogger(__name__)

AMBIENT = ("H",)
EXCEPTIONAL = ("h2", "h1")


class Family(str, Enum):
    RNC = "RNC"
    LINE = "LINE"
    QUADRIC_CURVE = "QUADRIC_CURVE"
    P3_CURVE = "P3_CURVE"


@dataclass(frozen=True)
class MixedClass:
    """Ambient part in H plus the j_*-pushforward of an exceptional part."""

    ambient: FormalSum
    exceptional: FormalSum

    @classmethod
    def zero(cls) -> "MixedClass":
        return cls(FormalSum.zero(AMBIENT), FormalSum.zero(EXCEPTIONAL))

    @classmethod
    def constant(cls, value: Scalar) -> "MixedClass":
        return cls(FormalSum.constant(AMBIENT, value), FormalSum.zero(EXCEPTIONAL))

    def is_zero(self) -> bool:
        return self.ambient.is_zero() and self.exceptional.is_zero()

    def codimensions(self) -> List[int]:
        codims = self.ambient.degrees() | {k + 1 for k in self.exceptional.degrees()}
        return sorted(codims)

    def is_homogeneous(self) -> bool:
        return len(self.codimensions()) <= 1

    @property
    def codim(self) -> Optional[int]:
        """Codimension of a homogeneous class; None for the zero class.

        Raises:
            GradingError: If the class mixes codimensions
        """
        codims = self.codimensions()
        if len(codims) > 1:
            raise GradingError(f"Class {self} mixes codimensions {codims}")
        return codims[0] if codims else None

    def component(self, k: int) -> "MixedClass":
        return MixedClass(
            self.ambient.homogeneous_component(k),
            self.exceptional.homogeneous_component(k - 1),
        )

    def is_integral(self) -> bool:
        return self.ambient.is_integral() and self.exceptional.is_integral()

    def __add__(self, other: "MixedClass") -> "MixedClass":
        return MixedClass(self.ambient + other.ambient, self.exceptional + other.exceptional)

    def __neg__(self) -> "MixedClass":
        return MixedClass(-self.ambient, -self.exceptional)

    def __sub__(self, other: "MixedClass") -> "MixedClass":
        return self + (-other)

    def __mul__(self, scalar: Scalar) -> "MixedClass":
        if isinstance(scalar, MixedClass):
            raise TypeError("Use product() to multiply classes")
        return MixedClass(self.ambient * scalar, self.exceptional * scalar)

    __rmul__ = __mul__

    def render(self) -> str:
        pieces: List[Tuple[Fraction, str]] = []
        for mono, coeff in self.ambient.sorted_terms():
            pieces.append((coeff, mono.render(AMBIENT)))
        for mono, coeff in self.exceptional.sorted_terms():
            body = mono.render(EXCEPTIONAL)
            pieces.append((coeff, "E" if body == "1" else f"j({body})"))
        if not pieces:
            return "0"
        out = ""
        for index, (coeff, body) in enumerate(pieces):
            magnitude = abs(coeff)
            if body == "1":
                text = str(magnitude)
            elif magnitude == 1:
                text = body
            else:
                text = f"{magnitude}*{body}"
            if index == 0:
                out = ("-" if coeff < 0 else "") + text
            else:
                out += f" {'-' if coeff < 0 else '+'} {text}"
        return out

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class BlowupPresentation:
    """Parameters of one blow-up: ambient dimension, curve degree, twist.

    The exceptional divisor is E = P^1 x P^m with m = r - 2, and
    xi = h2 - twist*h1 is minus the first Chern class of the normal bundle.
    """

    family: Family
    r: int
    d: int
    twist: int

    def __post_init__(self) -> None:
        if self.r < 3:
            raise DomainError(f"Ambient dimension must satisfy r >= 3, got r={self.r}")
        if self.d < 1:
            raise DomainError(f"Curve degree must satisfy d >= 1, got d={self.d}")

    @property
    def m(self) -> int:
        return self.r - 2

    @property
    def label(self) -> str:
        if self.family is Family.RNC:
            return f"X_{self.r}"
        if self.family is Family.LINE:
            return f"W_{self.r}"
        if self.family is Family.QUADRIC_CURVE:
            return f"Y_{self.d}"
        return f"Q(d={self.d},a={self.twist})"

    @property
    def spec(self) -> str:
        if self.family is Family.RNC:
            return f"xr:{self.r}"
        if self.family is Family.LINE:
            return f"w:{self.r}"
        if self.family is Family.QUADRIC_CURVE:
            return f"y:{self.d}"
        return f"p3:{self.d},{self.twist}"

    @cached_property
    def ambient_rules(self) -> RewriteSystem:
        return RewriteSystem(AMBIENT).with_truncation("H", self.r + 1)

    @cached_property
    def exceptional_rules(self) -> RewriteSystem:
        return (
            RewriteSystem(EXCEPTIONAL)
            .with_truncation("h1", 2)
            .with_truncation("h2", self.m + 1)
        )

    @cached_property
    def xi(self) -> FormalSum:
        return FormalSum.monomial(EXCEPTIONAL, h2=1) - FormalSum.monomial(
            EXCEPTIONAL, self.twist, h1=1
        )

    def one(self) -> MixedClass:
        return MixedClass.constant(1)

    def H(self, power: int = 1) -> MixedClass:
        ambient = normal_form(FormalSum.monomial(AMBIENT, H=power), self.ambient_rules)
        return MixedClass(ambient, FormalSum.zero(EXCEPTIONAL))

    def E(self) -> MixedClass:
        return self.j(FormalSum.constant(EXCEPTIONAL, 1))

    def j(self, alpha: FormalSum) -> MixedClass:
        alpha = normal_form(alpha.over(EXCEPTIONAL), self.exceptional_rules)
        return MixedClass(FormalSum.zero(AMBIENT), alpha)

    def j_monomial(self, h2: int = 0, h1: int = 0, coeff: Scalar = 1) -> MixedClass:
        return self.j(FormalSum.monomial(EXCEPTIONAL, coeff, h2=h2, h1=h1))

    def mul(self, x: MixedClass, y: MixedClass) -> MixedClass:
        return product(x, y, self)

    def point_classes(self) -> Tuple[MixedClass, MixedClass]:
        return self.H(self.r), self.j_monomial(h2=self.m, h1=1)


def make_space(
    family: Union[Family, str],
    r: Optional[int] = None,
    d: Optional[int] = None,
    twist: Optional[int] = None,
) -> BlowupPresentation:
    """Build the presentation of one blow-up family.

    Args:
        family: RNC, LINE, QUADRIC_CURVE or P3_CURVE
        r: Ambient dimension (RNC, LINE)
        d: Curve degree (QUADRIC_CURVE, P3_CURVE)
        twist: Twist a of the normal bundle (P3_CURVE only)

    Returns:
        The presentation

    Raises:
        DomainError: If a parameter violates the family's constraints
    """
    try:
        family = Family(family)
    except ValueError:
        raise DomainError(f"Unknown blow-up family {family!r}") from None

    def require(condition: bool, message: str) -> None:
        if not condition:
            raise DomainError(f"{family.value}: {message}")

    if family is Family.RNC:
        require(r is not None, "requires r")
        assert r is not None
        require(r >= 3, f"requires r >= 3, got r={r}")
        require(d in (None, r), f"curve degree is d = r = {r}, got d={d}")
        require(twist in (None, r + 2), f"twist is a = r+2 = {r + 2}, got a={twist}")
        space = BlowupPresentation(family, r, r, r + 2)
    elif family is Family.LINE:
        require(r is not None, "requires r")
        assert r is not None
        require(r >= 3, f"requires r >= 3, got r={r}")
        require(d in (None, 1), f"a line has degree 1, got d={d}")
        require(twist in (None, 1), f"twist is a = 1, got a={twist}")
        space = BlowupPresentation(family, r, 1, 1)
    elif family is Family.QUADRIC_CURVE:
        require(d is not None, "requires d")
        assert d is not None
        require(d >= 3, f"requires d >= 3, got d={d}")
        require(r in (None, 3), f"lives in P^3, got r={r}")
        require(twist in (None, 2 * d - 1), f"twist is a = 2d-1 = {2 * d - 1}, got a={twist}")
        space = BlowupPresentation(family, 3, d, 2 * d - 1)
    else:
        require(d is not None and twist is not None, "requires d and a")
        assert d is not None and twist is not None
        require(d >= 1, f"requires d >= 1, got d={d}")
        require(r in (None, 3), f"lives in P^3, got r={r}")
        space = BlowupPresentation(family, 3, d, twist)
    logger.debug(f"Built {space.label} with d={space.d}, a={space.twist}")
    return space


def restrict_to_exceptional(ambient: FormalSum, S: BlowupPresentation) -> FormalSum:
    """Pull a polynomial in H back to E, where H restricts to d*h1."""
    image = FormalSum.monomial(EXCEPTIONAL, S.d, h1=1)
    return substitute(ambient, {"H": image}, S.exceptional_rules)


def product(x: MixedClass, y: MixedClass, S: BlowupPresentation) -> MixedClass:
    """Product of two classes on S, in normal form."""
    rules = S.exceptional_rules
    ambient = mul(x.ambient, y.ambient, S.ambient_rules)
    exceptional = (
        mul(restrict_to_exceptional(x.ambient, S), y.exceptional, rules)
        + mul(restrict_to_exceptional(y.ambient, S), x.exceptional, rules)
        - mul(S.xi, mul(x.exceptional, y.exceptional, rules), rules)
    )
    return MixedClass(ambient, exceptional)


def power(x: MixedClass, exponent: int, S: BlowupPresentation) -> MixedClass:
    if exponent < 0:
        raise DomainError(f"Negative power {exponent}")
    result = S.one()
    for _ in range(exponent):
        result = product(result, x, S)
    return result


def degree(x: MixedClass, S: BlowupPresentation) -> Fraction:
    """Degree of a class of top codimension r.

    Raises:
        GradingError: If x is not homogeneous of codimension r
    """
    if x.is_zero():
        return Fraction(0)
    codims = x.codimensions()
    if codims != [S.r]:
        raise GradingError(f"degree needs codimension {S.r} on {S.label}, got {codims}")
    return x.ambient.coefficient(H=S.r) + x.exceptional.coefficient(h2=S.m, h1=1)


def pairing(x: MixedClass, y: MixedClass, S: BlowupPresentation) -> Fraction:
    return degree(product(x, y, S), S)


# Order in which generators are admitted into a numerical basis.
_BASIS_PRIORITY = ("H", "h1", "h2")


def _standard(S: BlowupPresentation, k: int) -> List[Tuple[str, MixedClass]]:
    if not 0 <= k <= S.r:
        raise DomainError(f"Codimension must satisfy 0 <= k <= {S.r}, got k={k}")
    gens: List[Tuple[str, MixedClass]] = [("H", S.H(k))]
    if 1 <= k and k - 1 <= S.m:
        gens.append(("h2", S.j_monomial(h2=k - 1)))
    if 2 <= k and k - 2 <= S.m:
        gens.append(("h1", S.j_monomial(h2=k - 2, h1=1)))
    return gens


def standard_generators(S: BlowupPresentation, k: int) -> List[MixedClass]:
    """H^k, j(h2^(k-1)), j(h2^(k-2)*h1), dropping out-of-range monomials."""
    return [cls for _, cls in _standard(S, k)]


@dataclass(frozen=True)
class PairingData:
    """Degrees of products of the codim-k generators with the codim-(r-k) ones."""

    space: BlowupPresentation
    k: int
    rows: Tuple[MixedClass, ...]
    cols: Tuple[MixedClass, ...]
    matrix: Tuple[Tuple[Fraction, ...], ...]

    @property
    def row_labels(self) -> List[str]:
        return [c.render() for c in self.rows]

    @property
    def col_labels(self) -> List[str]:
        return [c.render() for c in self.cols]

    def recompute(self) -> bool:
        return all(
            pairing(g, h, self.space) == self.matrix[i][j]
            for i, g in enumerate(self.rows)
            for j, h in enumerate(self.cols)
        )


def pairing_matrix(S: BlowupPresentation, k: int) -> PairingData:
    rows = tuple(standard_generators(S, k))
    cols = tuple(standard_generators(S, S.r - k))
    matrix = tuple(tuple(pairing(g, h, S) for h in cols) for g in rows)
    return PairingData(S, k, rows, cols, matrix)


@dataclass(frozen=True)
class NumericalBasis:
    """A basis of Num^k together with the relations among the generators.

    Relations are integer vectors over `generators`; basis classes are
    listed in generator order.
    """

    space: BlowupPresentation
    k: int
    generators: Tuple[MixedClass, ...]
    basis_indices: Tuple[int, ...]
    relations: Tuple[Tuple[int, ...], ...]
    duals: Tuple[MixedClass, ...]
    pairings: Tuple[Tuple[Fraction, ...], ...]

    @property
    def basis(self) -> Tuple[MixedClass, ...]:
        return tuple(self.generators[i] for i in self.basis_indices)

    @property
    def rank(self) -> int:
        return len(self.basis_indices)

    def basis_pairings(self) -> List[Tuple[Fraction, ...]]:
        return [self.pairings[i] for i in self.basis_indices]

    def relation_classes(self) -> List[MixedClass]:
        out = []
        for rel in self.relations:
            total = MixedClass.zero()
            for coeff, gen in zip(rel, self.generators):
                total = total + gen * coeff
            out.append(total)
        return out


@lru_cache(maxsize=None)
def numerical_basis(S: BlowupPresentation, k: int) -> NumericalBasis:
    """Basis of Num^k(S) and the generator relations in the pairing kernel."""
    labelled = _standard(S, k)
    generators = tuple(cls for _, cls in labelled)
    duals = tuple(standard_generators(S, S.r - k))
    rows = [tuple(pairing(g, h, S) for h in duals) for g in generators]

    priority = sorted(range(len(labelled)), key=lambda i: _BASIS_PRIORITY.index(labelled[i][0]))
    chosen = sorted(linalg.greedy_independent(rows, priority))

    relations = []
    for index in range(len(generators)):
        if index in chosen:
            continue
        coeffs = linalg.solve_combination([rows[i] for i in chosen], rows[index])
        vector = [Fraction(0)] * len(generators)
        vector[index] = Fraction(1)
        for i, c in zip(chosen, coeffs):
            vector[i] -= c
        relations.append(linalg.primitive(vector))
    logger.debug(f"Num^{k}({S.label}) has rank {len(chosen)}, {len(relations)} relation(s)")
    return NumericalBasis(
        S, k, generators, tuple(chosen), tuple(relations), duals, tuple(rows)
    )


def _check_codim(x: MixedClass, k: int, S: BlowupPresentation) -> None:
    codims = x.codimensions()
    if codims and codims != [k]:
        raise GradingError(f"Expected a class of codimension {k} on {S.label}, got {codims}")


def to_num(x: MixedClass, S: BlowupPresentation, k: int) -> Tuple[Fraction, ...]:
    """Coordinates of x in the numerical basis of Num^k.

    Raises:
        GradingError: If x is not homogeneous of codimension k
    """
    _check_codim(x, k, S)
    nb = numerical_basis(S, k)
    target = [pairing(x, h, S) for h in nb.duals]
    return tuple(linalg.solve_combination(nb.basis_pairings(), target))


def from_num(coords: Sequence[Scalar], S: BlowupPresentation, k: int) -> MixedClass:
    nb = numerical_basis(S, k)
    if len(coords) != nb.rank:
        raise GradingError(f"Num^{k}({S.label}) has rank {nb.rank}, got {len(coords)} coordinates")
    total = MixedClass.zero()
    for c, b in zip(coords, nb.basis):
        total = total + b * c
    return total


def numerically_equal(x: MixedClass, y: MixedClass, S: BlowupPresentation, k: int) -> bool:
    return to_num(x, S, k) == to_num(y, S, k)
