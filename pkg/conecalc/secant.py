"""
Secant bundles of rational normal curves.

P(E_{n,k}) is a projective bundle over P^k with generators h (pulled back
from P^k) and zeta (pulled back from P^n). Its Chow ring is
Q[h, zeta] / (h^(k+1), sum_i c_i(E) h^i zeta^(k-i)) with
c(E) = (1 + h)^(-(n-k+1)).

For k = 2 the map psi: P(E_{n,2}) -> X_n onto the proper transform of the
secant variety gives pullback and pushforward between the two rings; the
pushforward is solved by duality from the projection formula.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Tuple

from conecalc import linalg
from conecalc.blowup import (
    BlowupPresentation,
    Family,
    MixedClass,
    make_space,
    numerical_basis,
    pairing,
)
from conecalc.errors import DomainError, GradingError, InvariantError, SingularPairingError
from conecalc.ring import (
    FormalSum,
    Monomial,
    RewriteSystem,
    inv_one_plus,
    mul,
    normal_form,
    power,
)

logger = logging.getLogger(__name__)

GENERATORS = ("zeta", "h")


@dataclass(frozen=True)
class SecantBundleRing:
    """Chow ring of P(E_{n,k}), of dimension 2k - 1."""

    n: int
    k: int

    def __post_init__(self) -> None:
        if not 1 <= self.k < self.n:
            raise DomainError(
                f"Secant order must satisfy 1 <= k < n, got n={self.n}, k={self.k}"
            )

    @property
    def dimension(self) -> int:
        return 2 * self.k - 1

    @property
    def spec(self) -> str:
        return f"sec:{self.n},{self.k}"

    @property
    def label(self) -> str:
        return f"P(E_{self.n},{self.k})"

    @cached_property
    def chern(self) -> FormalSum:
        """Total Chern class of E_{n,k}, truncated above h^k."""
        return inv_one_plus("h", self.n - self.k + 1, self.k + 1, generators=GENERATORS)

    def relation(self) -> FormalSum:
        """zeta^k + c_1 h zeta^(k-1) + ... + c_k h^k."""
        total = FormalSum.zero(GENERATORS)
        for i in range(self.k + 1):
            ci = self.chern.coefficient(h=i)
            total = total + FormalSum.monomial(GENERATORS, ci, h=i, zeta=self.k - i)
        return total

    @cached_property
    def rules(self) -> RewriteSystem:
        top = Monomial.of(zeta=self.k)
        replacement = FormalSum.monomial(GENERATORS, 1, zeta=self.k) - self.relation()
        return (
            RewriteSystem(GENERATORS)
            .with_truncation("h", self.k + 1)
            .with_substitution(top, replacement)
        )

    def one(self) -> FormalSum:
        return FormalSum.constant(GENERATORS, 1)

    def h(self) -> FormalSum:
        return FormalSum.monomial(GENERATORS, h=1)

    def zeta(self) -> FormalSum:
        return FormalSum.monomial(GENERATORS, zeta=1)

    def reduce(self, x: FormalSum) -> FormalSum:
        return normal_form(x.over(GENERATORS), self.rules)

    def mul(self, x: FormalSum, y: FormalSum) -> FormalSum:
        return mul(x, y, self.rules)

    def power(self, x: FormalSum, exponent: int) -> FormalSum:
        return power(x, exponent, self.rules)

    def point_class(self) -> FormalSum:
        return FormalSum.monomial(GENERATORS, h=self.k, zeta=self.k - 1)

    def degree(self, x: FormalSum) -> Fraction:
        """Degree of a class of top codimension 2k - 1.

        Raises:
            GradingError: If x is not homogeneous of top codimension
        """
        x = self.reduce(x)
        if x.is_zero():
            return Fraction(0)
        if x.degrees() != {self.dimension}:
            raise GradingError(
                f"degree needs codimension {self.dimension} on {self.label}, got {sorted(x.degrees())}"
            )
        return x.coefficient(h=self.k, zeta=self.k - 1)

    def numerical_basis(self, c: int) -> List[FormalSum]:
        """Normal-form monomials h^i zeta^j of codimension c."""
        if not 0 <= c <= self.dimension:
            raise DomainError(f"Codimension must satisfy 0 <= c <= {self.dimension}, got {c}")
        return [
            FormalSum.monomial(GENERATORS, h=c - j, zeta=j)
            for j in range(min(c, self.k - 1), -1, -1)
            if c - j <= self.k
        ]

    def to_num(self, x: FormalSum, c: int) -> Tuple[Fraction, ...]:
        x = self.reduce(x)
        if x.degrees() - {c}:
            raise GradingError(f"Expected codimension {c} on {self.label}, got {sorted(x.degrees())}")
        return tuple(
            x.coefficient(next(iter(b.terms))) for b in self.numerical_basis(c)
        )

    def pairing_matrix(self, c: int) -> List[List[Fraction]]:
        rows = self.numerical_basis(c)
        cols = self.numerical_basis(self.dimension - c)
        return [[self.degree(self.mul(a, b)) for b in cols] for a in rows]


@lru_cache(maxsize=None)
def make_secant_ring(n: int, k: int) -> SecantBundleRing:
    """Ring of P(E_{n,k}) with the relation derived from the Chern series."""
    ring = SecantBundleRing(n, k)
    logger.debug(f"Built {ring.label} with relation {ring.relation()}")
    return ring


def secant_degree(n: int, k: int) -> Fraction:
    """Degree of zeta^(2k-1) on P(E_{n,k}), the degree of Sec_k of the curve.

    Raises:
        DomainError: If 2k - 1 > n
    """
    if 2 * k - 1 > n:
        raise DomainError(f"secant_degree requires 2k-1 <= n, got n={n}, k={k}")
    ring = make_secant_ring(n, k)
    return ring.degree(ring.power(ring.zeta(), ring.dimension))


def incidence_coefficient(n: int) -> Fraction:
    """Solve deg((2 zeta - m h) zeta^2) = 0 for m on P(E_{n,2}).

    Raises:
        DomainError: If n < 3
        InvariantError: If deg(h*zeta^2) vanishes
    """
    if n < 3:
        raise DomainError(f"incidence divisor requires n >= 3, got n={n}")
    ring = make_secant_ring(n, 2)
    zeta_sq = ring.power(ring.zeta(), 2)
    cube = ring.degree(ring.mul(ring.zeta(), zeta_sq))
    mixed = ring.degree(ring.mul(ring.h(), zeta_sq))
    if mixed == 0:
        raise InvariantError(f"deg(h*zeta^2) vanishes for n={n}")
    return 2 * cube / mixed


def incidence_divisor(n: int) -> FormalSum:
    """Class D = 2 zeta - m h of the divisor of secant lines meeting the curve twice."""
    m = incidence_coefficient(n)
    if m != n - 2:
        raise InvariantError(f"Solved incidence coefficient {m} differs from n-2={n - 2}")
    return 2 * FormalSum.monomial(GENERATORS, zeta=1) - m * FormalSum.monomial(GENERATORS, h=1)


@dataclass(frozen=True)
class PsiMaps:
    """Pullback and pushforward along psi: P(E_{n,2}) -> X_n."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 4:
            raise DomainError(f"psi maps require n >= 4, got n={self.n}")

    @cached_property
    def source(self) -> BlowupPresentation:
        return make_space(Family.RNC, r=self.n)

    @cached_property
    def target(self) -> SecantBundleRing:
        return make_secant_ring(self.n, 2)

    @cached_property
    def divisor(self) -> FormalSum:
        return incidence_divisor(self.n)

    @cached_property
    def _exceptional_images(self) -> List[FormalSum]:
        # j(h2^b) = (-1)^b E^(b+1) + (a b / d) H j(h2^(b-1)), with E -> D, H -> zeta
        P, X = self.target, self.source
        zeta = P.zeta()
        images = [P.reduce(self.divisor)]
        for b in range(1, X.m + 1):
            lead = P.power(self.divisor, b + 1) * (-1) ** b
            tail = P.mul(zeta, images[b - 1]) * Fraction(X.twist * b, X.d)
            images.append(P.reduce(lead + tail))
        return images

    def pullback_table(self) -> Dict[str, FormalSum]:
        X = self.source
        return {
            "H": self.pullback(X.H()),
            "E": self.pullback(X.E()),
            "j(h1)": self.pullback(X.j_monomial(h1=1)),
            "j(h2)": self.pullback(X.j_monomial(h2=1)),
        }

    def pullback(self, x: MixedClass) -> FormalSum:
        """psi^* of a class of X_n, in normal form on P(E_{n,2}).

        Raises:
            DomainError: If x uses monomials outside the ring of X_n
        """
        P, X = self.target, self.source
        if any(mono.exponent("H") > X.r for mono in x.ambient.terms):
            raise DomainError(f"Class {x} lies outside the generated span of X_{self.n}")
        for mono in x.exceptional.terms:
            if mono.exponent("h1") > 1 or mono.exponent("h2") > X.m:
                raise DomainError(f"Class {x} lies outside the generated span of X_{self.n}")
        total = FormalSum.zero(P.rules.generators)
        for mono, coeff in x.ambient.items():
            total = total + P.power(P.zeta(), mono.exponent("H")) * coeff
        for mono, coeff in x.exceptional.items():
            image = self._exceptional_images[mono.exponent("h2")]
            if mono.exponent("h1"):
                image = P.mul(P.zeta(), image) * Fraction(1, X.d)
            total = total + image * coeff
        return P.reduce(total)

    def pushforward(self, gamma: FormalSum, target_codim: Optional[int] = None) -> MixedClass:
        """psi_* of a homogeneous class, solved from the projection formula.

        Raises:
            GradingError: If gamma is inhomogeneous or target_codim disagrees
            SingularPairingError: If the complementary pairing is singular
        """
        P, X = self.target, self.source
        gamma = P.reduce(gamma)
        degrees = gamma.degrees()
        if len(degrees) > 1:
            raise GradingError(f"pushforward needs a homogeneous class, got degrees {sorted(degrees)}")
        if gamma.is_zero():
            return MixedClass.zero()
        c = degrees.pop()
        codim = self.n - P.dimension + c
        if target_codim is not None and target_codim != codim:
            raise GradingError(f"psi_* of a codimension-{c} class has codimension {codim}, not {target_codim}")
        nb = numerical_basis(X, codim)
        nb_dual = numerical_basis(X, self.n - codim)
        gram = [[pairing(b, b_dual, X) for b_dual in nb_dual.basis] for b in nb.basis]
        if linalg.det(gram) == 0:
            raise SingularPairingError(f"Singular pairing on Num^{codim}(X_{self.n})")
        rhs = [P.degree(P.mul(gamma, self.pullback(b_dual))) for b_dual in nb_dual.basis]
        coords = linalg.solve_combination(gram, rhs)
        total = MixedClass.zero()
        for coeff, b in zip(coords, nb.basis):
            total = total + b * coeff
        return total


@lru_cache(maxsize=None)
def psi_maps(n: int) -> PsiMaps:
    return PsiMaps(n)


def psi_pullback(x: MixedClass, n: int) -> FormalSum:
    return psi_maps(n).pullback(x)


def psi_pushforward(gamma: FormalSum, n: int, target_codim: Optional[int] = None) -> MixedClass:
    return psi_maps(n).pushforward(gamma, target_codim)


def s2_class(n: int) -> MixedClass:
    """[S_2] in X_n, the pushforward of the fundamental class of P(E_{n,2})."""
    return psi_pushforward(FormalSum.constant(GENERATORS, 1), n)
