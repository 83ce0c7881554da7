"""
Catalog of cone statements and numerical identities, each with an
executable verification procedure.

A record names a family, a parameter range and, for cone statements, the
claimed generators and dual certificates as class expressions. Cone
claims are checked by duality consistency: every certificate pairs
nonnegatively with every generator, and each generator is cut out by
certificates of rank one less than the ambient rank. Nefness and
effectiveness themselves are geometric inputs; reports list them under
`assumptions` and never claim to prove them.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Tuple, Union

from conecalc import linalg
from conecalc.blowup import (
    BlowupPresentation,
    Family,
    MixedClass,
    degree,
    from_num,
    make_space,
    numerical_basis,
    pairing,
    power,
    product,
    standard_generators,
    to_num,
)
from conecalc.cones import PolyCone, contains, dual_cone, includes, is_extremal, isolates
from conecalc.errors import DomainError, UnknownCaseError
from conecalc.expression import Space, parse_class, parse_space
from conecalc.formulas import (
    berzolari,
    h0_curve,
    h0_p3,
    projection_nodes,
    z_slope,
    z_slope_limit,
)
from conecalc.ring import FormalSum
from conecalc.secant import (
    GENERATORS as SECANT_GENERATORS,
    SecantBundleRing,
    incidence_divisor,
    make_secant_ring,
    psi_maps,
    s2_class,
    secant_degree,
)

logger = logging.getLogger(__name__)

Params = Dict[str, int]

# largest m used for the finite-m slope bounds
Z_SLOPE_MAX_M = 1000


class Limits(NamedTuple):
    """Sweep caps: max_r bounds dimension-like parameters, max_e the surface curve degree."""

    max_r: int = 10
    max_e: int = 40


@dataclass(frozen=True)
class ParamRange:
    """One integer parameter of a record.

    Attributes:
        name: Parameter name, as passed on the command line
        low: Smallest accepted value
        high: Largest accepted value, or None when unbounded
        upper: Bound depending on parameters declared earlier
        cap: Sweep cap derived from the limits; unbounded ranges need one
        label: Human-readable range
    """

    name: str
    low: int
    high: Optional[int] = None
    upper: Optional[Callable[[Params], int]] = None
    cap: Optional[Callable[[Limits], int]] = None
    label: str = ""

    def declared_high(self, params: Params) -> Optional[int]:
        bounds = [b for b in (self.high, self.upper(params) if self.upper else None) if b is not None]
        return min(bounds) if bounds else None

    def sweep_bounds(self, params: Params, limits: Limits) -> Tuple[int, int]:
        bounds = [self.declared_high(params), self.cap(limits) if self.cap else None]
        finite = [b for b in bounds if b is not None]
        if not finite:
            raise DomainError(f"Parameter {self.name} has no upper bound for sweeping")
        return self.low, min(finite)

    def describe(self) -> str:
        if self.label:
            return self.label
        if self.high is None:
            return f"{self.name} >= {self.low}"
        return f"{self.name} = {self.low}..{self.high}"


def _by_max_r(limits: Limits) -> int:
    return limits.max_r


@dataclass(frozen=True)
class Claim:
    """Claimed cone on a space: generators of codimension `codim`, certificates of the complement."""

    space: str
    codim: int
    generators: Tuple[str, ...]
    certificates: Tuple[str, ...]
    title: str = ""


@dataclass(frozen=True)
class Check:
    name: str
    expected: str
    computed: str
    passed: bool


@dataclass(frozen=True)
class VerificationReport:
    case: str
    params: Params
    checks: Tuple[Check, ...]
    notes: Tuple[str, ...] = ()
    assumptions: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "case": self.case,
            "params": dict(self.params),
            "checks": [
                {"name": c.name, "expected": c.expected, "computed": c.computed, "pass": c.passed}
                for c in self.checks
            ],
            "pass": self.passed,
            "notes": list(self.notes),
            "assumptions": list(self.assumptions),
        }


def _text(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(_text(v) for v in value) + ")"
    if isinstance(value, (MixedClass, FormalSum)):
        return value.render()
    return str(value)


class _Collector:
    def __init__(self) -> None:
        self.checks: List[Check] = []
        self.notes: List[str] = []

    def equal(self, name: str, expected: Any, computed: Any) -> None:
        self.checks.append(Check(name, _text(expected), _text(computed), expected == computed))

    def holds(self, name: str, expected: str, computed: Any, passed: bool) -> None:
        self.checks.append(Check(name, expected, _text(computed), bool(passed)))

    def note(self, text: str) -> None:
        self.notes.append(text)


Procedure = Callable[[Params, _Collector], None]


@dataclass(frozen=True)
class TheoremRecord:
    id: str
    family: str
    description: str
    ranges: Tuple[ParamRange, ...]
    procedure: Procedure
    claims: Optional[Callable[[Params], List[Claim]]] = None
    generator_text: Tuple[str, ...] = ()
    certificate_text: Tuple[str, ...] = ()
    notes: Tuple[str, ...] = ()
    assumptions: Tuple[str, ...] = ()
    open_questions: Tuple[str, ...] = ()

    @property
    def procedure_name(self) -> str:
        return self.procedure.__name__.lstrip("_")

    def range_text(self) -> str:
        return ", ".join(r.describe() for r in self.ranges) or "fixed instance"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "family": self.family,
            "description": self.description,
            "range": self.range_text(),
            "params": [r.name for r in self.ranges],
            "generators": list(self.generator_text),
            "certificates": list(self.certificate_text),
            "procedure": self.procedure_name,
            "notes": list(self.notes),
            "assumptions": list(self.assumptions),
            "open_questions": list(self.open_questions),
        }


# -- expression helpers ------------------------------------------------------


def _H(p: int) -> str:
    if p == 0:
        return "1"
    return "H" if p == 1 else f"H^{p}"


def _j(h2: int, h1: int = 0) -> str:
    """j(h2^a*h1^b) as an expression, with E for j(1)."""
    parts = []
    if h2:
        parts.append("h2" if h2 == 1 else f"h2^{h2}")
    if h1:
        parts.append("h1")
    return f"j({'*'.join(parts)})" if parts else "E"


# -- duality consistency -----------------------------------------------------


class _Numerics:
    """Pairing, coordinates and ranks of one space, for the duality checks."""

    def __init__(self, space: Space):
        self.space = space

    @property
    def dimension(self) -> int:
        if isinstance(self.space, SecantBundleRing):
            return self.space.dimension
        return self.space.r

    def parse(self, text: str) -> Union[MixedClass, FormalSum]:
        return parse_class(text, self.space)

    def coords(self, x: Union[MixedClass, FormalSum], codim: int) -> Tuple[Fraction, ...]:
        if isinstance(self.space, SecantBundleRing):
            assert isinstance(x, FormalSum)
            return self.space.to_num(x, codim)
        assert isinstance(x, MixedClass)
        return to_num(x, self.space, codim)

    def rank(self, codim: int) -> int:
        if isinstance(self.space, SecantBundleRing):
            return len(self.space.numerical_basis(codim))
        return numerical_basis(self.space, codim).rank

    def pair(self, x: Union[MixedClass, FormalSum], y: Union[MixedClass, FormalSum]) -> Fraction:
        if isinstance(self.space, SecantBundleRing):
            assert isinstance(x, FormalSum) and isinstance(y, FormalSum)
            return self.space.degree(self.space.mul(x, y))
        assert isinstance(x, MixedClass) and isinstance(y, MixedClass)
        return pairing(x, y, self.space)


def _claim_classes(
    claim: Claim, out: Optional[_Collector] = None
) -> Tuple[_Numerics, List[Tuple[str, Tuple[Fraction, ...]]], List[Tuple[str, Any, Tuple[Fraction, ...]]]]:
    num = _Numerics(parse_space(claim.space))
    complement = num.dimension - claim.codim
    generators = []
    for text in claim.generators:
        coords = num.coords(num.parse(text), claim.codim)
        if not any(coords):
            if out is not None:
                out.note(f"Generator {text} is numerically zero and was dropped")
            continue
        generators.append((text, coords))
    certificates = []
    for text in claim.certificates:
        cls = num.parse(text)
        coords = num.coords(cls, complement)
        if not any(coords):
            if out is not None:
                out.note(f"Certificate {text} is numerically zero and was dropped")
            continue
        certificates.append((text, cls, coords))
    return num, generators, certificates


def claim_cone(claim: Claim) -> PolyCone:
    """The cone spanned by a claim's generators, in numerical coordinates."""
    _, generators, _ = _claim_classes(claim)
    rank = len(generators[0][1]) if generators else 0
    return PolyCone.from_rays(rank, [coords for _, coords in generators])


def _duality(claim: Claim, out: _Collector) -> None:
    num, generators, certificates = _claim_classes(claim, out)
    prefix = f"{claim.title}: " if claim.title else ""
    rank = num.rank(claim.codim)
    dual_rank = num.rank(num.dimension - claim.codim)
    generator_classes = [(text, num.parse(text)) for text, _ in generators]

    out.equal(
        f"{prefix}generators span Num^{claim.codim}",
        rank,
        linalg.rank([coords for _, coords in generators]),
    )
    values = {
        (c_text, g_text): num.pair(c_cls, g_cls)
        for c_text, c_cls, _ in certificates
        for g_text, g_cls in generator_classes
    }
    for c_text, _, _ in certificates:
        row = [values[(c_text, g_text)] for g_text, _ in generator_classes]
        out.holds(
            f"{prefix}<{c_text}, generators> >= 0", ">= 0 on every generator", row, all(v >= 0 for v in row)
        )
    for g_text, _ in generator_classes:
        vanishing = [coords for c_text, _, coords in certificates if values[(c_text, g_text)] == 0]
        found = linalg.rank(vanishing)
        out.holds(
            f"{prefix}{g_text} is cut out by certificates",
            f"vanishing certificates of rank {dual_rank - 1}",
            f"{len(vanishing)} vanishing, rank {found}",
            bool(vanishing) and found == dual_rank - 1,
        )


def _verify_claims(record_claims: List[Claim], out: _Collector) -> None:
    for claim in record_claims:
        _duality(claim, out)


# -- secant bundle records ---------------------------------------------------


def _chow_pe(p: Params, out: _Collector) -> None:
    n = p["n"]
    ring = make_secant_ring(n, 2)
    expected = (
        FormalSum.monomial(SECANT_GENERATORS, zeta=2)
        - FormalSum.monomial(SECANT_GENERATORS, n - 1, zeta=1, h=1)
        + FormalSum.monomial(SECANT_GENERATORS, comb(n, 2), h=2)
    )
    out.equal("relation zeta^2 - (n-1)*h*zeta + C(n,2)*h^2", expected, ring.relation())
    out.equal(
        "Chern coefficients of E_{n,2}",
        (1, -(n - 1), comb(n, 2)),
        tuple(ring.chern.coefficient(h=i) for i in range(3)),
    )
    out.equal("degree of the point class h^2*zeta", Fraction(1), ring.degree(ring.point_class()))
    out.equal("relation reduces to zero", FormalSum.zero(SECANT_GENERATORS), ring.reduce(ring.relation()))


def _pe_claims(p: Params) -> List[Claim]:
    n = p["n"]
    return [Claim(f"sec:{n},2", 1, ("h", f"2*zeta - {n - 2}*h"), ("h^2", "zeta^2"))]


def _eff1_pe(p: Params, out: _Collector) -> None:
    n = p["n"]
    ring = make_secant_ring(n, 2)
    D = incidence_divisor(n)
    out.equal("incidence divisor D = 2*zeta - (n-2)*h", parse_class(f"2*zeta - {n - 2}*h", ring), D)
    out.equal("deg(D*zeta^2)", Fraction(0), ring.degree(ring.mul(D, ring.power(ring.zeta(), 2))))
    out.equal("deg(h*h^2)", Fraction(0), ring.degree(ring.power(ring.h(), 3)))
    _verify_claims(_pe_claims(p), out)


def _secant_degree(p: Params, out: _Collector) -> None:
    n = p["n"]
    out.equal("deg(zeta^3) on P(E_{n,2})", Fraction(comb(n - 1, 2)), secant_degree(n, 2))
    if n % 2 == 0:
        k = n // 2
        out.equal(f"deg(zeta^{2 * k - 1}) on P(E_{{{n},{k}}})", Fraction(k + 1), secant_degree(n, k))


# -- X_r records -------------------------------------------------------------


def _cor_relation(p: Params, out: _Collector) -> None:
    r = p["r"]
    X = make_space(Family.RNC, r=r)
    relation = parse_class(f"{_j(r - 2)} - {r}*{_H(r - 1)} + {r + 2}*{_j(r - 3, 1)}", X)
    out.equal("<relation, H>", Fraction(0), pairing(relation, X.H(), X))
    out.equal("<relation, E>", Fraction(0), pairing(relation, X.E(), X))
    nb = numerical_basis(X, r - 1)
    out.equal("relation found in Num^(r-1)", ((-r, 1, r + 2),), nb.relations)
    expected_ranks = tuple([1, 2] + [3] * (r - 3) + [2, 1])
    ranks = tuple(numerical_basis(X, k).rank for k in range(r + 1))
    out.equal("Num ranks by codimension", expected_ranks, ranks)
    for k in range(r + 1):
        basis = numerical_basis(X, k)
        dual = numerical_basis(X, r - k)
        gram = [[pairing(b, c, X) for c in dual.basis] for b in basis.basis]
        det = linalg.det(gram)
        out.holds(f"pairing on Num^{k} is nondegenerate", "nonzero determinant", det, det != 0)


def _even_space(p: Params) -> Tuple[int, int]:
    return p["n"], 2 * p["n"]


def _odd_space(p: Params) -> Tuple[int, int]:
    return p["n"], 2 * p["n"] + 1


def _secant_divisor_claims(n: int, r: int) -> List[Claim]:
    return [
        Claim(
            f"xr:{r}",
            1,
            ("E", f"{n + 1}*H - {n}*E"),
            (_H(r - 1), f"{n}*{_H(r - 1)} - {n + 1}*{_j(r - 3, 1)}"),
        )
    ]


def _secant_divisor(n: int, r: int, out: _Collector) -> None:
    X = make_space(Family.RNC, r=r)
    claims = _secant_divisor_claims(n, r)
    _verify_claims(claims, out)
    cone = claim_cone(claims[0])
    basis = numerical_basis(X, 1)
    dual_basis = numerical_basis(X, r - 1)
    gram = [[pairing(b, c, X) for c in dual_basis.basis] for b in basis.basis]
    out.equal("pairing Num^1 x Num^(r-1)", ((1, 0), (0, -1)), tuple(tuple(row) for row in gram))
    nef = dual_cone(cone, gram)
    certificate = parse_class(claims[0].certificates[1], X)
    ray = linalg.primitive(to_num(certificate, X, r - 1))
    out.holds("dual cone has the certificate as a ray", f"{ray} among the rays", nef.rays, ray in nef.rays)
    secant = parse_class(claims[0].generators[1], X)
    out.equal("<certificate, secant class>", Fraction(0), pairing(certificate, secant, X))
    out.holds("<certificate, E> > 0", "> 0", pairing(certificate, X.E(), X), pairing(certificate, X.E(), X) > 0)
    if r == 2 * n:
        out.equal(f"deg Sec_{n} = secant_degree(2n, n)", Fraction(n + 1), secant_degree(2 * n, n))
    if n == 2 and r == 4:
        out.equal("psi_*(1) in X_4", to_num(secant, X, 1), to_num(s2_class(4), X, 1))


def _eff1_even(p: Params, out: _Collector) -> None:
    _secant_divisor(*_even_space(p), out)


def _eff1_odd(p: Params, out: _Collector) -> None:
    _secant_divisor(*_odd_space(p), out)


def _curves_claims(p: Params) -> List[Claim]:
    r = p["r"]
    J = _j(r - 3, 1)
    return [Claim(f"xr:{r}", r - 1, (J, f"{_H(r - 1)} - 2*{J}"), ("H", "2*H - E"))]


def _eff1_curves(p: Params, out: _Collector) -> None:
    r = p["r"]
    X = make_space(Family.RNC, r=r)
    fiber = parse_class(_j(r - 3, 1), X)
    out.equal("fiber of E -> C is contracted by H", Fraction(0), pairing(X.H(), fiber, X))
    _verify_claims(_curves_claims(p), out)


def _psi_maps(p: Params, out: _Collector) -> None:
    n = p["n"]
    X = make_space(Family.RNC, r=n)
    psi = psi_maps(n)
    P = psi.target
    table = psi.pullback_table()
    transcribed = {
        "H": "zeta",
        "E": f"2*zeta - {n - 2}*h",
        "j(h1)": f"zeta*h - {n - 1}*h^2",
        "j(h2)": f"{n - 2}*(zeta*h + h^2)",
    }
    for key, text in transcribed.items():
        out.equal(f"psi^*{key}", parse_class(text, P), table[key])

    D = psi.divisor
    out.equal("psi^*(E^2) two ways", P.mul(D, D), psi.pullback(power(X.E(), 2, X)))
    h_times_e = psi.pullback(product(X.H(), X.E(), X))
    out.equal("psi^*(H*E) = psi^*(n*j(h1))", psi.pullback(X.j_monomial(h1=1, coeff=n)), h_times_e)

    generators = standard_generators(X, 1) + standard_generators(X, 2)
    failures = [
        f"{x} * {y}"
        for i, x in enumerate(generators)
        for y in generators[i:]
        if psi.pullback(product(x, y, X)) != P.mul(psi.pullback(x), psi.pullback(y))
    ]
    out.holds(
        "psi^* is multiplicative on Num^1 and Num^2 generators", "no failures", failures or "none", not failures
    )

    closed_forms = {
        "h": (n - 2, f"{n - 1}*{_H(n - 2)} - {_j(n - 3)} - {2 * n}*{_j(n - 4, 1)}"),
        "1": (
            n - 3,
            f"{comb(n - 1, 2)}*{_H(n - 3)} - {n - 2}*{_j(n - 4)} - {(n + 2) * (n - 2)}*{_j(n - 5, 1)}",
        ),
        "zeta": (n - 2, f"{comb(n - 1, 2)}*{_H(n - 2)} - {n * (n - 2)}*{_j(n - 4, 1)}"),
    }
    for gamma_text, (codim, expected_text) in closed_forms.items():
        pushed = psi.pushforward(parse_class(gamma_text, P), codim)
        out.equal(
            f"psi_*({gamma_text})",
            to_num(parse_class(expected_text, X), X, codim),
            to_num(pushed, X, codim),
        )

    mismatches = []
    for c in range(P.dimension + 1):
        for gamma in P.numerical_basis(c):
            pushed = psi.pushforward(gamma)
            for beta in standard_generators(X, P.dimension - c):
                lhs = degree(product(pushed, beta, X), X)
                rhs = P.degree(P.mul(gamma, psi.pullback(beta)))
                if lhs != rhs:
                    mismatches.append(f"{gamma} vs {beta}")
    out.holds("projection formula on the basis grid", "no mismatches", mismatches or "none", not mismatches)


def _nef_h2(p: Params, out: _Collector) -> None:
    n = p["n"]
    X = make_space(Family.RNC, r=n)
    nu = parse_class(f"H^2 - {n - 1}*j(h1)", X)
    basis = numerical_basis(X, n - 2).basis
    out.equal("<nu, basis of Num^(n-2)>", (1, n - 1, 0), tuple(pairing(nu, b, X) for b in basis))
    pushed = psi_maps(n).pushforward(FormalSum.monomial(SECANT_GENERATORS, h=1))
    out.equal("<nu, psi_*(h)>", Fraction(0), pairing(nu, pushed, X))
    values = [pairing(nu, parse_class(g, X), X) for g in _cone_a_generators(n)]
    out.holds("<nu, generators of A> >= 0", ">= 0", values, all(v >= 0 for v in values))


def _s2_negative(p: Params, out: _Collector) -> None:
    n = p["n"]
    X = make_space(Family.RNC, r=n)
    S2 = s2_class(n)
    test = parse_class(f"H^3 - {n - 2}*j(h2*h1)", X)
    value = pairing(test, S2, X)
    out.equal("<H^3 - (n-2)*j(h1*h2), [S2]>", Fraction(comb(n - 1, 2) - (n - 2) ** 2), value)
    out.holds("intersection with [S2] is negative", "< 0", value, value < 0)
    ratio = Fraction(n - 2, comb(n - 1, 2))
    out.holds("(n-2)/C(n-1,2) > 1/(n-2)", f"> {Fraction(1, n - 2)}", ratio, ratio > Fraction(1, n - 2))
    coords = to_num(S2, X, n - 3)
    out.equal("[S2] coordinates", (comb(n - 1, 2), -(n - 2), -(n + 2) * (n - 2)), coords)

    # H^(n-3), j(h2^(n-4)), j(h2^(n-5)*h1) are effective and form the basis of Num^(n-3)
    basis = numerical_basis(X, n - 3).basis
    functional = tuple(pairing(test, b, X) for b in basis)
    out.equal("test class on the basis of Num^(n-3)", (1, n - 2, 0), functional)
    others = [tuple(int(i == k) for i in range(3)) for k in range(3)]
    out.holds(
        "test class is negative on [S2] and >= 0 on the other generators",
        "separates [S2]",
        functional,
        isolates(functional, coords, others),
    )
    cone = PolyCone.from_rays(3, [coords, *others])
    out.holds("[S2] spans an extremal ray", "extremal", linalg.primitive(coords), is_extremal(coords, cone))
    # m*H^(n-3) with m = -<test, [S2]> moves [S2] onto the hyperplane test = 0
    m = -linalg.dot(functional, coords)
    inner = tuple(c + m * o for c, o in zip(coords, others[0]))
    out.holds("[S2] + m*H^(n-3) is not extremal", "not extremal", inner, not is_extremal(inner, cone))
    out.holds(
        "test class does not separate [S2] + m*H^(n-3)",
        "no separation",
        linalg.dot(functional, inner),
        not isolates(functional, inner, others),
    )


def _cone_a_generators(n: int) -> List[str]:
    return [
        f"{n - 1}*{_H(n - 2)} - {_j(n - 3)} - {2 * n}*{_j(n - 4, 1)}",
        f"{_H(n - 2)} - 3*{_j(n - 4, 1)}",
        _j(n - 3),
        _j(n - 4, 1),
    ]


def _cone_b_functionals(n: int) -> List[Tuple[Fraction, ...]]:
    # coordinates x of x0*H^(n-2) + x1*j(h2^(n-3)) + x2*j(h2^(n-4)*h1),
    # with a = -x1/x0 and b = -x2/x0
    return [
        (Fraction(0), Fraction(-1), Fraction(0)),  # a >= 0
        (Fraction(0), Fraction(0), Fraction(-1)),  # b >= 0
        (Fraction(1, n - 1), Fraction(1), Fraction(0)),  # a <= 1/(n-1)
        (Fraction(6), Fraction(3 * n - 8), Fraction(2)),  # 2b + (3n-8)a <= 6
    ]


def _ab_claims(p: Params) -> List[Claim]:
    n = p["n"]
    return [Claim(f"xr:{n}", n - 2, tuple(_cone_a_generators(n)), ())]


def _eff2_ab(p: Params, out: _Collector) -> None:
    n = p["n"]
    X = make_space(Family.RNC, r=n)
    A = claim_cone(_ab_claims(p)[0])
    B = PolyCone.from_inequalities(3, _cone_b_functionals(n))
    generators = [to_num(parse_class(g, X), X, n - 2) for g in _cone_a_generators(n)]
    pushed = psi_maps(n).pushforward(FormalSum.monomial(SECANT_GENERATORS, h=1))
    out.equal("first generator of A is psi_*(h)", generators[0], to_num(pushed, X, n - 2))
    out.equal(
        "facets of A",
        tuple(sorted([(1, 0, 0), (3, n - 3, 1), (1, n - 1, 0), (3, 0, 1)])),
        A.facets,
    )
    expected_b = sorted(
        linalg.primitive(v)
        for v in [(1, 0, 0), (1, 0, -3), (n - 1, -1, 0), (2 * n - 2, -2, -(3 * n + 2))]
    )
    out.equal("rays of B", tuple(expected_b), B.rays)
    out.holds("B is included in A", "true", includes(A, B), includes(A, B))
    out.holds("A is not included in B", "false", includes(B, A), not includes(B, A))
    for text, coords in zip(_cone_a_generators(n), generators):
        out.holds(f"{text} is extremal in A", "true", is_extremal(coords, A), is_extremal(coords, A))

    # B rays times 3H - 2E land in Eff_1 = <J, H^(n-1) - 2J>
    curve_cone = PolyCone.from_rays(2, [(0, 1), (1, -2)])
    multiplier = parse_class("3*H - 2*E", X)
    for ray in B.rays:
        gamma = from_num(ray, X, n - 2)
        image = to_num(product(gamma, multiplier, X), X, n - 1)
        x0, x1, x2 = ray
        out.equal(f"{ray} * (3H - 2E)", (3 * x0 + 2 * n * x1, 2 * x2 - (n + 8) * x1), image)
        inside = contains(curve_cone, image)
        out.holds(f"{ray} * (3H - 2E) lies in Eff_1", "true", inside, inside)


# -- other families ----------------------------------------------------------


def _w_claims(p: Params) -> List[Claim]:
    r, k = p["r"], p["k"]
    c = r - k
    generators = [f"(H - E)^{k}", _j(k - 1)]
    if k >= 2:
        generators.append(_j(k - 2, 1))
    certificates = [_H(c), f"(H - E)^{c}"]
    if c >= 2:
        certificates.append(f"{_H(c)} - {_j(c - 2, 1)}")
    return [Claim(f"w:{r}", k, tuple(generators), tuple(certificates))]


def _eff_w(p: Params, out: _Collector) -> None:
    _verify_claims(_w_claims(p), out)


def _sign_checks(S: BlowupPresentation, out: _Collector) -> None:
    E, H = S.E(), S.H()
    out.equal("deg(E^2*H) = -d", Fraction(-S.d), degree(product(power(E, 2, S), H, S), S))
    out.equal("deg(E^3) = -2a", Fraction(-2 * S.twist), degree(power(E, 3, S), S))


def _y_divisor_claims(p: Params) -> List[Claim]:
    return [Claim(f"y:{p['d']}", 1, ("E", "2*H - E"), ("H^2", "H^2 - 2*j(h1)"))]


def _eff_y_div(p: Params, out: _Collector) -> None:
    _sign_checks(make_space(Family.QUADRIC_CURVE, d=p["d"]), out)
    _verify_claims(_y_divisor_claims(p), out)


def _y_curve_claims(p: Params) -> List[Claim]:
    d = p["d"]
    return [Claim(f"y:{d}", 2, ("j(h1)", f"H^2 - {d - 1}*j(h1)"), ("H", f"{d - 1}*H - E"))]


def _eff1_y(p: Params, out: _Collector) -> None:
    d = p["d"]
    out.equal("h0(O_P3(d-1))", comb(d + 2, 3), h0_p3(d - 1))
    out.equal("h0(O_C((d-1)H))", d * d - d + 1, h0_curve(d, d - 1))
    surplus = h0_p3(d - 1) - h0_curve(d, d - 1) - h0_p3(d - 3)
    out.equal("surfaces of degree d-1 through C not containing the quadric", d - 1, surplus)
    _verify_claims(_y_curve_claims(p), out)


def _conic_claims(p: Params) -> List[Claim]:
    return [
        Claim("p3:2,3", 1, ("E", "H - E"), ("H^2", "H^2 - j(h1)"), title="Eff^1"),
        Claim("p3:2,3", 2, ("j(h1)", "H^2 - 2*j(h1)"), ("H", "2*H - E"), title="Eff_1"),
    ]


def _eff_conic(p: Params, out: _Collector) -> None:
    S = make_space(Family.P3_CURVE, d=2, twist=3)
    # only pairings that do not involve xi^2 are independent of the twist
    out.equal("<j(h1), E>", Fraction(-1), pairing(S.j_monomial(h1=1), S.E(), S))
    out.equal("<H^2, E>", Fraction(0), pairing(S.H(2), S.E(), S))
    _verify_claims(_conic_claims(p), out)


# second generator and its certificate for rational curves of degree d in P^3
_LOWDEG_Q = {
    1: ("H - E", "H^2 - j(h1)"),
    2: ("H - E", "H^2 - j(h1)"),
    3: ("2*H - E", "H^2 - 2*j(h1)"),
    4: ("2*H - E", "H^2 - 2*j(h1)"),
    5: ("8*H - 3*E", "3*H^2 - 8*j(h1)"),
    6: ("3*H - E", "H^2 - 3*j(h1)"),
}

_TRISECANT_DEGREE = {3: 0, 4: 2, 5: 8, 6: 20}
_NODES = {3: 0, 4: 1, 5: 3, 6: 6}


def _q_claims(p: Params) -> List[Claim]:
    d = p["d"]
    second, certificate = _LOWDEG_Q[d]
    return [Claim(f"p3:{d},{2 * d - 1}", 1, ("E", second), ("H^2", certificate))]


def _lowdeg_q(p: Params, out: _Collector) -> None:
    d = p["d"]
    _verify_claims(_q_claims(p), out)
    if d < 3:
        return
    out.equal("berzolari(d, 0)", _TRISECANT_DEGREE[d], berzolari(d, 0))
    out.equal("projection_nodes(d)", _NODES[d], projection_nodes(d))
    if d < 5:
        return
    S = make_space(Family.P3_CURVE, d=d, twist=2 * d - 1)
    trisecant = parse_class(f"{berzolari(d, 0)}*H - {projection_nodes(d)}*E", S)
    ratio = Fraction(projection_nodes(d), berzolari(d, 0))
    cone = claim_cone(_q_claims(p)[0])
    coords = to_num(trisecant, S, 1)
    if d == 5:
        out.holds("nodes/degree > 1/3", "> 1/3", ratio, ratio > Fraction(1, 3))
        out.equal("trisecant class spans the second ray", to_num(parse_class(_LOWDEG_Q[d][0], S), S, 1), coords)
    else:
        out.holds("nodes/degree < 1/3", "< 1/3", ratio, ratio < Fraction(1, 3))
        inside = contains(cone, coords)
        extremal = is_extremal(coords, cone)
        out.holds("trisecant class lies inside the cone", "true", inside, inside)
        out.holds("trisecant class is not extremal", "false", extremal, not extremal)


def _twisted_cubic(p: Params, out: _Collector) -> None:
    spaces = [
        make_space(Family.RNC, r=3),
        make_space(Family.QUADRIC_CURVE, d=3),
        make_space(Family.P3_CURVE, d=3, twist=5),
    ]
    reference = spaces[0]
    generators = [g for k in range(4) for g in standard_generators(reference, k)]
    for other in spaces[1:]:
        mismatches = [
            f"{x} * {y}"
            for x in generators
            for y in generators
            if product(x, y, reference) != product(x, y, other)
        ]
        out.holds(
            f"{reference.label} and {other.label} agree on generator products",
            "no mismatches",
            mismatches or "none",
            not mismatches,
        )
    for S in spaces:
        _sign_checks(S, out)
    cones = {
        "eff1_odd": _secant_divisor_claims(1, 3)[0],
        "effY_div": _y_divisor_claims({"d": 3})[0],
        "lowdeg_Q": _q_claims({"d": 3})[0],
    }
    rays = {key: claim_cone(claim).rays for key, claim in cones.items()}
    out.holds("Eff^1 agrees across the three records", "equal rays", rays, len(set(rays.values())) == 1)


def _eff_z(p: Params, out: _Collector) -> None:
    d, e = p["d"], p["e"]
    limit = z_slope_limit(d, e)
    out.equal("z_slope_limit = e/d", Fraction(e, d), limit)
    out.equal("limit >= d iff e >= d^2", e >= d * d, limit >= d)
    m0 = e // d + 1
    bounds = [z_slope(d, e, m) for m in range(m0, Z_SLOPE_MAX_M + 1)]
    steps = list(zip(bounds, bounds[1:]))
    if e >= d:
        out.holds("finite-m bound <= limit", "<= e/d", max(bounds), all(b <= limit for b in bounds))
        out.holds(
            "finite-m bound nondecreasing in m",
            "nondecreasing",
            f"m = {m0}..{Z_SLOPE_MAX_M}",
            all(a <= b for a, b in steps),
        )
    else:
        out.note("For e < d the finite-m bound decreases to e/d from above")
        out.holds("finite-m bound >= limit", ">= e/d", min(bounds), all(b >= limit for b in bounds))
        out.holds(
            "finite-m bound nonincreasing in m",
            "nonincreasing",
            f"m = {m0}..{Z_SLOPE_MAX_M}",
            all(a >= b for a, b in steps),
        )


# -- the catalog -------------------------------------------------------------

_N_FROM_3 = ParamRange("n", 3, cap=_by_max_r)
_N_FROM_5 = ParamRange("n", 5, cap=_by_max_r)

_NEF_ASSUMPTION = "the certificate classes are nef"
_EFFECTIVE_ASSUMPTION = "the generator classes are effective"

CATALOG: Tuple[TheoremRecord, ...] = (
    TheoremRecord(
        "chow_PE",
        "SECANT",
        "Chow ring of P(E_{n,2}): zeta^2 - (n-1)*h*zeta + C(n,2)*h^2 = 0 from the truncated Chern series",
        (_N_FROM_3,),
        _chow_pe,
    ),
    TheoremRecord(
        "eff1_PE",
        "SECANT",
        "Eff^1(P(E_{n,2})) = <h, D> with D = 2*zeta - (n-2)*h",
        (_N_FROM_3,),
        _eff1_pe,
        claims=_pe_claims,
        generator_text=("h", "2*zeta - (n-2)*h"),
        certificate_text=("h^2", "zeta^2"),
        assumptions=(_NEF_ASSUMPTION, "D is the class of the divisor of secants meeting C twice"),
    ),
    TheoremRecord(
        "secant_degree",
        "SECANT",
        "deg Sec_2(C) = C(n-1,2) and deg Sec_k(C) = k+1 in P^(2k)",
        (ParamRange("n", 4, cap=_by_max_r),),
        _secant_degree,
        assumptions=("phi: P(E_{n,k}) -> Sec_k(C) is birational",),
    ),
    TheoremRecord(
        "cor_relation",
        "RNC",
        "j(h2^(r-2)) - r*H^(r-1) + (r+2)*j(h2^(r-3)*h1) is numerically zero on X_r",
        (ParamRange("r", 4, cap=_by_max_r),),
        _cor_relation,
        notes=("H*j(alpha) = j(d*h1*alpha) with d = r; the coefficient r+1 contradicts this relation",),
    ),
    TheoremRecord(
        "eff1_even",
        "RNC",
        "Eff^1(X_2n) = <E, (n+1)*H - n*E>",
        (ParamRange("n", 2, cap=lambda lim: lim.max_r // 2, label="n >= 2 (r = 2n)"),),
        _eff1_even,
        claims=lambda p: _secant_divisor_claims(*_even_space(p)),
        generator_text=("E", "(n+1)*H - n*E"),
        certificate_text=("H^(r-1)", "n*H^(r-1) - (n+1)*j(h2^(r-3)*h1)"),
        notes=("Only the class of Sec_n(C) enters; its degree n+1 is checked separately",),
        assumptions=(_NEF_ASSUMPTION, "[Sec_n(C)] = (n+1)*H - n*E"),
        open_questions=(
            "The dual class lives in codimension 2n-1, so its exponents are H^(2n-1) and h1*h2^(2n-3)",
        ),
    ),
    TheoremRecord(
        "eff1_odd",
        "RNC",
        "Eff^1(X_(2n+1)) = <E, (n+1)*H - n*E>",
        (ParamRange("n", 1, cap=lambda lim: (lim.max_r - 1) // 2, label="n >= 1 (r = 2n+1)"),),
        _eff1_odd,
        claims=lambda p: _secant_divisor_claims(*_odd_space(p)),
        generator_text=("E", "(n+1)*H - n*E"),
        certificate_text=("H^(r-1)", "n*H^(r-1) - (n+1)*j(h2^(r-3)*h1)"),
        assumptions=(_NEF_ASSUMPTION, "the secant divisor has class (n+1)*H - n*E"),
    ),
    TheoremRecord(
        "eff1_curves",
        "RNC",
        "Eff_1(X_r) = <j(h2^(r-3)*h1), H^(r-1) - 2*j(h2^(r-3)*h1)>",
        (ParamRange("r", 3, cap=_by_max_r),),
        _eff1_curves,
        claims=_curves_claims,
        generator_text=("j(h2^(r-3)*h1)", "H^(r-1) - 2*j(h2^(r-3)*h1)"),
        certificate_text=("H", "2*H - E"),
        assumptions=(_NEF_ASSUMPTION, "secant lines of C have class H^(r-1) - 2*j(h2^(r-3)*h1)"),
        open_questions=(
            "r = 2 has no exceptional P^(r-2) factor of this form, so the range starts at 3",
            "The line class is H^(r-1), the only power of H of curve codimension",
        ),
    ),
    TheoremRecord(
        "psi_maps",
        "RNC",
        "psi^* and psi_* between P(E_{n,2}) and X_n in closed form",
        (_N_FROM_5,),
        _psi_maps,
        assumptions=("S_2 is isomorphic to P(E_{n,2})", "psi^*E is the incidence divisor D"),
    ),
    TheoremRecord(
        "nef_H2",
        "RNC",
        "H^2 - (n-1)*j(h1) pairs as x0 + (n-1)*x1 on Num^(n-2)(X_n)",
        (_N_FROM_5,),
        _nef_h2,
        certificate_text=("H^2 - (n-1)*j(h1)",),
        assumptions=("H^2 - (n-1)*j(h1) is nef",),
    ),
    TheoremRecord(
        "S2_negative",
        "RNC",
        "<H^3 - (n-2)*j(h1*h2), [S_2]> < 0, so [S_2] spans an extremal ray",
        (_N_FROM_5,),
        _s2_negative,
        assumptions=("H^3 - (n-2)*j(h1*h2) is nef away from S_2",),
    ),
    TheoremRecord(
        "eff2_AB",
        "RNC",
        "B = {0 <= a, b; a <= 1/(n-1); 2b + (3n-8)a <= 6} lies in A, whose four generators are extremal",
        (_N_FROM_5,),
        _eff2_ab,
        claims=_ab_claims,
        generator_text=(
            "(n-1)*H^(n-2) - j(h2^(n-3)) - 2n*j(h2^(n-4)*h1)",
            "H^(n-2) - 3*j(h2^(n-4)*h1)",
            "j(h2^(n-3))",
            "j(h2^(n-4)*h1)",
        ),
        assumptions=(_EFFECTIVE_ASSUMPTION, "3*H - 2*E restricted to B-classes detects effectivity"),
        open_questions=(
            "The range starts at n = 5 so that every monomial is defined",
            "The second generator term is j(h2^(n-3)); a negative exponent has no meaning",
            "The last generator monomial is h2^(n-4)*h1, the only one of codimension n-2",
        ),
    ),
    TheoremRecord(
        "effW_k",
        "LINE",
        "Eff^k(W_r) = <(H-E)^k, j(h2^(k-1)), j(h2^(k-2)*h1)>",
        (
            ParamRange("r", 3, high=8, cap=_by_max_r, label="r = 3..8"),
            ParamRange("k", 1, upper=lambda p: p["r"] - 1, label="k = 1..r-1"),
        ),
        _eff_w,
        claims=_w_claims,
        generator_text=("(H-E)^k", "j(h2^(k-1))", "j(h2^(k-2)*h1)"),
        certificate_text=("H^(r-k)", "(H-E)^(r-k)", "H^(r-k) - j(h2^(r-k-2)*h1)"),
        notes=("Out-of-range and numerically zero generators and certificates are dropped",),
        assumptions=(_NEF_ASSUMPTION, _EFFECTIVE_ASSUMPTION),
    ),
    TheoremRecord(
        "effY_div",
        "QUADRIC_CURVE",
        "Eff^1(Y_d) = <E, 2*H - E>",
        (ParamRange("d", 3, high=8, label="d = 3..8"),),
        _eff_y_div,
        claims=_y_divisor_claims,
        generator_text=("E", "2*H - E"),
        certificate_text=("H^2", "H^2 - 2*j(h1)"),
        notes=("xi = h2 - (2d-1)*h1, so that c_1(N) = -xi",),
        assumptions=(_NEF_ASSUMPTION, "the quadric containing C is smooth"),
    ),
    TheoremRecord(
        "eff1_Y",
        "QUADRIC_CURVE",
        "Eff_1(Y_d) = <j(h1), H^2 - (d-1)*j(h1)>",
        (ParamRange("d", 3, high=8, label="d = 3..8"),),
        _eff1_y,
        claims=_y_curve_claims,
        generator_text=("j(h1)", "H^2 - (d-1)*j(h1)"),
        certificate_text=("H", "(d-1)*H - E"),
        assumptions=(_NEF_ASSUMPTION, "(d-1)-secant lines of C exist"),
    ),
    TheoremRecord(
        "eff_conic",
        "P3_CURVE",
        "Eff^1 = <E, H - E> and Eff_1 = <j(h1), H^2 - 2*j(h1)> for a conic",
        (),
        _eff_conic,
        claims=_conic_claims,
        generator_text=("E", "H - E", "j(h1)", "H^2 - 2*j(h1)"),
        certificate_text=("H^2", "H^2 - j(h1)", "H", "2*H - E"),
        notes=(
            "The normal bundle of a conic is not of the form O(a)^2; only twist-independent pairings are asserted",
        ),
        assumptions=(_NEF_ASSUMPTION,),
    ),
    TheoremRecord(
        "lowdeg_Q",
        "P3_CURVE",
        "Eff^1 of P^3 blown up along a rational curve of degree d <= 6",
        (ParamRange("d", 1, high=6, label="d = 1..6"),),
        _lowdeg_q,
        claims=_q_claims,
        generator_text=("E", "H - E | 2*H - E | 8*H - 3*E | 3*H - E"),
        certificate_text=("H^2", "H^2 - j(h1) | H^2 - 2*j(h1) | 3*H^2 - 8*j(h1) | H^2 - 3*j(h1)"),
        notes=("The trisecant class for d = 6 is 20*H - 6*E",),
        assumptions=(_NEF_ASSUMPTION, "the curve is general, so N = O(2d-1)^2 numerically"),
    ),
    TheoremRecord(
        "twisted_cubic",
        "RNC",
        "X_3, Y_3 and Q_3 are the same blow-up",
        (),
        _twisted_cubic,
    ),
    TheoremRecord(
        "effZ",
        "SURFACE",
        "Slope bound a >= (e/d)*b for curves of degree e on a surface of degree d",
        (
            ParamRange("d", 2, high=6, label="d = 2..6"),
            ParamRange("e", 1, cap=lambda lim: lim.max_e, label="e >= 1"),
        ),
        _eff_z,
        notes=("The finite-m bound approaches e/d from below only when e >= d",),
        assumptions=("the worst-case genus 2p_a - 2 = e(e-3)",),
    ),
)

_BY_ID: Dict[str, TheoremRecord] = {record.id: record for record in CATALOG}


def list_cases() -> List[TheoremRecord]:
    return list(CATALOG)


def get_record(case_id: str) -> TheoremRecord:
    """Look up a record by id.

    Raises:
        UnknownCaseError: If no record has this id
    """
    try:
        return _BY_ID[case_id]
    except KeyError:
        raise UnknownCaseError(f"Unknown case {case_id!r}; known cases: {', '.join(_BY_ID)}") from None


def check_params(record: TheoremRecord, params: Params) -> None:
    """Raise DomainError unless params match the record's declared range."""
    names = [r.name for r in record.ranges]
    extra = sorted(set(params) - set(names))
    if extra:
        raise DomainError(f"{record.id} does not take parameter(s) {', '.join(extra)}")
    for param_range in record.ranges:
        if param_range.name not in params:
            raise DomainError(f"{record.id} requires parameter {param_range.name}")
        value = params[param_range.name]
        high = param_range.declared_high(params)
        if value < param_range.low or (high is not None and value > high):
            raise DomainError(
                f"{record.id}: {param_range.name}={value} is outside {param_range.describe()}"
            )


def instances(record: TheoremRecord, limits: Limits = Limits()) -> List[Params]:
    """Every parameter instance of the record's range, capped by limits."""
    out: List[Params] = [{}]
    for param_range in record.ranges:
        expanded = []
        for params in out:
            low, high = param_range.sweep_bounds(params, limits)
            expanded.extend({**params, param_range.name: v} for v in range(low, high + 1))
        out = expanded
    return out


def record_claims(case_id: str, params: Params) -> List[Claim]:
    """Instantiated cone claims of a record.

    Raises:
        UnknownCaseError: If no record has this id
        DomainError: If params are out of range or the record makes no cone claim
    """
    record = get_record(case_id)
    check_params(record, params)
    if record.claims is None:
        raise DomainError(f"{case_id} makes no cone claim")
    return record.claims(params)


def verify_case(case_id: str, params: Optional[Params] = None) -> VerificationReport:
    """Run a record's checks on one parameter instance.

    Raises:
        UnknownCaseError: If no record has this id
        DomainError: If params are outside the record's range
    """
    record = get_record(case_id)
    params = dict(params or {})
    check_params(record, params)
    out = _Collector()
    logger.info(f"Verifying {case_id} with {params}")
    record.procedure(params, out)
    report = VerificationReport(
        case_id,
        params,
        tuple(out.checks),
        tuple(record.notes) + tuple(record.open_questions) + tuple(out.notes),
        tuple(record.assumptions),
    )
    if not report.passed:
        logger.warning(f"{case_id} {params}: {len(report.failures())} check(s) failed")
    return report


def to_json() -> List[Dict[str, Any]]:
    return [record.to_dict() for record in CATALOG]
