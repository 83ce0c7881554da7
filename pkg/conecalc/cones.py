"""
Exact rational polyhedral cones of small rank.

Cones are stored by their generating rays (primitive integer vectors).
Facets are obtained with the incremental double description method and
cached on first use. Everything is exact: vectors are integers, and
rank and inverse computations go through sympy.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import List, Sequence, Tuple

from conecalc import linalg
from conecalc.errors import (
    ConeError,
    NonPointedConeError,
    NotFullDimensionalError,
    SingularPairingError,
)
from conecalc.linalg import Number

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]

MIN_RANK = 2
MAX_RANK = 4


def _canonical(vector: Sequence[Number]) -> Vector:
    ray = linalg.primitive(vector)
    if not any(ray):
        raise ConeError("Zero vector cannot generate a ray")
    return ray


def _check_rank(rank: int) -> None:
    if not MIN_RANK <= rank <= MAX_RANK:
        raise ConeError(f"Cone rank must satisfy {MIN_RANK} <= m <= {MAX_RANK}, got {rank}")


def _check_length(vector: Sequence[Number], rank: int) -> None:
    if len(vector) != rank:
        raise ConeError(f"Vector {tuple(vector)} has length {len(vector)}, expected {rank}")


def _adjacent(p: Vector, q: Vector, rows: Sequence[Vector], rank: int) -> bool:
    common = [a for a in rows if linalg.dot(a, p) == 0 and linalg.dot(a, q) == 0]
    return linalg.rank(common) == rank - 2


def _double_description(rank: int, inequalities: Sequence[Vector]) -> List[Vector]:
    """Extreme rays of {x : a.x >= 0 for every a in inequalities}.

    Raises:
        NonPointedConeError: If the inequalities do not have full rank
    """
    rows = [_canonical(a) for a in inequalities if any(a)]
    if linalg.rank(rows) < rank:
        raise NonPointedConeError(
            f"{len(rows)} functional(s) of rank {linalg.rank(rows)} cut out a cone containing a line"
        )
    start = linalg.greedy_independent(rows, range(len(rows)))
    processed = [rows[i] for i in start]
    inverse = linalg.inverse(processed)
    # columns of the inverse span the simplicial cone of the first `rank` rows
    rays = [_canonical([inverse[i][j] for i in range(rank)]) for j in range(rank)]

    for index, a in enumerate(rows):
        if index in start:
            continue
        values = {ray: linalg.dot(a, ray) for ray in rays}
        positive = [ray for ray in rays if values[ray] > 0]
        negative = [ray for ray in rays if values[ray] < 0]
        kept = [ray for ray in rays if values[ray] >= 0]
        for p in positive:
            for q in negative:
                if _adjacent(p, q, processed, rank):
                    combined = [values[p] * y - values[q] * x for x, y in zip(p, q)]
                    kept.append(_canonical(combined))
        processed.append(a)
        rays = sorted(set(kept))
        logger.debug(f"After {len(processed)} functional(s): {len(rays)} ray(s)")
    return sorted(set(rays))


def facets_from_rays(rank: int, rays: Sequence[Sequence[Number]]) -> List[Vector]:
    """Minimal integer functionals cutting out the cone spanned by rays.

    Args:
        rank: Ambient rank m
        rays: Generators, not necessarily extreme

    Returns:
        Sorted primitive functionals f with f . x >= 0 on the cone

    Raises:
        ConeError: If rays is empty or a ray has the wrong length
        NotFullDimensionalError: If the rays do not span the ambient space
        NonPointedConeError: If the cone contains a line
    """
    _check_rank(rank)
    if not rays:
        raise ConeError("A cone needs at least one ray")
    for ray in rays:
        _check_length(ray, rank)
    generators = [_canonical(ray) for ray in rays]
    spanned = linalg.rank(generators)
    if spanned < rank:
        raise NotFullDimensionalError(f"Rays span rank {spanned}, ambient rank is {rank}")
    facets = _double_description(rank, generators)
    if linalg.rank(facets) < rank:
        raise NonPointedConeError(f"Cone spanned by {generators} contains a line")
    return facets


def rays_from_facets(rank: int, functionals: Sequence[Sequence[Number]]) -> List[Vector]:
    """Extreme rays of the cone {x : f . x >= 0}; rational functionals are cleared first.

    Raises:
        ConeError: If a functional has the wrong length
        NonPointedConeError: If the functionals do not have full rank
    """
    _check_rank(rank)
    for f in functionals:
        _check_length(f, rank)
    return _double_description(rank, [linalg.primitive(f) for f in functionals])


@dataclass(frozen=True)
class PolyCone:
    """Cone generated by primitive integer rays in Q^rank.

    Rays are scaled to coprime integers but keep their sign: they are not
    normalized to be lexicographically positive, since v and -v span
    different rays. The ray tuple is sorted.
    """

    rank: int
    rays: Tuple[Vector, ...]

    def __post_init__(self) -> None:
        _check_rank(self.rank)
        if not self.rays:
            raise ConeError("A cone needs at least one ray")
        for ray in self.rays:
            _check_length(ray, self.rank)
        object.__setattr__(self, "rays", tuple(sorted({_canonical(r) for r in self.rays})))

    @classmethod
    def from_rays(cls, rank: int, rays: Sequence[Sequence[Number]]) -> "PolyCone":
        return cls(rank, tuple(tuple(r) for r in rays))  # type: ignore[arg-type]

    @classmethod
    def from_inequalities(cls, rank: int, functionals: Sequence[Sequence[Number]]) -> "PolyCone":
        """Cone cut out by f . x >= 0, for integer or rational f.

        Raises:
            NotFullDimensionalError: If the solution set is not full-dimensional
        """
        rays = rays_from_facets(rank, functionals)
        if linalg.rank(rays) < rank:
            raise NotFullDimensionalError(
                f"Functionals {[tuple(f) for f in functionals]} cut out a cone of rank {linalg.rank(rays)}"
            )
        return cls(rank, tuple(rays))

    @cached_property
    def facets(self) -> Tuple[Vector, ...]:
        return tuple(facets_from_rays(self.rank, self.rays))

    def extreme_rays(self) -> List[Vector]:
        return rays_from_facets(self.rank, self.facets)

    def render(self) -> str:
        return "<" + ", ".join(str(r) for r in self.rays) + ">"


def contains(C: PolyCone, v: Sequence[Number]) -> bool:
    """True iff every facet functional of C is nonnegative on v.

    Raises:
        ConeError: On rank mismatch
    """
    _check_length(v, C.rank)
    return all(linalg.dot(f, v) >= 0 for f in C.facets)


def includes(outer: PolyCone, inner: PolyCone) -> bool:
    """True iff every ray of inner lies in outer.

    Raises:
        ConeError: On rank mismatch
    """
    if outer.rank != inner.rank:
        raise ConeError(f"Cannot compare cones of rank {outer.rank} and {inner.rank}")
    return all(contains(outer, ray) for ray in inner.rays)


def dual_cone(C: PolyCone, pairing: Sequence[Sequence[Number]]) -> PolyCone:
    """{w : <r, w> >= 0 for all rays r}, where <x, w> = x^T M w.

    The result is expressed in the column basis of the pairing matrix M.
    Taking the dual again needs the transpose of M.

    Raises:
        ConeError: If M is not square of the cone's rank
        SingularPairingError: If M is singular
    """
    if len(pairing) != C.rank or any(len(row) != C.rank for row in pairing):
        raise ConeError(f"Pairing matrix must be {C.rank}x{C.rank}")
    if linalg.det(pairing) == 0:
        raise SingularPairingError(f"Pairing matrix {[list(row) for row in pairing]} is singular")
    functionals = [
        [sum(ray[i] * Fraction(pairing[i][j]) for i in range(C.rank)) for j in range(C.rank)]
        for ray in C.rays
    ]
    return PolyCone.from_inequalities(C.rank, functionals)


def is_extremal(ray: Sequence[Number], C: PolyCone) -> bool:
    """True iff the facets of C vanishing on ray have rank m - 1.

    Raises:
        ConeError: If ray has the wrong length or does not lie in C
    """
    _check_length(ray, C.rank)
    if not contains(C, ray):
        raise ConeError(f"Ray {tuple(ray)} does not lie in the cone {C.render()}")
    if not any(ray):
        return False
    vanishing = [f for f in C.facets if linalg.dot(f, ray) == 0]
    return linalg.rank(vanishing) == C.rank - 1


def isolates(functional: Sequence[Number], ray: Sequence[Number], others: Sequence[Sequence[Number]]) -> bool:
    """True iff functional is negative on ray and nonnegative on every other generator.

    Then ray spans an extremal ray of the cone generated by ray and others,
    and lies outside the cone generated by others alone.

    Raises:
        ConeError: If the vectors do not all have the functional's length
    """
    rank = len(functional)
    _check_rank(rank)
    _check_length(ray, rank)
    for other in others:
        _check_length(other, rank)
    return linalg.dot(functional, ray) < 0 and all(linalg.dot(functional, v) >= 0 for v in others)
