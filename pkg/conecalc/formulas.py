"""
Closed-form numerics for space curves and surfaces.

Trisecant degree, node counts of plane projections, section counts on P^3
and on rational curves, and the slope bounds for curves on a surface.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from conecalc.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurveNumerics:
    """Degree d and genus g of a curve, plus the integers m, e some formulas need."""

    d: int
    g: int = 0
    m: Optional[int] = None
    e: Optional[int] = None

    def __post_init__(self) -> None:
        if self.d < 1:
            raise DomainError(f"Curve degree must satisfy d >= 1, got d={self.d}")
        if self.g < 0:
            raise DomainError(f"Genus must satisfy g >= 0, got g={self.g}")

    def berzolari(self) -> int:
        return berzolari(self.d, self.g)

    def z_slope(self) -> Fraction:
        if self.m is None or self.e is None:
            raise DomainError("z_slope needs both m and e")
        return z_slope(self.d, self.e, self.m)


def berzolari(d: int, g: int) -> int:
    """Degree (d-1)(d-2)(d-3)/3 - (d-2)g of the trisecant surface of a space curve.

    Raises:
        DomainError: If d < 1, g < 0, or the value is not an integer
    """
    if d < 1 or g < 0:
        raise DomainError(f"berzolari requires d >= 1 and g >= 0, got d={d}, g={g}")
    value = Fraction((d - 1) * (d - 2) * (d - 3), 3) - (d - 2) * g
    if value.denominator != 1:
        raise DomainError(f"berzolari({d}, {g}) = {value} is not an integer")
    return int(value)


def projection_nodes(d: int) -> int:
    """Nodes C(d-2, 2) of the projection of a rational degree-d curve from a point on it.

    Raises:
        DomainError: If d < 3
    """
    if d < 3:
        raise DomainError(f"projection_nodes requires d >= 3, got d={d}")
    return comb(d - 2, 2)


def h0_p3(k: int) -> int:
    """Dimension of H^0(O_P3(k)).

    Raises:
        DomainError: If k < 0
    """
    if k < 0:
        raise DomainError(f"h0_p3 requires k >= 0, got k={k}")
    return comb(k + 3, 3)


def h0_curve(d: int, k: int) -> int:
    """Dimension of H^0(O_C(kH)) on a rational curve of degree d.

    Raises:
        DomainError: If d < 1 or k < 0
    """
    if d < 1 or k < 0:
        raise DomainError(f"h0_curve requires d >= 1 and k >= 0, got d={d}, k={k}")
    return d * k + 1


def z_slope(d: int, e: int, m: int) -> Fraction:
    """Lower bound e(m+d-1-e)/(md-e) on a/b at finite m.

    The bound comes from the two intersection inequalities on the surface
    with the worst-case arithmetic genus 2p_a - 2 = e(e-3).

    Raises:
        DomainError: If d < 1, e < 1, or md - e <= 0
    """
    if d < 1 or e < 1:
        raise DomainError(f"z_slope requires d >= 1 and e >= 1, got d={d}, e={e}")
    if m * d - e <= 0:
        raise DomainError(f"z_slope requires md - e > 0, got m={m}, d={d}, e={e}")
    return Fraction(e * (m + d - 1 - e), m * d - e)


def z_slope_limit(d: int, e: int) -> Fraction:
    """Limit e/d of z_slope as m grows.

    Raises:
        DomainError: If d < 1 or e < 1
    """
    if d < 1 or e < 1:
        raise DomainError(f"z_slope_limit requires d >= 1 and e >= 1, got d={d}, e={e}")
    return Fraction(e, d)
