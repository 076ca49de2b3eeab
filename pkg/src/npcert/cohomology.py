"""Exact line bundle cohomology on the bases and on cyclic covers.

Hirzebruch surfaces are handled by pushing forward to P^1: for a >= 0,
pi_* O(aC0 + bf) is the sum of O(b - ke) for k = 0..a and the higher direct
image vanishes.  h^2 always comes from Serre duality, and for a <= -2 the
middle dimension is recovered from Riemann-Roch.  Cover cohomology is the sum
over the pushforward summands.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Tuple, Union

from .covers import CyclicCover, PullbackClass, pullback_intersect, pushforward_summands
from .lattice import BaseClass, BaseSurface, ProjectivePlane, canonical_class, intersect, zero
from .positivity import is_nef_pullback


@dataclass(frozen=True)
class CohomologyDims:
    h0: int
    h1: int
    h2: int

    def __post_init__(self):
        if min(self.h0, self.h1, self.h2) < 0:
            raise ValueError(f"negative cohomology dimension: {self}")

    @property
    def chi(self) -> int:
        return self.h0 - self.h1 + self.h2

    def __add__(self, other: "CohomologyDims") -> "CohomologyDims":
        return CohomologyDims(self.h0 + other.h0, self.h1 + other.h1, self.h2 + other.h2)

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.h0, self.h1, self.h2)


def h_line(n: int) -> Tuple[int, int]:
    """(h^0, h^1) of O(n) on the projective line."""
    return max(0, n + 1), max(0, -n - 1)


def _h0_base(surface: BaseSurface, d: BaseClass) -> int:
    if isinstance(surface, ProjectivePlane):
        deg = d.coords[0]
        return comb(deg + 2, 2) if deg >= 0 else 0
    a, b = d.coords
    if a < 0:
        return 0
    return sum(h_line(b - k * surface.e)[0] for k in range(a + 1))


@lru_cache(maxsize=1 << 16)
def cohomology_base(surface: BaseSurface, d: BaseClass) -> CohomologyDims:
    if d.surface != surface:
        raise ValueError(f"class {d} does not live on {surface}")
    dual = canonical_class(surface) - d
    h2 = _h0_base(surface, dual)
    if isinstance(surface, ProjectivePlane):
        return CohomologyDims(_h0_base(surface, d), 0, h2)
    a, b = d.coords
    if a >= 0:
        h0 = h1 = 0
        for k in range(a + 1):
            x0, x1 = h_line(b - k * surface.e)
            h0 += x0
            h1 += x1
        return CohomologyDims(h0, h1, h2)
    if a == -1:
        return CohomologyDims(0, 0, 0)
    # a <= -2: no sections, h^1 from Riemann-Roch
    return CohomologyDims(0, h2 - euler_char(surface, d), h2)


def cohomology_cover(d: PullbackClass) -> CohomologyDims:
    total = CohomologyDims(0, 0, 0)
    base = d.cover.base
    for summand in pushforward_summands(d):
        total = total + cohomology_base(base, summand)
    return total


def _rr_half(value: int) -> int:
    if value % 2:
        raise ArithmeticError(f"Riemann-Roch produced a half-integer ({Fraction(value, 2)})")
    return value // 2


def euler_char(where: Union[BaseSurface, CyclicCover], d: Union[BaseClass, PullbackClass]) -> int:
    """chi(O) + D.(D - K)/2 on a base surface or on a cover."""
    if isinstance(where, CyclicCover):
        if not isinstance(d, PullbackClass) or d.cover != where:
            raise TypeError("cover Euler characteristics need a pullback class on that cover")
        chi_o = cohomology_cover(where.O).chi
        return chi_o + _rr_half(pullback_intersect(d, d - where.K))
    chi_o = cohomology_base(where, zero(where)).chi
    return chi_o + _rr_half(intersect(where, d, d - canonical_class(where)))


@dataclass(frozen=True)
class SurfaceInvariants:
    pg: int
    q: int
    K2: int
    chi: int
    regular: bool
    minimal: bool
    general_type: bool


def surface_invariants(cover: CyclicCover) -> SurfaceInvariants:
    K = cover.K
    pg = cohomology_cover(K).h0
    q = cohomology_cover(cover.O).h1
    K2 = pullback_intersect(K, K)
    minimal = is_nef_pullback(K)
    return SurfaceInvariants(
        pg=pg,
        q=q,
        K2=K2,
        chi=cohomology_cover(cover.O).chi,
        regular=q == 0,
        minimal=minimal,
        general_type=minimal and K2 > 0,
    )
