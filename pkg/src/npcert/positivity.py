"""Nef/ample/big/base-point-free tests and the vanishing rules built on them.

On F_e the cone of curves is spanned by C0 and f, so a class is nef exactly
when it meets both nonnegatively and ample when it meets both positively.  On
these toric bases nef classes are globally generated, which is what the bpf
test uses.  A pullback under a finite cover is nef (ample) iff the base class
is, and bpf of the base class is a sufficient test for the pullback.

All comparisons are done on integers or Fractions; there is no floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import TYPE_CHECKING, Union

from .lattice import BaseClass, BaseSurface, curve_generators, intersect

if TYPE_CHECKING:
    from .covers import CyclicCover, PullbackClass


@dataclass(frozen=True)
class Inapplicable:
    """A rule whose preconditions do not hold.  Falsy, but not the same as False."""

    reason: str

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Verdict:
    holds: bool
    provenance: str

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class SlopeBound:
    """The pair a < b in  B^2 >= (a/b) B.K, kept in lowest terms."""

    a: int
    b: int

    def __post_init__(self):
        if not 0 < self.a < self.b:
            raise ValueError(f"slope bound needs 0 < a < b, got a={self.a}, b={self.b}")
        g = gcd(self.a, self.b)
        object.__setattr__(self, "a", self.a // g)
        object.__setattr__(self, "b", self.b // g)

    @classmethod
    def from_fraction(cls, x: Fraction) -> "SlopeBound":
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.a, self.b)

    @property
    def inverse(self) -> Fraction:
        return Fraction(self.b, self.a)

    def holds_for(self, B2: int, BK: int) -> bool:
        return self.b * B2 >= self.a * BK

    def __str__(self):
        return f"{self.a}/{self.b}"


def best_slope(B2: int, BK: int, cap: int = 64) -> SlopeBound:
    """Largest usable a/b with B^2 >= (a/b) B.K.

    Every hypothesis consuming a/b is monotone in it, so the exact ratio is
    the best choice.  When B^2 >= B.K no a < b is extremal and (cap-1)/cap is
    used instead.
    """
    if BK <= 0:
        raise ValueError(f"B.K must be positive on a surface of general type, got {BK}")
    if B2 < BK:
        return SlopeBound.from_fraction(Fraction(B2, BK))
    return SlopeBound(cap - 1, cap)


# -- base surfaces -----------------------------------------------------------


def nef_margin(surface: BaseSurface, d: BaseClass) -> int:
    """Smallest intersection of ``d`` with a generator of the cone of curves."""
    return min(intersect(surface, d, c) for c in curve_generators(surface))


def is_nef(surface: BaseSurface, d: BaseClass) -> bool:
    return nef_margin(surface, d) >= 0


def is_ample(surface: BaseSurface, d: BaseClass) -> bool:
    return nef_margin(surface, d) > 0


def is_big(surface: BaseSurface, d: BaseClass) -> bool:
    # only nef classes are recognised as big
    return is_nef(surface, d) and intersect(surface, d, d) > 0


def is_bpf(surface: BaseSurface, d: BaseClass) -> bool:
    return is_nef(surface, d)


# -- pullbacks ---------------------------------------------------------------


def is_nef_pullback(d: "PullbackClass") -> bool:
    return is_nef(d.cover.base, d.base_class)


def is_ample_pullback(d: "PullbackClass") -> bool:
    return is_ample(d.cover.base, d.base_class)


def is_big_pullback(d: "PullbackClass") -> bool:
    return is_big(d.cover.base, d.base_class)


def is_bpf_pullback(d: "PullbackClass") -> bool:
    # sufficient only: a bpf base class pulls back to a bpf class
    return is_bpf(d.cover.base, d.base_class)


def k_plus_b_bpf(cover: "CyclicCover", B: "PullbackClass") -> Verdict:
    """Whether K_X + B is known to be base point free.

    B^2 >= 5 settles it by Reider's theorem; otherwise we fall back on base
    point freeness of the base class of K_X + B.
    """
    if not is_ample_pullback(B):
        raise ValueError(f"{B} is not ample")
    B2 = B.dot(B)
    if B2 <= 1:
        raise ValueError(f"B^2 = {B2} is impossible for an ample bpf B on a surface of general type")
    if B2 >= 5:
        return Verdict(True, "Reider")
    if is_bpf_pullback(cover.K + B):
        return Verdict(True, "base-class check")
    return Verdict(False, "unavailable")


# -- vanishing rules ---------------------------------------------------------


@dataclass(frozen=True)
class VanishingFrom:
    """h^1(lB) = 0 for every l >= m0, by restriction to a curve in |B|.

    Below m0 the predicate falls back on direct computation.
    """

    m0: int
    bound: SlopeBound
    B: "PullbackClass"

    def __call__(self, l: int) -> bool:
        if l >= self.m0:
            return True
        from .cohomology import cohomology_cover

        return cohomology_cover(l * self.B).h1 == 0

    def provenance(self, l: int) -> str:
        return f"propagated from {self.m0}B" if l >= self.m0 else "direct"


def h1_vanishing_from(
    m0: int, bound: SlopeBound, cover: "CyclicCover", B: "PullbackClass"
) -> Union[VanishingFrom, Inapplicable]:
    from .cohomology import cohomology_cover

    if B.cover != cover:
        raise ValueError("B does not live on this cover")
    if not (is_ample_pullback(B) and is_bpf_pullback(B)):
        return Inapplicable("B is not ample and base point free")
    B2, BK = B.dot(B), B.dot(cover.K)
    if not bound.holds_for(B2, BK):
        return Inapplicable(f"B^2 = {B2} < ({bound}) * {BK}")
    if m0 * bound.a <= bound.b:
        return Inapplicable(f"m0 = {m0} is not > {bound.inverse}")
    if cohomology_cover(m0 * B).h1 != 0:
        return Inapplicable(f"h^1({m0}B) != 0")
    return VanishingFrom(m0, bound, B)


def canonical_slope_check(bound: SlopeBound, cover: "CyclicCover", B: "PullbackClass") -> Union[bool, Inapplicable]:
    """B^2 >= (a/b) B.K forces B.K >= (a/b) K^2 when K is nef and B ample.

    Always true on a consistent model, so this doubles as an engine self-test.
    """
    if not is_ample_pullback(B):
        return Inapplicable("B is not ample")
    K = cover.K
    if not is_nef_pullback(K):
        return Inapplicable("K is not nef")
    if not bound.holds_for(B.dot(B), B.dot(K)):
        return Inapplicable(f"B^2 >= ({bound}) B.K fails")
    return bound.b * B.dot(K) >= bound.a * K.dot(K)


@lru_cache(maxsize=1 << 14)
def _nef_gate(B: "PullbackClass", b_mult: int, k_mult: int) -> Union[None, Inapplicable]:
    if not (is_ample_pullback(B) and is_bpf_pullback(B)):
        return Inapplicable("B is not ample and base point free")
    if not is_nef_pullback(B.cover.K):
        return Inapplicable("K is not nef")
    if not is_nef_pullback(b_mult * B - k_mult * B.cover.K):
        k = "K" if k_mult == 1 else f"{k_mult}K"
        return Inapplicable(f"{b_mult}B-{k} is not nef")
    return None


def adjoint_vanishing_2k(n: int, m: int, l: int, B: "PullbackClass" = None) -> Union[bool, Inapplicable]:
    """Claim h^1(mB - lK) = h^2(mB - lK) = 0 from nefness of (n+1)B - 2K.

    The claim is made when 2m > (n+1)(l+2).  mB - lK is written as K plus a
    nef and big class, which needs l >= -1.  With ``B`` given, the nef
    hypothesis is checked first.
    """
    if n < 2 or l < -1:
        return Inapplicable(f"outside the rule's range (n={n}, l={l})")
    if B is not None:
        gate = _nef_gate(B, n + 1, 2)
        if gate is not None:
            return gate
    return 2 * m > (n + 1) * (l + 2)


def adjoint_vanishing_k(n: int, m: int, l: int, B: "PullbackClass" = None) -> Union[bool, Inapplicable]:
    """Claim h^1(mB - lK) = h^2(mB - lK) = 0 from nefness of nB - K, when m > n(l+1)."""
    if n < 2 or l < -1:
        return Inapplicable(f"outside the rule's range (n={n}, l={l})")
    if B is not None:
        gate = _nef_gate(B, n, 1)
        if gate is not None:
            return gate
    return m > n * (l + 1)
