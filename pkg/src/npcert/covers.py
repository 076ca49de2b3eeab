"""Cyclic branched covers X -> S and the pullback classes living on them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import List

from . import positivity
from .lattice import BaseClass, BaseSurface, canonical_class, intersect, zero


class CoverError(ValueError):
    pass


@dataclass(frozen=True)
class CyclicCover:
    """Degree-d cyclic cover of ``base`` branched along a smooth member of |dL|.

    Smoothness of the branch curve is not checked pointwise.  We require dL to
    be ample and base point free, which in characteristic 0 guarantees a
    smooth member by Bertini; certificates carry this as a model assumption.
    """

    base: BaseSurface
    degree: int
    branch: BaseClass

    def __post_init__(self):
        if not isinstance(self.degree, int) or isinstance(self.degree, bool):
            raise TypeError("cover degree must be an int")
        if self.degree < 2:
            raise CoverError(f"cover degree must be at least 2, got {self.degree}")
        if self.branch.surface != self.base:
            raise CoverError(f"branch class {self.branch} is not on {self.base}")
        dl = self.degree * self.branch
        if not (positivity.is_ample(self.base, dl) and positivity.is_bpf(self.base, dl)):
            raise CoverError(f"branch system |{dl}| is not ample and base point free on {self.base}")

    def pullback(self, d: BaseClass) -> "PullbackClass":
        return PullbackClass(self, d)

    @cached_property
    def K(self) -> "PullbackClass":
        return canonical_of_cover(self)

    @property
    def O(self) -> "PullbackClass":
        return PullbackClass(self, zero(self.base))

    def __str__(self):
        return f"deg {self.degree} cover of {self.base} branched in |{self.degree}*({self.branch})|"


@dataclass(frozen=True)
class PullbackClass:
    """phi^*D on the cover, kept as the base class D."""

    cover: CyclicCover
    base_class: BaseClass

    def __post_init__(self):
        if self.base_class.surface != self.cover.base:
            raise CoverError(f"{self.base_class} is not a class on {self.cover.base}")

    def _check(self, other):
        if not isinstance(other, PullbackClass):
            raise TypeError(f"expected a PullbackClass, got {type(other).__name__}")
        if other.cover != self.cover:
            raise CoverError("pullback classes live on different covers")

    def __add__(self, other: "PullbackClass") -> "PullbackClass":
        self._check(other)
        return PullbackClass(self.cover, self.base_class + other.base_class)

    def __sub__(self, other: "PullbackClass") -> "PullbackClass":
        self._check(other)
        return PullbackClass(self.cover, self.base_class - other.base_class)

    def __neg__(self) -> "PullbackClass":
        return PullbackClass(self.cover, -self.base_class)

    def __mul__(self, k: int) -> "PullbackClass":
        if not isinstance(k, int) or isinstance(k, bool):
            return NotImplemented
        return PullbackClass(self.cover, k * self.base_class)

    __rmul__ = __mul__

    def dot(self, other: "PullbackClass") -> int:
        return pullback_intersect(self, other)

    def __str__(self):
        return f"phi*({self.base_class})"


def pullback_intersect(d1: PullbackClass, d2: PullbackClass) -> int:
    # phi^*D1 . phi^*D2 = deg(phi) * (D1 . D2)
    d1._check(d2)
    cover = d1.cover
    return cover.degree * intersect(cover.base, d1.base_class, d2.base_class)


def canonical_of_cover(cover: CyclicCover) -> PullbackClass:
    """K_X = phi^*(K_S + (d-1)L)."""
    return PullbackClass(cover, canonical_class(cover.base) + (cover.degree - 1) * cover.branch)


def pushforward_summands(d: PullbackClass) -> List[BaseClass]:
    """phi_* phi^*D splits as the sum of O(D - kL) for k = 0..deg-1, in that order."""
    cover = d.cover
    return [d.base_class - k * cover.branch for k in range(cover.degree)]
