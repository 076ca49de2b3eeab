"""Picard lattices of the base surfaces.

Two kinds of base are supported: the Hirzebruch surface F_e, with basis
{C0, f} where C0 is the negative section (C0^2 = -e) and f a fiber, and the
projective plane with basis {H}.  Classes are integer vectors in that basis.
Python integers are arbitrary precision, so nothing here can overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple, Union


@dataclass(frozen=True)
class Hirzebruch:
    e: int

    def __post_init__(self):
        if not isinstance(self.e, int) or isinstance(self.e, bool):
            raise TypeError(f"e must be an int, got {self.e!r}")
        if self.e < 0:
            raise ValueError(f"Hirzebruch index must be nonnegative, got e={self.e}")

    rank = 2

    def cls(self, a: int, b: int) -> "BaseClass":
        return BaseClass(self, (a, b))

    @property
    def C0(self) -> "BaseClass":
        return self.cls(1, 0)

    @property
    def f(self) -> "BaseClass":
        return self.cls(0, 1)

    def __str__(self):
        return f"F_{self.e}"


@dataclass(frozen=True)
class ProjectivePlane:
    rank = 1

    def cls(self, d: int) -> "BaseClass":
        return BaseClass(self, (d,))

    @property
    def H(self) -> "BaseClass":
        return self.cls(1)

    def __str__(self):
        return "P2"


BaseSurface = Union[Hirzebruch, ProjectivePlane]


@dataclass(frozen=True)
class BaseClass:
    """A divisor class on a base surface, stored by its coordinates."""

    surface: BaseSurface
    coords: Tuple[int, ...]

    def __post_init__(self):
        coords = tuple(self.coords)
        if len(coords) != self.surface.rank:
            raise ValueError(
                f"{self.surface} classes have {self.surface.rank} coordinate(s), got {coords}"
            )
        for c in coords:
            if not isinstance(c, int) or isinstance(c, bool):
                raise TypeError(f"class coordinates must be ints, got {c!r}")
        object.__setattr__(self, "coords", coords)

    def _check(self, other: "BaseClass") -> None:
        if not isinstance(other, BaseClass):
            raise TypeError(f"expected a BaseClass, got {type(other).__name__}")
        if other.surface != self.surface:
            raise ValueError(f"classes live on different surfaces: {self.surface} vs {other.surface}")

    def __add__(self, other: "BaseClass") -> "BaseClass":
        self._check(other)
        return BaseClass(self.surface, tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: "BaseClass") -> "BaseClass":
        self._check(other)
        return BaseClass(self.surface, tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> "BaseClass":
        return BaseClass(self.surface, tuple(-x for x in self.coords))

    def __mul__(self, k: int) -> "BaseClass":
        if not isinstance(k, int) or isinstance(k, bool):
            return NotImplemented
        return BaseClass(self.surface, tuple(k * x for x in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def dot(self, other: "BaseClass") -> int:
        return intersect(self.surface, self, other)

    def __str__(self):
        if isinstance(self.surface, ProjectivePlane):
            return f"{self.coords[0]}H"
        a, b = self.coords
        return f"{a}C0{b:+d}f"


def zero(surface: BaseSurface) -> BaseClass:
    return BaseClass(surface, (0,) * surface.rank)


def intersect(surface: BaseSurface, d1: BaseClass, d2: BaseClass) -> int:
    """Intersection number of two classes on ``surface``.

    On F_e: (a1 C0 + b1 f).(a2 C0 + b2 f) = -e a1 a2 + a1 b2 + a2 b1.
    On the plane: d1 H . d2 H = d1 d2.
    """
    for d in (d1, d2):
        if d.surface != surface:
            raise ValueError(f"class {d} does not live on {surface}")
    if isinstance(surface, ProjectivePlane):
        return d1.coords[0] * d2.coords[0]
    a1, b1 = d1.coords
    a2, b2 = d2.coords
    return -surface.e * a1 * a2 + a1 * b2 + a2 * b1


@lru_cache(maxsize=None)
def canonical_class(surface: BaseSurface) -> BaseClass:
    if isinstance(surface, ProjectivePlane):
        return surface.cls(-3)
    return surface.cls(-2, -(surface.e + 2))


@lru_cache(maxsize=None)
def curve_generators(surface: BaseSurface) -> Tuple[BaseClass, ...]:
    """Generators of the cone of curves (C0 and f on F_e, a line on the plane)."""
    if isinstance(surface, ProjectivePlane):
        return (surface.H,)
    return (surface.C0, surface.f)
