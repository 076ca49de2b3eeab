"""Surface definition files: JSON documents describing a cover and a class B.

Example::

    {
      "name": "double plane, degree 10 branch",
      "base": {"kind": "plane"},
      "cover": {"degree": 2, "branch_class": [5]},
      "B": [1]
    }

``branch_class`` is L, the cover is branched along a member of |dL|.  Classes
are coordinates in the basis (H) on the plane or (C0, f) on F_e.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

import jsonschema

from .covers import CoverError, CyclicCover
from .engine import SurfaceContext
from .lattice import BaseSurface, Hirzebruch, ProjectivePlane

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["base", "cover", "B"],
    "properties": {
        "name": {"type": "string"},
        "base": {
            "type": "object",
            "oneOf": [
                {
                    "additionalProperties": False,
                    "required": ["kind", "e"],
                    "properties": {"kind": {"const": "hirzebruch"}, "e": {"type": "integer", "minimum": 0}},
                },
                {
                    "additionalProperties": False,
                    "required": ["kind"],
                    "properties": {"kind": {"const": "plane"}},
                },
            ],
        },
        "cover": {
            "type": "object",
            "additionalProperties": False,
            "required": ["degree", "branch_class"],
            "properties": {
                "degree": {"type": "integer", "minimum": 2},
                "branch_class": {"type": "array", "items": {"type": "integer"}, "minItems": 1, "maxItems": 2},
            },
        },
        "B": {"type": "array", "items": {"type": "integer"}, "minItems": 1, "maxItems": 2},
        "n_max": {"type": "integer", "minimum": 2},
        "r_cap": {"type": "integer", "minimum": 3},
    },
}


class SpecError(ValueError):
    """An invalid surface definition, with a location for the user."""


@dataclass(frozen=True)
class SurfaceSpec:
    base: BaseSurface
    degree: int
    branch: Tuple[int, ...]
    B: Tuple[int, ...]
    name: str = ""
    n_max: int = 64
    r_cap: Optional[int] = None
    source: str = "<string>"

    def cover(self) -> CyclicCover:
        return CyclicCover(self.base, self.degree, self.base.cls(*self.branch))

    def context(self, n_max: Optional[int] = None, r_cap: Optional[int] = None) -> SurfaceContext:
        try:
            cover = self.cover()
            B = cover.pullback(self.base.cls(*self.B))
        except (CoverError, ValueError, TypeError) as exc:
            raise SpecError(f"{self.source}: {exc}") from exc
        return SurfaceContext(
            cover,
            B,
            n_max=self.n_max if n_max is None else n_max,
            r_cap=self.r_cap if r_cap is None else r_cap,
        )

    def to_dict(self) -> dict:
        if isinstance(self.base, ProjectivePlane):
            base = {"kind": "plane"}
        else:
            base = {"kind": "hirzebruch", "e": self.base.e}
        out = {"base": base, "cover": {"degree": self.degree, "branch_class": list(self.branch)}, "B": list(self.B)}
        if self.name:
            out["name"] = self.name
        if self.n_max != 64:
            out["n_max"] = self.n_max
        if self.r_cap is not None:
            out["r_cap"] = self.r_cap
        return out


def _line_of(text: str, path) -> Optional[int]:
    """Best-effort line number of the last key in ``path``."""
    keys = [p for p in path if isinstance(p, str)]
    if not keys:
        return None
    needle = json.dumps(keys[-1]) + ":"
    for i, line in enumerate(text.splitlines(), 1):
        if needle in line.replace('" :', '":'):
            return i
    return None


def _field(path) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else p)
    return out or "<root>"


def parse_spec(text: str, source: str = "<string>") -> SurfaceSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{source}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
    errors = sorted(jsonschema.Draft202012Validator(SCHEMA).iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        # oneOf failures are unhelpful; report the deepest cause instead
        if err.context:
            err = max(err.context, key=lambda e: len(e.absolute_path))
        line = _line_of(text, err.absolute_path)
        where = f"{source}:{line}" if line else source
        raise SpecError(f"{where}: field {_field(err.absolute_path)}: {err.message}")
    if doc["base"]["kind"] == "plane":
        base: BaseSurface = ProjectivePlane()
    else:
        base = Hirzebruch(doc["base"]["e"])
    for key, coords in (("cover.branch_class", doc["cover"]["branch_class"]), ("B", doc["B"])):
        if len(coords) != base.rank:
            line = _line_of(text, key.split("."))
            where = f"{source}:{line}" if line else source
            raise SpecError(f"{where}: field {key}: expected {base.rank} coordinate(s) on {base}, got {len(coords)}")
    spec = SurfaceSpec(
        base=base,
        degree=doc["cover"]["degree"],
        branch=tuple(doc["cover"]["branch_class"]),
        B=tuple(doc["B"]),
        name=doc.get("name", ""),
        n_max=doc.get("n_max", 64),
        r_cap=doc.get("r_cap"),
        source=source,
    )
    try:
        spec.cover()
    except CoverError as exc:
        raise SpecError(f"{source}: field cover: {exc}") from exc
    return spec


def load_spec(path) -> SurfaceSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecError(f"{path}: cannot read: {exc.strerror}") from exc
    return parse_spec(text, str(path))


def load_corpus(directory) -> List[SurfaceSpec]:
    directory = Path(directory)
    if not directory.is_dir():
        raise SpecError(f"{directory}: not a directory")
    files = sorted(directory.glob("*.json"))
    if not files:
        raise SpecError(f"{directory}: no *.json spec files")
    return [load_spec(f) for f in files]
