"""Reports: a deterministic JSON machine section and an aligned-table human section."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_INCONSISTENT = 3


def normalize(obj):
    """Turn numbers into decimal strings so the machine section is precision safe."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, Fraction)):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    raise TypeError(f"cannot put {type(obj).__name__} in a report")


def serialize(machine: dict) -> str:
    return json.dumps(normalize(machine), sort_keys=True, indent=2) + "\n"


def parse(text: str) -> dict:
    return json.loads(text)


def table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> List[str]:
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return lines


@dataclass
class Report:
    command: str
    machine: dict = field(default_factory=dict)
    human: List[str] = field(default_factory=list)
    exit_code: int = EXIT_OK

    def add_table(self, title: str, headers, rows):
        if self.human:
            self.human.append("")
        self.human.append(title)
        self.human.extend(table(headers, rows))

    def add_line(self, text: str = ""):
        self.human.append(text)

    def machine_text(self) -> str:
        return serialize({"command": self.command, "exit_code": self.exit_code, "result": self.machine})

    def human_text(self) -> str:
        return "\n".join(self.human) + "\n"
