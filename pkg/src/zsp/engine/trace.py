"""Structured record of which construction branch produced a partition."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class ConstructionTrace:
    theorem: str
    case: str = ""
    decomposition: dict[str, Any] = field(default_factory=dict)
    children: list["ConstructionTrace"] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def child(self, sub: "ConstructionTrace") -> "ConstructionTrace":
        self.children.append(sub)
        return sub

    def note(self, text: str) -> None:
        self.notes.append(text)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"theorem": self.theorem, "case": self.case}
        if self.decomposition:
            out["decomposition"] = self.decomposition
        if self.notes:
            out["notes"] = list(self.notes)
        if self.children:
            out["children"] = [c.to_json() for c in self.children]
        return out

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()
