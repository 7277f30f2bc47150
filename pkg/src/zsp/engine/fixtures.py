"""Stored realizations for (Z2)^3 x Z3 and (Z2)^3 x Z5, verified on load."""
from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from importlib import resources

from ..errors import ZspError
from ..groups import GroupSpec
from ..partition import ZeroSumPartition, parse_appendix, parse_profile

_FILES = ("appendix_a.txt", "appendix_b.txt")


class FixtureError(ZspError):
    """A stored table failed verification."""


@dataclass(frozen=True)
class FixtureStore:
    entries: dict

    def get(self, spec: GroupSpec, triple) -> ZeroSumPartition | None:
        return self.entries.get((spec.factors, tuple(int(x) for x in triple)))

    def triples(self, spec: GroupSpec) -> list[tuple[int, int, int]]:
        return sorted(t for f, t in self.entries if f == spec.factors)

    def __len__(self) -> int:
        return len(self.entries)


_LOCK = threading.Lock()
_STORE: FixtureStore | None = None


def load_fixture_text(text: str) -> dict:
    out = {}
    for tab in parse_appendix(text):
        spec = GroupSpec(tab.factors)
        a, b, c = tab.triple
        expected = {3: a, 4: b, 5: c}
        part = ZeroSumPartition.build(spec, tab.parts)
        rep = part.verify(expected)
        if not rep.ok:
            raise FixtureError(f"fixture {tab.factors} {tab.triple} fails: {rep.issues}")
        if tab.profile and parse_profile(tab.profile) != +Counter(expected):
            raise FixtureError(f"fixture {tab.factors} {tab.triple} has profile {tab.profile!r}")
        out[(spec.factors, tuple(tab.triple))] = part
    return out


def base_fixtures() -> FixtureStore:
    """The appendix tables indexed by (group factors, triple); loaded once."""
    global _STORE
    with _LOCK:
        if _STORE is None:
            entries: dict = {}
            pkg = resources.files("zsp") / "data"
            for name in _FILES:
                entries.update(load_fixture_text((pkg / name).read_text(encoding="utf-8")))
            _STORE = FixtureStore(entries)
        return _STORE
