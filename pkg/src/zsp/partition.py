"""Size requests, zero-sum partitions, good six-subsets and the verifier."""
from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DegenerateSix, InputError
from .groups import Element, GroupSpec

PROFILE_RE = re.compile(r"(\d+)\s*\*\s*(\d+)")


# ---------------------------------------------------------------- requests

@dataclass(frozen=True)
class SizeRequest:
    sizes: tuple[int, ...]
    ground_size: int

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(sorted(int(s) for s in self.sizes)))
        if sum(self.sizes) != self.ground_size:
            raise InputError(f"sizes sum to {sum(self.sizes)}, ground set has {self.ground_size}")
        if any(s < 2 for s in self.sizes):
            raise InputError("every part needs at least two elements")


@dataclass(frozen=True)
class TripleABC:
    """Counts of 3-, 4- and 5-parts."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 0:
            raise InputError("triple entries must be non-negative")

    @property
    def total(self) -> int:
        return 3 * self.a + 4 * self.b + 5 * self.c

    def sizes(self) -> list[int]:
        return [3] * self.a + [4] * self.b + [5] * self.c

    @classmethod
    def from_sizes(cls, sizes: Iterable[int]) -> "TripleABC":
        cnt = Counter(sizes)
        extra = set(cnt) - {3, 4, 5}
        if extra:
            raise InputError(f"sizes {sorted(extra)} are outside {{3, 4, 5}}")
        return cls(cnt[3], cnt[4], cnt[5])

    @classmethod
    def parse(cls, text: str) -> "TripleABC":
        vals = [int(x) for x in re.split(r"[,\s]+", text.strip().strip("()[]")) if x]
        if len(vals) != 3:
            raise InputError(f"a triple needs three entries, got {text!r}")
        return cls(*vals)


@dataclass(frozen=True)
class QuadrupleWABC:
    """Counts of 2-, 3-, 4- and 5-parts."""

    omega: int
    alpha: int
    beta: int
    gamma: int

    def __post_init__(self):
        if min(self.omega, self.alpha, self.beta, self.gamma) < 0:
            raise InputError("quadruple entries must be non-negative")

    @property
    def total(self) -> int:
        return 2 * self.omega + 3 * self.alpha + 4 * self.beta + 5 * self.gamma

    def sizes(self) -> list[int]:
        return [2] * self.omega + [3] * self.alpha + [4] * self.beta + [5] * self.gamma

    @classmethod
    def parse(cls, text: str) -> "QuadrupleWABC":
        vals = [int(x) for x in re.split(r"[,\s]+", text.strip().strip("()[]")) if x]
        if len(vals) != 4:
            raise InputError(f"a quadruple needs four entries, got {text!r}")
        return cls(*vals)


def parse_sizes(text: str) -> list[int]:
    """Sizes as "3,4,5", "3 4 5" or a profile such as "2*3 1*4"."""
    text = text.strip()
    if "*" in text:
        prof = parse_profile(text)
        return sorted(s for s, k in prof.items() for _ in range(k))
    try:
        return [int(x) for x in re.split(r"[,\s]+", text.strip("[]()")) if x]
    except ValueError as exc:
        raise InputError(f"cannot parse sizes {text!r}") from exc


def parse_profile(text: str) -> Counter:
    """Parse "a*3  b*4  c*5" into a Counter {size: count}; zero counts vanish."""
    found = PROFILE_RE.findall(text)
    if not found:
        raise InputError(f"cannot parse profile {text!r}")
    out: Counter = Counter()
    for count, size in found:
        if int(count):
            out[int(size)] += int(count)
    return out


def format_profile(sizes: Iterable[int], alphabet: Sequence[int] = (3, 4, 5)) -> str:
    cnt = Counter(sizes)
    keys = sorted(set(alphabet) | set(cnt))
    return "  ".join(f"{cnt[k]}*{k}" for k in keys)


# ---------------------------------------------------------------- partitions

@dataclass(frozen=True)
class ZeroSumPartition:
    """Parts in canonical order: each part sorted, parts sorted by (size, content)."""

    spec: GroupSpec
    ground: frozenset
    parts: tuple[tuple[Element, ...], ...]

    @classmethod
    def build(cls, spec: GroupSpec, parts: Iterable[Iterable[Element]],
              ground: Iterable[Element] | None = None) -> "ZeroSumPartition":
        canon = canonical_parts(parts)
        g = frozenset(ground) if ground is not None else frozenset(spec.nonzero())
        return cls(spec, g, canon)

    def sizes(self) -> list[int]:
        return sorted(len(p) for p in self.parts)

    def profile(self) -> Counter:
        return Counter(len(p) for p in self.parts)

    def verify(self, expected=None) -> "VerificationReport":
        return verify_partition(self.spec, self.parts, expected, ground=self.ground)

    def to_json(self) -> list:
        return [[list(e) for e in p] for p in self.parts]


def canonical_parts(parts: Iterable[Iterable[Element]]) -> tuple[tuple[Element, ...], ...]:
    canon = [tuple(sorted(tuple(e) for e in p)) for p in parts]
    canon.sort(key=lambda p: (len(p), p))
    return tuple(canon)


@dataclass
class VerificationReport:
    zero_sum: bool = True
    disjoint: bool = True
    covers: bool = True
    profile_ok: bool | None = None
    well_formed: bool = True
    issues: list[str] = field(default_factory=list)
    sizes: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.zero_sum and self.disjoint and self.covers and self.well_formed
                and self.profile_ok is not False)

    def to_json(self) -> dict:
        return {
            "verdict": "pass" if self.ok else "fail",
            "zeroSum": self.zero_sum,
            "disjoint": self.disjoint,
            "covers": self.covers,
            "profileMatches": self.profile_ok,
            "wellFormed": self.well_formed,
            "profile": format_profile(self.sizes),
            "issues": self.issues,
        }


def verify_partition(spec: GroupSpec, parts, expected=None,
                     ground: Iterable[Element] | None = None) -> VerificationReport:
    """Check zero sums, disjointness, coverage of ``ground`` and the profile.

    ``expected`` may be a profile string, a Counter, or a list of sizes.
    ``ground`` defaults to the non-zero elements of ``spec``.  Failures are
    reported, never raised.
    """
    rep = VerificationReport()
    zero = spec.identity
    seen: Counter = Counter()
    try:
        part_list = [list(p) for p in parts]
    except TypeError:
        rep.well_formed = False
        rep.issues.append("parts is not a list of lists")
        return rep
    for idx, part in enumerate(part_list):
        elems = []
        for e in part:
            try:
                t = tuple(int(x) for x in e)
            except (TypeError, ValueError):
                rep.well_formed = False
                rep.issues.append(f"part {idx}: malformed element {e!r}")
                continue
            if len(t) != spec.rank or any(not 0 <= x < n for x, n in zip(t, spec.factors)):
                rep.well_formed = False
                rep.issues.append(f"part {idx}: {list(t)} is not an element of {spec}")
                continue
            elems.append(t)
        rep.sizes.append(len(part))
        if spec.total(elems) != zero:
            rep.zero_sum = False
            rep.issues.append(f"part {idx} sums to {list(spec.total(elems))}")
        seen.update(elems)
    dups = sorted(e for e, k in seen.items() if k > 1)
    if dups:
        rep.disjoint = False
        rep.issues.append(f"repeated elements: {[list(e) for e in dups[:10]]}")
    g = set(ground) if ground is not None else set(spec.nonzero())
    used = set(seen)
    if used != g:
        rep.covers = False
        missing = sorted(g - used)
        foreign = sorted(used - g)
        if missing:
            rep.issues.append(f"{len(missing)} ground elements uncovered, e.g. {[list(e) for e in missing[:5]]}")
        if foreign:
            rep.issues.append(f"{len(foreign)} elements outside the ground set, e.g. {[list(e) for e in foreign[:5]]}")
    if expected is not None:
        want = _as_counter(expected)
        got = Counter(rep.sizes)
        rep.profile_ok = want == got
        if not rep.profile_ok:
            rep.issues.append(f"profile {format_profile(rep.sizes)} differs from expected "
                              f"{format_profile(sorted(want.elements()))}")
    return rep


def _as_counter(expected) -> Counter:
    if isinstance(expected, str):
        return parse_profile(expected)
    if isinstance(expected, Counter):
        return Counter({k: v for k, v in expected.items() if v})
    if isinstance(expected, (TripleABC, QuadrupleWABC)):
        return Counter(expected.sizes())
    return Counter(expected)


# ---------------------------------------------------------------- normalization

@dataclass(frozen=True)
class NormalizedSizes:
    """Refined sizes plus, for every original part, the refined indices it absorbs."""

    original: tuple[int, ...]
    refined: tuple[int, ...]
    groups: tuple[tuple[int, ...], ...]
    odd_count: int

    def recombine(self, refined_parts: Sequence[Sequence[Element]]) -> list[list[Element]]:
        """Union refined parts back into parts of the original sizes.

        ``refined_parts[i]`` must have size ``refined[i]``.
        """
        out = []
        for grp in self.groups:
            merged: list[Element] = []
            for i in grp:
                merged.extend(refined_parts[i])
            out.append(merged)
        return out


def normalize_sizes(sizes: Sequence[int], regime: str) -> NormalizedSizes:
    """Split large parts into an alphabet that constructions handle directly.

    min3: while t > 5 emit 3 (alphabet {3, 4, 5}).
    min4: while t > 7 emit 4 (alphabet {4, 5, 6, 7}); odd_count records s.
    min2: while t > 3 emit 2 (alphabet {2, 3}).
    """
    rules = {"min2": (2, 3, 2), "min3": (3, 5, 3), "min4": (4, 7, 4)}
    if regime not in rules:
        raise InputError(f"unknown regime {regime!r}")
    floor, top, emit = rules[regime]
    refined: list[int] = []
    groups: list[tuple[int, ...]] = []
    for t in sizes:
        t = int(t)
        if t < floor:
            raise InputError(f"size {t} is below the {regime} floor {floor}")
        grp = []
        while t > top:
            grp.append(len(refined))
            refined.append(emit)
            t -= emit
        grp.append(len(refined))
        refined.append(t)
        groups.append(tuple(grp))
    odd = sum(1 for r in refined if r % 2)
    return NormalizedSizes(tuple(int(s) for s in sizes), tuple(refined), tuple(groups), odd)


# ---------------------------------------------------------------- good sixes

@dataclass(frozen=True)
class GoodSixSubset:
    """{c, d, -c-d, -c, -d, c+d} with six distinct non-zero values."""

    c: Element
    d: Element
    elements: tuple[Element, ...]

    @classmethod
    def make(cls, spec: GroupSpec, c: Element, d: Element) -> "GoodSixSubset":
        c, d = spec.check(c), spec.check(d)
        cd = spec.add(c, d)
        elems = (c, d, spec.neg(cd), spec.neg(c), spec.neg(d), cd)
        if spec.identity in elems or len(set(elems)) != 6:
            raise DegenerateSix(f"(c, d) = ({list(c)}, {list(d)}) does not give six distinct non-zero values")
        return cls(c, d, elems)

    def triples(self) -> list[tuple[Element, ...]]:
        e = self.elements
        return [(e[0], e[1], e[2]), (e[3], e[4], e[5])]

    def pairs(self) -> list[tuple[Element, ...]]:
        e = self.elements
        return [(e[0], e[3]), (e[1], e[4]), (e[5], e[2])]

    def to_json(self) -> dict:
        return {"c": list(self.c), "d": list(self.d), "elements": [list(x) for x in self.elements]}


def split_good_six(six: GoodSixSubset, mode: str) -> list[tuple[Element, ...]]:
    """pairs: {c,-c}, {d,-d}, {c+d,-c-d}; triples: {c,d,-c-d}, {-c,-d,c+d}."""
    if mode == "pairs":
        return six.pairs()
    if mode == "triples":
        return six.triples()
    raise InputError(f"mode must be 'pairs' or 'triples', got {mode!r}")


# ---------------------------------------------------------------- I/O

def parts_from_json(data) -> list[list[Element]]:
    if isinstance(data, dict):
        data = data.get("parts", data.get("partition"))
    if not isinstance(data, list):
        raise InputError("partition JSON must be a list of parts")
    try:
        return [[tuple(int(x) for x in e) for e in part] for part in data]
    except (TypeError, ValueError) as exc:
        raise InputError("partition JSON must be a list of lists of integer arrays") from exc


@dataclass(frozen=True)
class AppendixTable:
    factors: tuple[int, ...]
    triple: tuple[int, ...]
    parts: tuple[tuple[Element, ...], ...]
    profile: str


def parse_appendix(text: str) -> list[AppendixTable]:
    """Read appendix-style blocks: group list, triple, parts, profile line."""
    dec = json.JSONDecoder()
    pos = 0
    values: list = []
    tables: list[AppendixTable] = []
    n = len(text)
    while pos < n:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        if text[pos] == "[":
            try:
                val, pos = dec.raw_decode(text, pos)
            except json.JSONDecodeError as exc:
                raise InputError(f"malformed bracket data near offset {pos}") from exc
            values.append(val)
            continue
        end = text.find("\n", pos)
        end = n if end < 0 else end
        line = text[pos:end].strip()
        pos = end + 1
        if "sizes" in line and PROFILE_RE.search(line):
            if len(values) != 3:
                raise InputError(f"profile line {line!r} not preceded by group, triple and parts")
            group, triple, parts = values
            tables.append(AppendixTable(
                tuple(int(x) for x in group), tuple(int(x) for x in triple),
                tuple(tuple(tuple(int(x) for x in e) for e in p) for p in parts),
                line.split(":", 1)[1].strip()))
            values = []
    if values:
        if len(values) == 3:
            group, triple, parts = values
            tables.append(AppendixTable(
                tuple(int(x) for x in group), tuple(int(x) for x in triple),
                tuple(tuple(tuple(int(x) for x in e) for e in p) for p in parts), ""))
        elif len(values) == 1:
            tables.append(AppendixTable((), (), tuple(tuple(tuple(int(x) for x in e) for e in p)
                                                      for p in values[0]), ""))
        else:
            raise InputError("trailing appendix data is incomplete")
    return tables
