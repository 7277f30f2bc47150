"""Skolem partitions: good six-subsets plus a few zero-sum pairs.

Cyclic groups (including products of pairwise coprime cyclic factors) are
handled through Skolem and hooked Skolem sequences.  Other groups and
arbitrary subsets use the search below.

Search runs over inverse-pair classes.  The uncovered class c with the
fewest available good sixes is covered next, either by one of those sixes or,
while pairs are still allowed, by {c, -c}.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Iterable

from .errors import (
    DegenerateSix,
    InputError,
    InternalExhaustion,
    PreconditionViolated,
)
from .groups import Element, GroupSpec, tables
from .oracle import BUDGET_EXCEEDED, DEFAULT_MAX_NODES, FOUND, INFEASIBLE, SearchBudget
from .partition import GoodSixSubset, verify_partition


def good_six(spec: GroupSpec, c: Element, d: Element) -> GoodSixSubset:
    """The six values {c, d, -c-d, -c, -d, c+d}; DegenerateSix on any coincidence."""
    if not any(c) or not any(d):
        raise DegenerateSix("c and d must be non-zero")
    return GoodSixSubset.make(spec, c, d)


@dataclass(frozen=True)
class SkolemPartition:
    spec: GroupSpec
    sixes: tuple[GoodSixSubset, ...]
    pairs: tuple[tuple[Element, Element], ...]
    ground: frozenset

    def parts(self, six_mode: str = "triples") -> list[tuple[Element, ...]]:
        out: list[tuple[Element, ...]] = []
        for six in self.sixes:
            out.extend(six.triples() if six_mode == "triples" else six.pairs())
        out.extend(self.pairs)
        return out

    def verify(self) -> bool:
        for mode in ("triples", "pairs"):
            if not verify_partition(self.spec, self.parts(mode), ground=self.ground).ok:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "group": list(self.spec.factors),
            "sixes": [six.to_json() for six in self.sixes],
            "pairs": [[list(x), list(y)] for x, y in self.pairs],
        }


@dataclass
class SkolemSearchResult:
    outcome: str
    partition: SkolemPartition | None
    nodes: int


_LOCK = threading.Lock()
_CACHE: dict = {}


def skolem_partition(H: GroupSpec) -> SkolemPartition:
    """Skolem partition of the non-zero elements of an odd-order group (memoized)."""
    if H.order % 2 == 0:
        raise PreconditionViolated(f"{H} has even order")
    with _LOCK:
        hit = _CACHE.get(H.factors)
    if hit is not None:
        return hit
    if H.factors and math.lcm(*H.factors) == H.order:
        part = _cyclic_partition(H)
    else:
        res = _search(H, H.nonzero(), SearchBudget(DEFAULT_MAX_NODES))
        if res.outcome != FOUND:
            raise InternalExhaustion(f"Skolem search for {H} ended with {res.outcome}")
        part = res.partition
    with _LOCK:
        _CACHE[H.factors] = part
    return part


def skolem_sequence(k: int, hooked: bool) -> dict[int, tuple[int, int]] | None:
    """Pairs (a_i, a_i + i), i = 1..k, partitioning {1..2k} or, hooked, {1..2k-1, 2k+1}.

    Fills the leftmost empty position with the largest distance that fits.
    """
    size = 2 * k + 1 if hooked else 2 * k
    slot = [0] * (size + 2)
    if hooked:
        slot[2 * k] = -1
    used = [False] * (k + 1)
    pairs: dict[int, tuple[int, int]] = {}

    def rec(p: int) -> bool:
        while p <= size and slot[p]:
            p += 1
        if p > size:
            return True
        for i in range(k, 0, -1):
            if not used[i] and p + i <= size and not slot[p + i]:
                used[i] = True
                slot[p] = slot[p + i] = i
                pairs[i] = (p, p + i)
                if rec(p + 1):
                    return True
                used[i] = False
                slot[p] = slot[p + i] = 0
        return False

    return pairs if rec(1) else None


def _cyclic_partition(H: GroupSpec) -> SkolemPartition:
    """Skolem partition of Z_n (n = 6k + s) from a Skolem or hooked Skolem sequence.

    Each pair (a, b) at distance i gives integers i + (a + k) = b + k, hence a
    good six with c = i, d = a + k.  The sequence covers every inverse class
    except (s - 1) / 2 of them, which become pairs.
    """
    n = H.order
    k, s = divmod(n, 6)
    hooked = k % 4 in (2, 3)
    seq = skolem_sequence(k, hooked) if k else {}
    if seq is None:  # pragma: no cover - sequences exist for every k
        raise InternalExhaustion(f"no Skolem sequence of order {k}")

    def elem(t: int) -> Element:
        return tuple(t % f for f in H.factors)

    covered = set()
    sixes = []
    for i in range(1, k + 1):
        a, b = seq[i]
        c, d = i, a + k
        sixes.append(good_six(H, elem(c), elem(d)))
        for t in (c, d, c + d):
            covered.add(min(t % n, (-t) % n))
    pairs = []
    for r in range(1, (n - 1) // 2 + 1):
        if r not in covered:
            pairs.append((elem(r), elem(n - r)))
    part = SkolemPartition(H, tuple(sixes), tuple(pairs), frozenset(H.nonzero()))
    if len(pairs) != (s - 1) // 2 or not part.verify():
        raise InternalExhaustion(f"cyclic Skolem construction failed for {H}")
    return part


def skolem_subset(spec: GroupSpec, S: Iterable[Element],
                  budget: SearchBudget | None = None,
                  pairs: int | None = None) -> SkolemSearchResult:
    """Partition S into good sixes and zero-sum pairs.

    By default the number of pairs is the minimum (|S| mod 6) / 2; ``pairs``
    may ask for more (it must keep |S| - 2 * pairs divisible by 6).
    """
    raw = [spec.check(e) for e in S]
    if len(set(raw)) != len(raw):
        raise InputError("subset contains duplicate elements")
    if len(raw) % 2:
        raise InputError(f"subset has odd size {len(raw)}")
    if pairs is not None and (pairs < 0 or 2 * pairs > len(raw) or (len(raw) - 2 * pairs) % 6):
        raise InputError(f"{pairs} pairs do not leave a multiple of 6 in a set of {len(raw)}")
    return _search(spec, raw, budget or SearchBudget(), pairs)


def _search(spec: GroupSpec, elems: list[Element], budget: SearchBudget,
            n_pairs: int | None = None) -> SkolemSearchResult:
    ground = frozenset(elems)
    if n_pairs is None:
        n_pairs = (len(elems) % 6) // 2
    # every element must have a distinct inverse inside the set
    reps: list[Element] = []
    for x in sorted(ground):
        nx = spec.neg(x)
        if nx == x or nx not in ground:
            return SkolemSearchResult(INFEASIBLE, None, 0)
        if x < nx:
            reps.append(x)
    m = len(reps)
    tab = tables(spec)
    cls_of_code = [-1] * spec.order
    for i, r in enumerate(reps):
        cls_of_code[spec.index(r)] = i
        cls_of_code[spec.index(spec.neg(r))] = i
    rep_codes = [spec.index(r) for r in reps]
    neg_codes = [tab.neg[c] for c in rep_codes]
    addt = tab.add
    max_nodes = budget.max_nodes
    nodes = 0
    chosen: list = []
    # options[i]: (j, k, dcode) with rep_i + dcode in class k, three distinct classes
    options: list[list[tuple[int, int, int]]] = [[] for _ in range(m)]
    for i in range(m):
        ci = rep_codes[i]
        for j in range(m):
            if j == i:
                continue
            for dcode in (rep_codes[j], neg_codes[j]):
                k = cls_of_code[addt[ci][dcode]]
                if k >= 0 and k != i and k != j:
                    options[i].append((j, k, dcode))

    class _Stop(Exception):
        pass

    def rec(mask: int, pairs_left: int) -> bool:
        nonlocal nodes
        if mask == 0:
            return pairs_left == 0
        if bin(mask).count("1") < pairs_left:
            return False
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            raise _Stop
        # fewest remaining options first
        best_i, best_opts = -1, None
        m2 = mask
        while m2:
            low = m2 & -m2
            i = low.bit_length() - 1
            m2 ^= low
            opts = [o for o in options[i] if (mask >> o[0]) & 1 and (mask >> o[1]) & 1]
            if best_opts is None or len(opts) < len(best_opts):
                best_i, best_opts = i, opts
                if not opts:
                    break
        i = best_i
        if not best_opts and not pairs_left:
            return False
        ci = rep_codes[i]
        rest = mask ^ (1 << i)
        for j, k, dcode in best_opts:
            chosen.append(("six", ci, dcode))
            if rec(rest & ~(1 << j) & ~(1 << k), pairs_left):
                return True
            chosen.pop()
        if pairs_left:
            chosen.append(("pair", ci))
            if rec(rest, pairs_left - 1):
                return True
            chosen.pop()
        return False

    if m != 3 * ((len(elems) - 2 * n_pairs) // 6) + n_pairs:  # pragma: no cover - arithmetic identity
        return SkolemSearchResult(INFEASIBLE, None, 0)
    try:
        ok = rec((1 << m) - 1, n_pairs)
    except _Stop:
        return SkolemSearchResult(BUDGET_EXCEEDED, None, nodes)
    if not ok:
        return SkolemSearchResult(INFEASIBLE, None, nodes)
    sixes, pairs = [], []
    for item in chosen:
        if item[0] == "six":
            sixes.append(good_six(spec, spec.element_at(item[1]), spec.element_at(item[2])))
        else:
            x = spec.element_at(item[1])
            pairs.append((x, spec.neg(x)))
    part = SkolemPartition(spec, tuple(sixes), tuple(pairs), ground)
    if not part.verify():  # pragma: no cover - guards the search itself
        raise AssertionError("Skolem search produced an invalid partition")
    return SkolemSearchResult(FOUND, part, nodes)
