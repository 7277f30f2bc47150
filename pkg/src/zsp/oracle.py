"""Exact backtracking search for zero-sum partitions of arbitrary ground sets.

The part holding the least remaining element is built next, so every
partition is generated once.  Sizes are tried smallest first; inside a part
elements are chosen in increasing order and the last one is forced by the
zero-sum condition.  Failed (remaining set, open sizes) states are memoized.
"""
from __future__ import annotations

import os
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CapabilityExceeded, InputError
from .groups import Element, GroupSpec, tables
from .partition import ZeroSumPartition, verify_partition

DEFAULT_MAX_NODES = 10_000_000
EXHAUSTIVE_ORDER_BOUND = 32

FOUND = "Found"
INFEASIBLE = "Infeasible"
BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass(frozen=True)
class SearchBudget:
    """Node allowance; ``max_nodes=None`` means unlimited."""

    max_nodes: int | None = DEFAULT_MAX_NODES

    @classmethod
    def from_env(cls, default: int | None = DEFAULT_MAX_NODES) -> "SearchBudget":
        raw = os.environ.get("ZSP_ORACLE_BUDGET")
        if raw is None or not raw.strip():
            return cls(default)
        try:
            val = int(raw)
        except ValueError as exc:
            raise InputError(f"ZSP_ORACLE_BUDGET must be an integer, got {raw!r}") from exc
        return cls(None if val <= 0 else val)


@dataclass
class SearchResult:
    outcome: str
    partition: ZeroSumPartition | None
    nodes: int

    @property
    def found(self) -> bool:
        return self.outcome == FOUND

    def stats(self) -> dict:
        return {"nodes": self.nodes, "outcome": self.outcome}


class _OutOfBudget(Exception):
    pass


def search_partition(spec: GroupSpec, ground: Iterable[Element] | None, sizes: Sequence[int],
                     budget: SearchBudget | None = None,
                     priority: Iterable[Element] | None = None) -> SearchResult:
    """Find a zero-sum partition of ``ground`` (default: non-zero elements) with ``sizes``.

    ``priority`` lists elements to place first; the remaining ones follow in
    lexicographic order.  Any fixed order keeps the search exhaustive.
    """
    budget = budget or SearchBudget()
    elems = sorted(set(spec.check(e) for e in ground)) if ground is not None else spec.nonzero()
    sizes = sorted(int(s) for s in sizes)
    if ground is not None:
        raw = list(ground)
        if len(raw) != len(elems):
            raise InputError("ground set contains duplicates")
    if sum(sizes) != len(elems):
        raise InputError(f"sizes sum to {sum(sizes)} but the ground set has {len(elems)} elements")
    if any(s < 1 for s in sizes):
        raise InputError("sizes must be positive")
    if spec.total(elems) != spec.identity:
        return SearchResult(INFEASIBLE, None, 0)
    if priority is not None:
        present = set(elems)
        first = list(dict.fromkeys(e for e in (spec.check(x) for x in priority) if e in present))
        chosen = set(first)
        elems = first + [e for e in elems if e not in chosen]
    solver = _Solver(spec, elems, sizes, budget.max_nodes)
    try:
        parts = solver.run()
    except _OutOfBudget:
        return SearchResult(BUDGET_EXCEEDED, None, solver.nodes)
    if parts is None:
        return SearchResult(INFEASIBLE, None, solver.nodes)
    result = ZeroSumPartition.build(spec, parts, elems)
    rep = result.verify(sizes)
    if not rep.ok:  # pragma: no cover - guards the solver itself
        raise AssertionError(f"oracle produced an invalid partition: {rep.issues}")
    return SearchResult(FOUND, result, solver.nodes)


class _Solver:
    def __init__(self, spec, elems, sizes, max_nodes):
        self.spec = spec
        self.elems = elems
        self.n = len(elems)
        tab = tables(spec)
        codes = [spec.index(e) for e in elems]
        self.codes = codes
        pos_of_code = {c: i for i, c in enumerate(codes)}
        self.add = tab.add
        self.neg = tab.neg
        # position in the ground list of the element with a given code, or -1
        self.pos = [pos_of_code.get(c, -1) for c in range(spec.order)]
        # position of the inverse of each ground element (or -1)
        self.inv_pos = [self.pos[tab.neg[c]] for c in codes]
        cnt = Counter(sizes)
        self.size_keys = sorted(cnt)
        self.counts = [cnt[k] for k in self.size_keys]
        self.max_nodes = max_nodes
        self.nodes = 0
        self.dead: set = set()
        self.zero = spec.index(spec.identity)

    def run(self):
        full = (1 << self.n) - 1
        out: list = []
        if self._rec(full, out):
            return [[self.elems[i] for i in part] for part in out]
        return None

    def _pairs_available(self, mask):
        k = 0
        m = mask
        inv = self.inv_pos
        while m:
            low = m & -m
            i = low.bit_length() - 1
            m ^= low
            j = inv[i]
            if j > i and (mask >> j) & 1:
                k += 1
        return k

    def _rec(self, mask, out):
        if mask == 0:
            return True
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise _OutOfBudget
        counts = self.counts
        open_kinds = [k for k, c in zip(self.size_keys, counts) if c]
        if len(open_kinds) == 1 and counts[self.size_keys.index(open_kinds[0])] == 1:
            # a single part left: the remaining set sums to zero automatically
            out.append([i for i in range(self.n) if (mask >> i) & 1])
            return True
        key = (mask, tuple(counts))
        if key in self.dead:
            return False
        if 2 in self.size_keys:
            need = counts[self.size_keys.index(2)]
            if need and self._pairs_available(mask) < need:
                self.dead.add(key)
                return False
        x = (mask & -mask).bit_length() - 1
        rest_mask = mask ^ (1 << x)
        rem = [i for i in range(x + 1, self.n) if (rest_mask >> i) & 1]
        for si, r in enumerate(self.size_keys):
            if not counts[si]:
                continue
            counts[si] -= 1
            for part in self._parts_with(x, r, rem, rest_mask):
                pm = 0
                for i in part:
                    pm |= 1 << i
                out.append(part)
                if self._rec(mask & ~pm, out):
                    counts[si] += 1
                    return True
                out.pop()
            counts[si] += 1
        self.dead.add(key)
        return False

    def _parts_with(self, x, r, rem, rest_mask):
        """Zero-sum r-subsets {x} + chosen from ``rem`` in lexicographic order."""
        add, neg, pos, codes = self.add, self.neg, self.pos, self.codes
        cx = codes[x]
        if r == 1:
            if cx == self.zero:
                yield [x]
            return
        if r == 2:
            j = pos[neg[cx]]
            if j > x and (rest_mask >> j) & 1:
                yield [x, j]
            return
        depth = r - 2
        m = len(rem)
        chosen = [x]

        def gen(start, s, left):
            if left == 0:
                j = pos[neg[s]]
                if j > chosen[-1] and (rest_mask >> j) & 1:
                    yield chosen + [j]
                return
            # leave room for the remaining picks and the forced last element
            for t in range(start, m - left):
                i = rem[t]
                chosen.append(i)
                yield from gen(t + 1, add[s][codes[i]], left - 1)
                chosen.pop()

        yield from gen(0, cx, depth)


def randomized_partition(spec: GroupSpec, ground: Iterable[Element] | None, sizes: Sequence[int],
                         tries: int = 200, seed: int = 0, tail: int = 15) -> SearchResult:
    """Seeded greedy restarts, finishing the last ``tail`` elements exhaustively.

    Never reports infeasibility: a miss comes back as BUDGET_EXCEEDED.  Useful
    where solutions are plentiful but the exhaustive order is unlucky.
    """
    elems = sorted(set(spec.check(e) for e in ground)) if ground is not None else spec.nonzero()
    sizes = sorted((int(s) for s in sizes), reverse=True)
    if sum(sizes) != len(elems):
        raise InputError(f"sizes sum to {sum(sizes)} but the ground set has {len(elems)} elements")
    if any(s < 1 for s in sizes):
        raise InputError("sizes must be positive")
    if spec.total(elems) != spec.identity:
        return SearchResult(INFEASIBLE, None, 0)
    rng = random.Random(seed)
    nodes = 0
    for _ in range(tries):
        left = set(elems)
        parts: list[list[Element]] = []
        todo = list(sizes)
        rng.shuffle(todo)
        ok = True
        while todo and len(left) > tail:
            r = todo[-1]
            pool = sorted(left)
            for _attempt in range(60):
                nodes += 1
                pick = rng.sample(pool, r - 1)
                last = spec.neg(spec.total(pick))
                if last in left and last not in pick:
                    part = pick + [last]
                    break
            else:
                ok = False
                break
            todo.pop()
            parts.append(part)
            left.difference_update(part)
        if not ok:
            continue
        if todo:
            res = search_partition(spec, left, todo, SearchBudget(20_000))
            nodes += res.nodes
            if res.outcome != FOUND:
                continue
            parts.extend(list(p) for p in res.partition.parts)
        result = ZeroSumPartition.build(spec, parts, elems)
        if result.verify(sizes).ok:
            return SearchResult(FOUND, result, nodes)
    return SearchResult(BUDGET_EXCEEDED, None, nodes)


# ---------------------------------------------------------------- exhaustive tables

def integer_partitions(total: int, min_part: int, max_part: int | None = None):
    """Partitions of ``total`` into parts >= min_part, each as an ascending list."""
    if max_part is None:
        max_part = total

    def rec(t, lo):
        if t == 0:
            yield []
            return
        for k in range(lo, min(t, max_part) + 1):
            if t - k == 0 or t - k >= k:
                for rest in rec(t - k, k):
                    yield [k] + rest

    yield from rec(total, min_part)


@dataclass
class RealizabilityTable:
    spec: GroupSpec
    min_part: int
    verdicts: dict = field(default_factory=dict)

    def realizable(self) -> list[tuple[int, ...]]:
        return [k for k, v in self.verdicts.items() if v == FOUND]

    def infeasible(self) -> list[tuple[int, ...]]:
        return [k for k, v in self.verdicts.items() if v == INFEASIBLE]


def enumerate_realizable(spec: GroupSpec, min_part: int,
                         order_bound: int = EXHAUSTIVE_ORDER_BOUND) -> RealizabilityTable:
    """Verdict for every size multiset with parts >= min_part summing to |G| - 1."""
    if spec.order > order_bound:
        raise CapabilityExceeded(f"{spec} has order {spec.order} > exhaustive bound {order_bound}")
    table = RealizabilityTable(spec, min_part)
    for sizes in integer_partitions(spec.order - 1, min_part):
        res = search_partition(spec, None, sizes, SearchBudget(None))
        table.verdicts[tuple(sizes)] = res.outcome
    return table


# ---------------------------------------------------------------- pruning rule

@dataclass(frozen=True)
class PartialState:
    """A snapshot of the search: unused elements, the part being built, sizes still open."""

    spec: GroupSpec
    remaining: frozenset
    open_part: tuple[Element, ...] = ()
    open_size: int = 0
    sizes_left: tuple[int, ...] = ()


def prune_bound(state: PartialState) -> str:
    """Return "cut" if the state cannot lead to a canonical solution, else "keep"."""
    spec = state.spec
    rem = state.remaining
    need = sum(state.sizes_left) + (state.open_size - len(state.open_part))
    if need != len(rem):
        return "cut"
    if spec.add(spec.total(rem), spec.total(state.open_part)) != spec.identity:
        return "cut"
    if state.open_part and rem and min(state.open_part) > min(rem):
        return "cut"
    twos = sum(1 for s in state.sizes_left if s == 2)
    if twos:
        avail = sum(1 for e in rem if spec.neg(e) in rem and spec.neg(e) > e)
        if avail < twos:
            return "cut"
    return "keep"
