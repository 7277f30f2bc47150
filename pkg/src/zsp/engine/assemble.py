"""Shared assembly machinery for the product constructions.

A construction splits the ground set into three kinds of pieces:

* a *region* (for instance L* x {0}) that a sub-solver partitions into any
  requested loads of size >= 3;
* *fixed* zero-sum pieces whose elements are already decided;
* a *pool* of good sixes and loose zero-sum pairs.  A six is used either as
  two zero-sum triples or as three zero-sum pairs.

Every part receives at most one region load or one fixed piece.  What is
left of a part (its residual) is filled from the pool: one triple when the
residual is odd, pairs for the rest.  A residual of 1 is never allowed.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from ..errors import ZspError
from ..groups import Element
from ..partition import GoodSixSubset


class PlanError(ZspError):
    """No load or piece assignment satisfies the pool constraints."""


@dataclass
class Region:
    name: str
    elements: tuple[Element, ...]
    realize: Callable[[list[int]], list[list[Element]]]
    floor: int = 3


@dataclass
class Pool:
    sixes: list[GoodSixSubset] = field(default_factory=list)
    pairs: list[tuple[Element, Element]] = field(default_factory=list)

    @property
    def size(self) -> int:
        return 6 * len(self.sixes) + 2 * len(self.pairs)

    def elements(self) -> list[Element]:
        out: list[Element] = []
        for six in self.sixes:
            out.extend(six.elements)
        for p in self.pairs:
            out.extend(p)
        return out

    def describe(self) -> dict:
        return {"sixes": len(self.sixes), "pairs": len(self.pairs)}


def _load_ok(r: int, x: int, floor: int) -> bool:
    if x == 0:
        return True
    return floor <= x <= r and r - x != 1


def plan_loads(part_sizes: Sequence[int], region_size: int, max_odd: int,
               floor: int = 3) -> list[int]:
    """Region load per part minimizing the number of odd residuals.

    Dynamic programming over parts and total load; raises PlanError when the
    best plan still needs more pool triples than ``max_odd``.
    """
    inf = 10**9
    P = len(part_sizes)
    # best[i][t]: min odd residuals over parts i.. when t region elements remain
    best = [[inf] * (region_size + 1) for _ in range(P + 1)]
    choice = [[-1] * (region_size + 1) for _ in range(P + 1)]
    best[P][0] = 0
    for i in range(P - 1, -1, -1):
        r = part_sizes[i]
        opts = [0] + [x for x in range(floor, r + 1) if _load_ok(r, x, floor)]
        for t in range(region_size + 1):
            for x in opts:
                if x > t:
                    continue
                res = r - x
                if res == 1:
                    continue
                v = best[i + 1][t - x]
                if v >= inf:
                    continue
                v += res % 2
                if v < best[i][t]:
                    best[i][t] = v
                    choice[i][t] = x
    if best[0][region_size] >= inf:
        raise PlanError(f"region of size {region_size} cannot be spread over {list(part_sizes)}")
    if best[0][region_size] > max_odd:
        raise PlanError(f"plan needs {best[0][region_size]} pool triples, only {max_odd} available")
    loads, t = [], region_size
    for i in range(P):
        x = choice[i][t]
        loads.append(x)
        t -= x
    return loads


def plan_assignment(part_sizes: Sequence[int], piece_sizes: Sequence[int],
                    max_odd: int) -> list[int | None]:
    """Place every fixed piece into a distinct part, minimizing odd residuals.

    The placement is a transportation problem between piece sizes and part
    sizes; it is solved as a small integer program.  Returns, per part, the
    index of its piece or None.
    """
    parts_by = defaultdict(list)
    for i, r in enumerate(part_sizes):
        parts_by[r].append(i)
    pieces_by = defaultdict(list)
    for j, f in enumerate(piece_sizes):
        pieces_by[f].append(j)
    R = sorted(parts_by)
    F = sorted(pieces_by)
    arcs = [(f, r) for f in F for r in R if _load_ok(r, f, 1) and f > 0]
    base_odd = sum(r % 2 for r in part_sizes)
    out: list[int | None] = [None] * len(part_sizes)
    if not piece_sizes:
        if base_odd > max_odd:
            raise PlanError(f"plan needs {base_odd} pool triples, only {max_odd} available")
        return out
    if not arcs:
        raise PlanError("no part can host the fixed pieces")
    cost = np.array([((r - f) % 2) - (r % 2) for f, r in arcs], dtype=float)
    A_eq = np.zeros((len(F), len(arcs)))
    A_ub = np.zeros((len(R), len(arcs)))
    for k, (f, r) in enumerate(arcs):
        A_eq[F.index(f), k] = 1
        A_ub[R.index(r), k] = 1
    supply = [len(pieces_by[f]) for f in F]
    cap = [len(parts_by[r]) for r in R]
    res = milp(cost, integrality=np.ones(len(arcs)),
               bounds=Bounds(0, np.inf),
               constraints=[LinearConstraint(A_eq, supply, supply),
                            LinearConstraint(A_ub, 0, cap)])
    if res.status != 0 or res.x is None:
        raise PlanError("fixed pieces cannot be placed")
    x = np.rint(res.x).astype(int)
    odd = base_odd + int(round(float(cost @ x)))
    if odd > max_odd:
        raise PlanError(f"plan needs {odd} pool triples, only {max_odd} available")
    free_parts = {r: list(parts_by[r]) for r in R}
    free_pieces = {f: list(pieces_by[f]) for f in F}
    for k, (f, r) in enumerate(arcs):
        for _ in range(x[k]):
            out[free_parts[r].pop(0)] = free_pieces[f].pop(0)
    return out


def execute(part_sizes: Sequence[int], pool: Pool, *,
            loads: Sequence[int] | None = None, region: Region | None = None,
            pieces: Sequence[Sequence[Element]] = (),
            assignment: Sequence[int | None] | None = None) -> list[list[Element]]:
    """Build the parts (in the order of ``part_sizes``) from a finished plan."""
    P = len(part_sizes)
    parts: list[list[Element]] = [[] for _ in range(P)]
    used = [0] * P
    if loads is not None and any(loads):
        if region is None:
            raise PlanError("loads given without a region")
        wanted = [x for x in loads if x]
        got = region.realize(wanted)
        by_size: dict[int, list] = defaultdict(list)
        for p in got:
            by_size[len(p)].append(list(p))
        for i, x in enumerate(loads):
            if x:
                parts[i].extend(by_size[x].pop())
                used[i] += x
    if assignment is not None:
        for i, j in enumerate(assignment):
            if j is not None:
                parts[i].extend(pieces[j])
                used[i] += len(pieces[j])
    residual = [r - u for r, u in zip(part_sizes, used)]
    if any(x < 0 or x == 1 for x in residual):
        raise PlanError(f"invalid residuals {residual}")
    odd = [i for i in range(P) if residual[i] % 2]
    if len(odd) % 2 or len(odd) > 2 * len(pool.sixes):
        raise PlanError(f"{len(odd)} odd residuals for {len(pool.sixes)} sixes")
    n6 = len(odd) // 2
    triples: list = []
    for six in pool.sixes[:n6]:
        triples.extend(six.triples())
    pairs: list = []
    for six in pool.sixes[n6:]:
        pairs.extend(six.pairs())
    pairs.extend(pool.pairs)
    ti = pi = 0
    for i in range(P):
        need = residual[i]
        if need % 2:
            parts[i].extend(triples[ti])
            ti += 1
            need -= 3
        for _ in range(need // 2):
            if pi >= len(pairs):
                raise PlanError("pool ran out of pairs")
            parts[i].extend(pairs[pi])
            pi += 1
    if pi != len(pairs):
        raise PlanError(f"{len(pairs) - pi} pool pairs left over")
    return parts


def assemble(part_sizes: Sequence[int], pool: Pool, *, region: Region | None = None,
             pieces: Sequence[Sequence[Element]] = (),
             region_plan: Sequence[int] | None = None) -> tuple[list[list[Element]], dict]:
    """Plan and execute; returns the parts plus a summary for the trace.

    With a region, ``region_plan`` is an optional load multiset tried first
    (placed like fixed pieces); the load DP is the fallback.
    """
    max_odd = 2 * len(pool.sixes)
    info: dict = {"pool": pool.describe()}
    if region is not None:
        if region_plan is not None:
            info["regionPlan"] = sorted(region_plan)
            if sum(region_plan) == len(region.elements) and all(
                    x >= region.floor for x in region_plan):
                try:
                    asg = plan_assignment(part_sizes, list(region_plan), max_odd)
                    loads = [region_plan[j] if j is not None else 0 for j in asg]
                    info["planner"] = "case plan"
                    return execute(part_sizes, pool, loads=loads, region=region), info
                except PlanError as exc:
                    info["casePlanRejected"] = str(exc)
            else:
                info["casePlanRejected"] = "load multiset does not match the region"
        loads = plan_loads(part_sizes, len(region.elements), max_odd, region.floor)
        info["planner"] = "load DP"
        info["loads"] = dict(sorted(Counter(x for x in loads if x).items()))
        return execute(part_sizes, pool, loads=loads, region=region), info
    asg = plan_assignment(part_sizes, [len(p) for p in pieces], max_odd)
    info["planner"] = "piece assignment"
    info["pieces"] = dict(sorted(Counter(len(p) for p in pieces).items()))
    return execute(part_sizes, pool, pieces=pieces, assignment=asg), info
