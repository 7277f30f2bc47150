"""Classification and the top-level realize dispatcher."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from ..errors import (
    CapabilityExceeded,
    ConstructionUnavailable,
    FloorViolation,
    InputError,
    InternalExhaustion,
    PreconditionViolated,
    Unrealizable,
)
from ..groups import GroupSpec, involution_count, sylow2_split
from ..oracle import (
    BUDGET_EXCEEDED,
    EXHAUSTIVE_ORDER_BOUND,
    FOUND,
    SearchBudget,
    randomized_partition,
    search_partition,
)
from ..partition import TripleABC, ZeroSumPartition, normalize_sizes
from .assemble import PlanError
from .constructions import (
    _checked,
    realize_1mod6,
    realize_3mod6,
    realize_5mod6,
    realize_odd_traced,
    realize_quadruple,
    realize_two_group,
    skolem_r_route,
)
from .trace import ConstructionTrace

NO_ZSPP = "NoZspp"
TWO_ZSPP = "TwoZspp"
THREE_ZSPP = "ThreeZspp"
FOUR_ZSPP_ONLY_KNOWN = "FourZsppOnlyKnown"

_FLOOR = {TWO_ZSPP: 2, THREE_ZSPP: 3, FOUR_ZSPP_ONLY_KNOWN: 4}


@dataclass(frozen=True)
class ZsppClass:
    verdict: str
    justification: str

    @property
    def floor(self) -> int | None:
        return _FLOOR.get(self.verdict)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "justification": self.justification, "floor": self.floor}


def classify(spec: GroupSpec) -> ZsppClass:
    """Smallest part size for which every size request is known to be realizable."""
    inv = involution_count(spec)
    if inv == 1:
        return ZsppClass(NO_ZSPP, "exactly one involution: the non-zero elements sum to it")
    if inv == 0:
        return ZsppClass(TWO_ZSPP, "odd order: Skolem partition of the non-zero elements")
    if inv == 3:
        return ZsppClass(TWO_ZSPP, "exactly three involutions: 2-ZSPP")
    split = sylow2_split(spec)
    h = split.H.order
    if h == 1:
        return ZsppClass(THREE_ZSPP, "2-group with more than three involutions: 3-ZSPP")
    if h % 6 == 1:
        return ZsppClass(THREE_ZSPP, "product construction, |H| = 1 mod 6")
    if h % 6 == 3:
        return ZsppClass(THREE_ZSPP, "product construction, |H| = 3 mod 6")
    return ZsppClass(FOUR_ZSPP_ONLY_KNOWN, "product construction, |H| = 5 mod 6; parts of size 3 open")


def _non_involution_count(spec: GroupSpec) -> int:
    return spec.order - 1 - involution_count(spec)


def realize(spec: GroupSpec, sizes: Sequence[int]) -> tuple[ZeroSumPartition, ConstructionTrace]:
    """A verified partition of the non-zero elements with the requested sizes."""
    sizes = [int(s) for s in sizes]
    if not sizes or any(s < 1 for s in sizes):
        raise InputError("sizes must be positive")
    if sum(sizes) != spec.order - 1:
        raise InputError(f"sizes sum to {sum(sizes)}, expected |G| - 1 = {spec.order - 1}")
    cls = classify(spec)
    if cls.verdict == NO_ZSPP:
        raise Unrealizable(f"{spec} has exactly one involution, so no zero-sum partition exists")
    if 1 in sizes:
        raise FloorViolation("a zero-sum part of size 1 would have to be {0}", "refuted")
    twos = sizes.count(2)
    if twos * 2 > _non_involution_count(spec):
        raise FloorViolation(
            f"{twos} parts of size 2 need {twos} disjoint inverse pairs; only "
            f"{_non_involution_count(spec) // 2} exist", "refuted")
    if min(sizes) >= cls.floor:
        return realize_any_traced(spec, sizes)
    return _below_floor(spec, sizes, cls)


def _below_floor(spec: GroupSpec, sizes: list[int], cls: ZsppClass):
    split = sylow2_split(spec)
    L, H = split.L, split.H
    if cls.verdict == FOUR_ZSPP_ONLY_KNOWN and min(sizes) >= 3 and \
            L.factors == (2, 2, 2) and H.order == 5:
        # every triple is covered by the stored tables and the Z2 lift
        return _five_with_threes(spec, sizes)
    if cls.verdict == THREE_ZSPP and H.order % 6 == 1 and H.order > 1 and \
            L.rank % 2 == 0 and all(f == 2 for f in L.factors):
        rest = [s for s in sizes if s != 2]
        norm = normalize_sizes(rest, "min3") if rest else None
        refined = list(norm.refined) if norm else []
        omega = sizes.count(2)
        t = TripleABC.from_sizes(refined) if refined else TripleABC(0, 0, 0)
        part, trace = realize_quadruple(spec, (omega, t.a, t.b, t.c))
        return _recombine(spec, part, sizes, norm, omega), trace
    if spec.order <= EXHAUSTIVE_ORDER_BOUND:
        res = search_partition(spec, None, sizes, SearchBudget(None))
        trace = ConstructionTrace("exhaustive search", "below the known floor")
        if res.outcome == FOUND:
            return res.partition, trace
        raise FloorViolation(f"exhaustive search shows {sorted(sizes)} is not realizable in {spec}",
                             "refuted")
    raise FloorViolation(f"parts below {cls.floor} are not covered for {spec} ({cls.justification})",
                         "open")


def _five_with_threes(spec: GroupSpec, sizes: list[int]):
    from .constructions import _fixture_or_lift
    norm = normalize_sizes(sizes, "min3")
    t = TripleABC.from_sizes(norm.refined)
    trace = ConstructionTrace("product, |H| = 5 mod 6", "", {"L": [2, 2, 2], "H": [5]})
    part, trace = _fixture_or_lift(spec, t, trace, realize_any_traced)
    by: dict = {}
    for p in part.parts:
        by.setdefault(len(p), []).append(list(p))
    refined = [by[s].pop() for s in norm.refined]
    return _checked(spec, norm.recombine(refined), sizes), trace


def _recombine(spec, part: ZeroSumPartition, sizes, norm, omega):
    by: dict = {}
    for p in part.parts:
        by.setdefault(len(p), []).append(list(p))
    out = [by[2].pop() for _ in range(omega)]
    if norm is not None:
        refined = [by[s].pop() for s in norm.refined]
        out += norm.recombine(refined)
    return _checked(spec, out, sorted(sizes))


_FALLBACK_ERRORS = (ConstructionUnavailable, PreconditionViolated, PlanError,
                    InternalExhaustion, CapabilityExceeded)


def realize_any_traced(spec: GroupSpec, sizes: Sequence[int]) -> tuple[ZeroSumPartition, ConstructionTrace]:
    """Route a request whose sizes meet the group's floor."""
    sizes = [int(s) for s in sizes]
    inv = involution_count(spec)
    if inv == 0:
        return realize_odd_traced(spec, sizes)
    if inv == 1:
        raise Unrealizable(f"{spec} has exactly one involution")
    split = sylow2_split(spec)
    notes: list[str] = []
    if split.H.order == 1 and min(sizes) >= 3:
        try:
            part = realize_two_group(spec, sizes)
            return part, ConstructionTrace("2-group", "oracle (memoized)",
                                           {"refined": dict(sorted(Counter(
                                               normalize_sizes(sizes, "min3").refined).items()))})
        except _FALLBACK_ERRORS as exc:
            notes.append(f"2-group oracle: {exc}")
    elif split.H.order > 1 and min(sizes) >= 3:
        try:
            return _product_route(spec, sizes)
        except _FALLBACK_ERRORS as exc:
            notes.append(f"product construction: {exc}")
    if inv == 3:
        try:
            parts, info = skolem_r_route(spec, sizes)
            trace = ConstructionTrace("involution core + Skolem partition", "three involutions", info)
            trace.notes.extend(notes)
            return _checked(spec, parts, sizes), trace
        except _FALLBACK_ERRORS as exc:
            notes.append(f"involution core route: {exc}")
    return _oracle_fallback(spec, sizes, notes)


def _product_route(spec: GroupSpec, sizes: list[int]):
    h = sylow2_split(spec).H.order
    if h % 6 == 5:
        if min(sizes) < 4:
            raise ConstructionUnavailable("parts of size 3 with |H| = 5 mod 6")
        return realize_5mod6(spec, sizes, realize_any_traced)
    norm = normalize_sizes(sizes, "min3")
    t = TripleABC.from_sizes(norm.refined)
    if h % 6 == 1:
        part, trace = realize_1mod6(spec, t)
    else:
        part, trace = realize_3mod6(spec, t, realize_any_traced)
    by: dict = {}
    for p in part.parts:
        by.setdefault(len(p), []).append(list(p))
    refined = [by[s].pop() for s in norm.refined]
    return _checked(spec, norm.recombine(refined), sizes), trace


def _oracle_fallback(spec: GroupSpec, sizes: list[int], notes: list[str]):
    budget = SearchBudget.from_env()
    # elements of 2-power order first: the product structure makes this far faster
    split = sylow2_split(spec)
    two_part = [split.join(l, split.H.identity) for l in split.L.nonzero()]
    res = randomized_partition(spec, None, sizes)
    label = "seeded restarts"
    if res.outcome != FOUND:
        res = search_partition(spec, None, sizes, budget, priority=two_part)
        label = "oracle fallback"
    trace = ConstructionTrace(label, res.outcome, {"nodes": res.nodes})
    trace.notes.extend(notes)
    if res.outcome == FOUND:
        return res.partition, trace
    if res.outcome == BUDGET_EXCEEDED:
        raise CapabilityExceeded(f"oracle budget exhausted for {sorted(sizes)} in {spec}; "
                                 f"raise ZSP_ORACLE_BUDGET. Earlier routes: {notes}")
    raise InternalExhaustion(f"oracle reports {sorted(sizes)} infeasible in {spec}, "
                             f"contradicting the classification")
