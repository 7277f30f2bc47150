"""Product constructions for Gamma = L x H (L a 2-group, H of odd order).

Every construction decomposes Gamma* into a region realized by a sub-solver,
fixed zero-sum pieces and a pool of good sixes and pairs, then hands the
pieces to :mod:`zsp.engine.assemble`.
"""
from __future__ import annotations

import threading
from collections import Counter
from typing import Sequence

from ..errors import (
    CapabilityExceeded,
    ConstructionUnavailable,
    FloorViolation,
    InputError,
    InternalExhaustion,
    PreconditionViolated,
    Unsupported,
)
from ..groups import (
    Element,
    GroupSpec,
    find_complete_mapping,
    involution_count,
    involutions,
    subgroup_and_reps,
    subgroup_structure,
    sylow2_split,
)
from ..oracle import FOUND, SearchBudget, randomized_partition, search_partition
from ..partition import (
    QuadrupleWABC,
    TripleABC,
    ZeroSumPartition,
    normalize_sizes,
)
from ..skolem import good_six, skolem_partition, skolem_subset
from .assemble import PlanError, Pool, Region, assemble
from .fixtures import base_fixtures
from .lift import lift_by_z2
from .trace import ConstructionTrace

TWO_GROUP_ORDER_BOUND = 2**7


# ---------------------------------------------------------------- 2-groups

_TG_LOCK = threading.Lock()
_TG_CACHE: dict = {}


def realize_two_group(L: GroupSpec, sizes: Sequence[int],
                      budget: SearchBudget | None = None) -> ZeroSumPartition:
    """Partition L* into parts of the given sizes (all >= 3) by search.

    Sizes are first refined into {3, 4, 5}; seeded restarts run before the
    exhaustive oracle and results are memoized.
    """
    sizes = [int(s) for s in sizes]
    if any(n & (n - 1) for n in L.factors):
        raise PreconditionViolated(f"{L} is not a 2-group")
    if involution_count(L) <= 1:
        raise PreconditionViolated(f"{L} has at most one involution")
    if any(s < 3 for s in sizes):
        raise PreconditionViolated("2-group realizations need parts of size >= 3")
    if sum(sizes) != L.order - 1:
        raise InputError(f"sizes sum to {sum(sizes)}, expected {L.order - 1}")
    if L.order > TWO_GROUP_ORDER_BOUND:
        raise CapabilityExceeded(f"|L| = {L.order} exceeds the oracle bound {TWO_GROUP_ORDER_BOUND}")
    norm = normalize_sizes(sizes, "min3")
    key = (L.factors, tuple(sorted(norm.refined)))
    with _TG_LOCK:
        hit = _TG_CACHE.get(key)
    if hit is None:
        res = randomized_partition(L, None, norm.refined)
        if res.outcome != FOUND:
            res = search_partition(L, None, norm.refined, budget or SearchBudget.from_env())
        if res.outcome != FOUND:
            raise InternalExhaustion(f"oracle on {L} for {sorted(norm.refined)}: {res.outcome}")
        hit = res.partition
        with _TG_LOCK:
            _TG_CACHE[key] = hit
    by_size: dict[int, list] = {}
    for p in hit.parts:
        by_size.setdefault(len(p), []).append(p)
    refined = [list(by_size[s].pop()) for s in norm.refined]
    out = ZeroSumPartition.build(L, norm.recombine(refined))
    rep = out.verify(sizes)
    if not rep.ok:  # pragma: no cover - guards recombination
        raise AssertionError(rep.issues)
    return out


# ---------------------------------------------------------------- odd order

def realize_odd(H: GroupSpec, sizes: Sequence[int]) -> ZeroSumPartition:
    """Parts of sizes >= 2 in H* from a Skolem partition of H*."""
    part, _ = realize_odd_traced(H, sizes)
    return part


def realize_odd_traced(H: GroupSpec, sizes: Sequence[int]):
    sizes = [int(s) for s in sizes]
    if H.order % 2 == 0:
        raise PreconditionViolated(f"{H} has even order")
    if any(s < 2 for s in sizes):
        raise PreconditionViolated("odd-order realizations need parts of size >= 2")
    if sum(sizes) != H.order - 1:
        raise InputError(f"sizes sum to {sum(sizes)}, expected {H.order - 1}")
    trace = ConstructionTrace("odd order: Skolem partition", "pool only")
    sk = skolem_partition(H)
    pool = Pool(list(sk.sixes), list(sk.pairs))
    try:
        parts, info = assemble(sizes, pool)
        trace.decomposition.update(info)
    except PlanError as exc:
        trace.note(f"allocation failed ({exc}); oracle fallback")
        res = search_partition(H, None, sizes, SearchBudget.from_env())
        if res.outcome != FOUND:
            raise InternalExhaustion(f"oracle fallback on {H}: {res.outcome}")
        return _checked(H, res.partition.parts, sizes), trace
    return _checked(H, parts, sizes), trace


def _checked(spec: GroupSpec, parts, sizes, ground=None) -> ZeroSumPartition:
    out = ZeroSumPartition.build(spec, parts, ground)
    rep = out.verify(list(sizes))
    if not rep.ok:
        raise InternalExhaustion(f"construction produced an invalid partition: {rep.issues[:3]}")
    return out


# ---------------------------------------------------------------- product context

class Product:
    """Gamma = L x H with a normalized complete mapping of L and H's Skolem partition."""

    def __init__(self, spec: GroupSpec, need_cm: bool = True):
        self.spec = spec
        self.split = sylow2_split(spec)
        self.L, self.H = self.split.L, self.split.H
        if self.L.order == 1 or self.H.order == 1:
            raise PreconditionViolated(f"{spec} is not a mixed group")
        if involution_count(self.L) <= 1:
            raise PreconditionViolated(f"the Sylow 2-subgroup of {spec} has at most one involution")
        self.n = self.L.order - 1
        self.phi: dict = {}
        self.varphi: dict = {}
        if need_cm:
            self.phi, self.varphi = normalized_mapping(self.L)
        self.sk = skolem_partition(self.H)

    def el(self, l: Element, h: Element) -> Element:
        return self.split.join(l, h)

    def m_elements(self) -> list[Element]:
        return [self.el(a, self.H.identity) for a in self.L.nonzero()]

    def m_region(self) -> Region:
        zero = self.H.identity

        def realize(loads: list[int]) -> list[list[Element]]:
            part = realize_two_group(self.L, loads)
            by: dict = {}
            for p in part.parts:
                by.setdefault(len(p), []).append([self.el(a, zero) for a in p])
            return [by[x].pop() for x in loads]

        return Region("M*", tuple(self.m_elements()), realize)

    def w_sixes(self, h_sixes, a_set=None) -> list:
        """Good sixes (a, b), (phi(a), c), ... over a in ``a_set`` (default L)."""
        a_set = self.L.elements() if a_set is None else a_set
        out = []
        for six in h_sixes:
            for a in a_set:
                out.append(good_six(self.spec, self.el(a, six.c), self.el(self.phi[a], six.d)))
        return out

    def h_pairs(self, b: Element) -> list[tuple[Element, Element]]:
        """{(a, b), (-a, -b)} for a in L."""
        nb = self.H.neg(b)
        return [(self.el(a, b), self.el(self.L.neg(a), nb)) for a in self.L.elements()]


def normalized_mapping(G: GroupSpec) -> tuple[dict, dict]:
    """Complete mapping pair with phi(0) = varphi(0) = 0."""
    cm = find_complete_mapping(G)
    p0, v0 = cm.phi[G.identity], cm.varphi[G.identity]
    phi = {g: G.sub(cm.phi[g], p0) for g in G.elements()}
    varphi = {g: G.sub(cm.varphi[g], v0) for g in G.elements()}
    return phi, varphi


def split_index(seq: Sequence[int], n: int) -> tuple[int, int, int]:
    """1-based l with sum(seq[:l-1]) <= n < sum(seq[:l]), r'_l and r''_l."""
    acc = 0
    for i, r in enumerate(seq):
        if acc + r > n:
            return i + 1, n - acc, r - (n - acc)
        acc += r
    raise InputError("the parts do not exceed the region")


def _triple_sizes(spec: GroupSpec, triple) -> tuple[TripleABC, list[int]]:
    t = triple if isinstance(triple, TripleABC) else TripleABC(*triple)
    if t.total != spec.order - 1:
        raise InputError(f"3*{t.a} + 4*{t.b} + 5*{t.c} = {t.total}, expected {spec.order - 1}")
    return t, [3] * t.a + [5] * t.c + [4] * t.b


def _triple_pieces(ctx: Product, b: Element, a_set) -> list[list[Element]]:
    """{(a, 0), (phi(a), b), (varphi(a), -b)} for a in ``a_set``."""
    zero, nb = ctx.H.identity, ctx.H.neg(b)
    return [[ctx.el(a, zero), ctx.el(ctx.phi[a], b), ctx.el(ctx.varphi[a], nb)] for a in a_set]


# ---------------------------------------------------------------- |H| = 1 mod 6

_H = ("0", "b", "-b", "c", "-c", "bc", "-bc")

# three 5-sets covering M* and (a, +-b1) for a in {0, i1, i2, i3}
TEMPLATE_FIVES = (
    (("100", "0"), ("010", "0"), ("111", "0"), ("001", "b"), ("000", "-b")),
    (("110", "0"), ("101", "0"), ("011", "0"), ("100", "b"), ("100", "-b")),
    (("001", "0"), ("001", "-b"), ("000", "b"), ("010", "b"), ("010", "-b")),
)

# 15 triples and 2 fives covering M* and L x {+-b1, +-c1, +-(b1 + c1)}
TEMPLATE_MIXED = (
    (("001", "0"), ("000", "b"), ("001", "-b")),
    (("100", "0"), ("001", "b"), ("101", "-b")),
    (("111", "0"), ("011", "b"), ("100", "-b")),
    (("010", "b"), ("000", "c"), ("010", "-bc")),
    (("101", "b"), ("001", "c"), ("100", "-bc")),
    (("010", "0"), ("010", "c"), ("000", "-c")),
    (("000", "bc"), ("010", "-c"), ("010", "-b")),
    (("001", "bc"), ("001", "-c"), ("000", "-b")),
    (("010", "bc"), ("100", "-c"), ("110", "-b")),
    (("100", "bc"), ("011", "-c"), ("111", "-b")),
    (("100", "b"), ("111", "c"), ("011", "-bc")),
    (("111", "b"), ("110", "c"), ("001", "-bc")),
    (("110", "b"), ("011", "c"), ("101", "-bc")),
    (("101", "bc"), ("110", "-c"), ("011", "-b")),
    (("011", "0"), ("100", "c"), ("111", "-c")),
    (("101", "0"), ("101", "c"), ("011", "bc"), ("110", "-bc"), ("101", "-c")),
    (("110", "0"), ("110", "bc"), ("111", "bc"), ("000", "-bc"), ("111", "-bc")),
)


def instantiate_template(ctx: Product, template, b: Element, c: Element) -> list[list[Element]]:
    H = ctx.H
    bc = H.add(b, c)
    val = {"0": H.identity, "b": b, "-b": H.neg(b), "c": c, "-c": H.neg(c),
           "bc": bc, "-bc": H.neg(bc)}
    out = []
    for piece in template:
        out.append([ctx.el(tuple(int(ch) for ch in a), val[h]) for a, h in piece])
    for piece in out:
        if ctx.spec.total(piece) != ctx.spec.identity or len(set(piece)) != len(piece):
            raise InternalExhaustion("template piece is not a zero-sum set")
    return out


def _is_z2_cubed(L: GroupSpec) -> bool:
    return L.factors == (2, 2, 2)


def _case_1mod6(t: TripleABC, n: int, l: int, r1: int, r2: int, seq):
    """Case tag plus either a load multiset for M* or a template name."""
    al, be, ga = t.a, t.b, t.c
    rl = seq[l - 1]
    if r1 != 1 and r1 != 2 and r2 != 1:
        plan = list(seq[:l - 1]) + ([r1] if r1 else [])
        return "generic split", plan, None
    if r2 == 1:
        tag = "Case 1: r''_l = 1"
        if rl == 3:
            if ga >= 1:
                return tag, [3] * (l - 2) + [5], None
            if be >= 2:
                return tag, [3] * (l - 3) + [4, 4], None
        elif rl == 5:
            if be > 0:
                return tag, [3] * al + [4] + [5] * (l - al - 1), None
            if n == 7:
                return tag + ", |L*| = 7", None, "fives"
            if al >= 2:
                return tag, [3] * (al - 2) + [5] * (l - al + 1), None
            return tag, [3] * (al + 3) + [5] * (l - al - 2), None
        return tag, None, None
    if r1 == 2:
        tag = "Case 2: r'_l = 2"
        if al >= 1:
            return tag, [3] * (al - 1) + [5] * (l - al), None
        if be >= 1:
            return tag, [4] + [5] * (l - 2) + [3], None
        if n == 7:
            return tag + ", |L*| = 7", None, "fives"
        return tag, [5] * (l - 3) + [3] * 4, None
    tag = "Case 3: r'_l = 1"
    if rl == 3:
        if be > 0:
            return tag, [3] * (l - 2) + [4], None
        if n == 7:
            return tag + ", |L*| = 7", None, "mixed"
        return tag, [3] * (l - 4) + [5, 5], None
    if rl == 5 and l >= 2 and seq[l - 2] == 5:
        return tag + ", r_(l-1) = 5", [3] * al + [5] * (l - 2 - al) + [3, 3], None
    if rl == 5:
        if be > 0:
            return tag + ", r_(l-1) = 3", [3] * (al - 1) + [4], None
        if n == 7:
            return tag + ", r_(l-1) = 3, |L*| = 7", None, "mixed"
        return tag + ", r_(l-1) = 3", [3] * (al - 3) + [5, 5], None
    return tag, None, None


def realize_1mod6(spec: GroupSpec, triple) -> tuple[ZeroSumPartition, ConstructionTrace]:
    """Realize (a, b, c) when |H| = 1 mod 6 and L has more than one involution."""
    ctx = Product(spec)
    if ctx.H.order % 6 != 1:
        raise PreconditionViolated(f"|H| = {ctx.H.order} is not 1 mod 6")
    t, seq = _triple_sizes(spec, triple)
    n = ctx.n
    l, r1, r2 = split_index(seq, n)
    case, plan, template = _case_1mod6(t, n, l, r1, r2, seq)
    trace = ConstructionTrace("product, |H| = 1 mod 6", case,
                              {"L": list(ctx.L.factors), "H": list(ctx.H.factors),
                               "l": l, "r'": r1, "r''": r2})
    sixes_h = list(ctx.sk.sixes)
    attempts = []
    if template is not None and _is_z2_cubed(ctx.L):
        attempts.append(("template", template))
    attempts.append(("region", plan))
    last: Exception | None = None
    for kind, arg in attempts:
        try:
            if kind == "template":
                parts, info = _run_template(ctx, seq, sixes_h, arg)
            else:
                pool = Pool(ctx.w_sixes(sixes_h))
                _check_w(ctx, pool, ctx.m_elements())
                parts, info = assemble(seq, pool, region=ctx.m_region(), region_plan=arg)
            trace.decomposition.update(info)
            trace.decomposition["route"] = kind if kind == "region" else f"template {arg}"
            return _checked(spec, parts, seq), trace
        except PlanError as exc:
            last = exc
            trace.note(f"{kind} route rejected: {exc}")
    raise ConstructionUnavailable(f"no plan for {tuple(t.sizes())} in {spec}: {last}")


def _run_template(ctx: Product, seq, sixes_h, which: str):
    first, rest = sixes_h[0], sixes_h[1:]
    b1, c1 = first.c, first.d
    L = ctx.L
    if which == "fives":
        pieces = instantiate_template(ctx, TEMPLATE_FIVES, b1, c1)
        L0 = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
        others = [a for a in L.elements() if a not in L0]
        sixes = ctx.w_sixes([first], others) + ctx.w_sixes(rest)
        pairs = []
        H = ctx.H
        for a in L0:
            pa, va = ctx.phi[a], ctx.varphi[a]
            pairs.append((ctx.el(pa, c1), ctx.el(L.neg(pa), H.neg(c1))))
            bc = H.add(b1, c1)
            pairs.append((ctx.el(va, H.neg(bc)), ctx.el(L.neg(va), bc)))
        pool = Pool(sixes, pairs)
    else:
        pieces = instantiate_template(ctx, TEMPLATE_MIXED, b1, c1)
        pool = Pool(ctx.w_sixes(rest))
    used = [x for p in pieces for x in p]
    if len(set(used) | set(pool.elements())) != ctx.spec.order - 1:
        raise InternalExhaustion("template and pool do not cover the group")
    parts, info = assemble(seq, pool, pieces=pieces)
    return parts, info


def _check_w(ctx: Product, pool: Pool, m_elems) -> None:
    """W must be a disjoint union of good sixes covering Gamma* minus M*."""
    w = pool.elements()
    if len(w) != len(set(w)) or set(w) & set(m_elems) or \
            len(w) + len(m_elems) != ctx.spec.order - 1:
        raise InternalExhaustion("W does not cover the complement of M*")


# ---------------------------------------------------------------- quadruples

def realize_quadruple(spec: GroupSpec, q) -> tuple[ZeroSumPartition, ConstructionTrace]:
    """Realize (omega, alpha, beta, gamma) in ((Z2)^(2k) x H)*, |H| = 1 mod 6."""
    q = q if isinstance(q, QuadrupleWABC) else QuadrupleWABC(*q)
    ctx = Product(spec)
    if ctx.H.order % 6 != 1:
        raise PreconditionViolated(f"|H| = {ctx.H.order} is not 1 mod 6")
    if any(f != 2 for f in ctx.L.factors) or ctx.L.rank % 2:
        raise PreconditionViolated(f"L = {ctx.L} is not (Z2)^(2k)")
    if q.total != spec.order - 1:
        raise InputError(f"2w + 3a + 4b + 5c = {q.total}, expected {spec.order - 1}")
    r_size = spec.order - 1 - ctx.n
    if 2 * q.omega > r_size:
        raise Unsupported(f"omega = {q.omega} exceeds |R|/2 = {r_size // 2}")
    seq = [3] * q.alpha + [5] * q.gamma + [2] * q.omega + [4] * q.beta
    l, r1, r2 = split_index(seq, ctx.n)
    generic = r1 != 1 and r1 != 2 and r2 != 1 and 2 not in seq[:l]
    case = "generic split" if generic else (
        "Case 1: r''_l = 1" if r2 == 1 else "Case 2: r'_l = 2" if r1 == 2 else "Case 3: r'_l = 1")
    trace = ConstructionTrace("product quadruple, |H| = 1 mod 6", case,
                              {"L": list(ctx.L.factors), "H": list(ctx.H.factors),
                               "l": l, "r'": r1, "r''": r2})
    plan = list(seq[:l - 1]) + ([r1] if r1 else []) if generic else None
    pool = Pool(ctx.w_sixes(ctx.sk.sixes))
    _check_w(ctx, pool, ctx.m_elements())
    try:
        parts, info = assemble(seq, pool, region=ctx.m_region(), region_plan=plan)
    except PlanError as exc:
        raise ConstructionUnavailable(f"no plan for {q} in {spec}: {exc}") from exc
    trace.decomposition.update(info)
    return _checked(spec, parts, seq), trace


# ---------------------------------------------------------------- |H| = 3 mod 6

def t_rotation(ctx: Product, T: Sequence[Element]) -> list[list[Element]]:
    """From a zero-sum triple {t1, t2, t3} of L closed under negation, the three
    triples {(t1,0),(t2,1),(t3,2)}, {(t2,0),(t3,1),(t1,2)}, {(t3,0),(t1,1),(t2,2)}
    of L x Z3."""
    L = ctx.L
    t1, t2, t3 = (tuple(x) for x in T)
    if ctx.H.factors != (3,):
        raise PreconditionViolated("the rotation needs H = Z3")
    if L.total([t1, t2, t3]) != L.identity or len({t1, t2, t3}) != 3:
        raise PreconditionViolated("T is not a zero-sum triple")
    if {L.neg(t1), L.neg(t2), L.neg(t3)} != {t1, t2, t3}:
        raise PreconditionViolated("T is not closed under negation")
    one, two = (1,), (2,)
    zero = ctx.H.identity
    return [[ctx.el(x, zero), ctx.el(y, one), ctx.el(z, two)]
            for x, y, z in ((t1, t2, t3), (t2, t3, t1), (t3, t1, t2))]


def _fixture_or_lift(spec: GroupSpec, triple, trace: ConstructionTrace, realize_any):
    """(Z2)^3 x H with |H| in {3, 5}: stored tables, else the Z2 lift from (Z2)^2 x H."""
    t = triple if isinstance(triple, TripleABC) else TripleABC(*triple)
    store = base_fixtures()
    canon = GroupSpec((2, 2, 2) + sylow2_split(spec).H.factors)
    hit = store.get(canon, (t.a, t.b, t.c))
    if hit is not None:
        trace.case = "stored table"
        return _relabel(canon, spec, hit), trace
    h = canon.factors[3]
    A = GroupSpec((2, 2, h))
    nA = A.order // 4
    if t.b < nA:
        raise ConstructionUnavailable(f"{tuple(t.sizes())} is neither stored nor liftable")
    sub_sizes = [3] * t.a + [4] * (t.b - nA) + [5] * t.c
    sub, sub_trace = realize_any(A, sub_sizes)
    trace.child(sub_trace)
    lifted = lift_by_z2(A, sub, (t.a, t.b - nA, t.c), position=2)
    trace.case = "lift from (Z2)^2 x H"
    trace.decomposition["lift"] = {"A": list(A.factors), "fourSets": nA}
    return _relabel(canon, spec, lifted), trace


def _relabel(canon: GroupSpec, spec: GroupSpec, part: ZeroSumPartition) -> ZeroSumPartition:
    """Move a partition of (Z2)^3 x Z_h (canonical layout) onto ``spec``."""
    if canon.factors == spec.factors:
        return part
    split = sylow2_split(spec)
    parts = [[split.join(x[:3], x[3:]) for x in p] for p in part.parts]
    return ZeroSumPartition.build(spec, parts)


def realize_3mod6(spec: GroupSpec, triple, realize_any=None) -> tuple[ZeroSumPartition, ConstructionTrace]:
    """Realize (a, b, c) when |H| = 3 mod 6 and L has more than one involution."""
    ctx = Product(spec)
    if ctx.H.order % 6 != 3:
        raise PreconditionViolated(f"|H| = {ctx.H.order} is not 3 mod 6")
    t, seq = _triple_sizes(spec, triple)
    n = ctx.n
    trace = ConstructionTrace("product, |H| = 3 mod 6", "",
                              {"L": list(ctx.L.factors), "H": list(ctx.H.factors)})
    odd_parts = t.a + t.c
    if ctx.H.order > 3:
        pair = ctx.sk.pairs[0]
        b = pair[0]
        sixes = ctx.w_sixes(ctx.sk.sixes)
        if odd_parts >= ctx.L.order:
            trace.case = "|H| > 3, alpha + gamma >= |L|"
            pieces = _triple_pieces(ctx, b, ctx.L.nonzero())
            zero_l = ctx.L.identity
            pool = Pool(sixes, [(ctx.el(zero_l, b), ctx.el(zero_l, ctx.H.neg(b)))])
            parts, info = _assemble_or_unavailable(seq, pool, pieces=pieces)
        else:
            trace.case = "|H| > 3, alpha + gamma < |L|"
            pool = Pool(sixes, ctx.h_pairs(b))
            plan = [3] + [4] * ((n - 3) // 4)
            parts, info = _assemble_or_unavailable(seq, pool, region=ctx.m_region(),
                                                   region_plan=plan)
        trace.decomposition.update(info)
        return _checked(spec, parts, seq), trace
    # H = Z3
    if _is_z2_cubed(ctx.L):
        if realize_any is None:
            from .dispatch import realize_any_traced as realize_any
        trace.theorem = "product, |H| = 3"
        return _fixture_or_lift(spec, t, trace, realize_any)
    pool_pairs = ctx.h_pairs((1,))
    if 3 * odd_parts <= n:
        trace.case = "|H| = 3, 3(alpha + gamma) <= |L*|"
        try:
            parts, info = assemble(seq, Pool([], pool_pairs), region=ctx.m_region())
            trace.decomposition.update(info)
            return _checked(spec, parts, seq), trace
        except PlanError as exc:
            trace.note(f"region route rejected: {exc}")
    trace.case = "|H| = 3, subgroup route"
    parts, info = _subgroup_route(ctx, seq, "Z2xZ6", odd_parts, trace)
    trace.decomposition.update(info)
    return _checked(spec, parts, seq), trace


def _assemble_or_unavailable(seq, pool, **kw):
    try:
        return assemble(seq, pool, **kw)
    except PlanError as exc:
        raise ConstructionUnavailable(str(exc)) from exc


def _subgroup_route(ctx: Product, seq, quotient: str, odd_parts: int, trace: ConstructionTrace):
    """Cosets of B with Gamma/B = Z2 x Z6 or Z2 x Z10."""
    spec = ctx.spec
    sr = subgroup_and_reps(spec, quotient)
    emb = subgroup_structure(spec, sr.B)
    bspec, to_g = emb.spec, emb.to_parent
    bphi, bvarphi = normalized_mapping(bspec)
    belems = bspec.elements()
    e1, e2, e3 = sr.e
    e_triples = [[spec.add(e1, to_g(g)), spec.add(e2, to_g(bphi[g])), spec.add(e3, to_g(bvarphi[g]))]
                 for g in belems]
    sixes = []
    for c, d in sr.sixes:
        for g in belems:
            sixes.append(good_six(spec, spec.add(c, to_g(g)), spec.add(d, to_g(bphi[g]))))
    def coset_pairs(x):
        return [(spec.add(x, to_g(g)), spec.neg(spec.add(x, to_g(g)))) for g in belems]
    extra_pairs = coset_pairs(sr.b) if sr.b is not None else []
    nB = bspec.order
    trace.decomposition["subgroup"] = {"order": nB, "quotient": quotient}
    threshold = 2 * nB - 1  # |L|/2 - 1
    last: Exception | None = None
    if odd_parts < threshold:
        bstar = nB - 1
        options = []
        for y in range(0, 3):
            for z in range(0, 3):
                rest = bstar - 4 * y - 5 * z
                if rest >= 0 and rest % 3 == 0:
                    options.append([3] * (rest // 3) + [4] * y + [5] * z)
        options.sort(key=lambda o: (len([x for x in o if x != 3]), o))
        pool = Pool(sixes, coset_pairs(sr.a) + extra_pairs)
        for opt in options:
            try:
                bpart = realize_two_group(bspec, opt)
            except (InternalExhaustion, PreconditionViolated) as exc:
                last = exc
                continue
            pieces = [[to_g(x) for x in p] for p in bpart.parts] + e_triples
            try:
                parts, info = assemble(seq, pool, pieces=pieces)
                info["route"] = "B* realized, e-triples fixed"
                info["bStar"] = dict(sorted(Counter(opt).items()))
                return parts, info
            except PlanError as exc:
                last = exc
    a = sr.a
    a_triples = [[spec.add(a, to_g(g)), to_g(bphi[g]), spec.add(spec.neg(a), to_g(bvarphi[g]))]
                 for g in belems if any(g)]
    pool = Pool(sixes, [(a, spec.neg(a))] + extra_pairs)
    try:
        parts, info = assemble(seq, pool, pieces=a_triples + e_triples)
        info["route"] = "a-triples and e-triples fixed"
        return parts, info
    except PlanError as exc:
        raise ConstructionUnavailable(f"subgroup route failed: {exc}; earlier: {last}") from exc


# ---------------------------------------------------------------- |H| = 5 mod 6

def realize_5mod6(spec: GroupSpec, sizes: Sequence[int],
                  realize_any=None) -> tuple[ZeroSumPartition, ConstructionTrace]:
    """Realize any multiset with parts >= 4 when |H| = 5 mod 6."""
    ctx = Product(spec)
    if ctx.H.order % 6 != 5:
        raise PreconditionViolated(f"|H| = {ctx.H.order} is not 5 mod 6")
    sizes = [int(s) for s in sizes]
    if sum(sizes) != spec.order - 1:
        raise InputError(f"sizes sum to {sum(sizes)}, expected {spec.order - 1}")
    if any(s < 4 for s in sizes):
        raise FloorViolation("parts below 4 are open for |H| = 5 mod 6", "open")
    trace = ConstructionTrace("product, |H| = 5 mod 6", "",
                              {"L": list(ctx.L.factors), "H": list(ctx.H.factors)})
    if ctx.H.order == 5 and _is_z2_cubed(ctx.L):
        if realize_any is None:
            from .dispatch import realize_any_traced as realize_any
        norm = normalize_sizes(sizes, "min3")
        t = TripleABC.from_sizes(norm.refined)
        part, trace = _fixture_or_lift(spec, t, trace, realize_any)
        by: dict = {}
        for p in part.parts:
            by.setdefault(len(p), []).append(list(p))
        refined = [by[s].pop() for s in norm.refined]
        return _checked(spec, norm.recombine(refined), sizes), trace
    norm = normalize_sizes(sizes, "min4")
    seq = list(norm.refined)
    s = norm.odd_count
    n = ctx.n
    trace.decomposition["normalized"] = dict(sorted(Counter(seq).items()))
    trace.decomposition["s"] = s
    if ctx.H.order > 5:
        (b, _), (c, _) = ctx.sk.pairs[0], ctx.sk.pairs[1]
        sixes = ctx.w_sixes(ctx.sk.sixes)
        if s >= n:
            trace.case = "|H| > 5, s >= |L*|"
            pieces = _triple_pieces(ctx, b, ctx.L.nonzero())
            zero_l = ctx.L.identity
            pool = Pool(sixes, [(ctx.el(zero_l, b), ctx.el(zero_l, ctx.H.neg(b)))] + ctx.h_pairs(c))
            parts, info = _assemble_or_unavailable(seq, pool, pieces=pieces)
        else:
            trace.case = "|H| > 5, s < |L*|"
            pool = Pool(sixes, ctx.h_pairs(b) + ctx.h_pairs(c))
            plan = [3] + [4] * ((n - 3) // 4)
            parts, info = _assemble_or_unavailable(seq, pool, region=ctx.m_region(),
                                                   region_plan=plan)
    else:
        pool_pairs = ctx.h_pairs((1,)) + ctx.h_pairs((2,))
        parts = None
        if 3 * s <= n:
            trace.case = "|H| = 5, 3s <= |L*|"
            try:
                parts, info = assemble(seq, Pool([], pool_pairs), region=ctx.m_region())
            except PlanError as exc:
                trace.note(f"region route rejected: {exc}")
        if parts is None:
            trace.case = "|H| = 5, subgroup route"
            parts, info = _subgroup_route(ctx, seq, "Z2xZ10", s, trace)
    trace.decomposition.update(info)
    return _checked(spec, norm.recombine(parts), sizes), trace


_SKR_LOCK = threading.Lock()
_SKR_CACHE: dict = {}


def _non_involution_skolem(spec: GroupSpec, R: list[Element]):
    """Good sixes plus pairs covering R, trying the fewest pairs first (memoized)."""
    with _SKR_LOCK:
        if spec.factors in _SKR_CACHE:
            hit = _SKR_CACHE[spec.factors]
            if isinstance(hit, str):
                raise ConstructionUnavailable(hit)
            return hit
    outcomes = []
    sk = None
    base = (len(R) % 6) // 2
    for n_pairs in range(base, len(R) // 2 + 1, 3):
        res = skolem_subset(spec, R, SearchBudget(200_000), pairs=n_pairs)
        outcomes.append(res.outcome)
        if res.outcome == FOUND:
            sk = res.partition
            break
        if len(outcomes) >= 3:
            break
    value = sk if sk is not None else f"no Skolem partition of the non-involutions: {outcomes}"
    with _SKR_LOCK:
        _SKR_CACHE[spec.factors] = value
    if sk is None:
        raise ConstructionUnavailable(value)
    return sk


def skolem_r_route(spec: GroupSpec, sizes: Sequence[int]) -> tuple[list[list[Element]], dict]:
    """Involutions as a region (realized in (Z2)^e), the rest from a Skolem partition."""
    inv = involutions(spec)
    inv_set = set(inv)
    R = [g for g in spec.nonzero() if g not in inv_set]
    sk = _non_involution_skolem(spec, R)
    pool = Pool(list(sk.sixes), list(sk.pairs))
    if not inv:
        parts, info = assemble(list(sizes), pool)
        return parts, info
    e = (len(inv) + 1).bit_length() - 1
    E = GroupSpec((2,) * e)
    basis = _involution_basis(spec, inv, e)

    def to_g(v: Element) -> Element:
        acc = spec.identity
        for bit, g in zip(v, basis):
            if bit:
                acc = spec.add(acc, g)
        return acc

    def realize(loads: list[int]) -> list[list[Element]]:
        part = realize_two_group(E, loads)
        by: dict = {}
        for p in part.parts:
            by.setdefault(len(p), []).append([to_g(x) for x in p])
        return [by[x].pop() for x in loads]

    region = Region("I", tuple(inv), realize)
    parts, info = assemble(list(sizes), pool, region=region)
    return parts, info


def _involution_basis(spec: GroupSpec, inv: list[Element], e: int) -> list[Element]:
    basis: list[Element] = []
    span = {spec.identity}
    for g in inv:
        if g not in span:
            basis.append(g)
            span |= {spec.add(x, g) for x in span}
        if len(basis) == e:
            break
    return basis
