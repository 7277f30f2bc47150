"""Finite Abelian groups given as direct products of cyclic groups.

Elements are tuples of residues in factor order.  Iteration order is
lexicographic on those tuples everywhere, which keeps every downstream
search reproducible.
"""
from __future__ import annotations

import itertools
import math
import random
import re
import threading
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ConstructionUnavailable,
    InputError,
    InternalExhaustion,
    NoCompleteMapping,
    StructuralError,
)

Element = tuple[int, ...]


@dataclass(frozen=True)
class GroupSpec:
    """Z_{n1} x ... x Z_{nk}.  The empty factor list is the trivial group."""

    factors: tuple[int, ...]

    def __post_init__(self):
        facs = tuple(int(f) for f in self.factors)
        if any(f < 2 for f in facs):
            raise InputError(f"cyclic factors must be >= 2, got {list(facs)}")
        object.__setattr__(self, "factors", facs)

    @classmethod
    def of(cls, *factors: int) -> "GroupSpec":
        return cls(tuple(factors))

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """Accept "Z2xZ4", "Z2 x Z4", "2,4", "[2, 4]" or a bare "7"."""
        s = text.strip().strip("[]()").replace(" ", "")
        if not s:
            raise InputError("empty group description")
        if re.fullmatch(r"\d+(,\d+)*", s):
            parts = s.split(",")
        elif re.fullmatch(r"Z\d+([x\*]Z\d+)*", s, flags=re.IGNORECASE):
            parts = re.split(r"[x\*]", s, flags=re.IGNORECASE)
            parts = [p[1:] for p in parts]
        else:
            raise InputError(f"cannot parse group description {text!r}")
        spec = cls(tuple(int(p) for p in parts))
        if spec.order < 2:
            raise InputError("group must have order at least 2")
        return spec

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def identity(self) -> Element:
        return (0,) * len(self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "Z1"
        return "x".join(f"Z{f}" for f in self.factors)

    def elements(self) -> list[Element]:
        return list(_tables(self).elements)

    def nonzero(self) -> list[Element]:
        return list(_tables(self).elements[1:])

    def check(self, a: Sequence[int]) -> Element:
        """Return ``a`` as a validated element tuple."""
        if len(a) != len(self.factors):
            raise StructuralError(
                f"element {tuple(a)} has arity {len(a)}, group {self} needs {len(self.factors)}")
        t = tuple(int(x) for x in a)
        for x, n in zip(t, self.factors):
            if not 0 <= x < n:
                raise StructuralError(f"coordinate {x} out of range for Z{n} in {t}")
        return t

    def reduce(self, a: Sequence[int]) -> Element:
        """Reduce arbitrary integers coordinate-wise into the group."""
        if len(a) != len(self.factors):
            raise StructuralError(f"element {tuple(a)} has wrong arity for {self}")
        return tuple(int(x) % n for x, n in zip(a, self.factors))

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.factors))

    def neg(self, a: Element) -> Element:
        return tuple((-x) % n for x, n in zip(a, self.factors))

    def sub(self, a: Element, b: Element) -> Element:
        return tuple((x - y) % n for x, y, n in zip(a, b, self.factors))

    def mul(self, k: int, a: Element) -> Element:
        return tuple((k * x) % n for x, n in zip(a, self.factors))

    def total(self, items: Iterable[Element]) -> Element:
        acc = [0] * len(self.factors)
        for it in items:
            for i, x in enumerate(it):
                acc[i] += x
        return tuple(x % n for x, n in zip(acc, self.factors))

    def is_involution(self, a: Element) -> bool:
        return any(a) and not any((2 * x) % n for x, n in zip(a, self.factors))

    def index(self, a: Element) -> int:
        """Position of ``a`` in the lexicographic enumeration."""
        code = 0
        for x, n in zip(a, self.factors):
            code = code * n + x
        return code

    def element_at(self, code: int) -> Element:
        out = []
        for n in reversed(self.factors):
            code, r = divmod(code, n)
            out.append(r)
        return tuple(reversed(out))


class _Tables:
    """Enumeration plus integer addition and negation tables for one group."""

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        facs = spec.factors
        self.elements: list[Element] = list(itertools.product(*(range(n) for n in facs)))
        self._add = None
        self._neg = None
        self._lock = threading.Lock()

    def _coords(self) -> np.ndarray:
        if not self.spec.factors:
            return np.zeros((1, 0), dtype=np.int64)
        return np.array(self.elements, dtype=np.int64)

    def _build(self):
        facs = np.array(self.spec.factors, dtype=np.int64)
        coords = self._coords()
        weights = np.ones(len(facs), dtype=np.int64)
        for i in range(len(facs) - 2, -1, -1):
            weights[i] = weights[i + 1] * facs[i + 1]
        summed = (coords[:, None, :] + coords[None, :, :]) % facs if len(facs) else \
            np.zeros((1, 1, 0), dtype=np.int64)
        add = (summed * weights).sum(axis=2) if len(facs) else np.zeros((1, 1), dtype=np.int64)
        neg = ((-coords) % facs * weights).sum(axis=1) if len(facs) else np.zeros(1, dtype=np.int64)
        self._add = [list(map(int, row)) for row in add]
        self._neg = list(map(int, neg))

    @property
    def add(self) -> list[list[int]]:
        if self._add is None:
            with self._lock:
                if self._add is None:
                    self._build()
        return self._add

    @property
    def neg(self) -> list[int]:
        if self._neg is None:
            with self._lock:
                if self._neg is None:
                    self._build()
        return self._neg


@lru_cache(maxsize=256)
def _tables(spec: GroupSpec) -> _Tables:
    return _Tables(spec)


def tables(spec: GroupSpec) -> _Tables:
    """Integer-coded tables; intended for groups of a few thousand elements at most."""
    return _tables(spec)


# ---------------------------------------------------------------- basic ops

def add(spec: GroupSpec, a: Sequence[int], b: Sequence[int]) -> Element:
    return spec.add(spec.check(a), spec.check(b))


def negate(spec: GroupSpec, a: Sequence[int]) -> Element:
    return spec.neg(spec.check(a))


def sum_set(spec: GroupSpec, items: Iterable[Sequence[int]]) -> Element:
    """Sum of a set of distinct elements; the empty set sums to the identity."""
    seen = set()
    checked = []
    for it in items:
        t = spec.check(it)
        if t in seen:
            raise InputError(f"duplicate element {t}")
        seen.add(t)
        checked.append(t)
    return spec.total(checked)


def involutions(spec: GroupSpec) -> list[Element]:
    """All elements of order exactly two, in lexicographic order."""
    choices = [(0, n // 2) if n % 2 == 0 else (0,) for n in spec.factors]
    return [t for t in itertools.product(*choices) if any(t)]


def involution_count(spec: GroupSpec) -> int:
    return 2 ** sum(1 for n in spec.factors if n % 2 == 0) - 1


def group_sum(spec: GroupSpec) -> Element:
    """Sum of every element: the unique involution if there is one, else 0."""
    inv = involutions(spec)
    if len(inv) == 1:
        return inv[0]
    return spec.identity


def canonicalize(spec: GroupSpec) -> GroupSpec:
    """Sorted prime-power factor list, suitable for isomorphism tests."""
    out = []
    for n in spec.factors:
        for p, e in _factorize(n).items():
            out.append(p ** e)
    return GroupSpec(tuple(sorted(out)))


def _factorize(n: int) -> dict[int, int]:
    res: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            res[p] = res.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        res[n] = res.get(n, 0) + 1
    return res


def abelian_groups_of_order(m: int) -> list[GroupSpec]:
    """One representative per isomorphism class, as invariant factors.

    The factor list is ascending with each factor dividing the next.
    """
    if m == 1:
        return [GroupSpec(())]
    per_prime = []
    for p, e in sorted(_factorize(m).items()):
        per_prime.append([(p, part) for part in _integer_partitions(e)])
    out = []
    for combo in itertools.product(*per_prime):
        # invariant factors: combine the i-th largest prime powers
        length = max(len(part) for _, part in combo)
        inv = [1] * length
        for p, part in combo:
            for i, k in enumerate(sorted(part, reverse=True)):
                inv[i] *= p ** k
        out.append(GroupSpec(tuple(sorted(x for x in inv if x > 1))))
    return sorted(out, key=lambda g: (len(g.factors), g.factors))


def _integer_partitions(n: int, largest: int | None = None) -> list[tuple[int, ...]]:
    if largest is None:
        largest = n
    if n == 0:
        return [()]
    out = []
    for k in range(min(n, largest), 0, -1):
        for rest in _integer_partitions(n - k, k):
            out.append((k,) + rest)
    return out


# ---------------------------------------------------------------- Sylow split

@dataclass(frozen=True)
class Sylow2Split:
    """Gamma = L x H with |L| a power of two and |H| odd.

    Factor i of the source splits as 2^s * d; ``embed_l[i]`` is the index of
    its 2-part inside L (or None) and ``embed_h[i]`` the index of its odd part
    inside H (or None).
    """

    source: GroupSpec
    L: GroupSpec
    H: GroupSpec
    embed_l: tuple[int | None, ...]
    embed_h: tuple[int | None, ...]

    def join(self, l: Element, h: Element) -> Element:
        out = []
        for i, n in enumerate(self.source.factors):
            li, hi = self.embed_l[i], self.embed_h[i]
            p2 = self.L.factors[li] if li is not None else 1
            od = self.H.factors[hi] if hi is not None else 1
            x = l[li] if li is not None else 0
            y = h[hi] if hi is not None else 0
            out.append(_crt(x, p2, y, od))
        return tuple(out)

    def split(self, g: Element) -> tuple[Element, Element]:
        l = [0] * self.L.rank
        h = [0] * self.H.rank
        for i, x in enumerate(g):
            li, hi = self.embed_l[i], self.embed_h[i]
            if li is not None:
                l[li] = x % self.L.factors[li]
            if hi is not None:
                h[hi] = x % self.H.factors[hi]
        return tuple(l), tuple(h)

    def to_json(self) -> dict:
        return {"L": list(self.L.factors), "H": list(self.H.factors),
                "embedL": list(self.embed_l), "embedH": list(self.embed_h)}


def _crt(x: int, m: int, y: int, n: int) -> int:
    """The residue mod m*n congruent to x mod m and y mod n (gcd(m, n) = 1)."""
    if n == 1:
        return x % m
    if m == 1:
        return y % n
    return (x + m * ((y - x) * pow(m, -1, n) % n)) % (m * n)


@lru_cache(maxsize=256)
def sylow2_split(spec: GroupSpec) -> Sylow2Split:
    lf, hf, el, eh = [], [], [], []
    for n in spec.factors:
        s = (n & -n)
        d = n // s
        if s > 1:
            el.append(len(lf))
            lf.append(s)
        else:
            el.append(None)
        if d > 1:
            eh.append(len(hf))
            hf.append(d)
        else:
            eh.append(None)
    return Sylow2Split(spec, GroupSpec(tuple(lf)), GroupSpec(tuple(hf)), tuple(el), tuple(eh))


# ---------------------------------------------------------------- complete mappings

@dataclass(frozen=True)
class CompleteMappingPair:
    """Bijections phi, varphi with g + phi(g) + varphi(g) = 0 for every g."""

    phi: dict
    varphi: dict

    def check(self, spec: GroupSpec, domain: Iterable[Element] | None = None) -> bool:
        dom = list(domain) if domain is not None else spec.elements()
        zero = spec.identity
        if self.phi.get(zero) != zero or self.varphi.get(zero) != zero:
            return False
        ds = set(dom)
        if set(self.phi) != ds or set(self.phi.values()) != ds:
            return False
        if set(self.varphi) != ds or set(self.varphi.values()) != ds:
            return False
        return all(spec.total((g, self.phi[g], self.varphi[g])) == zero for g in dom)


_CM_LOCK = threading.Lock()
_CM_CACHE: dict = {}


def find_complete_mapping(spec: GroupSpec) -> CompleteMappingPair:
    """Deterministic complete mapping pair with phi(0) = varphi(0) = 0.

    The odd part uses the closed form (id, -2h).  The 2-part is split into a
    product of blocks that each have more than one involution and every block
    is solved by backtracking; the pieces are glued coordinate-wise.
    """
    if involution_count(spec) == 1:
        raise NoCompleteMapping(f"{spec} has exactly one involution")
    with _CM_LOCK:
        hit = _CM_CACHE.get(spec)
    if hit is not None:
        return hit
    split = sylow2_split(spec)
    blocks = _two_blocks(split.L.factors)
    block_maps = []
    for blk in blocks:
        bspec = GroupSpec(blk)
        phi_b = search_complete_mapping(bspec, bspec.elements())
        block_maps.append((bspec, phi_b))
    H = split.H
    phi: dict = {}
    varphi: dict = {}
    for g in spec.elements():
        l, h = split.split(g)
        pl = []
        pos = 0
        for bspec, phi_b in block_maps:
            k = bspec.rank
            pl.extend(phi_b[l[pos:pos + k]])
            pos += k
        pl = tuple(pl)
        vl = split.L.neg(split.L.add(l, pl))
        vh = H.mul(-2, h)
        p = split.join(pl, h)
        v = split.join(vl, vh)
        phi[g] = p
        varphi[g] = v
    pair = CompleteMappingPair(phi, varphi)
    if not pair.check(spec):
        raise InternalExhaustion(f"complete mapping self-check failed for {spec}")
    with _CM_LOCK:
        _CM_CACHE[spec] = pair
    return pair


def _two_blocks(lf: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Split 2-power factors into consecutive blocks of two or three factors."""
    if not lf:
        return []
    k = len(lf)
    if k < 4:
        return [lf]
    blocks = []
    i = 0
    while k - i >= 4:
        blocks.append(lf[i:i + 2])
        i += 2
    blocks.append(lf[i:])
    return blocks


def search_complete_mapping(spec: GroupSpec, domain: Sequence[Element],
                            max_nodes: int = 20_000_000) -> dict:
    """Backtracking search for phi on a subgroup given by its element list.

    Returns the phi map; varphi is -g - phi(g).  The next variable is the one
    with fewest options.  The first attempt tries values in lexicographic
    order; later attempts, each with a small node allowance that doubles,
    shuffle the value order with a fixed seed, so results stay reproducible.
    """
    dom = sorted(domain)
    zero = spec.identity
    if zero not in dom:
        raise InputError("domain must contain the identity")
    n = len(dom)
    pos = {g: i for i, g in enumerate(dom)}
    addt = [[pos.get(spec.add(a, b)) for b in dom] for a in dom]
    negt = [pos[spec.neg(a)] for a in dom]
    if any(x is None for row in addt for x in row):
        raise InputError("domain is not closed under addition")
    third = [[negt[addt[i][j]] for j in range(n)] for i in range(n)]
    z = pos[zero]
    rng = random.Random(n)
    spent = 0
    allowance = 2_000
    attempt = 0
    while spent < max_nodes:
        order = list(range(n))
        if attempt:
            rng.shuffle(order)
        res, used = _cm_attempt(n, z, third, order, min(allowance, max_nodes - spent))
        spent += used
        if res is not None:
            return {dom[i]: dom[res[i]] for i in range(n)}
        if res is None and used < allowance and attempt == 0:
            # exhausted the whole tree without hitting the allowance
            break
        attempt += 1
        allowance *= 2
    if attempt == 0:
        raise NoCompleteMapping(f"no complete mapping on a subgroup of {spec} of order {n}")
    raise InternalExhaustion(f"complete mapping search over {spec} exceeded budget")


def _cm_attempt(n, z, third, order, allowance):
    phi = [-1] * n
    used_p = [False] * n
    used_v = [False] * n
    phi[z] = z
    used_p[z] = used_v[z] = True
    nodes = 0

    class _Stop(Exception):
        pass

    def rec(left):
        nonlocal nodes
        if left == 0:
            return True
        nodes += 1
        if nodes > allowance:
            raise _Stop
        best = None
        best_opts = None
        for i in range(n):
            if phi[i] < 0:
                row = third[i]
                opts = [j for j in order if not used_p[j] and not used_v[row[j]]]
                if not opts:
                    return False
                if best is None or len(opts) < len(best_opts):
                    best, best_opts = i, opts
                    if len(opts) == 1:
                        break
        for j in best_opts:
            v = third[best][j]
            phi[best] = j
            used_p[j] = used_v[v] = True
            if rec(left - 1):
                return True
            phi[best] = -1
            used_p[j] = used_v[v] = False
        return False

    try:
        ok = rec(n - 1)
    except _Stop:
        return None, nodes
    return (phi if ok else None), nodes


# ---------------------------------------------------------------- subgroup route

@dataclass(frozen=True)
class SubgroupReps:
    """A subgroup B of index 12 or 20 with structured coset representatives.

    The representatives cover the quotient as {0} + {a, -a} (+ {b, -b}) +
    {e1, e2, e3} with e1 + e2 + e3 = 0 + good-six shapes built from (c, d).
    """

    quotient: str
    B: tuple[Element, ...]
    a: Element
    b: Element | None
    e: tuple[Element, Element, Element]
    sixes: tuple[tuple[Element, Element], ...]
    functionals: tuple[tuple[int, ...], tuple[int, ...]]

    def representatives(self, spec: GroupSpec) -> list[Element]:
        reps = [spec.identity, self.a, spec.neg(self.a)]
        if self.b is not None:
            reps += [self.b, spec.neg(self.b)]
        reps += list(self.e)
        for c, d in self.sixes:
            reps += six_elements(spec, c, d)
        return reps


def six_elements(spec: GroupSpec, c: Element, d: Element) -> list[Element]:
    """[c, d, -c-d, -c, -d, c+d] without validation."""
    cd = spec.add(c, d)
    return [c, d, spec.neg(cd), spec.neg(c), spec.neg(d), cd]


_QUOTIENTS = {"Z2xZ6": 3, "Z2xZ10": 5}


def _normalize_quotient(q: str) -> str:
    key = q.replace(" ", "").replace("×", "x").replace("₂", "2").replace("₆", "6") \
        .replace("₁₀", "10").upper().replace("X", "x")
    if key not in _QUOTIENTS:
        raise InputError(f"unsupported target quotient {q!r}; use Z2xZ6 or Z2xZ10")
    return key


def subgroup_and_reps(spec: GroupSpec, quotient: str) -> SubgroupReps:
    """Find B <= L with L/B = (Z2)^2 and |I(B)| > 1, plus coset representatives.

    B is the common kernel of two independent functionals L -> Z2 that factor
    through L/2L; pairs of functionals are scanned in lexicographic order.
    """
    q = _normalize_quotient(quotient)
    odd = _QUOTIENTS[q]
    split = sylow2_split(spec)
    L, H = split.L, split.H
    if H.order != odd:
        raise ConstructionUnavailable(f"{spec} does not have odd part of order {odd}")
    if involution_count(L) <= 1:
        raise ConstructionUnavailable(f"Sylow 2-subgroup of {spec} has at most one involution")
    if all(n == 2 for n in L.factors) and L.rank == 3:
        raise ConstructionUnavailable("the subgroup route excludes L = (Z2)^3")
    r = L.rank
    funcs = [f for f in itertools.product((0, 1), repeat=r) if any(f)]
    l_elems = L.elements()
    for f1, f2 in itertools.combinations(funcs, 2):
        def proj(l, f1=f1, f2=f2):
            return (sum(a * (x % 2) for a, x in zip(f1, l)) % 2,
                    sum(a * (x % 2) for a, x in zip(f2, l)) % 2)
        B_l = [l for l in l_elems if proj(l) == (0, 0)]
        inv_b = sum(1 for l in B_l if L.is_involution(l))
        if inv_b <= 1:
            continue
        found = _quotient_pattern(H, odd)
        if found is None:
            break
        pairs, sixes = found
        zero_h = H.identity

        def rep(qq, proj=proj, B_l=B_l):
            # least element of Gamma in the coset (x, y, h)
            x, y, h = qq
            best = None
            for l in l_elems:
                if proj(l) == (x, y):
                    g = split.join(l, h)
                    if best is None or g < best:
                        best = g
            return best

        inv_q = [(1, 0), (0, 1), (1, 1)]
        e1 = rep((*inv_q[0], zero_h))
        e2 = rep((*inv_q[1], zero_h))
        e3 = spec.neg(spec.add(e1, e2))
        a = rep((*pairs[0][0], pairs[0][1]))
        b = None
        if odd == 5:
            b = rep((*pairs[1][0], pairs[1][1]))
        six_reps = []
        for (qc, hc), (qd, hd) in sixes:
            six_reps.append((rep((*qc, hc)), rep((*qd, hd))))
        B = tuple(sorted(split.join(l, zero_h) for l in B_l))
        res = SubgroupReps(q, B, a, b, (e1, e2, e3), tuple(six_reps), (f1, f2))
        _validate_cosets(spec, split, proj, res)
        return res
    raise ConstructionUnavailable(f"no subgroup of {spec} with the required index and involutions")


def _quotient_pattern(H: GroupSpec, odd: int):
    """Pairs and good sixes covering the non-involution part of (Z2)^2 x Z_odd.

    Quotient elements are ((x, y), h).  Z3 needs one pair and one six; Z5
    needs two pairs and two sixes.  The first pattern in lexicographic order
    is returned.
    """
    klein = [(0, 0), (0, 1), (1, 0), (1, 1)]
    hs = [h for h in H.elements() if any(h)]
    pool = [(k, h) for k in klein for h in hs]

    def qneg(e):
        return ((e[0][0], e[0][1]), H.neg(e[1]))

    def qadd(e, f):
        return (((e[0][0] + f[0][0]) % 2, (e[0][1] + f[0][1]) % 2), H.add(e[1], f[1]))

    n_pairs, n_sixes = (1, 1) if odd == 3 else (2, 2)

    def rec(left: frozenset, pairs, sixes):
        if not left:
            return (pairs, sixes) if len(pairs) == n_pairs else None
        x = min(left)
        if len(pairs) < n_pairs:
            nx = qneg(x)
            if nx in left and nx != x:
                r = rec(left - {x, nx}, pairs + [x], sixes)
                if r:
                    return r
        if len(sixes) < n_sixes:
            for d in sorted(left):
                if d == x:
                    continue
                cd = qadd(x, d)
                six = {x, d, qneg(cd), qneg(x), qneg(d), cd}
                if len(six) == 6 and six <= left:
                    r = rec(left - six, pairs, sixes + [(x, d)])
                    if r:
                        return r
        return None

    return rec(frozenset(pool), [], [])


def _validate_cosets(spec, split, proj, res: SubgroupReps):
    def image(g):
        l, h = split.split(g)
        return (*proj(l), h)
    reps = res.representatives(spec)
    imgs = [image(g) for g in reps]
    expected = 4 * split.H.order
    if len(set(imgs)) != expected or len(reps) != expected:
        raise InternalExhaustion("coset representatives do not cover the quotient")


@dataclass(frozen=True)
class SubgroupEmbedding:
    """An abstract presentation of a subgroup plus its generators in the parent."""

    parent: GroupSpec
    spec: GroupSpec
    gens: tuple[Element, ...]

    def to_parent(self, x: Sequence[int]) -> Element:
        acc = self.parent.identity
        for k, g in zip(x, self.gens):
            acc = self.parent.add(acc, self.parent.mul(k, g))
        return acc


def _element_order(spec: GroupSpec, g: Element) -> int:
    o = 1
    for x, n in zip(g, spec.factors):
        o = math.lcm(o, n // math.gcd(x, n))
    return o


def subgroup_structure(spec: GroupSpec, elems: Iterable[Sequence[int]]) -> SubgroupEmbedding:
    """Invariant factors of a subgroup and generators realizing them.

    The isomorphism type is read off the element-order profile; generators are
    found by backtracking, largest order first.
    """
    B = sorted({spec.check(e) for e in elems})
    if spec.identity not in B:
        raise InputError("subset is not a subgroup")
    bset = set(B)
    for x in B:
        for y in B:
            if spec.add(x, y) not in bset:
                raise InputError("subset is not a subgroup")
    profile = Counter(_element_order(spec, g) for g in B)
    target = None
    for cand in abelian_groups_of_order(len(B)) if len(B) > 1 else [GroupSpec(())]:
        if Counter(_element_order(cand, g) for g in cand.elements()) == profile:
            target = cand
            break
    if target is None:  # pragma: no cover - every abelian group appears
        raise InternalExhaustion("no abelian group matches the subgroup")
    factors = sorted(target.factors, reverse=True)
    by_order: dict[int, list[Element]] = {}
    for g in B:
        by_order.setdefault(_element_order(spec, g), []).append(g)

    def span_add(span: set, g: Element, n: int) -> set:
        multiples = [spec.mul(k, g) for k in range(n)]
        return {spec.add(s, m) for s in span for m in multiples}

    def rec(i: int, span: set, gens: list):
        if i == len(factors):
            return gens if len(span) == len(B) else None
        n = factors[i]
        for g in by_order.get(n, []):
            new = span_add(span, g, n)
            if len(new) == len(span) * n:
                r = rec(i + 1, new, gens + [g])
                if r:
                    return r
        return None

    gens = rec(0, {spec.identity}, [])
    if gens is None:  # pragma: no cover
        raise InternalExhaustion("no generating set found")
    fs = tuple(reversed(factors))
    return SubgroupEmbedding(spec, GroupSpec(fs), tuple(reversed(gens)))
