"""Acceptance suite: one PASS/FAIL line per criterion, each with its time limit."""
from __future__ import annotations

import itertools
import random
import time
from collections import Counter
from contextlib import contextmanager
from importlib import resources

import pytest

from conftest import independent_check
from zsp.engine import (
    FOUR_ZSPP_ONLY_KNOWN,
    NO_ZSPP,
    THREE_ZSPP,
    TWO_ZSPP,
    Product,
    classify,
    realize,
    realize_quadruple,
)
from zsp.errors import NoCompleteMapping
from zsp.groups import (
    GroupSpec,
    abelian_groups_of_order,
    find_complete_mapping,
    group_sum,
    involution_count,
)
from zsp.labeling import (
    Digraph,
    Graph,
    complete,
    distance_antimagic_label,
    distance_magic_label,
    g_join,
    irregular_label,
    twin_partition,
    vertex_weights,
)
from zsp.oracle import enumerate_realizable, integer_partitions
from zsp.partition import TripleABC, parse_appendix, parse_profile, verify_partition
from zsp.skolem import skolem_partition

G = GroupSpec.parse


@contextmanager
def criterion(capsys, number: int, title: str, limit: float):
    """Time the body and print a single verdict line; failures still print."""
    state = {"ok": False, "detail": ""}
    start = time.perf_counter()
    try:
        yield state
    finally:
        took = time.perf_counter() - start
        ok = state["ok"] and took < limit
        extra = f" ({state['detail']})" if state["detail"] else ""
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {title}: "
                  f"{took:.2f}s of {limit:g}s{extra}")
    assert state["ok"], state["detail"]
    assert took < limit, f"took {took:.1f}s, limit {limit}s"


def triples(total: int, min_part: int = 3):
    out = []
    for c in range(total // 5 + 1):
        for b in range(total // 4 + 1):
            rest = total - 5 * c - 4 * b
            if rest >= 0 and rest % 3 == 0:
                a = rest // 3
                if min_part <= 3 or a == 0:
                    out.append((a, b, c))
    return out


def realize_checked(spec: GroupSpec, sizes) -> bool:
    part, _ = realize(spec, sizes)
    return independent_check(spec.factors, part.parts, sizes)


# ---------------------------------------------------------------- 1

def test_c1_fixture_fidelity(capsys):
    with criterion(capsys, 1, "appendix tables verify with their profiles", 1.0) as st:
        count = 0
        bad = []
        for name in ("appendix_a.txt", "appendix_b.txt"):
            text = resources.files("zsp").joinpath("data", name).read_text(encoding="utf-8")
            for tab in parse_appendix(text):
                spec = GroupSpec(tab.factors)
                rep = verify_partition(spec, tab.parts, tab.profile)
                count += 1
                want = dict(zip((3, 4, 5), tab.triple))
                if not rep.ok or +parse_profile(tab.profile) != +Counter(want):
                    bad.append((name, tab.factors, tab.triple))
        st["ok"] = count > 0 and not bad
        st["detail"] = f"{count} tables, {len(bad)} failing"


# ---------------------------------------------------------------- 2

def test_c2_base_case_closure(capsys):
    with criterion(capsys, 2, "all triples for the two base groups", 10.0) as st:
        bad = []
        n = 0
        for text, total in (("Z2xZ2xZ2xZ3", 23), ("Z2xZ2xZ2xZ5", 39)):
            spec = G(text)
            assert spec.order - 1 == total
            for t in triples(total):
                n += 1
                if not realize_checked(spec, TripleABC(*t).sizes()):
                    bad.append((text, t))
        st["ok"] = not bad
        st["detail"] = f"{n} triples, {len(bad)} failing"


# ---------------------------------------------------------------- 3

def test_c3_oracle_matches_classification(capsys):
    with criterion(capsys, 3, "exhaustive oracle agrees with classify, order <= 32", 600.0) as st:
        bad = []
        groups = 0
        for m in range(2, 33):
            for spec in abelian_groups_of_order(m):
                groups += 1
                cls = classify(spec)
                inv = involution_count(spec)
                if cls.floor is None:
                    tab = enumerate_realizable(spec, 2)
                    if tab.realizable() or group_sum(spec) == spec.identity:
                        bad.append(str(spec))
                    continue
                want = 2 if inv in (0, 3) else 3
                if cls.floor != want:
                    bad.append(str(spec))
                    continue
                tab = enumerate_realizable(spec, cls.floor)
                if len(tab.realizable()) != len(tab.verdicts):
                    bad.append(str(spec))
        st["ok"] = not bad
        st["detail"] = f"{groups} groups, mismatches {bad}"


# ---------------------------------------------------------------- 4

SWEEP = {
    3: ["Z2xZ2xZ2xZ7", "Z2xZ2xZ2xZ7", "Z2xZ2xZ2xZ2xZ7"],
    "3mod": ["Z2xZ2xZ2xZ3", "Z2xZ2xZ4xZ3", "Z2xZ4xZ9"],
    4: ["Z2xZ2xZ2xZ5", "Z2xZ2xZ5", "Z2xZ8xZ5"],
}


def test_c4_constructive_sweep(capsys):
    with criterion(capsys, 4, "constructive sweep over the nine product groups", 300.0) as st:
        bad = []
        n = 0
        for key, groups in SWEEP.items():
            floor = 4 if key == 4 else 3
            for text in groups:
                spec = G(text)
                total = spec.order - 1
                requests = [TripleABC(*t).sizes() for t in triples(total, floor)]
                if key == 4:
                    requests += [list(p) for p in integer_partitions(total, 4, 7)]
                for sizes in requests:
                    n += 1
                    try:
                        ok = realize_checked(spec, sizes)
                    except Exception as exc:  # report, keep sweeping
                        ok = False
                        sizes = (sizes, type(exc).__name__)
                    if not ok:
                        bad.append((text, sizes))
        st["ok"] = not bad
        st["detail"] = f"{n} requests, {len(bad)} failing {bad[:3]}"


# ---------------------------------------------------------------- 5

def test_c5_quadruple_sweep(capsys):
    with criterion(capsys, 5, "quadruples with omega <= |R|/2", 120.0) as st:
        bad = []
        n = 0
        for text in ("Z2xZ2xZ7", "Z2xZ2xZ13"):
            spec = G(text)
            total = spec.order - 1
            r_size = total - Product(spec).n
            for w in range(r_size // 2 + 1):
                for a, b, c in triples(total - 2 * w) if total - 2 * w >= 0 else []:
                    n += 1
                    sizes = [2] * w + [3] * a + [4] * b + [5] * c
                    part, _ = realize_quadruple(spec, (w, a, b, c))
                    if not independent_check(spec.factors, part.parts, sizes):
                        bad.append((text, (w, a, b, c)))
        st["ok"] = n > 0 and not bad
        st["detail"] = f"{n} quadruples, {len(bad)} failing"


# ---------------------------------------------------------------- 6

def test_c6_skolem_coverage(capsys):
    with criterion(capsys, 6, "Skolem partitions of odd groups", 60.0) as st:
        specs = [GroupSpec((m,)) for m in range(3, 202, 2)]
        specs += [G(t) for t in ("Z3xZ3", "Z3xZ9", "Z5xZ5", "Z3xZ3xZ3")]
        bad = [str(s) for s in specs if not skolem_partition(s).verify()]
        st["ok"] = not bad
        st["detail"] = f"{len(specs)} groups, failing {bad}"


# ---------------------------------------------------------------- 7

def test_c7_complete_mappings(capsys):
    with criterion(capsys, 7, "complete mappings for order <= 64", 60.0) as st:
        bad = []
        n = 0
        for m in range(1, 65):
            for spec in abelian_groups_of_order(m):
                if involution_count(spec) == 1:
                    continue
                n += 1
                pair = find_complete_mapping(spec)
                zero = spec.identity
                ok = pair.phi[zero] == zero and pair.varphi[zero] == zero
                ok = ok and sorted(pair.phi.values()) == spec.elements()
                ok = ok and sorted(pair.varphi.values()) == spec.elements()
                ok = ok and all(spec.total((g, pair.phi[g], pair.varphi[g])) == zero
                                for g in spec.elements())
                if not ok:
                    bad.append(str(spec))
        for text in ("Z4", "Z8"):
            with pytest.raises(NoCompleteMapping):
                find_complete_mapping(G(text))
        st["ok"] = not bad
        st["detail"] = f"{n} groups, failing {bad}"


# ---------------------------------------------------------------- 8

def _groups_between(lo: int, hi: int):
    out = []
    for m in range(lo, hi + 1):
        out += [s for s in abelian_groups_of_order(m) if involution_count(s) != 1]
    return out


def _random_digraph(rng, comp_sizes):
    arcs = []
    base = 0
    for k in comp_sizes:
        vs = list(range(base, base + k))
        for i in range(1, k):
            u, v = vs[i], vs[rng.randrange(i)]
            arcs.append((u, v) if rng.random() < 0.5 else (v, u))
        for _ in range(rng.randrange(k)):
            u, v = rng.sample(vs, 2)
            arcs.append((u, v))
        base += k
    return Digraph.make(base, arcs)


def _multipartite(sizes):
    offs = list(itertools.accumulate([0] + list(sizes)))
    blocks = [range(offs[i], offs[i + 1]) for i in range(len(sizes))]
    return Graph.make(offs[-1], [(u, v) for x, y in itertools.combinations(blocks, 2)
                                 for u in x for v in y])


def _random_partition(rng, total, lo):
    sizes = []
    while total:
        if total < 2 * lo:
            sizes.append(total)
            break
        k = rng.randint(lo, total - lo)
        k = min(k, rng.randint(lo, 12))
        sizes.append(k)
        total -= k
    return sizes


def test_c8_labeling_properties(capsys):
    with criterion(capsys, 8, "random irregular, magic and anti-magic labelings", 180.0) as st:
        rng = random.Random(20240601)
        bad = []
        for i in range(200):
            n_target = rng.randint(4, 40)
            comps = _random_partition(rng, n_target, 4)
            d = _random_digraph(rng, comps)
            spec = rng.choice(_groups_between(d.n + 5, d.n + 20))
            lab = irregular_label(d, spec)
            ok = lab.check(d) and len(set(lab.induced.values())) == d.n
            ok = ok and all(spec.total(lab.induced[v] for v in c) == spec.identity
                            for c in d.components())
            if not ok:
                bad.append(("irregular", i))
        magic_groups = _groups_between(9, 64)
        for i in range(100):
            spec = rng.choice(magic_groups)
            sizes = _random_partition(rng, spec.order - 1, 4)
            g = _multipartite(sizes)
            lab = distance_magic_label(g, spec)
            ok = set(lab.weights.values()) == {spec.identity}
            ok = ok and lab.weights == vertex_weights(spec, g, lab.ell)
            ok = ok and len(set(lab.ell.values())) == g.n
            if not ok:
                bad.append(("magic", i))
        joins = 0
        while joins < 100:
            k = rng.randint(1, 5)
            base = Graph.make(k, [e for e in itertools.combinations(range(k), 2) if rng.random() < 0.5])
            blow = {v: complete(rng.randint(4, 8)) for v in range(k)}
            j = g_join(base, blow)
            choices = _groups_between(j.n + 1, j.n + 1)
            if not choices:
                # |G| = 2 mod 4 has one involution; grow a clique by one
                j = g_join(base, {**blow, 0: complete(blow[0].k + 1)})
                choices = _groups_between(j.n + 1, j.n + 1)
            spec = rng.choice(choices)
            joins += 1
            if not all(len(c) >= 4 for c in twin_partition(j, "true")):
                bad.append(("join twins", joins))
                continue
            lab = distance_antimagic_label(j, spec)
            ok = all(lab.weights[v] == spec.neg(lab.ell[v]) for v in lab.ell)
            ok = ok and len(set(lab.weights.values())) == j.n
            ok = ok and lab.weights == vertex_weights(spec, j, lab.ell)
            if not ok:
                bad.append(("antimagic", joins))
        st["ok"] = not bad
        st["detail"] = f"400 instances, failing {bad[:5]}"


# ---------------------------------------------------------------- 9

def test_c9_classification_trichotomy(capsys):
    with criterion(capsys, 9, "classification trichotomy for 4 <= m <= 100", 5.0) as st:
        bad = []
        for m in range(4, 101):
            verdicts = [classify(s).verdict for s in abelian_groups_of_order(m)]
            if m % 4 == 2:
                ok = all(v == NO_ZSPP for v in verdicts)
            elif m % 2:
                ok = all(v == TWO_ZSPP for v in verdicts)
            else:
                ok = any(v in (TWO_ZSPP, THREE_ZSPP, FOUR_ZSPP_ONLY_KNOWN) for v in verdicts)
            if not ok:
                bad.append(m)
        st["ok"] = not bad
        st["detail"] = f"97 orders, failing {bad}"
