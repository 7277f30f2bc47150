from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_elements
from zsp.errors import ConstructionUnavailable, InputError, NoCompleteMapping, StructuralError
from zsp.groups import (
    GroupSpec,
    abelian_groups_of_order,
    add,
    canonicalize,
    find_complete_mapping,
    group_sum,
    involution_count,
    involutions,
    negate,
    subgroup_and_reps,
    subgroup_structure,
    sum_set,
    sylow2_split,
)

G = GroupSpec.parse

factor_lists = st.lists(st.integers(2, 9), min_size=1, max_size=3).filter(
    lambda fs: len(list(itertools.product(*[range(n) for n in fs]))) <= 200)


def test_parse_forms():
    assert G("Z2xZ4").factors == (2, 4)
    assert G("Z2 x Z4").factors == (2, 4)
    assert G("[2, 4]").factors == (2, 4)
    assert G("7").factors == (7,)
    for bad in ("", "Z1", "Zx", "Z2xZ0"):
        with pytest.raises(InputError):
            G(bad)


def test_add_examples():
    assert add(G("Z2xZ4"), (1, 3), (1, 2)) == (0, 1)
    assert add(G("Z7"), (5,), (2,)) == (0,)
    assert add(G("Z2xZ2xZ3"), (1, 0, 2), (0, 1, 2)) == (1, 1, 1)
    with pytest.raises(StructuralError):
        add(G("Z2xZ4"), (1,), (1, 2))
    with pytest.raises(StructuralError):
        add(G("Z2xZ4"), (2, 0), (1, 2))


def test_negate_examples():
    assert negate(G("Z5"), (2,)) == (3,)
    assert negate(G("Z2xZ4"), (1, 1)) == (1, 3)
    assert negate(G("Z2xZ4"), (0, 0)) == (0, 0)


def test_sum_set_examples():
    assert sum_set(G("Z7"), [(1,), (2,), (4,)]) == (0,)
    assert sum_set(G("Z2xZ2xZ2xZ3"), [(0, 0, 1, 0), (0, 1, 0, 0), (0, 1, 1, 0)]) == (0, 0, 0, 0)
    assert sum_set(G("Z7"), []) == (0,)
    with pytest.raises(InputError):
        sum_set(G("Z7"), [(1,), (1,)])


def test_involutions_examples():
    assert involutions(G("Z2xZ4")) == [(0, 2), (1, 0), (1, 2)]
    assert involutions(G("Z5")) == []
    assert involution_count(G("Z2xZ2xZ2")) == 7


def test_group_sum_examples():
    assert group_sum(G("Z4")) == (2,)
    assert group_sum(G("Z2xZ4")) == (0, 0)
    assert group_sum(G("Z5")) == (0,)


@settings(max_examples=60, deadline=None)
@given(factor_lists)
def test_group_sum_matches_brute_force(fs):
    spec = GroupSpec(tuple(fs))
    elems = all_elements(fs)
    total = tuple(sum(e[i] for e in elems) % n for i, n in enumerate(fs))
    assert group_sum(spec) == total
    brute = [e for e in elems if any(e) and all((2 * x) % n == 0 for x, n in zip(e, fs))]
    assert involutions(spec) == sorted(brute)


@settings(max_examples=60, deadline=None)
@given(factor_lists, st.data())
def test_group_axioms(fs, data):
    spec = GroupSpec(tuple(fs))
    elems = spec.elements()
    assert len(elems) == spec.order == len(set(elems))
    x, y, z = (data.draw(st.sampled_from(elems)) for _ in range(3))
    assert spec.add(x, spec.neg(x)) == spec.identity
    assert spec.add(x, y) == spec.add(y, x)
    assert spec.add(spec.add(x, y), z) == spec.add(x, spec.add(y, z))
    assert spec.element_at(spec.index(x)) == x


def test_sylow_split_examples():
    s = sylow2_split(G("Z2xZ4xZ15"))
    assert canonicalize(s.L).factors == (2, 4) and s.H.order == 15
    s = sylow2_split(G("Z12"))
    assert s.L.factors == (4,) and s.H.factors == (3,)
    s = sylow2_split(G("Z2xZ2xZ2xZ3"))
    assert s.L.factors == (2, 2, 2) and s.H.factors == (3,)


@pytest.mark.parametrize("m", [12, 24, 30, 36, 40, 60])
def test_sylow_split_is_isomorphism(m):
    for spec in abelian_groups_of_order(m):
        s = sylow2_split(spec)
        assert s.L.order * s.H.order == spec.order and s.H.order % 2 == 1
        image = {s.join(l, h) for l in s.L.elements() for h in s.H.elements()}
        assert image == set(spec.elements())
        for g in spec.elements()[:12]:
            for k in spec.elements()[:12]:
                lg, hg = s.split(g)
                lk, hk = s.split(k)
                assert s.join(s.L.add(lg, lk), s.H.add(hg, hk)) == spec.add(g, k)


def test_abelian_groups_counts():
    # number of abelian groups of order m is a product of partition numbers
    assert [len(abelian_groups_of_order(m)) for m in (8, 16, 32, 36, 64, 72)] == [3, 5, 7, 4, 11, 6]


def test_complete_mapping_examples():
    cm = find_complete_mapping(G("Z5"))
    assert cm.check(G("Z5"))
    v4 = G("Z2xZ2")
    cm = find_complete_mapping(v4)
    assert cm.check(v4)
    # every valid pair on V4 fixes 0 and permutes the three involutions cyclically
    assert sorted(cm.phi[g] for g in involutions(v4)) == involutions(v4)
    assert all(cm.phi[g] != g for g in involutions(v4))
    for bad in ("Z4", "Z8", "Z6"):
        with pytest.raises(NoCompleteMapping):
            find_complete_mapping(G(bad))


def test_complete_mapping_v4_brute_force():
    # independent enumeration of all bijections phi of V4 with phi(0)=0
    elems = all_elements((2, 2))
    valid = 0
    for perm in itertools.permutations(elems[1:]):
        phi = dict(zip(elems, [(0, 0), *perm]))
        varphi = {g: tuple((-(a + b)) % 2 for a, b in zip(g, phi[g])) for g in elems}
        if len(set(varphi.values())) == 4:
            valid += 1
    assert valid == 2


@pytest.mark.parametrize("text", ["Z2xZ2xZ4", "Z4xZ4", "Z2xZ8xZ3", "Z2xZ2xZ2xZ2xZ3"])
def test_complete_mapping_larger(text):
    spec = G(text)
    assert find_complete_mapping(spec).check(spec)


def test_subgroup_and_reps():
    spec = G("Z2xZ2xZ2xZ2xZ3")
    res = subgroup_and_reps(spec, "Z2xZ6")
    assert len(res.B) == 4
    assert sum(1 for x in res.B if spec.is_involution(x)) == 3
    reps = res.representatives(spec)
    assert len(reps) == 12 and spec.total(res.e) == spec.identity
    with pytest.raises(ConstructionUnavailable):
        subgroup_and_reps(G("Z2xZ2xZ2xZ3"), "Z2xZ6")
    spec = G("Z4xZ4xZ5")
    res = subgroup_and_reps(spec, "Z2xZ10")
    assert len(res.B) == 4 and sum(1 for x in res.B if spec.is_involution(x)) == 3
    assert len(res.representatives(spec)) == 20


def test_subgroup_structure():
    spec = G("Z4xZ4")
    B = [x for x in spec.elements() if x[0] % 2 == 0]
    emb = subgroup_structure(spec, B)
    assert sorted(emb.spec.factors) == [2, 4]
    assert {emb.to_parent(x) for x in emb.spec.elements()} == set(B)
    with pytest.raises(InputError):
        subgroup_structure(spec, [(0, 0), (1, 0)])
