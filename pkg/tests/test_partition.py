from __future__ import annotations

from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zsp.engine import base_fixtures
from zsp.errors import DegenerateSix, InputError
from zsp.groups import GroupSpec
from zsp.partition import (
    GoodSixSubset,
    QuadrupleWABC,
    SizeRequest,
    TripleABC,
    format_profile,
    normalize_sizes,
    parse_appendix,
    parse_profile,
    parse_sizes,
    parts_from_json,
    split_good_six,
    verify_partition,
)

G = GroupSpec.parse
Z7 = G("Z7")
A_GROUP = G("Z2xZ2xZ2xZ3")


def test_size_request():
    assert SizeRequest((4, 3), 7).sizes == (3, 4)
    with pytest.raises(InputError):
        SizeRequest((3, 3), 7)
    with pytest.raises(InputError):
        SizeRequest((1, 6), 7)


def test_triple_and_quadruple():
    t = TripleABC.parse("(5, 2, 0)")
    assert t.total == 23 and t.sizes() == [3] * 5 + [4] * 2
    assert TripleABC.from_sizes([5, 3, 5]) == TripleABC(1, 0, 2)
    q = QuadrupleWABC.parse("12,1,0,0")
    assert q.total == 27
    with pytest.raises(InputError):
        TripleABC.parse("1,2")
    with pytest.raises(InputError):
        TripleABC.from_sizes([6])


def test_profiles():
    assert parse_profile("5*3  2*4  0*5") == Counter({3: 5, 4: 2})
    assert format_profile([3, 3, 5]) == "2*3  0*4  1*5"
    assert parse_sizes("2*3 1*4") == [3, 3, 4]
    assert parse_sizes("3,4 5") == [3, 4, 5]
    with pytest.raises(InputError):
        parse_profile("nothing")


def test_verify_appendix_table():
    table = base_fixtures().get(A_GROUP, (5, 2, 0))
    rep = verify_partition(A_GROUP, table.parts, "5*3 2*4 0*5")
    assert rep.ok and rep.profile_ok
    parts = [list(p) for p in table.parts]
    parts[0][0] = A_GROUP.neg(parts[0][0])
    bad = verify_partition(A_GROUP, parts, "5*3 2*4 0*5")
    assert not bad.ok and not bad.zero_sum


def test_verify_small_cases():
    rep = verify_partition(Z7, [[(1,), (2,), (4,)], [(3,), (5,), (6,)]])
    assert rep.ok and rep.to_json()["profile"] == "2*3  0*4  0*5"
    rep = verify_partition(Z7, [])
    assert not rep.ok and not rep.covers
    rep = verify_partition(Z7, [[(1,), (6,)], [(1,), (6,)], [(2,), (5,)]])
    assert not rep.disjoint
    rep = verify_partition(Z7, [[(9,), (6,)]])
    assert not rep.well_formed
    rep = verify_partition(Z7, [[(1,), (2,), (4,)], [(3,), (5,), (6,)]], [3, 4])
    assert rep.profile_ok is False and not rep.ok


@settings(max_examples=50, deadline=None)
@given(st.permutations(list(range(1, 7))), st.integers(0, 11))
def test_verify_detects_mutation(order, idx):
    spec = G("Z13")
    parts = [[(x,), (13 - x,)] for x in order]
    assert verify_partition(spec, parts).ok
    flat = [e for p in parts for e in p]
    victim = flat[idx]
    mutated = [[(e[0] + 1) % 13 if e == victim else e[0] for e in p] for p in parts]
    mutated = [[(x,) for x in p] for p in mutated]
    assert not verify_partition(spec, mutated).ok


def test_normalize_examples():
    assert list(normalize_sizes([11], "min3").refined) == [3, 3, 5]
    assert list(normalize_sizes([3, 4, 5], "min3").refined) == [3, 4, 5]
    n = normalize_sizes([9, 4], "min4")
    assert sorted(n.refined) == [4, 4, 5] and n.odd_count == 1
    with pytest.raises(InputError):
        normalize_sizes([2, 5], "min3")
    with pytest.raises(InputError):
        normalize_sizes([5], "bogus")


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(4, 40), min_size=1, max_size=8), st.sampled_from(["min3", "min4"]))
def test_normalize_recombine_roundtrip(sizes, regime):
    n = normalize_sizes(sizes, regime)
    lo, hi = (3, 5) if regime == "min3" else (4, 7)
    assert all(lo <= r <= hi for r in n.refined)
    assert sum(n.refined) == sum(sizes)
    fake = []
    counter = 0
    for r in n.refined:
        fake.append(list(range(counter, counter + r)))
        counter += r
    back = n.recombine(fake)
    assert [len(p) for p in back] == list(sizes)
    assert sorted(x for p in back for x in p) == list(range(sum(sizes)))


def test_good_six_and_split():
    six = GoodSixSubset.make(Z7, (1,), (2,))
    assert [x[0] for x in six.elements] == [1, 2, 4, 6, 5, 3]
    assert split_good_six(six, "triples") == [((1,), (2,), (4,)), ((6,), (5,), (3,))]
    assert split_good_six(six, "pairs") == [((1,), (6,)), ((2,), (5,)), ((3,), (4,))]
    z9 = G("Z9")
    six9 = GoodSixSubset.make(z9, (1,), (3,))
    assert sorted(sorted(x[0] for x in p) for p in split_good_six(six9, "pairs")) == [[1, 8], [3, 6], [4, 5]]
    with pytest.raises(DegenerateSix):
        GoodSixSubset.make(z9, (3,), (6,))
    with pytest.raises(InputError):
        split_good_six(six, "quads")


def test_parts_from_json():
    assert parts_from_json({"parts": [[[1], [6]]]}) == [[(1,), (6,)]]
    with pytest.raises(InputError):
        parts_from_json({"parts": 3})
    with pytest.raises(InputError):
        parts_from_json([[["x"]]])


def test_parse_appendix_block():
    text = """[2, 2, 3]
[1, 2, 0]
[[[0, 0, 1], [0, 0, 2], [1, 0, 0]]]
sizes: 1*3  2*4  0*5
"""
    (tab,) = parse_appendix(text)
    assert tab.factors == (2, 2, 3) and tab.triple == (1, 2, 0)
    assert tab.profile == "1*3  2*4  0*5" and len(tab.parts) == 1
    with pytest.raises(InputError):
        parse_appendix("[1, 2]\nsizes: 1*3\n")
