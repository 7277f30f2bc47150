from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import independent_check
from zsp.errors import CapabilityExceeded, InputError
from zsp.groups import GroupSpec
from zsp.oracle import (
    BUDGET_EXCEEDED,
    FOUND,
    INFEASIBLE,
    PartialState,
    SearchBudget,
    enumerate_realizable,
    integer_partitions,
    prune_bound,
    randomized_partition,
    search_partition,
)

G = GroupSpec.parse


def _brute_realizable(factors, sizes) -> bool:
    """Independent exhaustive check by recursive subset choice (tiny groups only)."""
    zero = tuple(0 for _ in factors)
    elems = [e for e in itertools.product(*[range(n) for n in factors]) if e != zero]

    def zs(block):
        return all(sum(e[i] for e in block) % n == 0 for i, n in enumerate(factors))

    def rec(left, sizes_left):
        if not sizes_left:
            return not left
        s = sizes_left[0]
        x = min(left)
        rest = sorted(left - {x})
        for combo in itertools.combinations(rest, s - 1):
            block = (x, *combo)
            if zs(block) and rec(left - set(block), sizes_left[1:]):
                return True
        return False

    # every size order must be tried because x is forced into the first part
    return any(rec(frozenset(elems), list(p)) for p in set(itertools.permutations(sizes)))


def test_search_examples():
    res = search_partition(G("Z2xZ2"), None, [3])
    assert res.outcome == FOUND
    assert res.partition.parts == (((0, 1), (1, 0), (1, 1)),)
    assert search_partition(G("Z4"), None, [3]).outcome == INFEASIBLE
    spec = G("Z2xZ2xZ2xZ3")
    res = search_partition(spec, None, [3] + [5] * 4)
    assert res.outcome == FOUND
    assert res.partition.verify("1*3 0*4 4*5").ok


def test_search_errors_and_budget():
    with pytest.raises(InputError):
        search_partition(G("Z7"), None, [3, 4])
    res = search_partition(G("Z2xZ2xZ2xZ2xZ2"), None, [3] * 9 + [4], SearchBudget(5))
    assert res.outcome == BUDGET_EXCEEDED


def test_search_custom_ground():
    spec = G("Z7")
    res = search_partition(spec, [(1,), (6,), (2,), (5,)], [2, 2])
    assert res.outcome == FOUND and len(res.partition.parts) == 2
    assert search_partition(spec, [(1,), (2,)], [2]).outcome == INFEASIBLE


def test_search_is_deterministic():
    spec = G("Z3xZ5")
    a = search_partition(spec, None, [4, 5, 5])
    b = search_partition(spec, None, [5, 4, 5])
    assert a.partition == b.partition


@pytest.mark.parametrize("text", ["Z7", "Z8", "Z2xZ4", "Z9", "Z3xZ3", "Z2xZ2xZ2", "Z10", "Z11", "Z12", "Z2xZ6"])
def test_enumerate_agrees_with_brute_force(text):
    spec = G(text)
    table = enumerate_realizable(spec, 2)
    for sizes, verdict in table.verdicts.items():
        assert (verdict == FOUND) == _brute_realizable(spec.factors, sizes), sizes


def test_enumerate_examples():
    assert len(enumerate_realizable(G("Z9"), 2).infeasible()) == 0
    z8 = enumerate_realizable(G("Z8"), 2)
    assert z8.verdicts and not z8.realizable()
    v8 = enumerate_realizable(G("Z2xZ2xZ2"), 3)
    assert sorted(v8.realizable()) == [(3, 4), (7,)]
    with pytest.raises(CapabilityExceeded):
        enumerate_realizable(G("Z64"), 2)


def test_integer_partitions():
    assert sorted(map(tuple, integer_partitions(7, 2))) == [(2, 2, 3), (2, 5), (3, 4), (7,)]
    assert [tuple(p) for p in integer_partitions(7, 3, 4)] == [(3, 4)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["Z13", "Z3xZ5", "Z2xZ8", "Z2xZ2xZ4", "Z17"]), st.data())
def test_found_partitions_verify_independently(text, data):
    spec = G(text)
    sizes = data.draw(st.sampled_from(list(map(list, integer_partitions(spec.order - 1, 3)))))
    res = search_partition(spec, None, sizes)
    assert res.outcome == FOUND
    assert independent_check(spec.factors, res.partition.parts, sizes)


def test_prune_bound_examples():
    spec = G("Z7")
    root = PartialState(spec, frozenset(spec.nonzero()), (), 0, (3, 3))
    assert prune_bound(root) == "keep"
    started = PartialState(spec, frozenset(spec.nonzero()) - {(2,)}, ((2,),), 3, (3,))
    assert prune_bound(started) == "cut"
    wrong_sum = PartialState(spec, frozenset({(1,), (2,), (3,)}), (), 0, (3,))
    assert prune_bound(wrong_sum) == "cut"
    no_pairs = PartialState(spec, frozenset({(1,), (2,), (4,), (3,)}), (), 0, (2, 2))
    assert prune_bound(no_pairs) == "cut"


def test_randomized_partition():
    spec = G("Z2xZ32")
    res = randomized_partition(spec, None, [3] * 21)
    assert res.outcome == FOUND
    assert independent_check(spec.factors, res.partition.parts, [3] * 21)
    again = randomized_partition(spec, None, [3] * 21)
    assert again.partition == res.partition
    # it never claims infeasibility unless the total is non-zero
    assert randomized_partition(G("Z8"), None, [3, 4]).outcome == INFEASIBLE
    assert randomized_partition(G("Z2xZ2xZ2"), None, [2, 5], tries=5).outcome == BUDGET_EXCEEDED
