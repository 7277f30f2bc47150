"""Lifting a realization in A* to (A x Z2)* by adding |A|/4 zero-sum 4-subsets."""
from __future__ import annotations

from ..errors import InputError, PreconditionViolated
from ..groups import Element, GroupSpec, involution_count
from ..partition import ZeroSumPartition


def lifted_group(A: GroupSpec, position: int | None = None) -> GroupSpec:
    pos = len(A.factors) if position is None else position
    f = list(A.factors)
    f.insert(pos, 2)
    return GroupSpec(tuple(f))


def _insert(x: Element, pos: int, bit: int) -> Element:
    return x[:pos] + (bit,) + x[pos:]


def lift_by_z2(A: GroupSpec, realization: ZeroSumPartition, triple_in_A=None,
               position: int | None = None, n1: int = 1) -> ZeroSumPartition:
    """Realize (a, b + |A|/4, c) in (A x Z2)* from a realization of (a, b, c) in A*.

    The new Z2 coordinate is inserted at ``position`` (default: last).  A x {0}
    carries the old realization; A x {1} is cut into 4-subsets: self-inverse
    elements by cosets of a Klein subgroup, the rest as two inverse pairs.
    """
    if n1 != 1:
        raise NotImplementedError("only the Z2 lift is implemented")
    if A.order % 4:
        raise PreconditionViolated(f"|A| = {A.order} is not divisible by 4")
    if involution_count(A) <= 1:
        raise PreconditionViolated(f"{A} has at most one involution")
    if realization.spec.factors != A.factors:
        raise InputError("realization is not over A")
    if triple_in_A is not None:
        a, b, c = (int(x) for x in triple_in_A)
        rep = realization.verify({3: a, 4: b, 5: c})
        if not rep.ok:
            raise InputError(f"realization does not realize {tuple(triple_in_A)}: {rep.issues}")
    pos = len(A.factors) if position is None else position
    G = lifted_group(A, pos)
    parts: list[list[Element]] = [[_insert(x, pos, 0) for x in p] for p in realization.parts]
    elems = A.elements()
    selfinv = [x for x in elems if A.neg(x) == x]
    # Klein subgroup {0, i, j, i + j} inside the self-inverse subgroup
    i = selfinv[1]
    j = next(y for y in selfinv[2:] if y != i)
    k = A.add(i, j)
    seen: set = set()
    for s in selfinv:
        if s in seen:
            continue
        block = [s, A.add(s, i), A.add(s, j), A.add(s, k)]
        seen.update(block)
        parts.append([_insert(x, pos, 1) for x in block])
    if len(seen) != len(selfinv):  # pragma: no cover - cosets partition the subgroup
        raise AssertionError("self-inverse elements did not split into Klein cosets")
    pairs = []
    for x in elems:
        nx = A.neg(x)
        if nx != x and x < nx:
            pairs.append((x, nx))
    if len(pairs) % 2:  # pragma: no cover - 4 divides |A| - |selfinv|
        raise AssertionError("odd number of inverse pairs")
    for t in range(0, len(pairs), 2):
        block = [*pairs[t], *pairs[t + 1]]
        parts.append([_insert(x, pos, 1) for x in block])
    out = ZeroSumPartition.build(G, parts)
    rep = out.verify()
    if not rep.ok:  # pragma: no cover - guards the construction
        raise AssertionError(f"lift produced an invalid partition: {rep.issues}")
    return out
