"""Shared helpers.  ``independent_check`` deliberately avoids package code."""
from __future__ import annotations

import itertools
from collections import Counter


def all_elements(factors):
    return list(itertools.product(*[range(n) for n in factors]))


def independent_check(factors, parts, sizes=None, ground=None) -> bool:
    """Plain-Python zero-sum partition check over Z_{n1} x ... x Z_{nk}."""
    factors = tuple(factors)
    zero = tuple(0 for _ in factors)
    if ground is None:
        ground = [e for e in all_elements(factors) if e != zero]
    flat = [tuple(e) for p in parts for e in p]
    if len(flat) != len(set(flat)) or set(flat) != set(map(tuple, ground)):
        return False
    for p in parts:
        s = tuple(sum(e[i] for e in p) % n for i, n in enumerate(factors))
        if s != zero:
            return False
    if sizes is not None and Counter(len(p) for p in parts) != Counter(sizes):
        return False
    return True
