"""Brute-force horizontal eigenperiods, for cross-checking the solver.

Deliberately shares no code with :mod:`tileperiod.search` or the transfer-graph
solver: stacks of rows are enumerated with ``itertools.product`` and checked
with :func:`core.check_region`; reachability uses boolean matrix iteration.

A configuration of horizontal period ``p`` is a bi-infinite sequence of
``p``-periodic rows in which every window of ``k + 1`` rows is valid.  It has
eigenperiod ``p`` iff for every maximal proper divisor ``q`` some row is not
``q``-periodic.  Rows that lie on a bi-infinite sequence are those admitting
walks of length ``N`` (the number of ``k``-stacks) both upward and downward:
any longer walk must revisit a stack.
"""
from __future__ import annotations

import itertools

import numpy as np

from .core import RegionAssignment, ResourceLimit, TilingSystem, check_region


def _valid(sys, rows, p):
    return not check_region(sys, RegionAssignment(p, len(rows), rows, True, False))


def _divisors(p):
    out = []
    for r in range(2, p + 1):
        if p % r == 0 and all(r % s for s in range(2, r)):
            out.append(p // r)
    return out


def _is_eigen(sys, p, k, hmax, limit):
    ids = [t.id for t in sys.tiles]
    if len(ids) ** (p * k) > limit:
        raise ResourceLimit("instance too large for the brute-force oracle")
    rows = [r for r in itertools.product(ids, repeat=p) if _valid(sys, (r,), p)]
    stacks = [s for s in itertools.product(rows, repeat=k) if _valid(sys, s, p)]
    n = len(stacks)
    if n == 0:
        return False
    index = {s: i for i, s in enumerate(stacks)}
    adj = np.zeros((n, n), dtype=bool)
    for s in stacks:
        for r in rows:
            t = s[1:] + (r,)
            if t in index and _valid(sys, s + (r,), p):
                adj[index[s], index[t]] = True
    steps = n if hmax is None else min(n, hmax)
    fwd = np.ones(n, dtype=bool)
    bwd = np.ones(n, dtype=bool)
    for _ in range(steps):
        fwd = adj[:, fwd].any(axis=1)
        bwd = adj[bwd, :].any(axis=0)
    live = fwd & bwd
    if not live.any():
        return False
    sub = adj & live[:, None] & live[None, :]
    reach = sub | np.eye(n, dtype=bool)
    while True:
        nxt = (reach.astype(np.int32) @ reach.astype(np.int32)) > 0
        if (nxt == reach).all():
            break
        reach = nxt
    qs = _divisors(p)
    bad = {q: np.array([live[i] and any(any(r[j] != r[(j + q) % p] for j in range(p)) for r in s)
                        for i, s in enumerate(stacks)], dtype=bool) for q in qs}
    if not qs:
        return True
    for order in itertools.permutations(qs):
        cur = bad[order[0]]
        for q in order[1:]:
            cur = (reach[cur, :].any(axis=0)) & bad[q]
        if cur.any():
            return True
    return False


def brute_force_oracle(sys: TilingSystem, p: int, hmax: int | None = None,
                       limit: int = 200_000) -> set[int]:
    """Horizontal eigenperiods ``<= p`` by exhaustive enumeration.

    ``hmax`` caps the walk length examined; the default is the number of
    valid row stacks, which is exact (and never exceeds ``|T|**(r*p*k)``).
    """
    k = max(max((pt.height for pt in sys.forbidden), default=1) - 1, 1)
    return {q for q in range(1, p + 1) if _is_eigen(sys, q, k, hmax, limit)}
