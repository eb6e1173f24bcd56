"""Exact period decision procedures.

Horizontal periods go through the transfer graph of width-``p`` bands; total
periods through backtracking on the ``p`` x ``p`` torus.  Minimality is
checked only against maximal proper divisors ``p / r`` (``r`` prime): the
periods of a configuration along an axis form a subgroup of Z, so a smaller
period always divides one of them.
"""
from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import networkx as nx

from .core import RegionAssignment, ResourceLimit, TilingSystem, cylinder, torus
from .search import Completer, compiled

DEFAULT_NODE_CAP = 10**7
MAX_DIVISOR_BITS = 16

Row = tuple[int, ...]
Band = tuple[Row, ...]


def node_cap() -> int:
    return int(os.environ.get("TILEPERIOD_NODE_CAP", DEFAULT_NODE_CAP))


def maximal_proper_divisors(p: int) -> list[int]:
    primes, m, d = [], p, 2
    while d * d <= m:
        if m % d == 0:
            primes.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        primes.append(m)
    return sorted(p // r for r in primes)


def row_has_period(row: Sequence[int], q: int) -> bool:
    p = len(row)
    return all(row[i] == row[(i + q) % p] for i in range(p))


def band_depth(sys: TilingSystem) -> int:
    return max(sys.vheight - 1, 1)


@dataclass
class TransferGraph:
    p: int
    k: int
    nodes: list[Band]
    succ: dict[Band, list[Band]]

    def edges(self):
        for u in self.nodes:
            for v in self.succ[u]:
                yield u, v

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from(self.edges())
        return g


@dataclass
class HorizontalWitness:
    """Bi-infinite band walk: ``lead`` repeated forever below, ``path``, then
    ``trail`` repeated forever above.  ``lead[0]`` follows ``lead[-1]`` and
    leads into ``path[0]`` the same way (likewise for ``trail``)."""

    lead: list[Band]
    path: list[Band]
    trail: list[Band]

    def rows(self, repeats: int = 2) -> list[Row]:
        walk = self.lead * repeats + self.path + self.trail * repeats
        rows = list(walk[0])
        for band in walk[1:]:
            rows.append(band[-1])
        return rows

    def region(self, repeats: int = 2) -> RegionAssignment:
        return cylinder(self.rows(repeats))


@dataclass
class PeriodReport:
    period: int
    kind: str
    eigen: bool
    witness: RegionAssignment | HorizontalWitness | None = field(default=None, repr=False)

    def witness_region(self) -> RegionAssignment | None:
        if isinstance(self.witness, HorizontalWitness):
            return self.witness.region()
        return self.witness


def build_transfer_graph(sys: TilingSystem, p: int, cap: int | None = None) -> TransferGraph:
    if p < 1:
        raise ValueError("p must be positive")
    cap = node_cap() if cap is None else cap
    k = band_depth(sys)
    rules = compiled(sys, p, None)
    bands = []
    for flat in Completer(rules, p, k, wrap_x=True).solutions():
        bands.append(tuple(tuple(flat[y * p:(y + 1) * p]) for y in range(k)))
        if len(bands) > cap:
            raise ResourceLimit(f"transfer graph exceeds {cap} nodes")
    node_set = set(bands)
    ext = Completer(rules, p, k + 1, wrap_x=True)
    succ = {}
    for u in bands:
        prefix = [t for row in u for t in row]
        out = []
        for flat in ext.solutions(prefix):
            v = u[1:] + (tuple(flat[k * p:]),)
            if v in node_set:
                out.append(v)
        succ[u] = out
    return TransferGraph(p, k, bands, succ)


def _cyclic_nodes(g: TransferGraph) -> set[Band]:
    nxg = g.to_networkx()
    cyc = set()
    for comp in nx.strongly_connected_components(nxg):
        if len(comp) > 1:
            cyc |= comp
        else:
            (u,) = comp
            if nxg.has_edge(u, u):
                cyc.add(u)
    return cyc


def _closure(starts, adj):
    seen = set(starts)
    todo = deque(starts)
    while todo:
        u = todo.popleft()
        for v in adj.get(u, ()):
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def _pred(g: TransferGraph) -> dict[Band, list[Band]]:
    pred = {u: [] for u in g.nodes}
    for u, v in g.edges():
        pred[v].append(u)
    return pred


def live_subgraph(g: TransferGraph) -> TransferGraph:
    """Nodes lying on some bi-infinite walk: reachable from a cycle and reaching one."""
    cyc = _cyclic_nodes(g)
    live = _closure(cyc, g.succ) & _closure(cyc, _pred(g))
    nodes = [u for u in g.nodes if u in live]
    succ = {u: [v for v in g.succ[u] if v in live] for u in nodes}
    return TransferGraph(g.p, g.k, nodes, succ)


def _bfs_path(starts, nbrs, goal) -> list:
    parent = {s: None for s in starts}
    todo = deque(starts)
    while todo:
        u = todo.popleft()
        if goal(u):
            out = []
            while u is not None:
                out.append(u)
                u = parent[u]
            return out[::-1]
        for v in nbrs(u):
            if v not in parent:
                parent[v] = u
                todo.append(v)
    return []


def _cycle_through(u: Band, succ) -> list[Band]:
    """A closed walk starting at ``u`` (``u`` must lie on a cycle)."""
    back = _bfs_path(list(succ[u]), succ.__getitem__, lambda v: v == u)
    return [u] + back[:-1]


def _walk_witness(live: TransferGraph, path: list[Band]) -> HorizontalWitness:
    cyc = _cyclic_nodes(live)
    pred = _pred(live)
    up = _bfs_path([path[0]], pred.__getitem__, lambda v: v in cyc)[::-1]
    down = _bfs_path([path[-1]], live.succ.__getitem__, lambda v: v in cyc)
    lead = _cycle_through(up[0], live.succ)
    trail = _cycle_through(down[-1], live.succ)
    full = up[:-1] + path + down[1:]
    # rotate the trail cycle so it starts right after the last path band
    return HorizontalWitness(lead, full, trail[1:] + trail[:1])


def horizontal_period_exists(sys: TilingSystem, p: int):
    """Return ``(exists, witness)``."""
    live = live_subgraph(build_transfer_graph(sys, p))
    if not live.nodes:
        return False, None
    return True, _walk_witness(live, [live.nodes[0]])


def _bad_mask(band: Band, divisors: list[int]) -> int:
    m = 0
    for bit, q in enumerate(divisors):
        if any(not row_has_period(r, q) for r in band):
            m |= 1 << bit
    return m


def horizontal_eigen_report(sys: TilingSystem, p: int) -> PeriodReport | None:
    divisors = maximal_proper_divisors(p)
    if len(divisors) > MAX_DIVISOR_BITS:
        raise ResourceLimit(f"{p} has too many divisors for the mask search")
    live = live_subgraph(build_transfer_graph(sys, p))
    if not live.nodes:
        return None
    full = (1 << len(divisors)) - 1
    masks = {u: _bad_mask(u, divisors) for u in live.nodes}
    starts = [(u, masks[u]) for u in live.nodes]

    def step(state):
        u, m = state
        return [(v, m | masks[v]) for v in live.succ[u]]

    states = _bfs_path(starts, step, lambda s: s[1] == full)
    if not states:
        return None
    witness = _walk_witness(live, [u for u, _ in states])
    return PeriodReport(p, "horizontal", True, witness)


def _map_periods(fn: Callable, sys: TilingSystem, pmax: int, jobs: int):
    ps = range(1, pmax + 1)
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(fn, [sys] * pmax, ps))
    else:
        results = [fn(sys, p) for p in ps]
    return {r.period: r for r in results if r is not None}


def horizontal_eigenperiods(sys: TilingSystem, pmax: int, jobs: int = 1) -> dict[int, PeriodReport]:
    return _map_periods(horizontal_eigen_report, sys, pmax, jobs)


def _torus_completer(sys: TilingSystem, p: int, budget: int | None) -> Completer:
    """Torus search; ``budget`` defaults to the node cap (``TILEPERIOD_NODE_CAP``)."""
    return Completer(compiled(sys, p, p), p, p, True, True,
                     budget=node_cap() if budget is None else budget)


def total_period_exists(sys: TilingSystem, p: int, budget: int | None = None):
    """Return ``(exists, torus witness)``; first witness in row-major, id-ascending order."""
    comp = _torus_completer(sys, p, budget)
    flat = comp.first()
    if flat is None:
        return False, None
    return True, torus(comp.rows(flat))


def torus_has_total_period(rows: Sequence[Row], q: int) -> bool:
    p = len(rows)
    return all(rows[y][x] == rows[y][(x + q) % p] == rows[(y + q) % p][x]
               for y in range(p) for x in range(p))


def total_eigen_report(sys: TilingSystem, p: int, budget: int | None = None) -> PeriodReport | None:
    divisors = maximal_proper_divisors(p)
    comp = _torus_completer(sys, p, budget)
    for flat in comp.solutions():
        rows = comp.rows(flat)
        if not any(torus_has_total_period(rows, q) for q in divisors):
            return PeriodReport(p, "total", True, torus(rows))
    return None


def total_eigenperiods(sys: TilingSystem, pmax: int, jobs: int = 1) -> dict[int, PeriodReport]:
    return _map_periods(total_eigen_report, sys, pmax, jobs)


def eigenperiods(sys: TilingSystem, pmax: int, mode: str = "total", jobs: int = 1):
    if mode == "horizontal":
        return horizontal_eigenperiods(sys, pmax, jobs)
    if mode == "total":
        return total_eigenperiods(sys, pmax, jobs)
    raise ValueError(f"unknown mode {mode!r}")


from .oracle import brute_force_oracle  # noqa: E402  re-export
