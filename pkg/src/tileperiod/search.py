"""Backtracking completion of rectangular regions.

Cells are filled in row-major order (bottom row first, left to right) and each
forbidden-pattern occurrence is tested as soon as its last cell is assigned.
Adjacent-pair rules go through per-tile compatibility caches; everything else
is checked occurrence by occurrence.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Iterator, Sequence

from .core import UNSATISFIABLE, ResourceLimit, TilingSystem, reduce_pattern_mod

_H = ((0, 0), (1, 0))
_V = ((0, 0), (0, 1))


class CompiledRules:
    """Forbidden patterns of ``sys`` folded for periods ``px``/``py``."""

    def __init__(self, sys: TilingSystem, px: int | None = None, py: int | None = None):
        self.sys = sys
        self.ids = sorted(t.id for t in sys.tiles)
        grouped = defaultdict(set)
        for pat in sys.forbidden:
            red = reduce_pattern_mod(pat, px, py)
            if red is UNSATISFIABLE or not red.cells:
                continue
            grouped[(red.offsets, red.layers)].add(red.values)
        projs = {}
        self.banned = set()
        self.hgroups, self.vgroups, self.groups = [], [], []
        for (offs, layers), forb in grouped.items():
            proj = projs.get(layers)
            if proj is None:
                proj = projs[layers] = sys.projector(layers)
            if len(offs) == 1:
                self.banned.update(t for t in self.ids if (proj[t],) in forb)
            elif offs == _H:
                self.hgroups.append((proj, forb))
            elif offs == _V:
                self.vgroups.append((proj, forb))
            else:
                self.groups.append((offs, proj, forb))
        self.allowed = [t for t in self.ids if t not in self.banned]
        self._east, self._west, self._north, self._south = {}, {}, {}, {}

    def _pair_set(self, cache, groups, tile, tile_first):
        got = cache.get(tile)
        if got is None:
            if not groups:
                got = None
            else:
                ok = []
                for t in self.allowed:
                    pair = (tile, t) if tile_first else (t, tile)
                    if not any((pr[pair[0]], pr[pair[1]]) in fb for pr, fb in groups):
                        ok.append(t)
                got = frozenset(ok)
            cache[tile] = got
        return got

    def east_of(self, t):
        return self._pair_set(self._east, self.hgroups, t, True)

    def west_of(self, t):
        return self._pair_set(self._west, self.hgroups, t, False)

    def north_of(self, t):
        return self._pair_set(self._north, self.vgroups, t, True)

    def south_of(self, t):
        return self._pair_set(self._south, self.vgroups, t, False)


def compiled(sys: TilingSystem, px: int | None = None, py: int | None = None) -> CompiledRules:
    """Memoized :class:`CompiledRules` (systems are immutable)."""
    cache = sys.__dict__.get("_compiled")
    if cache is None:
        cache = {}
        object.__setattr__(sys, "_compiled", cache)
    key = (px, py)
    if key not in cache:
        cache[key] = CompiledRules(sys, px, py)
    return cache[key]


class Completer:
    """Enumerates valid assignments of a ``width`` x ``height`` region."""

    def __init__(self, rules: CompiledRules, width: int, height: int,
                 wrap_x: bool = False, wrap_y: bool = False,
                 domains: dict[tuple[int, int], Sequence[int]] | None = None,
                 budget: int | None = None):
        self.rules = rules
        self.w, self.h = width, height
        self.wrap_x, self.wrap_y = wrap_x, wrap_y
        self.budget = budget
        self.nodes = 0
        n = width * height
        allowed = set(rules.allowed)
        self.domains = [rules.allowed] * n
        for (x, y), dom in (domains or {}).items():
            self.domains[y * width + x] = sorted(set(dom) & allowed)
        self.pair_checks = [[] for _ in range(n)]
        self.checks = [[] for _ in range(n)]
        self._build(rules)

    def _occurrences(self, offs):
        w, h = self.w, self.h
        spanx = max(o[0] for o in offs) + 1
        spany = max(o[1] for o in offs) + 1
        ys = range(h) if self.wrap_y else range(h - spany + 1)
        xs = range(w) if self.wrap_x else range(w - spanx + 1)
        for ay in ys:
            for ax in xs:
                yield tuple(((ay + dy) % h) * w + (ax + dx) % w for dx, dy in offs)

    def _build(self, rules):
        if rules.hgroups:
            for a, b in self._occurrences(_H):
                if b > a:
                    self.pair_checks[b].append((rules.east_of, a))
                else:
                    self.pair_checks[a].append((rules.west_of, b))
        if rules.vgroups:
            for a, b in self._occurrences(_V):
                if b > a:
                    self.pair_checks[b].append((rules.north_of, a))
                else:
                    self.pair_checks[a].append((rules.south_of, b))
        for offs, proj, forb in rules.groups:
            for pos in self._occurrences(offs):
                last = max(pos)
                self.checks[last].append((pos, pos.index(last), proj, forb))

    def _candidates(self, i, grid):
        dom = self.domains[i]
        sets = [f(grid[j]) for f, j in self.pair_checks[i]]
        sets = [s for s in sets if s is not None]
        if sets:
            sets.sort(key=len)
            common = sets[0].intersection(*sets[1:])
            cands = [t for t in dom if t in common]
        else:
            cands = list(dom)
        for pos, slot, proj, forb in self.checks[i]:
            if not cands:
                break
            vals = [proj[grid[p]] if p != i else None for p in pos]
            keep = []
            for t in cands:
                vals[slot] = proj[t]
                if tuple(vals) not in forb:
                    keep.append(t)
            cands = keep
        return cands

    def solutions(self, prefix: Sequence[int] = ()) -> Iterator[list[int]]:
        """Yield flat row-major grids; ``prefix`` pins the first cells (assumed valid)."""
        n = self.w * self.h
        grid = list(prefix) + [None] * (n - len(prefix))
        start = len(prefix)
        if start == n:
            yield list(grid)
            return
        stack = [iter(self._candidates(start, grid))]
        while stack:
            i = start + len(stack) - 1
            t = next(stack[-1], None)
            if t is None:
                stack.pop()
                grid[i] = None
                continue
            self.nodes += 1
            if self.budget is not None and self.nodes > self.budget:
                raise ResourceLimit(f"search exceeded {self.budget} nodes")
            grid[i] = t
            if i + 1 == n:
                yield list(grid)
                continue
            stack.append(iter(self._candidates(i + 1, grid)))

    def first(self, prefix: Sequence[int] = ()) -> list[int] | None:
        return next(self.solutions(prefix), None)

    def rows(self, flat: Sequence[int]) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(flat[y * self.w:(y + 1) * self.w]) for y in range(self.h))


class Propagator:
    """Forward-checking search with smallest-domain-first cell order.

    Every two-cell rule prunes the domains of unassigned partners as soon as
    one cell is set, so long-range cycles in a torus (a value chosen in one
    row and contradicted rows later) fail immediately.  Larger patterns are
    checked once all their cells are set.  Results are deterministic: ties in
    domain size go to the lowest cell index, tiles are tried in id order.
    """

    def __init__(self, rules: CompiledRules, width: int, height: int,
                 wrap_x: bool = False, wrap_y: bool = False,
                 domains: dict[tuple[int, int], Sequence[int]] | None = None,
                 budget: int | None = None):
        self.rules = rules
        self.w, self.h = width, height
        self.budget = budget
        self.nodes = 0
        n = width * height
        allowed = frozenset(rules.allowed)
        self.domains = [allowed] * n
        for (x, y), dom in (domains or {}).items():
            self.domains[y * width + x] = allowed & frozenset(dom)
        self.links = [[] for _ in range(n)]
        self.checks = [[] for _ in range(n)]
        occ = Completer(rules, width, height, wrap_x, wrap_y)._occurrences
        if rules.hgroups:
            for a, b in occ(_H):
                self.links[a].append((b, rules.east_of))
                self.links[b].append((a, rules.west_of))
        if rules.vgroups:
            for a, b in occ(_V):
                self.links[a].append((b, rules.north_of))
                self.links[b].append((a, rules.south_of))
        for offs, proj, forb in rules.groups:
            if len(offs) == 2:
                fwd, bwd = self._pair_rel(proj, forb)
                for a, b in occ(offs):
                    self.links[a].append((b, fwd))
                    self.links[b].append((a, bwd))
            else:
                for pos in occ(offs):
                    for i in set(pos):
                        self.checks[i].append((pos, proj, forb))

    def _pair_rel(self, proj, forb):
        cache_f, cache_b = {}, {}
        allowed = self.rules.allowed

        def fwd(t):
            got = cache_f.get(t)
            if got is None:
                got = cache_f[t] = frozenset(u for u in allowed if (proj[t], proj[u]) not in forb)
            return got

        def bwd(t):
            got = cache_b.get(t)
            if got is None:
                got = cache_b[t] = frozenset(u for u in allowed if (proj[u], proj[t]) not in forb)
            return got
        return fwd, bwd

    def _consistent(self, i, t, grid):
        for j, rel in self.links[i]:
            if j == i and t not in rel(t):
                return False
        for pos, proj, forb in self.checks[i]:
            if all(grid[p] is not None or p == i for p in pos):
                if tuple(proj[t] if p == i else proj[grid[p]] for p in pos) in forb:
                    return False
        return True

    def solutions(self) -> Iterator[list[int]]:
        n = self.w * self.h
        grid: list = [None] * n
        dom = list(self.domains)
        free = set(range(n))

        def pick():
            return min(free, key=lambda k: (len(dom[k]), k))

        def assign(i, t):
            trail = []
            for j, rel in self.links[i]:
                if grid[j] is None and j != i:
                    new = dom[j] & rel(t)
                    trail.append((j, dom[j]))
                    dom[j] = new
                    if not new:
                        return trail, False
            return trail, True

        if any(not d for d in dom):
            return
        stack = []
        i = pick()
        stack.append((i, iter(sorted(dom[i])), None))
        free.discard(i)
        while stack:
            i, it, trail = stack[-1]
            if trail is not None:
                for j, old in reversed(trail):
                    dom[j] = old
                grid[i] = None
                stack[-1] = (i, it, None)
            t = next(it, None)
            if t is None:
                stack.pop()
                free.add(i)
                continue
            if not self._consistent(i, t, grid):
                continue
            self.nodes += 1
            if self.budget is not None and self.nodes > self.budget:
                raise ResourceLimit(f"search exceeded {self.budget} nodes")
            grid[i] = t
            trail, ok = assign(i, t)
            stack[-1] = (i, it, trail)
            if not ok:
                continue
            if not free:
                yield list(grid)
                continue
            j = pick()
            free.discard(j)
            stack.append((j, iter(sorted(dom[j])), None))

    def first(self) -> list[int] | None:
        return next(self.solutions(), None)

    def rows(self, flat: Sequence[int]) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(flat[y * self.w:(y + 1) * self.w]) for y in range(self.h))
