"""Tiling systems with finite forbidden patterns.

A configuration is a map from Z^2 to tiles; ``y`` grows upward.  A pattern is a
finite partial map from offsets to tiles.  Layered systems (built by
:func:`layer_product`) may also carry *projected* patterns that only look at a
subset of the per-tile layer labels, so a constraint on one component does not
have to be expanded over the whole product alphabet.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Sequence

Offset = tuple[int, int]


class TilingError(Exception):
    """Base class for errors raised by this package."""


class UnknownTile(TilingError):
    pass


class AlphabetMismatch(TilingError):
    pass


class ResourceLimit(TilingError):
    pass


class _Unsatisfiable:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "UNSATISFIABLE"

    def __bool__(self):
        return False


UNSATISFIABLE = _Unsatisfiable()


@dataclass(frozen=True)
class Tile:
    id: int
    label: str
    layers: tuple[Hashable, ...] | None = None


@dataclass(frozen=True)
class Pattern:
    """Finite partial map ``(dx, dy) -> value``, normalized to min offset 0.

    With ``layers=None`` values are tile ids.  Otherwise values are tuples of
    layer labels, one per entry of ``layers``, and a tile matches a cell when
    its projection onto those layers equals the value.
    """

    cells: tuple[tuple[Offset, Any], ...]
    layers: tuple[int, ...] | None = None

    def __post_init__(self):
        cells = tuple(sorted(self.cells, key=lambda c: (c[0][1], c[0][0])))
        if cells:
            mx = min(o[0] for o, _ in cells)
            my = min(o[1] for o, _ in cells)
            if mx or my:
                cells = tuple(((x - mx, y - my), v) for (x, y), v in cells)
        object.__setattr__(self, "cells", cells)
        if self.layers is not None:
            object.__setattr__(self, "layers", tuple(self.layers))

    @classmethod
    def of(cls, mapping: dict[Offset, Any], layers: Sequence[int] | None = None) -> "Pattern":
        return cls(tuple(mapping.items()), None if layers is None else tuple(layers))

    @classmethod
    def hpair(cls, left, right, layers=None) -> "Pattern":
        return cls.of({(0, 0): left, (1, 0): right}, layers)

    @classmethod
    def vpair(cls, below, above, layers=None) -> "Pattern":
        return cls.of({(0, 0): below, (0, 1): above}, layers)

    @property
    def offsets(self) -> tuple[Offset, ...]:
        return tuple(o for o, _ in self.cells)

    @property
    def values(self) -> tuple[Any, ...]:
        return tuple(v for _, v in self.cells)

    @property
    def width(self) -> int:
        return max((o[0] for o in self.offsets), default=-1) + 1

    @property
    def height(self) -> int:
        return max((o[1] for o in self.offsets), default=-1) + 1

    def as_dict(self) -> dict[Offset, Any]:
        return dict(self.cells)


@dataclass(frozen=True)
class TilingSystem:
    tiles: tuple[Tile, ...]
    forbidden: tuple[Pattern, ...] = ()
    layer_names: tuple[str, ...] | None = None
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "tiles", tuple(self.tiles))
        object.__setattr__(self, "forbidden", tuple(self.forbidden))
        if self.layer_names is not None:
            object.__setattr__(self, "layer_names", tuple(self.layer_names))

    @classmethod
    def from_labels(cls, labels: Iterable[str], forbidden: Iterable[dict[Offset, str]] = (), **kw):
        """Build an unlayered system from labels and label-valued pattern dicts."""
        tiles = tuple(Tile(i, lab) for i, lab in enumerate(labels))
        ids = {t.label: t.id for t in tiles}
        pats = [Pattern.of({o: ids[v] for o, v in p.items()}) for p in forbidden]
        return cls(tiles, tuple(pats), **kw)

    @property
    def hwidth(self) -> int:
        return max((p.width for p in self.forbidden), default=1)

    @property
    def vheight(self) -> int:
        return max((p.height for p in self.forbidden), default=1)

    @property
    def radius(self) -> int:
        return max(self.hwidth, self.vheight, 1)

    @property
    def nlayers(self) -> int:
        return 0 if self.layer_names is None else len(self.layer_names)

    def tile_index(self) -> dict[int, int]:
        return {t.id: i for i, t in enumerate(self.tiles)}

    def id_of(self, label: str) -> int:
        for t in self.tiles:
            if t.label == label:
                return t.id
        raise UnknownTile(label)

    def labels(self) -> dict[int, str]:
        return {t.id: t.label for t in self.tiles}

    def projector(self, layers: tuple[int, ...] | None):
        """Return ``tile id -> value`` used to match patterns with these layers."""
        if layers is None:
            return {t.id: t.id for t in self.tiles}
        return {t.id: tuple(t.layers[i] for i in layers) for t in self.tiles}

    def expanded(self, cap: int = 2_000_000) -> "TilingSystem":
        """Equivalent system whose patterns are all concrete tile-id patterns."""
        if all(p.layers is None for p in self.forbidden):
            return self
        out: list[Pattern] = []
        seen = set()
        for pat in self.forbidden:
            if pat.layers is None:
                choices = [[v] for v in pat.values]
            else:
                proj = self.projector(pat.layers)
                inv = defaultdict(list)
                for tid, val in proj.items():
                    inv[val].append(tid)
                choices = [inv.get(v, []) for v in pat.values]
            for combo in itertools.product(*choices):
                p = Pattern(tuple(zip(pat.offsets, combo)))
                if p not in seen:
                    seen.add(p)
                    out.append(p)
                    if len(out) > cap:
                        raise ResourceLimit(f"expansion exceeds {cap} patterns")
        return TilingSystem(self.tiles, tuple(out), self.layer_names, dict(self.metadata))


@dataclass(frozen=True)
class RegionAssignment:
    """Rows are listed bottom to top; ``cells[y][x]`` is a tile id."""

    width: int
    height: int
    cells: tuple[tuple[int, ...], ...]
    wrap_x: bool = False
    wrap_y: bool = False

    def __post_init__(self):
        cells = tuple(tuple(r) for r in self.cells)
        object.__setattr__(self, "cells", cells)
        if len(cells) != self.height or any(len(r) != self.width for r in cells):
            raise ValueError("cells do not cover the declared rectangle")

    def at(self, x: int, y: int) -> int:
        if self.wrap_x:
            x %= self.width
        if self.wrap_y:
            y %= self.height
        return self.cells[y][x]


def torus(rows: Sequence[Sequence[int]]) -> RegionAssignment:
    """A ``TorusConfiguration``: square region wrapped on both axes."""
    rows = tuple(tuple(r) for r in rows)
    if len(rows) != len(rows[0]):
        raise ValueError("torus configurations are square")
    return RegionAssignment(len(rows), len(rows), rows, True, True)


def cylinder(rows: Sequence[Sequence[int]]) -> RegionAssignment:
    rows = tuple(tuple(r) for r in rows)
    return RegionAssignment(len(rows[0]), len(rows), rows, True, False)


@dataclass(frozen=True)
class Violation:
    pattern: int
    anchor: Offset


def validate_system(sys: TilingSystem) -> list[str]:
    diags = []
    if not sys.tiles:
        diags.append("empty tile set")
    ids = [t.id for t in sys.tiles]
    for tid in sorted({i for i in ids if ids.count(i) > 1}):
        diags.append(f"duplicate tile id {tid}")
    labels = [t.label for t in sys.tiles]
    for lab in sorted({lab for lab in labels if labels.count(lab) > 1}):
        diags.append(f"duplicate tile label {lab!r}")
    n = sys.nlayers
    for t in sys.tiles:
        if n and (t.layers is None or len(t.layers) != n):
            diags.append(f"tile {t.id}: layer tuple arity differs from {n}")
        elif not n and t.layers is not None:
            diags.append(f"tile {t.id}: layers given but system declares none")
    known = set(ids)
    layer_vals = [set() for _ in range(n)]
    for t in sys.tiles:
        if t.layers is not None and len(t.layers) == n:
            for i, v in enumerate(t.layers):
                layer_vals[i].add(v)
    for k, pat in enumerate(sys.forbidden):
        if not pat.cells:
            diags.append(f"pattern {k}: empty pattern")
            continue
        if len(set(pat.offsets)) != len(pat.offsets):
            diags.append(f"pattern {k}: repeated offset")
        if pat.layers is None:
            for v in pat.values:
                if v not in known:
                    diags.append(f"pattern {k}: unknown tile {v}")
        else:
            if any(not 0 <= i < n for i in pat.layers):
                diags.append(f"pattern {k}: layer index out of range")
                continue
            for v in pat.values:
                if not isinstance(v, tuple) or len(v) != len(pat.layers):
                    diags.append(f"pattern {k}: value arity mismatch")
                elif any(c not in layer_vals[i] for c, i in zip(v, pat.layers)):
                    diags.append(f"pattern {k}: unknown layer label {v!r}")
    return diags


def reduce_pattern_mod(pat: Pattern, px: int | None, py: int | None):
    """Fold a pattern onto a ``px``/``py``-periodic lattice.

    Returns the folded pattern, or ``UNSATISFIABLE`` if two folded cells
    demand different values.
    """
    if (not px or pat.width <= px) and (not py or pat.height <= py):
        return pat
    merged: dict[Offset, Any] = {}
    for (x, y), v in pat.cells:
        key = (x % px if px else x, y % py if py else y)
        if key in merged and merged[key] != v:
            return UNSATISFIABLE
        merged[key] = v
    return Pattern(tuple(merged.items()), pat.layers)


def _anchors(extent: int, span: int, wrap: bool) -> range:
    return range(extent) if wrap else range(extent - span + 1)


def _grouped(sys: TilingSystem, px, py):
    """Patterns folded for ``px``/``py`` and grouped by support and projection."""
    cache = sys.__dict__.setdefault("_grouped", {})
    if (px, py) not in cache:
        groups: dict[tuple, dict[tuple, list[int]]] = defaultdict(lambda: defaultdict(list))
        for k, pat in enumerate(sys.forbidden):
            red = reduce_pattern_mod(pat, px, py)
            if red is UNSATISFIABLE or not red.cells:
                continue
            groups[(red.offsets, red.layers)][red.values].append(k)
        cache[(px, py)] = [((offs, sys.projector(layers)), dict(table))
                           for (offs, layers), table in groups.items()]
    return cache[(px, py)]


def check_region(sys: TilingSystem, region: RegionAssignment) -> list[Violation]:
    known = {t.id for t in sys.tiles}
    for row in region.cells:
        for v in row:
            if v not in known:
                raise UnknownTile(f"tile id {v} not in system")
    w, h = region.width, region.height
    out = []
    for (offs, proj), table in _grouped(sys, w if region.wrap_x else None,
                                        h if region.wrap_y else None):
        spanx = max(o[0] for o in offs) + 1
        spany = max(o[1] for o in offs) + 1
        for ay in _anchors(h, spany, region.wrap_y):
            for ax in _anchors(w, spanx, region.wrap_x):
                key = tuple(proj[region.at(ax + dx, ay + dy)] for dx, dy in offs)
                for k in table.get(key, ()):
                    out.append(Violation(k, (ax, ay)))
    out.sort(key=lambda v: (v.pattern, v.anchor[1], v.anchor[0]))
    return out


def _component_layers(sys: TilingSystem) -> int:
    return sys.nlayers or 1


def layer_product(systems: Sequence[TilingSystem], coupling: Iterable[Pattern] = (),
                  names: Sequence[str] | None = None, prune: bool = False) -> TilingSystem:
    """Cartesian product of tile sets with each component's rules lifted.

    Component patterns become projected patterns on that component's layers,
    i.e. free on every other coordinate.  Coupling patterns must be projected
    (``layers`` set) or carry full label tuples of the product arity.
    With ``prune`` the tuples excluded by single-cell patterns are dropped
    (and ids renumbered), as are patterns that mention a layer value no
    remaining tile carries; neither changes the set of valid tilings.
    """
    if not systems:
        raise ValueError("need at least one system")
    offsets, total = [], 0
    for s in systems:
        offsets.append(total)
        total += _component_layers(s)
    if names is None:
        names = []
        for i, s in enumerate(systems):
            if s.layer_names:
                names.extend(f"{i}.{n}" for n in s.layer_names)
            else:
                names.append(str(i))
    per_comp = []
    for s in systems:
        per_comp.append([t.layers if s.nlayers else (t.label,) for t in s.tiles])
    forbidden = []
    for s, base in zip(systems, offsets):
        lab = s.labels()
        for pat in s.forbidden:
            if pat.layers is None:
                if s.nlayers:
                    src = {t.id: t.layers for t in s.tiles}
                    vals = [src[v] for v in pat.values]
                    lay = tuple(range(base, base + s.nlayers))
                else:
                    vals = [(lab[v],) for v in pat.values]
                    lay = (base,)
            else:
                vals = list(pat.values)
                lay = tuple(base + i for i in pat.layers)
            forbidden.append(Pattern(tuple(zip(pat.offsets, vals)), lay))
    for pat in coupling:
        if pat.layers is None:
            for v in pat.values:
                if not isinstance(v, tuple) or len(v) != total:
                    raise AlphabetMismatch(f"coupling value {v!r} is not a {total}-tuple")
            pat = Pattern(pat.cells, tuple(range(total)))
        elif any(not 0 <= i < total for i in pat.layers) or any(
                not isinstance(v, tuple) or len(v) != len(pat.layers) for v in pat.values):
            raise AlphabetMismatch("coupling pattern does not fit the product layers")
        forbidden.append(pat)
    unary = defaultdict(set)
    if prune:
        for pat in forbidden:
            if len(pat.cells) == 1:
                unary[pat.layers].add(pat.values[0])
    tiles = []
    for combo in itertools.product(*per_comp):
        layers = tuple(itertools.chain.from_iterable(combo))
        if any(tuple(layers[i] for i in lay) in bad for lay, bad in unary.items()):
            continue
        tiles.append(Tile(len(tiles), "(" + ",".join(map(str, layers)) + ")", layers))
    if prune:
        present = [set(vals) for vals in zip(*(t.layers for t in tiles))] or [set()] * total
        forbidden = [p for p in forbidden
                     if all(c in present[i] for v in p.values for c, i in zip(v, p.layers))]
    return TilingSystem(tuple(tiles), tuple(forbidden), tuple(names))


def disjoint_union(sys1: TilingSystem, sys2: TilingSystem) -> TilingSystem:
    """Tagged union; tiles from different sides may never be adjacent."""
    parts = [sys1.expanded(), sys2.expanded()]
    tiles, forbidden, sides = [], [], []
    for tag, s in enumerate(parts, start=1):
        remap = {}
        for t in s.tiles:
            remap[t.id] = len(tiles)
            tiles.append(Tile(len(tiles), f"{tag}:{t.label}"))
        sides.append(sorted(remap.values()))
        for pat in s.forbidden:
            forbidden.append(Pattern(tuple((o, remap[v]) for o, v in pat.cells)))
    for a, b in itertools.product(*sides):
        forbidden += [Pattern.hpair(a, b), Pattern.hpair(b, a),
                      Pattern.vpair(a, b), Pattern.vpair(b, a)]
    return TilingSystem(tuple(tiles), tuple(forbidden))
