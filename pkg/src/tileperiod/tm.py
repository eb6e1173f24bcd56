"""Nondeterministic one-tape machines and their Wang-tile encoding.

Geometry of a compiled rectangle (``y`` grows upward, time flows upward):

* row 0 is the bottom border, row ``time + 1`` the top border, and columns 0
  and ``space + 1`` are the side borders;
* interior row 1 holds the initialization tiles: the input padded with blanks,
  the head in state ``s0`` on the first cell;
* the tiles of interior row ``y >= 2`` rewrite configuration ``y - 2`` (on
  their south edges) into configuration ``y - 1`` (on their north edges);
* the top border only accepts symbols and halting heads.

So an interior of height ``t`` shows ``t`` configurations, i.e. runs of at
most ``t - 1`` steps, and :func:`accepts_within` counts time the same way.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .core import (Pattern, RegionAssignment, ResourceLimit, Tile, TilingError,
                   TilingSystem, check_region)
from .search import Completer, compiled

LEFT, RIGHT = "L", "R"
FAMILIES = ("border", "copy", "head", "init", "halt")


class MachineError(TilingError):
    pass


class InvalidDimensions(TilingError):
    pass


@dataclass(frozen=True)
class TuringMachine:
    states: tuple[str, ...]
    initial: str
    halting: frozenset[str]
    blank: str
    input_alphabet: tuple[str, ...]
    tape_alphabet: tuple[str, ...]
    transitions: tuple[tuple[str, str, str, str, str], ...]

    @classmethod
    def build(cls, states, initial, halting, blank, input_alphabet, transitions,
              tape_alphabet=None) -> "TuringMachine":
        """Normalize, compile away stay moves, and check invariants."""
        trans, states = [], list(states)
        tape = set(tape_alphabet or ()) | set(input_alphabet) | {blank}
        for q, a, q2, a2, mv in transitions:
            tape |= {a, a2}
            if mv in ("S", "N"):
                mid = f"{q}~{a}~{q2}"
                if mid not in states:
                    states.append(mid)
                trans.append((q, a, mid, a2, RIGHT))
                for b in sorted(tape):
                    trans.append((mid, b, q2, b, LEFT))
            else:
                trans.append((q, a, q2, a2, mv))
        m = cls(tuple(states), initial, frozenset(halting), blank, tuple(input_alphabet),
                tuple(sorted(tape)), tuple(sorted(set(trans))))
        problems = m.problems()
        if problems:
            raise MachineError("; ".join(problems))
        return m

    def problems(self) -> list[str]:
        out = []
        st, tape = set(self.states), set(self.tape_alphabet)
        if not self.states:
            out.append("no states")
        if self.initial not in st:
            out.append(f"initial state {self.initial!r} undeclared")
        for h in sorted(self.halting - st):
            out.append(f"halting state {h!r} undeclared")
        if self.blank in self.input_alphabet:
            out.append("blank is an input symbol")
        for name in list(st) + list(tape):
            if ":" in name or not name:
                out.append(f"bad name {name!r}")
        for q, a, q2, a2, mv in self.transitions:
            if q not in st or q2 not in st:
                out.append(f"transition {q},{a} mentions undeclared state")
            if a not in tape or a2 not in tape:
                out.append(f"transition {q},{a} mentions undeclared symbol")
            if mv not in (LEFT, RIGHT):
                out.append(f"transition {q},{a} has bad move {mv!r}")
            if q in self.halting:
                out.append(f"transition leaves halting state {q!r}")
        return out

    def moves(self, q: str, a: str):
        return [(q2, a2, mv) for (p, b, q2, a2, mv) in self.transitions if p == q and b == a]


@dataclass(frozen=True)
class RunBound:
    time: int
    space: int

    def __post_init__(self):
        if self.time < 1 or self.space < 1:
            raise ValueError("bounds must be positive")


def accepts_within(m: TuringMachine, word, b: RunBound, budget: int = 10**6) -> bool:
    """Some run reaches a halting state within ``b.time`` configurations
    (``b.time - 1`` steps) without the head leaving the first ``b.space`` cells."""
    word = tuple(word)
    if len(word) > b.space:
        return False
    tape = word + (m.blank,) * (b.space - len(word))
    start = (m.initial, 0, tape)
    seen = {start}
    frontier = deque([(start, 1)])
    while frontier:
        (q, pos, tape), t = frontier.popleft()
        if q in m.halting:
            return True
        if t == b.time:
            continue
        for q2, a2, mv in m.moves(q, tape[pos]):
            npos = pos + (1 if mv == RIGHT else -1)
            if not 0 <= npos < b.space:
                continue
            cfg = (q2, npos, tape[:pos] + (a2,) + tape[pos + 1:])
            if cfg not in seen:
                seen.add(cfg)
                if len(seen) > budget:
                    raise ResourceLimit("configuration budget exhausted")
                frontier.append((cfg, t + 1))
    return False


# Edge colors: vertical edges carry "s:a" (symbol) or "h:q:a" (head);
# horizontal edges carry "-" (nothing), "L:q"/"R:q" (moving head) or border links.
OUT = "x"


def _sym(a):
    return f"s:{a}"


def _head(q, a):
    return f"h:{q}:{a}"


@dataclass
class WangTile:
    label: str
    family: str
    north: str
    east: str
    south: str
    west: str


def wang_tiles(m: TuringMachine) -> list[WangTile]:
    tiles = []

    def add(label, family, n, e, s, w):
        tiles.append(WangTile(f"{family}:{label}", family, n, e, s, w))

    add("BL", "border", "lb", "bb", OUT, OUT)
    add("B", "border", "bot", "bb", OUT, "bb")
    add("BR", "border", "rb", OUT, OUT, "bb")
    add("LB", "border", "lb", "-", "lb", OUT)
    add("RB", "border", "rb", OUT, "rb", "-")
    add("TL", "border", OUT, "tb", "lb", OUT)
    add("TR", "border", OUT, OUT, "rb", "tb")
    for a in m.tape_alphabet:
        add(f"T:{a}", "border", OUT, "tb", _sym(a), "tb")
    for a in m.tape_alphabet:
        add(a, "copy", _sym(a), "-", _sym(a), "-")
    targets = set()
    for q, a, q2, a2, mv in m.transitions:
        if mv == LEFT:
            add(f"{q}:{a}:{q2}:{a2}:L", "head", _sym(a2), "-", _head(q, a), f"L:{q2}")
        else:
            add(f"{q}:{a}:{q2}:{a2}:R", "head", _sym(a2), f"R:{q2}", _head(q, a), "-")
        targets.add((q2, mv))
    for q2, mv in sorted(targets):
        for b in m.tape_alphabet:
            if mv == LEFT:
                add(f"recv:{q2}:{b}:L", "head", _head(q2, b), f"L:{q2}", _sym(b), "-")
            else:
                add(f"recv:{q2}:{b}:R", "head", _head(q2, b), "-", _sym(b), f"R:{q2}")
    first = sorted(set(m.input_alphabet) | {m.blank})
    for a in first:
        add(a, "init", _sym(a), "-", "bot", "-")
    for a in first:
        add(f"{m.initial}:{a}", "init", _head(m.initial, a), "-", "bot", "-")
    for h in sorted(m.halting):
        for a in m.tape_alphabet:
            add(f"idle:{h}:{a}", "halt", _head(h, a), "-", _head(h, a), "-")
        for a in m.tape_alphabet:
            add(f"T:{h}:{a}", "halt", OUT, "tb", _head(h, a), "tb")
    return tiles


def wang_rules(tiles, ids=None, layers=None):
    """Forbidden adjacent pairs whose shared edge colors disagree."""
    ids = ids or {t.label: i for i, t in enumerate(tiles)}
    wrap = (lambda v: (v,)) if layers is not None else (lambda v: v)
    pats = []
    for t, u in itertools.product(tiles, repeat=2):
        if t.east != u.west:
            pats.append(Pattern.hpair(wrap(ids[t.label]), wrap(ids[u.label]), layers))
        if t.north != u.south:
            pats.append(Pattern.vpair(wrap(ids[t.label]), wrap(ids[u.label]), layers))
    return pats


def encode_tm(m: TuringMachine) -> TilingSystem:
    problems = m.problems()
    if problems:
        raise MachineError("; ".join(problems))
    wt = wang_tiles(m)
    tiles = tuple(Tile(i, t.label) for i, t in enumerate(wt))
    meta = {
        "kind": "tm",
        "initial": m.initial,
        "blank": m.blank,
        "halting": sorted(m.halting),
        "families": list(FAMILIES),
        "edges": {t.label: [t.north, t.east, t.south, t.west] for t in wt},
    }
    return TilingSystem(tiles, tuple(wang_rules(wt)), metadata=meta)


def wang_from_system(sys: TilingSystem) -> list[WangTile]:
    edges = sys.metadata["edges"]
    return [WangTile(t.label, t.label.split(":", 1)[0], *edges[t.label]) for t in sys.tiles]


def rectangle_domains(sys: TilingSystem, word, width: int, height: int):
    """Per-cell tile domains pinning the border and the initialization row."""
    meta = sys.metadata
    ids = {t.label: t.id for t in sys.tiles}
    blank, s0 = meta["blank"], meta["initial"]
    tape = list(word) + [blank] * (width - len(word))
    W, H = width + 2, height + 2
    top = [t.id for t in sys.tiles
           if t.label.startswith("border:T:") or t.label.startswith("halt:T:")]
    dom = {}
    for x in range(W):
        dom[(x, 0)] = [ids["border:" + ("BL" if x == 0 else "BR" if x == W - 1 else "B")]]
        if 0 < x < W - 1:
            dom[(x, H - 1)] = top
    dom[(0, H - 1)] = [ids["border:TL"]]
    dom[(W - 1, H - 1)] = [ids["border:TR"]]
    for y in range(1, H - 1):
        dom[(0, y)] = [ids["border:LB"]]
        dom[(W - 1, y)] = [ids["border:RB"]]
    for x, a in enumerate(tape, start=1):
        label = f"init:{s0}:{a}" if x == 1 else f"init:{a}"
        dom[(x, 1)] = [ids[label]] if label in ids else []
    return dom


def rectangle_tileable(sys: TilingSystem, word, interior_width: int, interior_height: int,
                       budget: int | None = 10**6, witness: bool = False):
    if interior_width < 1 or interior_height < 1:
        raise InvalidDimensions("interior must be at least 1x1")
    word = tuple(word)
    if len(word) > interior_width:
        return (False, None) if witness else False
    W, H = interior_width + 2, interior_height + 2
    comp = Completer(compiled(sys), W, H,
                     domains=rectangle_domains(sys, word, interior_width, interior_height),
                     budget=budget)
    flat = comp.first()
    if flat is None:
        return (False, None) if witness else False
    region = RegionAssignment(W, H, comp.rows(flat))
    assert not check_region(sys, region)
    return (True, region) if witness else True


def manifest(sys: TilingSystem) -> str:
    counts = {f: 0 for f in FAMILIES}
    for t in sys.tiles:
        counts[t.label.split(":", 1)[0]] += 1
    lines = [f"families: {','.join(FAMILIES)}"]
    lines += [f"{f}: {counts[f]}" for f in FAMILIES]
    lines += [f"tiles: {len(sys.tiles)}", f"rules: {len(sys.forbidden)}"]
    return "\n".join(lines) + "\n"
