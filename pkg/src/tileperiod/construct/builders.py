"""Layered tiling systems whose periods encode a machine's language.

Horizontal mode (layers ``A D T M S``) — gray columns cut the plane into
blocks of width ``p - 1``:

* ``A``: an East-deterministic tile set plus ``#gray``; a gray column is all
  gray and two gray cells are never horizontally adjacent;
* ``D``: the base-``c`` counter, whose ``R`` rows recur every ``c**(p-1)``;
* ``T``: constant along rows; the cell right of a gray cell has ``A == T``, so
  every block starts with the same column and hence has the same content;
* ``M``: the machine tiles plus a gray tile with ``x`` on all edges; bottom
  borders exactly on ``R`` rows, the initialization row reads ``1...1_``;
* ``S``: constant along rows; a transition tile writes its id there, so all
  rectangles of a row take the same nondeterministic choice.

Total mode (layers ``A D Uc Ud Vr Vd M S Sd``) — a grid of gray lines cuts the
plane into squares:

* ``A``: a NW-deterministic set plus crossing (``#X``), horizontal (``#H``)
  and vertical (``#V``) gray tiles with the usual four adjacency rules;
* ``D``: a diagonal signal moving by ``(1, 1)``: gray cells emit their kind,
  ``#X`` must receive ``#X``, ``#H`` must receive ``#V`` and ``#V`` must
  receive ``#H``.  This makes the gray lines form ``n x n`` squares;
* ``Uc``/``Ud`` (constant along columns / along ``x + y``) carry the first row
  of each square to all squares, ``Vr``/``Vd`` (constant along rows / along
  ``x + y``) the first column.  NW-determinism then fixes the whole square;
* ``M`` as above with rectangles cut by gray lines on all four sides;
* ``S``/``Sd`` synchronize the transition choice the same way as ``Vr``/``Vd``.

In both modes the period is ``n + 4`` for input ``1**n``: one gray cell, two
side borders and one blank.
"""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass

from ..core import Pattern, Tile, TilingError, TilingSystem, layer_product
from ..tm import OUT, TuringMachine, WangTile, wang_rules, wang_tiles
from .counter import Digit, counter_tiles
from .determinism import DeterministicTileset, UncertifiedAperiodicSet

OFFSET = 4
OFFSET_NOTE = "1 (gray) + 1 (left border) + 1 (right border) + 1 (blank)"
GRAY, CROSS, HORIZ, VERT = "#gray", "#X", "#H", "#V"
GRAY_KINDS = (CROSS, HORIZ, VERT)
NO_SIGNAL = "0"
NO_TRANSITION = "none"
BOTTOM = ("border:BL", "border:B", "border:BR")
SIDES = ("border:LB", "border:RB")
CORNER_NOTE = "row R: BL right of gray, BR left of gray; row below R: TL right, TR left"


class DirectionMismatch(TilingError):
    pass


@dataclass(frozen=True)
class ConstructionSpec:
    mode: str
    tileset: DeterministicTileset
    machine: TuringMachine
    base: int = 2

    def __post_init__(self):
        if self.mode not in ("horizontal", "total"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if tuple(self.machine.input_alphabet) != ("1",):
            raise ValueError("construction machines must have input alphabet {1}")
        if self.base < 2:
            raise ValueError("counter base must be at least 2")


def _system(labels, pats, **meta):
    return TilingSystem(tuple(Tile(i, l) for i, l in enumerate(labels)), tuple(pats),
                        metadata=meta)


def _same_along(labels, offset):
    """Values are constant along ``offset``."""
    return [Pattern.of({(0, 0): i, offset: j})
            for i, j in itertools.permutations(range(len(labels)), 2)]


def _diag_same(labels):
    # constant along x + y: cells (0,1) and (1,0)
    return [Pattern.of({(0, 1): i, (1, 0): j})
            for i, j in itertools.permutations(range(len(labels)), 2)]


def _white_rules(tileset: DeterministicTileset):
    sys = tileset.system.expanded()
    if sys.hwidth > 2 or sys.vheight > 2:
        raise TilingError("aperiodic set must be given by adjacent-pair rules")
    index = sys.tile_index()
    return [t.label for t in sys.tiles], [
        Pattern(tuple((o, index[v]) for o, v in zip(p.offsets, p.values))) for p in sys.forbidden]


def machine_layer(m: TuringMachine, sealed: bool) -> TilingSystem:
    """Machine tiles plus a gray tile; ``sealed`` also forbids rectangles
    touching vertically without a gray row in between."""
    wt = wang_tiles(m) + [WangTile(GRAY, "gray", OUT, OUT, OUT, OUT)]
    ids = {t.label: i for i, t in enumerate(wt)}
    pats = wang_rules(wt, ids)
    for t, u in itertools.product(wt, repeat=2):
        if GRAY in (t.label, u.label):
            continue
        if t.east == OUT and u.west == OUT:
            pats.append(Pattern.hpair(ids[t.label], ids[u.label]))
        if sealed and t.north == OUT and u.south == OUT:
            pats.append(Pattern.vpair(ids[t.label], ids[u.label]))
    one, blank, s0 = "1", m.blank, m.initial
    lb = ids["border:LB"]
    init_blank = [f"init:{blank}", f"init:{s0}:{blank}"]
    init_one = [f"init:{one}", f"init:{s0}:{one}"]
    for t in wt:
        for lab in init_blank:
            if t.label != "border:RB":
                pats.append(Pattern.hpair(ids[lab], ids[t.label]))
        for lab in init_one:
            if t.label not in (f"init:{one}", f"init:{blank}"):
                pats.append(Pattern.hpair(ids[lab], ids[t.label]))
        if t.label != "border:LB":
            for lab in (f"init:{s0}:{one}", f"init:{s0}:{blank}"):
                pats.append(Pattern.hpair(ids[t.label], ids[lab]))
    for lab in (f"init:{one}", f"init:{blank}"):
        pats.append(Pattern.hpair(lb, ids[lab]))
    pats.append(Pattern.hpair(lb, ids["border:RB"]))  # the tape is never empty
    return _system([t.label for t in wt], pats, kind="machine-layer")


def _transition_ids(m: TuringMachine):
    out = {}
    for i, (q, a, q2, a2, mv) in enumerate(m.transitions):
        out[f"head:{q}:{a}:{q2}:{a2}:{mv}"] = f"t{i}"
    return out


def _sync_pairs(m_labels, trans):
    """(M, S) unary exclusions: transition tiles name their id, rows without a
    transition (idle, top or bottom border, initialization) carry ``none``."""
    bad = []
    s_vals = [NO_TRANSITION] + sorted(set(trans.values()), key=lambda s: int(s[1:]))
    for lab in m_labels:
        fam = lab.split(":", 1)[0]
        if lab in trans:
            want = trans[lab]
        elif fam in ("init", "halt") or (fam == "border" and lab not in SIDES):
            want = NO_TRANSITION
        else:
            continue
        bad.extend((lab, s) for s in s_vals if s != want)
    return s_vals, bad


def _unary(layers, pairs):
    return [Pattern((((0, 0), tuple(v)),), tuple(layers)) for v in pairs]


def _require(spec: ConstructionSpec, direction: str):
    ts = spec.tileset
    if not ts.certified:
        raise UncertifiedAperiodicSet(f"tile set not certified {ts.direction}-deterministic")
    if ts.direction != direction:
        raise DirectionMismatch(f"{spec.mode} construction needs a {direction}-deterministic "
                                f"set, got {ts.direction}")


def _finish(sys, spec, comps, names, extra):
    alphabets = {n: [t.label for t in c.tiles] for n, c in zip(names, comps)}
    product = 1
    for c in comps:
        product *= len(c.tiles)
    meta = {"kind": "construction", "mode": spec.mode, "base": spec.base,
            "offset": OFFSET, "offset_note": OFFSET_NOTE, "corners": CORNER_NOTE,
            "alphabets": alphabets, "product": product, **extra}
    return TilingSystem(sys.tiles, sys.forbidden, tuple(names), meta)


def build_horizontal_construction(spec: ConstructionSpec) -> TilingSystem:
    if spec.mode != "horizontal":
        raise ValueError("spec is not a horizontal construction")
    _require(spec, "east")
    whites, wrules = _white_rules(spec.tileset)
    g = len(whites)
    a_rules = list(wrules) + [Pattern.hpair(g, g)]
    for w in range(g):
        a_rules += [Pattern.vpair(w, g), Pattern.vpair(g, w)]
    A = _system(whites + [GRAY], a_rules)
    counter = counter_tiles(spec.base)
    D = counter.system
    T = _system(whites, _same_along(whites, (1, 0)))
    M = machine_layer(spec.machine, sealed=False)
    trans = _transition_ids(spec.machine)
    m_labels = [t.label for t in M.tiles]
    s_vals, ms_bad = _sync_pairs(m_labels, trans)
    S = _system(s_vals, _same_along(s_vals, (1, 0)))
    kinds = counter.kinds()

    coupling = []
    coupling += _unary((0, 1), [(a, d) for a in A.labels().values() for d in kinds
                                if (a == GRAY) == isinstance(kinds[d], Digit)])
    coupling += _unary((0, 3), [(a, m) for a in A.labels().values() for m in m_labels
                                if (a == GRAY) != (m == GRAY)])
    coupling += _unary((1, 3), [(d, m) for d, k in kinds.items() if isinstance(k, Digit)
                                for m in m_labels if (k.marker == "R") != (m in BOTTOM)])
    coupling += _unary((3, 4), ms_bad)
    for t0 in whites:
        for a, b in itertools.permutations(whites, 2):
            coupling.append(Pattern((((0, 0), (GRAY, t0)), ((1, 0), (a, b))), (0, 2)))
    names = ("A", "D", "T", "M", "S")
    comps = (A, D, T, M, S)
    sys = layer_product(comps, coupling, names, prune=True)
    return _finish(sys, spec, comps, names, {})


def gray_kind(label: str) -> str:
    return label if label in GRAY_KINDS else "W"


def gray_forbidden(left_or_below: str, right_or_above: str, axis: str) -> bool:
    """Adjacency rules among white (``W``) and the three gray kinds."""
    if axis == "h":
        ends = {CROSS, HORIZ}
    else:
        ends = {CROSS, VERT}
    a, b = left_or_below, right_or_above
    return (a in ends and b not in ends) or (b in ends and a not in ends)


def _gray_rules(labels):
    pats = []
    for (i, a), (j, b) in itertools.product(enumerate(labels), repeat=2):
        ka, kb = gray_kind(a), gray_kind(b)
        if (ka != "W" or kb != "W") and gray_forbidden(ka, kb, "h"):
            pats.append(Pattern.hpair(i, j))
        if (ka != "W" or kb != "W") and gray_forbidden(ka, kb, "v"):
            pats.append(Pattern.vpair(i, j))
    return pats


SIGNAL_NEEDS = {CROSS: CROSS, HORIZ: VERT, VERT: HORIZ}


def _signal_coupling(a_labels, a_layer=0, d_layer=1):
    sigs = (NO_SIGNAL,) + GRAY_KINDS
    pats = _unary((a_layer, d_layer), [(a, s) for a in a_labels if a in SIGNAL_NEEDS
                                       for s in sigs if s != SIGNAL_NEEDS[a]])
    for a, s in itertools.product(a_labels, sigs):
        out = a if a in GRAY_KINDS else s
        for a2, s2 in itertools.product(a_labels, sigs):
            if s2 != out:
                pats.append(Pattern((((0, 0), (a, s)), ((1, 1), (a2, s2))), (a_layer, d_layer)))
    return sigs, pats


def nondegenerate_coupling(a_layer=0, d_layer=1):
    """Crossings never touch: squares have a non-empty white interior.

    Kept apart from the gray adjacency rules so that those stay exactly the
    four-case table; without it the all-crossing tiling has period 1."""
    x = (CROSS, CROSS)
    return [Pattern.hpair(x, x, (a_layer, d_layer)), Pattern.vpair(x, x, (a_layer, d_layer))]


def diagonal_signal_layer(nondegenerate: bool = True) -> TilingSystem:
    """The gray skeleton of the total construction on its own: one white tile,
    the three gray kinds and the diagonal signal."""
    labels = ["w", *GRAY_KINDS]
    A = _system(labels, _gray_rules(labels))
    sigs, coupling = _signal_coupling(labels)
    if nondegenerate:
        coupling += nondegenerate_coupling()
    D = _system(list(sigs), [])
    return layer_product((A, D), coupling, ("A", "D"), prune=True)


def build_total_construction(spec: ConstructionSpec) -> TilingSystem:
    if spec.mode != "total":
        raise ValueError("spec is not a total construction")
    _require(spec, "nw")
    whites, wrules = _white_rules(spec.tileset)
    a_labels = whites + list(GRAY_KINDS)
    A = _system(a_labels, list(wrules) + _gray_rules(a_labels))
    sigs, coupling = _signal_coupling(a_labels)
    D = _system(list(sigs), [])
    Uc = _system(whites, _same_along(whites, (0, 1)))
    Ud = _system(whites, _diag_same(whites))
    Vr = _system(whites, _same_along(whites, (1, 0)))
    Vd = _system(whites, _diag_same(whites))
    M = machine_layer(spec.machine, sealed=True)
    trans = _transition_ids(spec.machine)
    m_labels = [t.label for t in M.tiles]
    s_vals, ms_bad = _sync_pairs(m_labels, trans)
    S = _system(s_vals, _same_along(s_vals, (1, 0)))
    Sd = _system(s_vals, _diag_same(s_vals))
    names = ("A", "D", "Uc", "Ud", "Vr", "Vd", "M", "S", "Sd")
    lay = {n: i for i, n in enumerate(names)}

    coupling += _unary((lay["A"], lay["M"]), [(a, m) for a in a_labels for m in m_labels
                                              if (a in GRAY_KINDS) != (m == GRAY)])
    coupling += _unary((lay["M"], lay["S"]), ms_bad)
    coupling += _unary((lay["M"], lay["S"], lay["Sd"]),
                       [("border:LB", s, sd) for s in s_vals for sd in s_vals if s != sd])
    for top in (CROSS, HORIZ):
        for ch in ("Uc", "Ud"):
            for a, u in itertools.permutations(whites, 2):
                for other in whites:
                    coupling.append(Pattern((((0, 0), (a, u)), ((0, 1), (top, other))),
                                            (lay["A"], lay[ch])))
    for left in (CROSS, VERT):
        for ch in ("Vr", "Vd"):
            for a, u in itertools.permutations(whites, 2):
                for other in whites:
                    coupling.append(Pattern((((0, 0), (left, other)), ((1, 0), (a, u))),
                                            (lay["A"], lay[ch])))
    coupling += nondegenerate_coupling(lay["A"], lay["D"])
    comps = (A, D, Uc, Ud, Vr, Vd, M, S, Sd)
    sys = layer_product(comps, coupling, names, prune=True)
    return _finish(sys, spec, comps, names, {})


def build_construction(spec: ConstructionSpec) -> TilingSystem:
    if spec.mode == "horizontal":
        return build_horizontal_construction(spec)
    return build_total_construction(spec)


def builder_manifest(sys: TilingSystem) -> str:
    """Deterministic text report of a constructed system."""
    meta = sys.metadata
    lines = [f"mode: {meta['mode']}", f"layers: {','.join(sys.layer_names)}"]
    for name in sys.layer_names:
        alpha = meta["alphabets"][name]
        lines.append(f"layer {name}: {len(alpha)} values")
    lines += [f"product: {meta['product']}", f"tiles: {len(sys.tiles)}",
              f"rules: {len(sys.forbidden)}", f"base: {meta['base']}",
              f"offset={meta['offset']}", f"offset accounting: {meta['offset_note']}",
              f"corners: {meta['corners']}"]
    h = hashlib.sha256()
    for t in sys.tiles:
        h.update(f"{t.id}={t.label};".encode())
    for pat in sys.forbidden:
        h.update(repr((pat.cells, pat.layers)).encode())
    lines.append(f"digest: {h.hexdigest()[:16]}")
    return "\n".join(lines) + "\n"
