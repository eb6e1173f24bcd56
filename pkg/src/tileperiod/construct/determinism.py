"""East- and NW-determinism of tile sets.

Both checks look at a three-cell window and count the tiles that can fill the
target cell without completing any forbidden pattern lying inside the window:

* East: ``(0,0)`` and ``(0,1)`` are a given column pair, the target is
  ``(1,0)``.  Filling columns cell by cell then determines a half plane.
* NW: ``(0,0)`` is the west neighbour and ``(1,1)`` the north neighbour of
  the target ``(1,0)``; the two givens are diagonally adjacent.

Shearing the lattice by ``(x, y) -> (x - y, y)`` maps the NW window onto the
East window, which is how a NW-deterministic set is recoded as an
East-deterministic one.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from importlib import resources

from ..core import Pattern, TilingError, TilingSystem

EAST_WINDOW = ((0, 0), (0, 1)), (1, 0)
NW_WINDOW = ((0, 0), (1, 1)), (1, 0)


class UncertifiedAperiodicSet(TilingError):
    pass


class FixtureUnavailable(TilingError):
    pass


@dataclass(frozen=True)
class Counterexample:
    given: tuple[str, str]
    completions: tuple[str, str]


@dataclass(frozen=True)
class DeterminismResult:
    ok: bool
    counterexample: Counterexample | None = None

    def __bool__(self):
        return self.ok


def _placements(pat: Pattern, window: set):
    """Translations of ``pat`` whose support lies inside ``window``."""
    offs = pat.offsets
    out = []
    for wx, wy in window:
        sx, sy = wx - offs[0][0], wy - offs[0][1]
        moved = tuple((x + sx, y + sy) for x, y in offs)
        if all(c in window for c in moved):
            out.append(moved)
    return out


def _check(sys: TilingSystem, givens, target) -> DeterminismResult:
    sys = sys.expanded()
    window = set(givens) | {target}
    placed = []
    for pat in sys.forbidden:
        for cells in _placements(pat, window):
            if target in cells:
                placed.append((cells, pat.values))
    ids = [t.id for t in sys.tiles]
    label = sys.labels()
    for g in itertools.product(ids, repeat=len(givens)):
        assign = dict(zip(givens, g))
        fits = []
        for t in ids:
            assign[target] = t
            if not any(all(assign[c] == v for c, v in zip(cells, vals)) for cells, vals in placed):
                fits.append(t)
                if len(fits) == 2:
                    ce = Counterexample(tuple(label[x] for x in g), (label[fits[0]], label[fits[1]]))
                    return DeterminismResult(False, ce)
    return DeterminismResult(True)


def check_east_deterministic(sys: TilingSystem) -> DeterminismResult:
    return _check(sys, *EAST_WINDOW)


def check_nw_deterministic(sys: TilingSystem) -> DeterminismResult:
    return _check(sys, *NW_WINDOW)


def shear_nw_to_east(sys: TilingSystem) -> TilingSystem:
    pats = tuple(Pattern(tuple(((x - y, y), v) for (x, y), v in p.cells), p.layers)
                 for p in sys.forbidden)
    return TilingSystem(sys.tiles, pats, sys.layer_names, dict(sys.metadata))


@dataclass(frozen=True)
class DeterministicTileset:
    system: TilingSystem
    direction: str
    certified: bool

    @classmethod
    def certify(cls, system: TilingSystem, direction: str) -> "DeterministicTileset":
        if direction == "east":
            ok = check_east_deterministic(system).ok
        elif direction == "nw":
            ok = check_nw_deterministic(system).ok
        else:
            raise ValueError(f"unknown direction {direction!r}")
        return cls(system, direction, ok)

    def white_labels(self) -> list[str]:
        return [t.label for t in self.system.tiles]


def mock_tileset(direction: str) -> DeterministicTileset:
    """Two-tile stripes stand-in.  Deterministic both ways but periodic: it only
    exercises the wiring of the constructions, never their period guarantees."""
    stripes = TilingSystem.from_labels("ab", [
        {(0, 0): "a", (1, 0): "a"}, {(0, 0): "b", (1, 0): "b"},
        {(0, 0): "a", (0, 1): "b"}, {(0, 0): "b", (0, 1): "a"}])
    return DeterministicTileset.certify(stripes, direction)


def kari_papasoglu() -> DeterministicTileset:
    """Load the bundled Kari-Papasoglu NW-deterministic set, verifying determinism."""
    from ..io import system_from_json
    res = resources.files("tileperiod") / "data" / "kari_papasoglu.json"
    if not res.is_file():
        raise FixtureUnavailable("kari_papasoglu.json is not bundled; see README")
    doc = json.loads(res.read_text())
    return DeterministicTileset.certify(system_from_json(doc), doc.get("direction", "nw"))
