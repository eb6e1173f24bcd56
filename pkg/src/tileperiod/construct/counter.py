"""Base-``c`` counter layer.

Each block of white cells between two gray cells holds a number whose least
significant digit sits just left of the gray cell.  Carries travel right to
left; the gray cell injects a carry of 1 and records in ``ovf`` whether the
carry fell off the most significant digit.  Going up one row adds the carries:
``v' = (v + cin) mod c``.  A gray cell is marked ``R`` exactly when the row
below overflowed, and the marker is constant along a row, so with ``m``
digits the ``R`` rows recur every ``c**m`` rows.  Digits of an ``R`` row are 0.

The digit alphabet is every (value, carry, marker) triple; gray cells add four
tiles (overflow bit x marker).
"""
from __future__ import annotations

from dataclasses import dataclass

from ..core import Pattern, Tile, TilingSystem

MARKERS = ("B", "R")


@dataclass(frozen=True)
class Digit:
    v: int
    cin: int
    marker: str

    @property
    def label(self) -> str:
        return f"d{self.v}c{self.cin}{self.marker}"

    def carry_out(self, base: int) -> int:
        return int(self.v + self.cin >= base)


@dataclass(frozen=True)
class GrayCell:
    ovf: int
    marker: str

    @property
    def label(self) -> str:
        return f"g{self.ovf}{self.marker}"


@dataclass(frozen=True)
class CounterLayer:
    base: int
    digits: tuple[Digit, ...]
    grays: tuple[GrayCell, ...]
    system: TilingSystem

    def kinds(self) -> dict[str, Digit | GrayCell]:
        return {k.label: k for k in self.digits + self.grays}


def _forbids(base, a, b, horizontal):
    """True when ``b`` may not sit east of (resp. above) ``a``."""
    da, db = isinstance(a, Digit), isinstance(b, Digit)
    if horizontal:
        if a.marker != b.marker:
            return True
        if da and db:
            return a.cin != b.carry_out(base)
        if da:
            return a.cin != 1
        if db:
            return a.ovf != b.carry_out(base)
        return True  # blocks are non-empty
    if da != db:
        return True
    if da:
        return b.v != (a.v + a.cin) % base
    return (b.marker == "R") != (a.ovf == 1)


def counter_tiles(base: int) -> CounterLayer:
    if base < 2:
        raise ValueError("counter base must be at least 2")
    digits = tuple(Digit(v, c, m) for m in MARKERS for v in range(base) for c in (0, 1))
    grays = tuple(GrayCell(o, m) for m in MARKERS for o in (0, 1))
    kinds = digits + grays
    tiles = tuple(Tile(i, k.label) for i, k in enumerate(kinds))
    pats = [Pattern.of({(0, 0): i}) for i, k in enumerate(kinds)
            if isinstance(k, Digit) and k.marker == "R" and k.v != 0]
    for i, a in enumerate(kinds):
        for j, b in enumerate(kinds):
            if _forbids(base, a, b, True):
                pats.append(Pattern.hpair(i, j))
            if _forbids(base, a, b, False):
                pats.append(Pattern.vpair(i, j))
    sys = TilingSystem(tiles, tuple(pats), metadata={"kind": "counter", "base": base})
    return CounterLayer(base, digits, grays, sys)
