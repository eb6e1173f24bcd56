"""Small systems and machines shared by the tests."""
import itertools
import random

from hypothesis import strategies as st

from tileperiod.core import Pattern, Tile, TilingSystem
from tileperiod.tm import TuringMachine

# stripes: horizontal neighbours differ, vertical neighbours agree
FIX1 = TilingSystem.from_labels("ab", [
    {(0, 0): "a", (1, 0): "a"}, {(0, 0): "b", (1, 0): "b"},
    {(0, 0): "a", (0, 1): "b"}, {(0, 0): "b", (0, 1): "a"}])
FIX2 = TilingSystem.from_labels("t")
FIX3 = TilingSystem.from_labels("t", [{(0, 0): "t"}])
FIX4 = TilingSystem.from_labels("ab", [{(0, 0): "a", (1, 0): "a"}])
FREE2 = TilingSystem.from_labels("ab")

PARITY = TuringMachine.build(
    ["s0", "s1", "h"], "s0", ["h"], "_", ["1"],
    [("s0", "1", "s1", "1", "R"), ("s1", "1", "s0", "1", "R"), ("s0", "_", "h", "_", "L")])

COPIER = TuringMachine.build(
    ["s0", "c0", "c1", "h"], "s0", ["h"], "_", ["0", "1"],
    [("s0", "0", "c0", "0", "R"), ("s0", "1", "c1", "1", "R"), ("s0", "_", "h", "_", "R")]
    + [(c, a, c, a, "R") for c in ("c0", "c1") for a in "01"]
    + [("c0", "_", "h", "0", "L"), ("c1", "_", "h", "1", "L")])

GUESS = TuringMachine.build(
    ["s0", "g", "h"], "s0", ["h"], "_", ["0", "1"],
    [("s0", "0", "s0", "0", "R"), ("s0", "1", "s0", "1", "R"), ("s0", "1", "g", "1", "R"),
     ("g", "0", "h", "0", "L"), ("g", "1", "h", "1", "L"), ("g", "_", "h", "_", "L")])

NONE = TuringMachine.build(["s0"], "s0", [], "_", [], [])

# accepts 1^n for n >= 1 in a single step
ONE = TuringMachine.build(["s0", "h"], "s0", ["h"], "_", ["1"], [("s0", "1", "h", "1", "R")])

FLEET = {"parity": PARITY, "copier": COPIER, "guess": GUESS, "none": NONE}


def random_pair_system(rng: random.Random, max_tiles: int = 3, density: float = 0.35):
    n = rng.randint(1, max_tiles)
    tiles = tuple(Tile(i, "abc"[i]) for i in range(n))
    pats = []
    for a in range(n):
        for b in range(n):
            if rng.random() < density:
                pats.append(Pattern.hpair(a, b))
            if rng.random() < density:
                pats.append(Pattern.vpair(a, b))
    return TilingSystem(tiles, tuple(pats))


@st.composite
def _small_system(draw, max_tiles=3):
    k = draw(st.integers(1, max_tiles))
    pairs = list(itertools.product(range(k), repeat=2))
    h = draw(st.lists(st.sampled_from(pairs), unique=True))
    v = draw(st.lists(st.sampled_from(pairs), unique=True))
    pats = [Pattern.hpair(a, b) for a, b in h] + [Pattern.vpair(a, b) for a, b in v]
    return TilingSystem(tuple(Tile(i, "abc"[i]) for i in range(k)), tuple(pats))


def small_systems(max_tiles: int = 3):
    """Hypothesis strategy: up to ``max_tiles`` tiles, adjacent-pair rules."""
    return _small_system(max_tiles)
