import itertools

import pytest

from tileperiod.core import ResourceLimit, check_region, validate_system
from tileperiod.search import Completer, compiled
from tileperiod.tm import (FAMILIES, InvalidDimensions, MachineError, RunBound, TuringMachine,
                           accepts_within, encode_tm, manifest, rectangle_domains,
                           rectangle_tileable)

from fixtures import COPIER, FLEET, GUESS, NONE, PARITY

HALT0 = TuringMachine.build(["s0"], "s0", ["s0"], "_", ["1"], [])
HALT01 = TuringMachine.build(["s0"], "s0", ["s0"], "_", ["0", "1"], [])
# one state, runs right forever over 1s; never halts
LOOP = TuringMachine.build(["s0"], "s0", [], "_", ["1"], [("s0", "1", "s0", "1", "R")])


def family_counts(sys):
    counts = dict.fromkeys(FAMILIES, 0)
    for t in sys.tiles:
        counts[t.label.split(":", 1)[0]] += 1
    return counts


def test_accepts_within_examples():
    assert accepts_within(PARITY, "11", RunBound(4, 4))
    assert not accepts_within(PARITY, "1", RunBound(4, 4))
    for m in FLEET.values():
        if m.initial not in m.halting:
            assert not accepts_within(m, "", RunBound(1, 1))


def test_accepts_within_counts_configurations():
    # "11" needs three steps, i.e. four configurations
    assert not accepts_within(PARITY, "11", RunBound(3, 4))
    # the head visits cell 3 (the blank) before halting
    assert not accepts_within(PARITY, "11", RunBound(4, 2))
    assert accepts_within(PARITY, "11", RunBound(4, 3))


def test_nondeterminism_explored():
    # the guesser halts only if it switches on a 1 that has a successor
    assert accepts_within(GUESS, "1", RunBound(3, 2))
    assert not accepts_within(GUESS, "0", RunBound(8, 4))
    assert accepts_within(GUESS, "01", RunBound(4, 3))


def test_accepts_within_budget_and_bounds():
    with pytest.raises(ResourceLimit):
        accepts_within(COPIER, "0101", RunBound(20, 6), budget=2)
    with pytest.raises(ValueError):
        RunBound(0, 3)


def test_machine_invariants():
    with pytest.raises(MachineError):
        TuringMachine.build([], "s0", [], "_", [], [])
    with pytest.raises(MachineError):
        TuringMachine.build(["s0", "h"], "s0", ["h"], "_", ["1"], [("h", "1", "s0", "1", "R")])
    with pytest.raises(MachineError):
        TuringMachine.build(["s0"], "s0", [], "_", ["1"], [("s0", "1", "q", "1", "R")])


def test_stay_moves_compile_to_two_steps():
    m = TuringMachine.build(["s0", "h"], "s0", ["h"], "_", ["1"], [("s0", "1", "h", "1", "S")])
    assert all(mv in ("L", "R") for *_, mv in m.transitions)
    assert not accepts_within(m, "1", RunBound(2, 2))
    assert accepts_within(m, "1", RunBound(3, 2))
    sys = encode_tm(m)
    assert rectangle_tileable(sys, "1", 2, 3) and not rectangle_tileable(sys, "1", 2, 2)


def test_encoding_is_wang():
    for m in FLEET.values():
        sys = encode_tm(m)
        assert validate_system(sys) == []
        assert all(len(p.cells) == 2 and p.width + p.height == 3 for p in sys.forbidden)


def test_no_transition_machine_tiles():
    sys = encode_tm(NONE)
    counts = family_counts(sys)
    assert counts["head"] == counts["halt"] == 0
    assert counts["copy"] == len(NONE.tape_alphabet) == 1
    # the bottom-row tiles carry the blank, with and without the head
    assert counts["init"] == 2
    for h in range(1, 5):
        assert not rectangle_tileable(sys, "", 2, h)


def test_halting_initial_state_one_by_one():
    assert rectangle_tileable(encode_tm(HALT0), "", 1, 1)


def test_rectangle_examples():
    sys = encode_tm(PARITY)
    assert rectangle_tileable(sys, "11", 4, 4) == accepts_within(PARITY, "11", RunBound(4, 4))
    assert rectangle_tileable(sys, "11", 4, 6)
    assert not rectangle_tileable(sys, "1", 4, 6)
    ok, region = rectangle_tileable(sys, "11", 4, 6, witness=True)
    assert ok and check_region(sys, region) == []
    assert (region.width, region.height) == (6, 8)
    with pytest.raises(InvalidDimensions):
        rectangle_tileable(sys, "", 0, 3)
    with pytest.raises(InvalidDimensions):
        rectangle_tileable(sys, "", 3, 0)


def test_input_longer_than_tape():
    assert not rectangle_tileable(encode_tm(PARITY), "111", 2, 6)


@pytest.mark.parametrize("name", ["parity", "copier", "guess", "none"])
def test_compiler_equivalence_sample(name):
    m = FLEET[name]
    sys = encode_tm(m)
    for n in range(3):
        for word in itertools.product(m.input_alphabet, repeat=n):
            for s in (1, 3, 4):
                for t in (1, 2, 5):
                    assert rectangle_tileable(sys, word, s, t) == accepts_within(
                        m, word, RunBound(t, s)), (word, s, t)


def _used_tiles(sys, m, max_w=3, max_h=4):
    used = set()
    for w in range(1, max_w + 1):
        for h in range(1, max_h + 1):
            for n in range(w + 1):
                for word in itertools.product(m.input_alphabet, repeat=n):
                    comp = Completer(compiled(sys), w + 2, h + 2,
                                     domains=rectangle_domains(sys, word, w, h))
                    for flat in comp.solutions():
                        used.update(flat)
    return used


@pytest.mark.parametrize("m", [HALT0, HALT01], ids=["halt0", "halt01"])
def test_no_dead_tiles_beyond_borders(m):
    sys = encode_tm(m)
    used = _used_tiles(sys, m)
    assert [t.label for t in sys.tiles if t.id not in used and not t.label.startswith("border:")] == []


def test_one_state_machine_that_never_halts_tiles_nothing():
    assert _used_tiles(encode_tm(LOOP), LOOP) == set()


def test_manifest():
    text = manifest(encode_tm(PARITY))
    assert text.splitlines()[0] == "families: border,copy,head,init,halt"
    assert manifest(encode_tm(PARITY)) == text
