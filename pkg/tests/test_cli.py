import json
import re
import subprocess
import sys

import pytest
from hypothesis import given, settings

from tileperiod import io
from tileperiod.cli import main
from tileperiod.core import Pattern, TilingSystem, layer_product, torus
from tileperiod.io import FileFormatError
from tileperiod.render import render_svg, tile_color

from fixtures import FIX1, FIX3, FLEET, PARITY, small_systems


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return path
    return write


# --- file formats ------------------------------------------------------------

def test_system_round_trip_plain():
    for sys in (FIX1, FIX3):
        assert io.system_from_json(json.loads(io.dumps(io.system_to_json(sys)))) == sys


def test_system_round_trip_layered():
    coupling = [Pattern.hpair(("a", "a"), ("b", "b"), (0, 1))]
    prod = layer_product([FIX1, TilingSystem.from_labels("ab")], coupling, ("L", "R"))
    back = io.system_from_json(json.loads(io.dumps(io.system_to_json(prod))))
    assert back == prod and back.layer_names == ("L", "R")


@settings(max_examples=50, deadline=None)
@given(small_systems())
def test_system_round_trip_property(sys):
    assert io.system_from_json(json.loads(io.dumps(io.system_to_json(sys)))) == sys


def test_allowed_pairs_form():
    doc = {"tiles": ["a", "b"], "allowed_pairs": {"h": [["a", "b"], ["b", "a"]],
                                                 "v": [["a", "a"], ["b", "b"]]}}
    sys = io.system_from_json(doc)
    assert set(sys.forbidden) == set(FIX1.forbidden)
    with pytest.raises(FileFormatError):
        io.system_from_json({**doc, "forbidden": []})


def test_machine_round_trip(tmp_path):
    for m in FLEET.values():
        path = tmp_path / "m.json"
        io.save_machine(m, path)
        assert io.load_machine(path) == m


def test_parse_error_has_position():
    with pytest.raises(FileFormatError) as e:
        io.parse_json('{"tiles": [\n  "a",\n  ]\n}')
    assert (e.value.line, e.value.col) == (3, 3)


def test_unknown_label_located():
    text = '{"tiles": ["a"],\n "forbidden": [{"0,0": "zz"}]}'
    with pytest.raises(FileFormatError) as e:
        io.system_from_json(json.loads(text), text)
    assert e.value.line == 2


# --- periods -----------------------------------------------------------------

def test_periods_fix1(capsys, files, tmp_path):
    path = files("fix1.json", io.system_to_json(FIX1))
    for mode in ("total", "horizontal"):
        code, out, _ = run(capsys, "periods", path, "--mode", mode, "--pmax", 4)
        assert (code, out) == (0, "p=2 eigen=true\n")
    code, _, _ = run(capsys, "periods", path, "--pmax", 4, "--witness", tmp_path / "w")
    assert code == 0
    assert sorted(p.name for p in (tmp_path / "w").iterdir()) == ["p2.json", "p2.svg"]
    region, labels = io.load_witness(tmp_path / "w" / "p2.json")
    assert region.width == region.height == 2 and set(labels.values()) == {"a", "b"}


def test_periods_empty(capsys, files):
    code, out, _ = run(capsys, "periods", files("fix3.json", io.system_to_json(FIX3)),
                       "--pmax", 3)
    assert (code, out) == (0, "")


def test_periods_corrupt(capsys, files):
    code, out, err = run(capsys, "periods", files("bad.json", '{"tiles": ["a",\n  oops]}'),
                         "--pmax", 2)
    assert code == 1 and out == ""
    assert re.search(r"\b2:3: ", err)


def test_periods_missing_file(capsys, tmp_path):
    assert run(capsys, "periods", tmp_path / "nope.json", "--pmax", 2)[0] == 1


def test_periods_bad_pmax(capsys, files):
    assert run(capsys, "periods", files("f.json", io.system_to_json(FIX1)), "--pmax", 0)[0] == 1


def test_periods_resource_limit(capsys, files, monkeypatch):
    monkeypatch.setenv("TILEPERIOD_NODE_CAP", "4")
    free = TilingSystem.from_labels("abc")
    code, _, err = run(capsys, "periods", files("free.json", io.system_to_json(free)),
                       "--mode", "horizontal", "--pmax", 3)
    assert code == 2 and "resource limit" in err


# --- compile-tm --------------------------------------------------------------

def test_compile_tm(capsys, files, tmp_path):
    src = files("parity.json", io.machine_to_json(PARITY))
    code, out, _ = run(capsys, "compile-tm", src, tmp_path / "a.json")
    assert code == 0 and out.splitlines()[0] == "families: border,copy,head,init,halt"
    run(capsys, "compile-tm", src, tmp_path / "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    compiled = io.load_system(tmp_path / "a.json")
    assert compiled.metadata["kind"] == "tm"


def test_compile_tm_invalid(capsys, files, tmp_path):
    doc = {"states": [], "initial": "s0", "halting": [], "blank": "_", "transitions": []}
    code, _, err = run(capsys, "compile-tm", files("empty.json", doc), tmp_path / "o.json")
    assert code == 1 and "no states" in err


# --- build -------------------------------------------------------------------

def test_build_mock(capsys, files, tmp_path):
    files("parity.json", io.machine_to_json(PARITY))
    spec = files("spec.json", {"mode": "horizontal", "tileset": "mock", "machine": "parity.json",
                               "base": 2})
    code, out, _ = run(capsys, "build", spec, tmp_path / "h.json")
    assert code == 0 and "offset=4" in out.splitlines()
    assert io.load_system(tmp_path / "h.json").metadata["mode"] == "horizontal"


def test_build_uncertified(capsys, files, tmp_path):
    free = {"system": io.system_to_json(TilingSystem.from_labels("ab")), "direction": "east"}
    spec = files("spec.json", {"mode": "horizontal", "tileset": free,
                               "machine": io.machine_to_json(PARITY)})
    code, _, err = run(capsys, "build", spec, tmp_path / "o.json")
    assert code == 1 and "UncertifiedAperiodicSet" in err


def test_build_direction_mismatch(capsys, files, tmp_path):
    east = {"system": io.system_to_json(FIX1), "direction": "east"}
    spec = files("spec.json", {"mode": "total", "tileset": east,
                               "machine": io.machine_to_json(PARITY)})
    code, _, err = run(capsys, "build", spec, tmp_path / "o.json")
    assert code == 1 and "DirectionMismatch" in err


def test_build_kari_papasoglu_unavailable(capsys, files, tmp_path):
    spec = files("spec.json", {"mode": "total", "tileset": "kari-papasoglu",
                               "machine": io.machine_to_json(PARITY)})
    code, _, err = run(capsys, "build", spec, tmp_path / "o.json")
    assert code == 1 and "FixtureUnavailable" in err


# --- render ------------------------------------------------------------------

def _colors(svg):
    return set(re.findall(r'fill="(#[0-9a-f]{6})"', svg))


def test_render_fix1(capsys, files, tmp_path):
    w = files("w.json", io.witness_to_json(FIX1, torus([[0, 1], [0, 1]]), 2, "total"))
    assert run(capsys, "render", w, tmp_path / "w.svg")[0] == 0
    svg = (tmp_path / "w.svg").read_text()
    assert _colors(svg) == {tile_color(0), tile_color(1)}
    assert svg.count('class="period"') == 1


def test_render_single_cell():
    svg = render_svg(torus([[0]]), {0: "t"})
    assert _colors(svg) == {tile_color(0)}
    assert svg.count("<text") == 1
    assert 'class="period" x="1" y="25" width="24" height="24"' in svg


def test_render_errors(capsys, files, tmp_path):
    assert run(capsys, "render", tmp_path / "missing.json", tmp_path / "o.svg")[0] == 1
    assert run(capsys, "render", files("w.json", '{"rows": [[0, "x"]]}'),
               tmp_path / "o.svg")[0] == 1


def test_console_script_runs(tmp_path):
    path = tmp_path / "fix1.json"
    io.save_system(FIX1, path)
    proc = subprocess.run([sys.executable, "-m", "tileperiod.cli", "periods", str(path),
                           "--pmax", "3"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "p=2 eigen=true\n"
