"""JSON files: tiling systems, machines, witnesses and construction specs.

Pattern offsets are written as ``"dx,dy"`` string keys.  A system file gives
its rules either as ``forbidden`` patterns or as ``allowed_pairs`` per axis
(``"h"``: left/right, ``"v"``: below/above), never both.  Layered patterns
carry their layer indices and one value tuple per cell::

    {"layers": [0, 2], "cells": {"0,0": ["#gray", "a"], "1,0": ["b", "a"]}}
"""
from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

from .core import Pattern, RegionAssignment, Tile, TilingError, TilingSystem
from .tm import MachineError, TuringMachine

SYSTEM_FORMAT = "tileperiod-system/1"
WITNESS_FORMAT = "tileperiod-witness/1"


class FileFormatError(TilingError):
    """Malformed input file; ``line``/``col`` locate the problem when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)


def _locate(text: str | None, token: Any):
    """Line/column of the first occurrence of ``token`` in the source text."""
    if text is None:
        return None, None
    for needle in (json.dumps(token), json.dumps(token, separators=(",", ":")), str(token)):
        i = text.find(needle)
        if i >= 0:
            return text.count("\n", 0, i) + 1, i - (text.rfind("\n", 0, i) + 1) + 1
    return None, None


def _fail(msg, text=None, token=None):
    line, col = _locate(text, token) if token is not None else (None, None)
    raise FileFormatError(msg, line, col)


def parse_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FileFormatError(e.msg, e.lineno, e.colno) from None


def _offset(key: str, text=None):
    m = re.fullmatch(r"\s*(-?\d+)\s*,\s*(-?\d+)\s*", key)
    if not m:
        _fail(f"bad offset key {key!r}", text, key)
    return int(m.group(1)), int(m.group(2))


def _key(o):
    return f"{o[0]},{o[1]}"


# -- systems ---------------------------------------------------------------

def system_to_json(sys: TilingSystem) -> dict:
    label = sys.labels()
    tiles = []
    contiguous = all(t.id == i for i, t in enumerate(sys.tiles))
    for t in sys.tiles:
        if t.layers is None and contiguous:
            tiles.append(t.label)
        else:
            entry: dict[str, Any] = {"label": t.label}
            if not contiguous:
                entry["id"] = t.id
            if t.layers is not None:
                entry["layers"] = list(t.layers)
            tiles.append(entry)
    forbidden = []
    for p in sys.forbidden:
        if p.layers is None:
            forbidden.append({_key(o): label[v] for o, v in p.cells})
        else:
            forbidden.append({"layers": list(p.layers),
                              "cells": {_key(o): list(v) for o, v in p.cells}})
    doc: dict[str, Any] = {"format": SYSTEM_FORMAT, "tiles": tiles}
    if sys.layer_names is not None:
        doc["layer_names"] = list(sys.layer_names)
    doc["forbidden"] = forbidden
    doc["metadata"] = sys.metadata
    return doc


def system_from_json(doc: Any, text: str | None = None) -> TilingSystem:
    if not isinstance(doc, dict):
        _fail("system file must be a JSON object")
    raw = doc.get("tiles")
    if not isinstance(raw, list) or not raw:
        _fail("'tiles' must be a non-empty list", text, "tiles")
    tiles = []
    for i, entry in enumerate(raw):
        if isinstance(entry, str):
            tiles.append(Tile(i, entry))
        elif isinstance(entry, dict) and isinstance(entry.get("label"), str):
            layers = entry.get("layers")
            tiles.append(Tile(entry.get("id", i), entry["label"],
                              tuple(layers) if layers is not None else None))
        else:
            _fail(f"tile #{i} must be a label or an object with a label", text, entry)
    ids: dict[str, int] = {}
    for t in tiles:
        if t.label in ids:
            _fail(f"duplicate tile label {t.label!r}", text, t.label)
        ids[t.label] = t.id

    def tile_id(lab):
        if lab not in ids:
            _fail(f"unknown tile label {lab!r}", text, lab)
        return ids[lab]

    if "forbidden" in doc and "allowed_pairs" in doc:
        _fail("'forbidden' and 'allowed_pairs' are mutually exclusive", text, "allowed_pairs")
    pats = []
    for entry in doc.get("forbidden", []):
        if not isinstance(entry, dict) or not entry:
            _fail("each forbidden pattern must be a non-empty object", text, entry)
        if "layers" in entry:
            cells = entry.get("cells")
            if not isinstance(cells, dict) or not cells:
                _fail("layered pattern needs 'cells'", text, "cells")
            pats.append(Pattern(tuple((_offset(k, text), tuple(v)) for k, v in cells.items()),
                                tuple(entry["layers"])))
        else:
            pats.append(Pattern(tuple((_offset(k, text), tile_id(v)) for k, v in entry.items())))
    allowed = doc.get("allowed_pairs")
    if allowed is not None:
        if not isinstance(allowed, dict) or set(allowed) - {"h", "v"}:
            _fail("'allowed_pairs' must map 'h'/'v' to lists of pairs", text, "allowed_pairs")
        for axis, pairs in sorted(allowed.items()):
            ok = set()
            for pair in pairs:
                if not isinstance(pair, list) or len(pair) != 2:
                    _fail(f"bad pair {pair!r}", text, pair)
                ok.add((tile_id(pair[0]), tile_id(pair[1])))
            make = Pattern.hpair if axis == "h" else Pattern.vpair
            for a in tiles:
                for b in tiles:
                    if (a.id, b.id) not in ok:
                        pats.append(make(a.id, b.id))
    names = doc.get("layer_names")
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        _fail("'metadata' must be an object", text, "metadata")
    try:
        return TilingSystem(tuple(tiles), tuple(pats),
                            tuple(names) if names is not None else None, meta)
    except (TilingError, ValueError, TypeError) as e:
        raise FileFormatError(str(e)) from None


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def save_system(sys: TilingSystem, path) -> None:
    Path(path).write_text(dumps(system_to_json(sys)))


def load_system(path) -> TilingSystem:
    text = _read(path)
    return system_from_json(parse_json(text), text)


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise FileFormatError(f"cannot read {path}: {e.strerror}") from None


# -- machines --------------------------------------------------------------

def machine_to_json(m: TuringMachine) -> dict:
    return {"states": list(m.states), "initial": m.initial, "halting": sorted(m.halting),
            "blank": m.blank, "input_alphabet": list(m.input_alphabet),
            "tape_alphabet": list(m.tape_alphabet),
            "transitions": [list(t) for t in m.transitions]}


def machine_from_json(doc: Any, text: str | None = None) -> TuringMachine:
    if not isinstance(doc, dict):
        _fail("machine file must be a JSON object")
    for key in ("states", "initial", "blank", "transitions"):
        if key not in doc:
            _fail(f"missing field {key!r}")
    for t in doc["transitions"]:
        if not isinstance(t, list) or len(t) != 5:
            _fail(f"transition {t!r} is not a 5-tuple", text, t)
    try:
        return TuringMachine.build(doc["states"], doc["initial"], doc.get("halting", []),
                                   doc["blank"], doc.get("input_alphabet", []),
                                   [tuple(t) for t in doc["transitions"]],
                                   doc.get("tape_alphabet"))
    except MachineError:
        raise
    except (TypeError, ValueError) as e:
        raise FileFormatError(str(e)) from None


def load_machine(path) -> TuringMachine:
    text = _read(path)
    return machine_from_json(parse_json(text), text)


def save_machine(m: TuringMachine, path) -> None:
    Path(path).write_text(dumps(machine_to_json(m)))


# -- witnesses -------------------------------------------------------------

def witness_to_json(sys: TilingSystem, region: RegionAssignment, period: int | None = None,
                    mode: str | None = None) -> dict:
    label = sys.labels()
    used = sorted({v for row in region.cells for v in row})
    return {"format": WITNESS_FORMAT, "mode": mode, "period": period,
            "width": region.width, "height": region.height,
            "wrap_x": region.wrap_x, "wrap_y": region.wrap_y,
            "tiles": [[i, label[i]] for i in used],
            "rows": [list(r) for r in region.cells]}


def witness_from_json(doc: Any, text: str | None = None):
    """Returns ``(region, labels)`` with ``labels`` mapping tile id to label."""
    if not isinstance(doc, dict) or "rows" not in doc:
        _fail("witness must be an object with 'rows'")
    try:
        labels = {int(i): str(lab) for i, lab in doc.get("tiles", [])}
        rows = tuple(tuple(int(v) for v in r) for r in doc["rows"])
        w = doc.get("width", len(rows[0]) if rows else 0)
        h = doc.get("height", len(rows))
        region = RegionAssignment(w, h, rows, bool(doc.get("wrap_x", True)),
                                  bool(doc.get("wrap_y", True)))
    except (TypeError, ValueError, IndexError) as e:
        raise FileFormatError(f"bad witness: {e}") from None
    for r in rows:
        for v in r:
            labels.setdefault(v, str(v))
    return region, labels


def load_witness(path):
    text = _read(path)
    return witness_from_json(parse_json(text), text)


# -- construction specs ----------------------------------------------------

def construction_spec_from_json(doc: Any, text: str | None = None, base_dir=None):
    from .construct import ConstructionSpec, DeterministicTileset, kari_papasoglu, mock_tileset

    if not isinstance(doc, dict):
        _fail("construction spec must be a JSON object")
    ts = doc.get("tileset")
    if isinstance(ts, str):
        if ts.startswith("mock"):
            tileset = mock_tileset(doc.get("direction", "east" if doc.get("mode") ==
                                           "horizontal" else "nw"))
        elif ts == "kari-papasoglu":
            tileset = kari_papasoglu()
        else:
            _fail(f"unknown tile set {ts!r}", text, ts)
    elif isinstance(ts, dict):
        if "direction" not in ts or "system" not in ts:
            _fail("inline tile set needs 'system' and 'direction'", text, "tileset")
        tileset = DeterministicTileset.certify(system_from_json(ts["system"], text),
                                               ts["direction"])
    else:
        _fail("missing 'tileset'", text, "tileset")
    mach = doc.get("machine")
    if isinstance(mach, str):
        path = Path(base_dir or ".") / mach
        machine = load_machine(path)
    else:
        machine = machine_from_json(mach, text)
    try:
        return ConstructionSpec(doc.get("mode", ""), tileset, machine, int(doc.get("base", 2)))
    except ValueError as e:
        raise FileFormatError(str(e)) from None


def load_construction_spec(path):
    text = _read(path)
    return construction_spec_from_json(parse_json(text), text, Path(path).parent)
