"""Constructions realizing machine languages as period sets."""
from .builders import (CROSS, GRAY, HORIZ, OFFSET, VERT, ConstructionSpec, DirectionMismatch, build_construction,
                       build_horizontal_construction, build_total_construction,
                       builder_manifest, diagonal_signal_layer, gray_forbidden, gray_kind)
from .counter import CounterLayer, Digit, GrayCell, counter_tiles
from .determinism import (Counterexample, DeterminismResult, DeterministicTileset,
                          FixtureUnavailable, UncertifiedAperiodicSet,
                          check_east_deterministic, check_nw_deterministic, kari_papasoglu,
                          mock_tileset, shear_nw_to_east)

__all__ = [
    "CROSS", "GRAY", "HORIZ", "OFFSET", "VERT", "ConstructionSpec", "DirectionMismatch", "build_construction",
    "build_horizontal_construction", "build_total_construction", "builder_manifest",
    "diagonal_signal_layer", "gray_forbidden", "gray_kind", "CounterLayer", "Digit",
    "GrayCell", "counter_tiles", "Counterexample", "DeterminismResult",
    "DeterministicTileset", "FixtureUnavailable", "UncertifiedAperiodicSet",
    "check_east_deterministic", "check_nw_deterministic", "kari_papasoglu", "mock_tileset",
    "shear_nw_to_east",
]
