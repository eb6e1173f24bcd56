"""Periods of two-dimensional tiling systems.

``core`` holds the data model, ``solver`` computes horizontal and total
eigenperiods, ``tm`` compiles machines to Wang tiles and ``construct`` builds
systems whose period sets encode a machine's language.
"""
from .core import (UNSATISFIABLE, AlphabetMismatch, Pattern, RegionAssignment, ResourceLimit,
                   Tile, TilingError, TilingSystem, UnknownTile, check_region, disjoint_union,
                   layer_product, reduce_pattern_mod, validate_system)
from .solver import (PeriodReport, eigenperiods, horizontal_eigenperiods,
                     horizontal_period_exists, total_eigenperiods, total_period_exists)

__all__ = [
    "UNSATISFIABLE", "AlphabetMismatch", "Pattern", "RegionAssignment", "ResourceLimit", "Tile",
    "TilingError", "TilingSystem", "UnknownTile", "check_region", "disjoint_union",
    "layer_product", "reduce_pattern_mod", "validate_system", "PeriodReport", "eigenperiods",
    "horizontal_eigenperiods", "horizontal_period_exists", "total_eigenperiods",
    "total_period_exists",
]
