"""Enumeration, lower bounds and simplification of hexahedral meshes."""

from ._hexenum import (
    CapacityError,
    InputError,
    canonicalize_hex,
    canonicalize_quad,
    count_solutions,
    enumerate,
    gen_cube,
    gen_grid,
    gen_schneiders_boundary,
    gen_spindle_boundary,
    has_mesh,
    is_compatible,
    read_hexm,
    run_cli,
    simplify,
    untangle,
    validity,
)

__all__ = [
    "CapacityError",
    "InputError",
    "canonicalize_hex",
    "canonicalize_quad",
    "count_solutions",
    "enumerate",
    "gen_cube",
    "gen_grid",
    "gen_schneiders_boundary",
    "gen_spindle_boundary",
    "has_mesh",
    "is_compatible",
    "read_hexm",
    "run_cli",
    "simplify",
    "untangle",
    "validity",
]
