#pragma once

#include <cstddef>

#include "hexenum/hexm_io.hpp"

namespace hexenum {

/// Unit cube as a single hex: labels 0..7 in corner convention, with its 6
/// boundary quads.
HexmFile gen_cube();

/// a x b x c grid of unit cubes. Boundary vertices are numbered first.
/// Carries both the hexes and the outward boundary quads.
HexmFile gen_grid(std::size_t a, std::size_t b, std::size_t c);

/// Square pyramid with base corners (+-1, +-1, 0) and apex (0, 0, 1), each
/// triangle split into 3 quads and the base into 4: 18 vertices, 16 quads.
HexmFile gen_schneiders_boundary();

/// Tetragonal trapezohedron: apexes (0, 0, +-apex), ring vertex j at
/// (cos(j pi/4), sin(j pi/4), (-1)^j ring_height); 10 vertices, 8 kites.
HexmFile gen_spindle_boundary(double ring_height = 0.25, double apex = 1.0);

}  // namespace hexenum
