#include "hexenum/generators.hpp"

#include <cmath>
#include <numbers>

namespace hexenum {

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Vec3 average(const std::vector<Vec3>& pts, std::initializer_list<VertexId> ids) {
  Vec3 s{0, 0, 0};
  for (auto i : ids)
    for (int k = 0; k < 3; ++k) s[k] += pts[i][k];
  for (auto& x : s) x /= static_cast<double>(ids.size());
  return s;
}

/// Orients every quad of a star-shaped surface away from its vertex centroid.
void orient_outward(HexmFile& f) {
  Vec3 center{0, 0, 0};
  for (const auto& p : f.coords)
    for (int k = 0; k < 3; ++k) center[k] += p[k] / static_cast<double>(f.coords.size());
  for (auto& q : *f.quads) {
    const Vec3 d1 = sub(f.coords[q[2]], f.coords[q[0]]);
    const Vec3 d2 = sub(f.coords[q[3]], f.coords[q[1]]);
    const Vec3 n{d1[1] * d2[2] - d1[2] * d2[1], d1[2] * d2[0] - d1[0] * d2[2], d1[0] * d2[1] - d1[1] * d2[0]};
    const Vec3 mid = average(f.coords, {q[0], q[1], q[2], q[3]});
    const Vec3 out = sub(mid, center);
    if (n[0] * out[0] + n[1] * out[1] + n[2] * out[2] < 0) std::swap(q[1], q[3]);
  }
}

}  // namespace

HexmFile gen_cube() { return gen_grid(1, 1, 1); }

HexmFile gen_grid(std::size_t a, std::size_t b, std::size_t c) {
  if (a == 0 || b == 0 || c == 0) throw InputError("grid dimensions must be positive");
  const std::size_t nx = a + 1, ny = b + 1, nz = c + 1;
  auto on_boundary = [&](std::size_t i, std::size_t j, std::size_t k) {
    return i == 0 || i == a || j == 0 || j == b || k == 0 || k == c;
  };
  auto index = [&](std::size_t i, std::size_t j, std::size_t k) { return (k * ny + j) * nx + i; };

  // Boundary-first relabelling of the lattice points. For a single cube
  // this yields the corner convention (0,1,2,3 bottom, 4..7 above).
  std::vector<VertexId> label(nx * ny * nz);
  HexmFile f;
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t k = 0; k < nz; ++k)
      for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i0 = 0; i0 < nx; ++i0) {
          // Serpentine rows keep the unit cube cyclic.
          const std::size_t i = j % 2 == 1 ? nx - 1 - i0 : i0;
          if (on_boundary(i, j, k) != (pass == 0)) continue;
          label[index(i, j, k)] = static_cast<VertexId>(f.coords.size());
          f.coords.push_back({double(i), double(j), double(k)});
          f.boundary_flags.push_back(pass == 0 ? 1 : 0);
        }

  std::vector<HexCorners> hexes;
  for (std::size_t k = 0; k < c; ++k)
    for (std::size_t j = 0; j < b; ++j)
      for (std::size_t i = 0; i < a; ++i)
        hexes.push_back({label[index(i, j, k)], label[index(i + 1, j, k)], label[index(i + 1, j + 1, k)],
                         label[index(i, j + 1, k)], label[index(i, j, k + 1)], label[index(i + 1, j, k + 1)],
                         label[index(i + 1, j + 1, k + 1)], label[index(i, j + 1, k + 1)]});
  std::vector<std::array<VertexId, 4>> quads;
  for (const auto& [key, q] : outward_boundary_facets(hexes)) quads.push_back(q);
  f.quads = std::move(quads);
  f.hexes = std::move(hexes);
  return f;
}

HexmFile gen_schneiders_boundary() {
  HexmFile f;
  auto& p = f.coords;
  // 0..3 base corners (cyclic), 4 apex.
  p = {{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}, {0, 0, 1}};
  // 5..8 base edge midpoints, edge (i, i+1).
  for (VertexId i = 0; i < 4; ++i) p.push_back(average(p, {i, (i + 1) % 4}));
  // 9..12 lateral edge midpoints, edge (i, apex).
  for (VertexId i = 0; i < 4; ++i) p.push_back(average(p, {i, 4}));
  // 13 base centroid, 14..17 centroids of triangles (i, i+1, apex).
  p.push_back(average(p, {0, 1, 2, 3}));
  for (VertexId i = 0; i < 4; ++i) p.push_back(average(p, {i, (i + 1) % 4, 4}));
  f.boundary_flags.assign(p.size(), 1);

  std::vector<std::array<VertexId, 4>> quads;
  auto base_mid = [](VertexId i) { return VertexId(5 + i % 4); };
  auto lat_mid = [](VertexId i) { return VertexId(9 + i % 4); };
  for (VertexId i = 0; i < 4; ++i) quads.push_back({i, base_mid(i), 13, base_mid(i + 3)});
  for (VertexId i = 0; i < 4; ++i) {
    const VertexId j = (i + 1) % 4, t = 14 + i;
    quads.push_back({i, base_mid(i), t, lat_mid(i)});
    quads.push_back({j, lat_mid(j), t, base_mid(i)});
    quads.push_back({4, lat_mid(i), t, lat_mid(j)});
  }
  f.quads = std::move(quads);
  orient_outward(f);
  return f;
}

HexmFile gen_spindle_boundary(double ring_height, double apex) {
  if (!(ring_height > 0) || !(apex > ring_height)) throw InputError("spindle requires 0 < ring height < apex height");
  HexmFile f;
  f.coords.push_back({0, 0, apex});
  for (int j = 0; j < 8; ++j) {
    const double t = j * std::numbers::pi / 4;
    f.coords.push_back({std::cos(t), std::sin(t), (j % 2 == 0 ? 1 : -1) * ring_height});
  }
  f.coords.push_back({0, 0, -apex});
  f.boundary_flags.assign(10, 1);
  auto ring = [](int j) { return VertexId(1 + (j % 8)); };
  std::vector<std::array<VertexId, 4>> quads;
  for (int k = 0; k < 4; ++k) quads.push_back({0, ring(2 * k), ring(2 * k + 1), ring(2 * k + 2)});
  for (int k = 0; k < 4; ++k) quads.push_back({9, ring(2 * k + 1), ring(2 * k + 2), ring(2 * k + 3)});
  f.quads = std::move(quads);
  orient_outward(f);
  return f;
}

}  // namespace hexenum
