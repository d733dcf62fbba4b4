#include "hexenum/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <utility>

namespace hexenum {

namespace {

// Reference coordinates of the corners.
constexpr std::array<std::array<int, 3>, 8> kRef{
    {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}}};

using Mat3 = std::array<std::array<double, 3>, 3>;
using ShapeGrad = std::array<std::array<double, 3>, 8>;

ShapeGrad shape_gradients(double u, double v, double w) {
  ShapeGrad g{};
  const double p[3] = {u, v, w};
  for (int k = 0; k < 8; ++k) {
    double f[3], df[3];
    for (int a = 0; a < 3; ++a) {
      f[a] = kRef[k][a] ? p[a] : 1.0 - p[a];
      df[a] = kRef[k][a] ? 1.0 : -1.0;
    }
    g[k] = {df[0] * f[1] * f[2], f[0] * df[1] * f[2], f[0] * f[1] * df[2]};
  }
  return g;
}

double det3(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 cofactor(const Mat3& m) {
  Mat3 c{};
  for (int r = 0; r < 3; ++r)
    for (int col = 0; col < 3; ++col) {
      const int r1 = (r + 1) % 3, r2 = (r + 2) % 3, c1 = (col + 1) % 3, c2 = (col + 2) % 3;
      c[r][col] = m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1];
    }
  return c;
}

template <class Coords>
Mat3 jacobian_matrix(const Coords& x, const ShapeGrad& g) {
  Mat3 m{};
  for (int k = 0; k < 8; ++k)
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m[r][c] += x[k][r] * g[k][c];
  return m;
}

/// Corner gradients first, then the interior grid.
std::vector<ShapeGrad> sample_gradients(std::size_t s) {
  std::vector<ShapeGrad> out;
  for (const auto& r : kRef) out.push_back(shape_gradients(r[0], r[1], r[2]));
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      for (std::size_t k = 0; k < s; ++k) {
        const double d = static_cast<double>(s + 1);
        out.push_back(shape_gradients((i + 1) / d, (j + 1) / d, (k + 1) / d));
      }
  return out;
}

std::array<Vec3, 8> corners_of(const GeoMesh& m, const HexCorners& h) {
  std::array<Vec3, 8> x;
  for (int k = 0; k < 8; ++k) x[k] = m.coords[h[k]];
  return x;
}

double dist(const Vec3& a, const Vec3& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

double mean_edge_length(const GeoMesh& m) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& h : m.hexes)
    for (auto [a, b] : cube::kEdges) {
      sum += dist(m.coords[h[a]], m.coords[h[b]]);
      ++n;
    }
  return n ? sum / static_cast<double>(n) : 1.0;
}

std::array<VertexId, 4> outward_facet(const HexCorners& h, int f) {
  const auto& c = cube::kFacets[f];
  return {h[c[0]], h[c[1]], h[c[2]], h[c[3]]};
}

}  // namespace

HexComplex GeoMesh::complex() const {
  HexComplex c;
  for (const auto& h : hexes) c.add(canonicalize_hex(h));
  return c;
}

void GeoMesh::refresh_boundary_flags() {
  is_boundary.assign(coords.size(), 0);
  const QuadSurface boundary = boundary_of(complex());
  for (const auto& q : boundary.quads())
    for (auto v : q.v) is_boundary[v] = 1;
}

double jacobian_at(const std::array<Vec3, 8>& corners, double u, double v, double w) {
  return det3(jacobian_matrix(corners, shape_gradients(u, v, w)));
}

ValidityReport validity(const GeoMesh& mesh, std::size_t samples_per_axis) {
  ValidityReport report;
  report.min_jacobian = std::numeric_limits<double>::infinity();
  report.min_corner_jacobian = std::numeric_limits<double>::infinity();
  const auto grads = sample_gradients(samples_per_axis);
  for (std::size_t h = 0; h < mesh.hexes.size(); ++h) {
    const auto x = corners_of(mesh, mesh.hexes[h]);
    double hmin = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < grads.size(); ++p) {
      const double j = det3(jacobian_matrix(x, grads[p]));
      hmin = std::min(hmin, j);
      if (p < 8) report.min_corner_jacobian = std::min(report.min_corner_jacobian, j);
    }
    report.min_jacobian = std::min(report.min_jacobian, hmin);
    if (!(hmin > 0.0)) report.invalid_hexes.push_back(h);
  }
  if (mesh.hexes.empty()) report.min_jacobian = report.min_corner_jacobian = 0.0;
  return report;
}

// ---- untangling ----

namespace {

struct Constraint {
  double value;
  Vec3 grad;
};

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double eval_min(const std::vector<Constraint>& cs, const Vec3& d) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : cs) m = std::min(m, c.value + dot(c.grad, d));
  return m;
}

/// Minimum-norm point of the convex hull of the given gradients (Frank-Wolfe).
Vec3 min_norm_point(const std::vector<Vec3>& g) {
  Vec3 x = g.front();
  for (int it = 0; it < 200; ++it) {
    std::size_t best = 0;
    double best_dot = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double d = dot(x, g[j]);
      if (d < best_dot) {
        best_dot = d;
        best = j;
      }
    }
    const Vec3 dir{g[best][0] - x[0], g[best][1] - x[1], g[best][2] - x[2]};
    const double dd = dot(dir, dir);
    if (dd <= 0.0) break;
    const double gamma = std::clamp(-dot(x, dir) / dd, 0.0, 1.0);
    if (gamma <= 1e-14) break;
    for (int a = 0; a < 3; ++a) x[a] += gamma * dir[a];
  }
  return x;
}

/// Maximises min_j (value_j + grad_j . d) over |d| <= radius.
Vec3 maximise_min(const std::vector<Constraint>& cs, double radius) {
  Vec3 d{0.0, 0.0, 0.0};
  double gmax = 0.0;
  for (const auto& c : cs) gmax = std::max(gmax, std::sqrt(dot(c.grad, c.grad)));
  if (gmax <= 0.0) return d;
  double current = eval_min(cs, d);
  for (int it = 0; it < 40; ++it) {
    const double tol = 0.1 * radius * gmax;
    std::vector<Vec3> active;
    for (const auto& c : cs)
      if (c.value + dot(c.grad, d) <= current + tol) active.push_back(c.grad);
    const Vec3 u = min_norm_point(active);
    const double un = std::sqrt(dot(u, u));
    if (un <= 1e-14 * gmax) break;
    bool improved = false;
    for (double t = radius; t > radius * 1e-6; t *= 0.5) {
      Vec3 trial{d[0] + t * u[0] / un, d[1] + t * u[1] / un, d[2] + t * u[2] / un};
      const double n = std::sqrt(dot(trial, trial));
      if (n > radius)
        for (auto& x : trial) x *= radius / n;
      const double val = eval_min(cs, trial);
      if (val > current) {
        d = trial;
        current = val;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return d;
}

}  // namespace

UntangleResult untangle(GeoMesh& mesh, std::span<const std::uint8_t> fixed, const UntangleOptions& options) {
  UntangleResult result;
  const std::vector<Vec3> original = mesh.coords;
  const auto grads = sample_gradients(options.samples_per_axis);
  const double length = std::max(mean_edge_length(mesh), 1e-300);
  const double scale = length * length * length;
  const double threshold = options.margin;
  // Hexes below this (normalised) value make their vertices active.
  const double target = std::max(threshold, 1e-3);

  std::vector<std::vector<std::pair<std::size_t, int>>> incident(mesh.n_vertices());
  for (std::size_t h = 0; h < mesh.hexes.size(); ++h)
    for (int k = 0; k < 8; ++k) incident[mesh.hexes[h][k]].push_back({h, k});

  auto hex_min = [&](std::size_t h) {
    const auto x = corners_of(mesh, mesh.hexes[h]);
    double m = std::numeric_limits<double>::infinity();
    for (const auto& g : grads) m = std::min(m, det3(jacobian_matrix(x, g)) / scale);
    return m;
  };
  auto is_free = [&](VertexId v) { return v >= fixed.size() || fixed[v] == 0; };

  std::vector<double> mins(mesh.hexes.size());
  double best_global = -std::numeric_limits<double>::infinity();
  std::size_t stagnant = 0;

  for (std::size_t sweep = 0;; ++sweep) {
    double global = std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < mesh.hexes.size(); ++h) {
      mins[h] = hex_min(h);
      global = std::min(global, mins[h]);
    }
    if (mesh.hexes.empty()) global = 1.0;
    result.sweeps = sweep;
    result.min_jacobian = global * scale;
    if (global > threshold) {
      result.success = true;
      return result;
    }
    if (sweep >= options.max_iters) break;
    if (global > best_global + 1e-12) {
      best_global = global;
      stagnant = 0;
    } else if (++stagnant > 50) {
      break;
    }

    // Free vertices of low-quality hexes and of the hexes around them.
    std::set<VertexId> seeds, active;
    for (std::size_t h = 0; h < mesh.hexes.size(); ++h)
      if (mins[h] <= target)
        for (auto v : mesh.hexes[h]) seeds.insert(v);
    for (auto v : seeds)
      for (auto [h, k] : incident[v])
        for (auto w : mesh.hexes[h])
          if (is_free(w)) active.insert(w);

    for (auto v : active) {
      std::vector<Constraint> cs;
      double edge_sum = 0.0;
      std::size_t edge_n = 0;
      for (auto [h, k] : incident[v]) {
        const auto x = corners_of(mesh, mesh.hexes[h]);
        for (const auto& g : grads) {
          const Mat3 m = jacobian_matrix(x, g);
          const Mat3 cof = cofactor(m);
          Constraint c;
          c.value = det3(m) / scale;
          for (int r = 0; r < 3; ++r)
            c.grad[r] = (cof[r][0] * g[k][0] + cof[r][1] * g[k][1] + cof[r][2] * g[k][2]) / scale;
          cs.push_back(c);
        }
        for (auto [a, b] : cube::kEdges)
          if (a == k || b == k) {
            edge_sum += dist(x[a], x[b]);
            ++edge_n;
          }
      }
      double radius = edge_n ? 0.5 * edge_sum / static_cast<double>(edge_n) : 0.0;
      if (radius < 1e-6 * length) radius = 0.25 * length;
      const Vec3 d = maximise_min(cs, radius);
      for (int a = 0; a < 3; ++a) mesh.coords[v][a] += d[a];
    }
  }
  mesh.coords = original;
  result.success = false;
  return result;
}

// ---- orientation ----

HexCorners flipped(const HexCorners& h) { return {h[4], h[5], h[6], h[7], h[0], h[1], h[2], h[3]}; }

int compare_orientation(const std::array<VertexId, 4>& a, const std::array<VertexId, 4>& b) {
  for (int r = 0; r < 4; ++r) {
    bool same = true, reversed = true;
    for (int k = 0; k < 4; ++k) {
      same = same && a[k] == b[(k + r) % 4];
      reversed = reversed && a[k] == b[(r + 4 - k) % 4];
    }
    if (same) return 1;
    if (reversed) return -1;
  }
  return 0;
}

std::optional<std::vector<HexCorners>> orient_hexes(std::span<const CanonicalHex> hexes,
                                                    const std::map<CanonicalQuad, std::array<VertexId, 4>>& seeds) {
  const std::size_t n = hexes.size();
  std::vector<HexCorners> out(n);
  std::vector<int> sign(n, 0);
  std::map<CanonicalQuad, std::vector<std::pair<std::size_t, int>>> by_facet;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = hexes[i].v;
    const auto facets = hexes[i].facets();
    for (int f = 0; f < 6; ++f) by_facet[facets[f]].push_back({i, f});
  }
  std::deque<std::size_t> queue;
  auto assign = [&](std::size_t i, int s) {
    if (sign[i] == 0) {
      sign[i] = s;
      if (s < 0) out[i] = flipped(out[i]);
      queue.push_back(i);
      return true;
    }
    return sign[i] == s;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const auto facets = hexes[i].facets();
    for (int f = 0; f < 6; ++f) {
      auto it = seeds.find(facets[f]);
      if (it == seeds.end()) continue;
      const int s = compare_orientation(outward_facet(HexCorners(hexes[i].v), f), it->second);
      if (s == 0 || !assign(i, s)) return std::nullopt;
    }
  }
  for (std::size_t start = 0; start <= n; ++start) {
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      for (int f = 0; f < 6; ++f) {
        const auto mine = outward_facet(out[i], f);
        for (auto [j, g] : by_facet[canonicalize_quad(mine[0], mine[1], mine[2], mine[3])]) {
          if (j == i) continue;
          const int s = compare_orientation(mine, outward_facet(HexCorners(hexes[j].v), g));
          // Neighbours must see the shared facet reversed.
          if (s == 0 || !assign(j, -s)) return std::nullopt;
        }
      }
    }
    if (start < n && sign[start] == 0) assign(start, 1);
  }
  return out;
}

std::map<CanonicalQuad, std::array<VertexId, 4>> outward_boundary_facets(std::span<const HexCorners> hexes) {
  std::map<CanonicalQuad, std::pair<int, std::array<VertexId, 4>>> seen;
  for (const auto& h : hexes)
    for (int f = 0; f < 6; ++f) {
      const auto q = outward_facet(h, f);
      auto& e = seen[canonicalize_quad(q[0], q[1], q[2], q[3])];
      ++e.first;
      e.second = q;
    }
  std::map<CanonicalQuad, std::array<VertexId, 4>> out;
  for (const auto& [k, e] : seen)
    if (e.first == 1) out.emplace(k, e.second);
  return out;
}

void smooth_free_vertices(GeoMesh& mesh, std::span<const std::uint8_t> fixed, std::size_t iterations) {
  std::vector<std::set<VertexId>> nbrs(mesh.n_vertices());
  for (const auto& h : mesh.hexes)
    for (auto [a, b] : cube::kEdges) {
      nbrs[h[a]].insert(h[b]);
      nbrs[h[b]].insert(h[a]);
    }
  for (std::size_t it = 0; it < iterations; ++it) {
    std::vector<Vec3> next = mesh.coords;
    for (VertexId v = 0; v < mesh.n_vertices(); ++v) {
      if ((v < fixed.size() && fixed[v]) || nbrs[v].empty()) continue;
      Vec3 s{0, 0, 0};
      for (auto w : nbrs[v])
        for (int a = 0; a < 3; ++a) s[a] += mesh.coords[w][a];
      for (int a = 0; a < 3; ++a) next[v][a] = s[a] / static_cast<double>(nbrs[v].size());
    }
    mesh.coords = std::move(next);
  }
}

}  // namespace hexenum
