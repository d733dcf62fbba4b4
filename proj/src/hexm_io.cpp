#include "hexenum/hexm_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hexenum {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next non-blank line split into tokens; false at end of input.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream ss(line);
      tokens.clear();
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("hexm line " + std::to_string(line_no_) + ": " + what);
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

std::size_t parse_count(const LineReader& r, const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size() || v < 0) r.fail("expected a non-negative integer, got '" + s + "'");
    return static_cast<std::size_t>(v);
  } catch (const std::logic_error&) {
    r.fail("expected a non-negative integer, got '" + s + "'");
  }
}

double parse_double(const LineReader& r, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) r.fail("expected a number, got '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    r.fail("expected a number, got '" + s + "'");
  }
}

template <std::size_t N>
std::array<VertexId, N> parse_labels(const LineReader& r, const std::vector<std::string>& t, std::size_t n_vertices) {
  if (t.size() != N) r.fail("expected " + std::to_string(N) + " vertex labels");
  std::array<VertexId, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t v = parse_count(r, t[i]);
    if (v >= n_vertices) r.fail("label " + t[i] + " references an undeclared vertex");
    out[i] = static_cast<VertexId>(v);
  }
  return out;
}

}  // namespace

HexmFile read_hexm(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> t;
  if (!r.next(t) || t.size() != 2 || t[0] != "hexm" || t[1] != "1") r.fail("missing 'hexm 1' header");

  HexmFile f;
  if (!r.next(t) || t.size() != 2 || t[0] != "vertices") r.fail("expected 'vertices N'");
  const std::size_t n = parse_count(r, t[1]);
  f.coords.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!r.next(t) || t.size() != 4) r.fail("expected 'x y z b'");
    f.coords.push_back({parse_double(r, t[0]), parse_double(r, t[1]), parse_double(r, t[2])});
    const std::size_t b = parse_count(r, t[3]);
    if (b > 1) r.fail("boundary flag must be 0 or 1");
    f.boundary_flags.push_back(static_cast<std::uint8_t>(b));
  }

  bool have = r.next(t);
  if (have && t.size() == 2 && t[0] == "quads") {
    const std::size_t m = parse_count(r, t[1]);
    std::vector<std::array<VertexId, 4>> quads;
    for (std::size_t i = 0; i < m; ++i) {
      if (!r.next(t)) r.fail("unexpected end of file in quads section");
      quads.push_back(parse_labels<4>(r, t, n));
      const auto& q = quads.back();
      try {
        canonicalize_quad(q[0], q[1], q[2], q[3]);
      } catch (const InputError& e) {
        r.fail(e.what());
      }
    }
    f.quads = std::move(quads);
    have = r.next(t);
  }
  if (have && t.size() == 2 && t[0] == "hexes") {
    const std::size_t k = parse_count(r, t[1]);
    std::vector<HexCorners> hexes;
    for (std::size_t i = 0; i < k; ++i) {
      if (!r.next(t)) r.fail("unexpected end of file in hexes section");
      hexes.push_back(parse_labels<8>(r, t, n));
      try {
        canonicalize_hex(hexes.back());
      } catch (const InputError& e) {
        r.fail(e.what());
      }
    }
    f.hexes = std::move(hexes);
    have = r.next(t);
  }
  if (have) r.fail("unexpected content '" + t[0] + "'");
  return f;
}

HexmFile read_hexm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_hexm(in);
}

void write_hexm(std::ostream& out, const HexmFile& f) {
  out << "hexm 1\n";
  out << "vertices " << f.coords.size() << '\n';
  char buf[128];
  for (std::size_t i = 0; i < f.coords.size(); ++i) {
    const auto& p = f.coords[i];
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g", p[0], p[1], p[2]);
    out << buf << ' ' << (i < f.boundary_flags.size() ? int(f.boundary_flags[i]) : 0) << '\n';
  }
  if (f.quads) {
    out << "quads " << f.quads->size() << '\n';
    for (const auto& q : *f.quads) out << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
  }
  if (f.hexes) {
    out << "hexes " << f.hexes->size() << '\n';
    for (const auto& h : *f.hexes) {
      for (int k = 0; k < 8; ++k) out << (k ? " " : "") << h[k];
      out << '\n';
    }
  }
}

void write_hexm_file(const std::string& path, const HexmFile& f) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  write_hexm(out, f);
}

QuadSurface surface_of(const HexmFile& f) {
  std::vector<CanonicalQuad> quads;
  if (f.quads) {
    for (const auto& q : *f.quads) quads.push_back(canonicalize_quad(q[0], q[1], q[2], q[3]));
  } else if (f.hexes) {
    HexComplex c;
    for (const auto& h : *f.hexes) c.add(canonicalize_hex(h));
    quads = boundary_of(c).quads();
  } else {
    throw InputError("file has neither a quads nor a hexes section");
  }
  VertexId max_label = 0;
  std::vector<bool> seen(f.coords.size(), false);
  for (const auto& q : quads)
    for (auto v : q.v) {
      seen[v] = true;
      max_label = std::max(max_label, v + 1);
    }
  for (VertexId v = 0; v < max_label; ++v)
    if (!seen[v])
      throw InputError("boundary labels must be 0..n_b-1 with no gaps; vertex " + std::to_string(v) +
                       " is not on the boundary");
  return QuadSurface(std::move(quads), quads.empty() ? 0 : max_label);
}

GeoMesh to_geomesh(const HexmFile& f) {
  if (!f.hexes) throw InputError("file has no hexes section");
  GeoMesh m;
  m.coords = f.coords;
  m.hexes = *f.hexes;
  m.refresh_boundary_flags();
  return m;
}

HexmFile from_geomesh(const GeoMesh& m, bool with_boundary_quads) {
  HexmFile f;
  f.coords = m.coords;
  f.boundary_flags = m.is_boundary;
  f.boundary_flags.resize(m.coords.size(), 0);
  f.hexes = m.hexes;
  if (with_boundary_quads) {
    std::vector<std::array<VertexId, 4>> quads;
    for (const auto& [k, q] : outward_boundary_facets(m.hexes)) quads.push_back(q);
    f.quads = std::move(quads);
  }
  return f;
}

}  // namespace hexenum
