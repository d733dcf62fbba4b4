#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hexenum/cli.hpp"
#include "hexenum/generators.hpp"
#include "hexenum/hexm_io.hpp"
#include "hexenum/parallel.hpp"
#include "hexenum/simplify.hpp"

namespace py = pybind11;
using namespace hexenum;

namespace {

using Quad = std::array<VertexId, 4>;

QuadSurface surface_from(const std::vector<Quad>& quads) {
  std::vector<CanonicalQuad> cq;
  VertexId n = 0;
  for (const auto& q : quads) {
    cq.push_back(canonicalize_quad(q[0], q[1], q[2], q[3]));
    for (auto v : q) n = std::max(n, v + 1);
  }
  return QuadSurface(std::move(cq), n);
}

py::dict to_dict(const HexmFile& f) {
  py::dict d;
  d["coords"] = f.coords;
  d["boundary_flags"] = f.boundary_flags;
  d["quads"] = f.quads ? py::cast(*f.quads) : py::none();
  d["hexes"] = f.hexes ? py::cast(*f.hexes) : py::none();
  return d;
}

GeoMesh mesh_from(const std::vector<Vec3>& coords, const std::vector<HexCorners>& hexes) {
  GeoMesh m;
  m.coords = coords;
  m.hexes = hexes;
  m.refresh_boundary_flags();
  return m;
}

std::vector<HexCorners> corners(const std::vector<CanonicalHex>& hs) {
  std::vector<HexCorners> out;
  for (const auto& h : hs) out.push_back(h.v);
  return out;
}

}  // namespace

PYBIND11_MODULE(_hexenum, m) {
  m.doc() = "Enumeration, lower bounds and simplification of hexahedral meshes.";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);

  m.def("canonicalize_quad", [](const Quad& q) { return canonicalize_quad(q[0], q[1], q[2], q[3]).v; });
  m.def("canonicalize_hex", [](const HexCorners& h) { return canonicalize_hex(h).v; });
  m.def("is_compatible", [](const HexCorners& a, const HexCorners& b) {
    return is_compatible(canonicalize_hex(a), canonicalize_hex(b));
  });

  m.def("gen_cube", [] { return to_dict(gen_cube()); });
  m.def("gen_grid", [](std::size_t a, std::size_t b, std::size_t c) { return to_dict(gen_grid(a, b, c)); });
  m.def("gen_schneiders_boundary", [] { return to_dict(gen_schneiders_boundary()); });
  m.def("gen_spindle_boundary", [](double ring_height, double apex) { return to_dict(gen_spindle_boundary(ring_height, apex)); },
        py::arg("ring_height") = 0.25, py::arg("apex") = 1.0);

  m.def("read_hexm", [](const std::string& text) {
    std::istringstream in(text);
    return to_dict(read_hexm(in));
  });

  m.def(
      "enumerate",
      [](const std::vector<Quad>& quads, std::size_t max_hex, std::size_t max_vertices, std::size_t threads,
         bool symmetry_breaking) {
        SearchOptions so;
        so.symmetry_breaking = symmetry_breaking;
        const Searcher s(surface_from(quads), {max_hex, max_vertices}, so);
        std::vector<std::vector<HexCorners>> out;
        {
          py::gil_scoped_release release;
          parallel_search(s, resolve_thread_count(threads), [&](const Solution& sol) {
            out.push_back(corners(sol.hexes));
            return true;
          });
        }
        return out;
      },
      py::arg("quads"), py::arg("max_hex"), py::arg("max_vertices"), py::arg("threads") = 1,
      py::arg("symmetry_breaking") = true,
      "Every hex mesh of the closed quad surface within the limits, as lists of 8-tuples.");

  m.def(
      "count_solutions",
      [](const std::vector<Quad>& quads, std::size_t max_hex, std::size_t max_vertices, std::size_t threads) {
        const Searcher s(surface_from(quads), {max_hex, max_vertices});
        py::gil_scoped_release release;
        return parallel_search(s, resolve_thread_count(threads), [](const Solution&) { return true; }).solutions;
      },
      py::arg("quads"), py::arg("max_hex"), py::arg("max_vertices"), py::arg("threads") = 1);

  m.def(
      "has_mesh",
      [](const std::vector<Quad>& quads, std::size_t max_hex, std::size_t max_vertices) {
        const Searcher s(surface_from(quads), {max_hex, max_vertices});
        py::gil_scoped_release release;
        return s.run([](const Solution&) { return false; }).solutions > 0;
      },
      py::arg("quads"), py::arg("max_hex"), py::arg("max_vertices"));

  m.def(
      "validity",
      [](const std::vector<Vec3>& coords, const std::vector<HexCorners>& hexes, std::size_t samples) {
        const ValidityReport r = validity(mesh_from(coords, hexes), samples);
        py::dict d;
        d["valid"] = r.valid();
        d["min_jacobian"] = r.min_jacobian;
        d["min_corner_jacobian"] = r.min_corner_jacobian;
        d["invalid_hexes"] = r.invalid_hexes;
        return d;
      },
      py::arg("coords"), py::arg("hexes"), py::arg("samples") = 3);

  m.def(
      "untangle",
      [](const std::vector<Vec3>& coords, const std::vector<HexCorners>& hexes, std::size_t max_iters) {
        GeoMesh mesh = mesh_from(coords, hexes);
        UntangleOptions o;
        o.max_iters = max_iters;
        const UntangleResult r = untangle(mesh, mesh.is_boundary, o);
        return py::make_tuple(r.success, mesh.coords);
      },
      py::arg("coords"), py::arg("hexes"), py::arg("max_iters") = 1000,
      "Moves interior vertices until every sampled Jacobian is positive; returns (success, coords).");

  m.def(
      "simplify",
      [](const std::vector<Vec3>& coords, const std::vector<HexCorners>& hexes, std::uint64_t seed,
         std::size_t cavity_min, std::size_t cavity_max, double budget_secs) {
        SimplifyConfig c;
        c.seed = seed;
        c.cavity_min = cavity_min;
        c.cavity_max = cavity_max;
        c.remesh.budget_secs = budget_secs;
        SimplifyResult r;
        {
          const GeoMesh mesh = mesh_from(coords, hexes);
          py::gil_scoped_release release;
          r = simplify(mesh, c);
        }
        py::list steps;
        for (const auto& s : r.steps)
          steps.append(py::make_tuple(s.mesh_hexes, s.cavity_hexes, s.remeshed_hexes, s.new_mesh_hexes));
        py::dict d;
        d["coords"] = r.mesh.coords;
        d["hexes"] = r.mesh.hexes;
        d["vertex_map"] = r.vertex_map;
        d["steps"] = steps;
        return d;
      },
      py::arg("coords"), py::arg("hexes"), py::arg("seed") = 0, py::arg("cavity_min") = 6,
      py::arg("cavity_max") = 18, py::arg("budget_secs") = 30.0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args, const std::string& stdin_text) {
        std::istringstream in(stdin_text);
        std::ostringstream out, err;
        const int code = run_cli(args, in, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), py::arg("stdin") = "", "Runs the command line tool; returns (exit code, stdout, stderr).");
}
