#include "hexenum/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>

#include "hexenum/generators.hpp"
#include "hexenum/hexm_io.hpp"
#include "hexenum/parallel.hpp"
#include "hexenum/simplify.hpp"

namespace hexenum {

namespace {

HexmFile load(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return read_hexm(in);
  return read_hexm_file(path);
}

void save(const std::string& path, const HexmFile& f, std::ostream& out) {
  if (path.empty() || path == "-")
    write_hexm(out, f);
  else
    write_hexm_file(path, f);
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

void print_stats(std::ostream& err, const SearchStats& st, std::size_t threads) {
  err << "nodes " << st.nodes << " backtracks " << st.backtracks << " solutions " << st.solutions << " time "
      << fmt_seconds(st.seconds) << "s threads " << threads << (st.aborted ? " (aborted)" : "") << '\n';
}

std::optional<std::chrono::steady_clock::time_point> deadline_after(double secs) {
  if (secs <= 0) return std::nullopt;
  return std::chrono::steady_clock::now() +
         std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(secs));
}

/// Mesh file for a combinatorial solution: boundary coordinates from the
/// input, interior vertices at the boundary centroid.
HexmFile solution_file(const HexmFile& boundary_file, const QuadSurface& surface, const Solution& s) {
  HexmFile f;
  const std::size_t n_b = surface.n_vertices();
  Vec3 c{0, 0, 0};
  for (std::size_t v = 0; v < n_b; ++v)
    for (int a = 0; a < 3; ++a) c[a] += boundary_file.coords[v][a] / static_cast<double>(n_b);
  f.coords.assign(boundary_file.coords.begin(), boundary_file.coords.begin() + static_cast<std::ptrdiff_t>(n_b));
  f.coords.resize(s.n_vertices, c);
  f.boundary_flags.assign(s.n_vertices, 0);
  std::fill(f.boundary_flags.begin(), f.boundary_flags.begin() + static_cast<std::ptrdiff_t>(n_b), 1);

  std::map<CanonicalQuad, std::array<VertexId, 4>> seeds;
  std::vector<std::array<VertexId, 4>> quads;
  if (boundary_file.quads) {
    quads = *boundary_file.quads;
    for (const auto& q : quads) seeds[canonicalize_quad(q[0], q[1], q[2], q[3])] = q;
  } else {
    for (const auto& q : surface.quads()) quads.push_back(q.v);
  }
  f.quads = quads;
  if (auto oriented = orient_hexes(s.hexes, seeds)) {
    f.hexes = std::move(*oriented);
  } else {
    std::vector<HexCorners> hs;
    for (const auto& h : s.hexes) hs.push_back(h.v);
    f.hexes = std::move(hs);
  }
  return f;
}

struct EnumerateArgs {
  std::string boundary;
  std::size_t max_hex = 0, max_vertices = 0, threads = 0;
  bool count_only = false, no_symmetry = false;
  std::string emit;
  double budget = 0;
};

int cmd_enumerate(const EnumerateArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  const HexmFile file = load(a.boundary, in);
  const QuadSurface surface = surface_of(file);
  SearchOptions so;
  so.symmetry_breaking = !a.no_symmetry;
  so.deadline = deadline_after(a.budget);
  const Searcher searcher(surface, {a.max_hex, a.max_vertices}, so);
  const std::size_t threads = resolve_thread_count(a.threads);
  if (!a.emit.empty()) std::filesystem::create_directories(a.emit);

  std::size_t index = 0;
  const SolutionSink sink = [&](const Solution& s) {
    ++index;
    if (!a.emit.empty()) {
      char name[64];
      std::snprintf(name, sizeof name, "solution_%06zu.hexm", index);
      write_hexm_file((std::filesystem::path(a.emit) / name).string(), solution_file(file, surface, s));
    }
    if (!a.count_only) {
      out << "solution " << index << ": " << s.hexes.size() << " hexes, " << s.n_vertices << " vertices\n";
      for (const auto& h : s.hexes) {
        out << " ";
        for (auto v : h.v) out << ' ' << v;
        out << '\n';
      }
    }
    return true;
  };
  const SearchStats st = parallel_search(searcher, threads, sink);
  out << "solutions: " << st.solutions << '\n';
  print_stats(err, st, threads);
  if (st.aborted) {
    err << "budget exceeded; the count is incomplete\n";
    return kExitBudget;
  }
  return kExitOk;
}

struct BoundArgs {
  std::string boundary, mode = "interior-vertices";
  std::size_t from = 0, to = 0, threads = 0;
  double budget = 0;
};

int cmd_bound(const BoundArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  const HexmFile file = load(a.boundary, in);
  const QuadSurface surface = surface_of(file);
  const std::size_t n_b = surface.n_vertices();
  const std::size_t threads = resolve_thread_count(a.threads);
  const bool by_vertices = a.mode == "interior-vertices";
  for (std::size_t k = a.from; k <= a.to; ++k) {
    SearchLimits limits;
    bool capped = false;
    if (by_vertices) {
      limits.max_vertices = n_b + k;
      limits.max_hexes = std::numeric_limits<std::uint32_t>::max();
      if (limits.max_vertices > VertexSet::kCapacity)
        throw InputError("vertex limit " + std::to_string(limits.max_vertices) + " exceeds " +
                         std::to_string(VertexSet::kCapacity));
    } else {
      limits.max_hexes = k;
      limits.max_vertices = std::max(n_b, std::min<std::size_t>(8 * k, VertexSet::kCapacity));
      capped = 8 * k > VertexSet::kCapacity;
    }
    SearchOptions so;
    so.deadline = deadline_after(a.budget);
    const Searcher searcher(surface, limits, so);
    const SearchStats st = parallel_search(searcher, threads, [](const Solution&) { return false; });
    out << a.mode << ' ' << k << ": ";
    if (st.solutions > 0) {
      out << "SAT";
    } else if (st.aborted) {
      out << "UNKNOWN (budget exceeded)";
    } else {
      out << "UNSAT";
    }
    out << " (nodes " << st.nodes << ", " << fmt_seconds(st.seconds) << "s"
        << (capped ? ", vertex limit capped at 128" : "") << ")\n";
    out.flush();
    if (st.solutions > 0) return kExitOk;
    if (st.aborted) {
      err << "budget exceeded at limit " << k << '\n';
      return kExitBudget;
    }
  }
  return kExitOk;
}

struct SimplifyArgs {
  std::string mesh, out_path;
  SimplifyConfig config;
};

int cmd_simplify(SimplifyArgs a, std::istream& in, std::ostream& out, std::ostream& err) {
  const HexmFile file = load(a.mesh, in);
  const GeoMesh mesh = to_geomesh(file);
  a.config.remesh.threads = resolve_thread_count(a.config.remesh.threads);
  const SimplifyResult r = simplify(mesh, a.config);

  std::ostream& log = (a.out_path.empty() || a.out_path == "-") ? err : out;
  log << "#hex #vert | cavity #hex #vert #bd.facets | remeshed #hex #vert | new #hex #vert\n";
  for (const auto& s : r.steps)
    log << s.mesh_hexes << ' ' << s.mesh_vertices << " | " << s.cavity_hexes << ' ' << s.cavity_vertices << ' '
        << s.cavity_boundary_facets << " | " << s.remeshed_hexes << ' ' << s.remeshed_vertices << " | "
        << s.new_mesh_hexes << ' ' << s.new_mesh_vertices << '\n';
  log << "hexes " << mesh.hexes.size() << " -> " << r.mesh.hexes.size() << ", cavities tried " << r.cavities_tried
      << ", remesh timeouts " << r.remesh_timeouts << ", untangle failures " << r.untangle_failures
      << (r.budget_exhausted ? ", total budget exhausted" : "") << '\n';

  HexmFile result = from_geomesh(r.mesh, file.quads.has_value());
  if (file.quads) {
    // Keep the input's boundary quads, relabelled.
    std::vector<std::array<VertexId, 4>> quads;
    for (auto q : *file.quads) {
      for (auto& v : q) v = r.vertex_map[v];
      quads.push_back(q);
    }
    result.quads = std::move(quads);
  }
  save(a.out_path, result, out);
  return kExitOk;
}

int cmd_validate(const std::string& path, std::size_t samples, std::istream& in, std::ostream& out) {
  const HexmFile file = load(path, in);
  const GeoMesh mesh = to_geomesh(file);
  std::string combinatorial = "ok";
  try {
    HexComplex c = mesh.complex();
    if (!c.pairwise_compatible()) combinatorial = "incompatible hexes";
  } catch (const InputError& e) {
    combinatorial = e.what();
  }
  const ValidityReport r = validity(mesh, samples);
  out << "hexes " << mesh.hexes.size() << " vertices " << mesh.n_vertices() << '\n';
  out << "combinatorial " << combinatorial << '\n';
  out << "min corner jacobian " << r.min_corner_jacobian << '\n';
  out << "min sampled jacobian " << r.min_jacobian << '\n';
  out << "invalid hexes " << r.invalid_hexes.size();
  for (auto h : r.invalid_hexes) out << ' ' << h;
  out << '\n';
  const bool ok = r.valid() && combinatorial == "ok";
  out << (ok ? "valid" : "invalid") << '\n';
  return ok ? kExitOk : kExitInvalidInput;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Enumerate, bound and simplify hexahedral meshes of quad surfaces", "hexenum"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Write a built-in boundary or mesh");
  std::string kind, gen_out;
  std::vector<std::size_t> dims{2, 1, 1};
  double ring_height = 0.25, apex = 1.0;
  gen->add_option("kind", kind, "cube | grid | schneiders | spindle")
      ->required()
      ->check(CLI::IsMember({"cube", "grid", "schneiders", "spindle"}));
  gen->add_option("-o,--out", gen_out, "Output file (default stdout)");
  gen->add_option("--dims", dims, "Grid dimensions a,b,c")->expected(3)->delimiter(',');
  gen->add_option("--ring-height", ring_height, "Spindle ring height");
  gen->add_option("--apex", apex, "Spindle apex height");

  auto* en = app.add_subcommand("enumerate", "Enumerate the hex meshes of a boundary");
  EnumerateArgs ea;
  en->add_option("--boundary", ea.boundary, "Boundary file (default stdin)");
  en->add_option("--max-hex", ea.max_hex, "Maximum number of hexahedra")->required();
  en->add_option("--max-vertices", ea.max_vertices, "Maximum number of vertices, boundary included")->required();
  en->add_option("--threads", ea.threads, "Worker threads (0 = auto)");
  en->add_flag("--count-only", ea.count_only, "Print only the solution count");
  en->add_option("--emit", ea.emit, "Directory receiving one mesh file per solution");
  en->add_option("--budget-secs", ea.budget, "Wall-clock limit (0 = none)");
  en->add_flag("--no-symmetry-breaking", ea.no_symmetry, "Emit every relabelling of each solution");

  auto* bd = app.add_subcommand("bound", "Refute meshes below increasing limits");
  BoundArgs ba;
  bd->add_option("--boundary", ba.boundary, "Boundary file (default stdin)");
  bd->add_option("--mode", ba.mode, "interior-vertices | hexahedra")
      ->check(CLI::IsMember({"interior-vertices", "hexahedra"}));
  bd->add_option("--from", ba.from, "First limit")->required();
  bd->add_option("--to", ba.to, "Last limit")->required();
  bd->add_option("--threads", ba.threads, "Worker threads (0 = auto)");
  bd->add_option("--budget-secs", ba.budget, "Wall-clock limit per step (0 = none)");

  auto* sp = app.add_subcommand("simplify", "Reduce the hex count of a mesh by cavity remeshing");
  SimplifyArgs sa;
  sp->add_option("--mesh", sa.mesh, "Input mesh (default stdin)");
  sp->add_option("--out", sa.out_path, "Output mesh (default stdout)");
  sp->add_option("--seed", sa.config.seed, "Random seed");
  sp->add_option("--cavity-min", sa.config.cavity_min, "Smallest cavity size");
  sp->add_option("--cavity-max", sa.config.cavity_max, "Largest cavity size");
  sp->add_option("--tries-per-size", sa.config.tries_per_size, "Cavities tried per size");
  sp->add_option("--budget-secs", sa.config.remesh.budget_secs, "Search limit per cavity");
  sp->add_option("--total-budget-secs", sa.config.total_budget_secs, "Whole-run limit (0 = none)");
  sp->add_option("--max-steps", sa.config.max_steps, "Stop after this many replacements (0 = none)");
  sp->add_option("--threads", sa.config.remesh.threads, "Search threads per cavity (0 = auto)");
  sp->add_flag("--exhaustive", sa.config.remesh.exhaustive, "Search for the smallest replacement");
  sa.config.remesh.threads = 1;

  auto* va = app.add_subcommand("validate", "Check a mesh");
  std::string va_mesh;
  std::size_t samples = 3;
  va->add_option("--mesh", va_mesh, "Mesh file (default stdin)");
  va->add_option("--samples", samples, "Interior samples per axis");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      HexmFile f;
      if (kind == "cube") f = gen_cube();
      else if (kind == "grid") f = gen_grid(dims[0], dims[1], dims[2]);
      else if (kind == "schneiders") f = gen_schneiders_boundary();
      else f = gen_spindle_boundary(ring_height, apex);
      save(gen_out, f, out);
      return kExitOk;
    }
    if (en->parsed()) return cmd_enumerate(ea, in, out, err);
    if (bd->parsed()) return cmd_bound(ba, in, out, err);
    if (sp->parsed()) return cmd_simplify(sa, in, out, err);
    if (va->parsed()) return cmd_validate(va_mesh, samples, in, out);
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const CapacityError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalidInput;
  }
  return kExitUsage;
}

}  // namespace hexenum
