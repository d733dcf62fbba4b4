#include <doctest.h>

#include <filesystem>
#include <map>
#include <sstream>

#include "hexenum/cli.hpp"
#include "hexenum/generators.hpp"
#include "hexenum/hexm_io.hpp"

using namespace hexenum;

namespace {

std::string to_text(const HexmFile& f) {
  std::ostringstream o;
  write_hexm(o, f);
  return o.str();
}

HexmFile from_text(const std::string& s) {
  std::istringstream in(s);
  return read_hexm(in);
}

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args, const std::string& in = "") {
  std::istringstream i(in);
  std::ostringstream o, e;
  const int code = run_cli(args, i, o, e);
  return {code, o.str(), e.str()};
}

std::map<VertexId, int> quad_degree(const HexmFile& f) {
  std::map<VertexId, int> d;
  for (const auto& q : *f.quads)
    for (auto v : q) ++d[v];
  return d;
}

}  // namespace

TEST_CASE("hexm round trip") {
  for (const auto& f : {gen_cube(), gen_grid(2, 3, 1), gen_schneiders_boundary(), gen_spindle_boundary(0.3, 1.2)}) {
    const auto back = from_text(to_text(f));
    CHECK(back == f);
  }
  HexmFile odd = gen_cube();
  odd.coords[3] = {0.1, 1.0 / 3.0, -2e-17};
  CHECK(from_text(to_text(odd)) == odd);
}

TEST_CASE("malformed files") {
  const std::string good = to_text(gen_cube());
  CHECK_NOTHROW(from_text(good));
  CHECK_THROWS_AS(from_text(""), InputError);
  CHECK_THROWS_AS(from_text("hexm 2\nvertices 0\n"), InputError);
  CHECK_THROWS_AS(from_text("hexm 1\nvertices 2\n0 0 0 1\n"), InputError);
  CHECK_THROWS_AS(from_text("hexm 1\nvertices 1\n0 0 zero 1\n"), InputError);
  CHECK_THROWS_AS(from_text("hexm 1\nvertices 4\n0 0 0 1\n1 0 0 1\n1 1 0 1\n0 1 0 1\nquads 1\n0 1 2 7\n"), InputError);
  CHECK_THROWS_AS(from_text("hexm 1\nvertices 4\n0 0 0 1\n1 0 0 1\n1 1 0 1\n0 1 0 1\nquads 1\n0 1 2 2\n"), InputError);
  CHECK_THROWS_AS(from_text("hexm 1\nvertices 4\n0 0 0 1\n1 0 0 1\n1 1 0 1\n0 1 0 1\nquads 1\n0 1 2\n"), InputError);
  try {
    from_text("hexm 1\nvertices 1\n0 0 0 7\n");
    FAIL("accepted a bad flag");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("generated boundaries") {
  const auto cube = gen_cube();
  CHECK(cube.coords.size() == 8);
  CHECK(cube.quads->size() == 6);
  CHECK(cube.hexes->size() == 1);
  CHECK((*cube.hexes)[0] == HexCorners{0, 1, 2, 3, 4, 5, 6, 7});

  const auto schn = gen_schneiders_boundary();
  CHECK(schn.coords.size() == 18);
  CHECK(schn.quads->size() == 16);
  const auto s = surface_of(schn);
  CHECK(s.is_closed());
  CHECK(s.has_even_quad_count());

  const auto spin = gen_spindle_boundary();
  CHECK(spin.coords.size() == 10);
  CHECK(spin.quads->size() == 8);
  CHECK(surface_of(spin).is_closed());
  const auto deg = quad_degree(spin);
  CHECK(deg.at(0) == 4);
  CHECK(deg.at(9) == 4);
  for (VertexId v = 1; v <= 8; ++v) CHECK(deg.at(v) == 3);
  CHECK_THROWS_AS(gen_spindle_boundary(1.5, 1.0), InputError);

  const auto g = gen_grid(3, 2, 2);
  CHECK(g.hexes->size() == 12);
  CHECK(g.coords.size() == 4 * 3 * 3);
  CHECK(surface_of(g).size() == 2 * (6 + 6 + 4));
  // Boundary vertices come first.
  bool seen_interior = false;
  for (auto b : g.boundary_flags) {
    if (!b) seen_interior = true;
    CHECK_FALSE((b && seen_interior));
  }
}

TEST_CASE("geomesh conversion") {
  const auto g = gen_grid(2, 2, 2);
  const auto m = to_geomesh(g);
  CHECK(m.hexes == *g.hexes);
  const auto back = from_geomesh(m, true);
  CHECK(back.coords == g.coords);
  CHECK(back.boundary_flags == g.boundary_flags);
  CHECK(surface_of(back) == surface_of(g));
}

TEST_CASE("cli: gen and enumerate") {
  const auto gen = cli({"gen", "cube"});
  REQUIRE(gen.code == 0);
  CHECK(from_text(gen.out) == gen_cube());
  const auto en = cli({"enumerate", "--max-hex", "2", "--max-vertices", "8", "--count-only"}, gen.out);
  CHECK(en.code == 0);
  CHECK(en.out == "solutions: 1\n");

  const auto slab = cli({"gen", "grid", "--dims", "2,1,1"});
  const auto listed = cli({"enumerate", "--max-hex", "2", "--max-vertices", "12"}, slab.out);
  CHECK(listed.code == 0);
  CHECK(listed.out.find("solutions: 1") != std::string::npos);
}

TEST_CASE("cli: emitted solutions are readable meshes") {
  const auto dir = std::filesystem::temp_directory_path() / "hexenum_emit_test";
  std::filesystem::remove_all(dir);
  const auto slab = cli({"gen", "grid", "--dims", "2,1,1"});
  const auto r = cli({"enumerate", "--max-hex", "2", "--max-vertices", "12", "--emit", dir.string()}, slab.out);
  CHECK(r.code == 0);
  const auto f = read_hexm_file((dir / "solution_000001.hexm").string());
  REQUIRE(f.hexes);
  CHECK(f.hexes->size() == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: exit codes") {
  CHECK(cli({}).code == 1);
  CHECK(cli({"enumerate", "--max-hex", "2"}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"gen", "octahedron"}).code == 1);
  CHECK(cli({"enumerate", "--max-hex", "2", "--max-vertices", "8"}, "not a mesh").code == 2);
  CHECK(cli({"enumerate", "--max-hex", "2", "--max-vertices", "8", "--boundary", "/nonexistent/x.hexm"}).code == 2);

  // Seven quads: the cube with one vertex split.
  const std::string odd =
      "hexm 1\nvertices 9\n"
      "0 0 0 1\n1 0 0 1\n1 1 0 1\n0 1 0 1\n0 0 1 1\n1 0 1 1\n1 1 1 1\n0 1 1 1\n0.5 0.5 1 1\n"
      "quads 7\n"
      "0 3 2 1\n0 1 5 4\n1 2 6 5\n2 3 7 6\n3 0 4 7\n4 5 8 7\n5 6 7 8\n";
  CHECK(cli({"enumerate", "--max-hex", "4", "--max-vertices", "12"}, odd).code == 2);

  const auto schn = cli({"gen", "schneiders"}).out;
  const auto slow = cli({"enumerate", "--max-hex", "40", "--max-vertices", "60", "--budget-secs", "0.2"}, schn);
  CHECK(slow.code == 3);
  const auto bound = cli({"bound", "--mode", "hexahedra", "--from", "30", "--to", "30", "--budget-secs", "0.2"}, schn);
  CHECK(bound.code == 3);
  CHECK(bound.out.find("UNKNOWN") != std::string::npos);
}

TEST_CASE("cli: bound") {
  const auto cube = cli({"gen", "cube"}).out;
  const auto b = cli({"bound", "--mode", "hexahedra", "--from", "0", "--to", "3"}, cube);
  CHECK(b.code == 0);
  CHECK(b.out.find("hexahedra 0: UNSAT") != std::string::npos);
  CHECK(b.out.find("hexahedra 1: SAT") != std::string::npos);
  // Stops at the first satisfiable limit.
  CHECK(b.out.find("hexahedra 2") == std::string::npos);

  const auto slab = cli({"gen", "grid", "--dims", "2,1,1"}).out;
  const auto v = cli({"bound", "--mode", "interior-vertices", "--from", "0", "--to", "2"}, slab);
  CHECK(v.code == 0);
  CHECK(v.out.find("interior-vertices 0: SAT") != std::string::npos);
  CHECK(cli({"bound", "--mode", "interior-vertices", "--from", "200", "--to", "200"}, slab).code == 2);
  CHECK(cli({"bound", "--mode", "sideways", "--from", "0", "--to", "1"}, slab).code == 1);

  const auto schn = cli({"gen", "schneiders"}).out;
  const auto s = cli({"bound", "--mode", "interior-vertices", "--from", "0", "--to", "2"}, schn);
  CHECK(s.code == 0);
  for (int k = 0; k <= 2; ++k)
    CHECK(s.out.find("interior-vertices " + std::to_string(k) + ": UNSAT") != std::string::npos);
}

TEST_CASE("cli: validate and simplify") {
  const auto grid = cli({"gen", "grid", "--dims", "2,2,2"}).out;
  const auto v = cli({"validate"}, grid);
  CHECK(v.code == 0);
  CHECK(v.out.find("valid\n") != std::string::npos);

  auto bad = from_text(grid);
  std::swap((*bad.hexes)[0][0], (*bad.hexes)[0][4]);
  std::swap((*bad.hexes)[0][1], (*bad.hexes)[0][5]);
  std::swap((*bad.hexes)[0][2], (*bad.hexes)[0][6]);
  std::swap((*bad.hexes)[0][3], (*bad.hexes)[0][7]);
  const auto iv = cli({"validate"}, to_text(bad));
  CHECK(iv.code == 2);
  CHECK(iv.out.find("invalid\n") != std::string::npos);

  const auto s = cli({"simplify", "--seed", "3", "--max-steps", "1", "--cavity-min", "2", "--cavity-max", "4"}, grid);
  CHECK(s.code == 0);
  const auto out = from_text(s.out);
  REQUIRE(out.hexes);
  CHECK(out.hexes->size() <= 8);
  CHECK(cli({"validate"}, s.out).code == 0);
}
