#include <doctest.h>

#include <sstream>

#include "eqlat/cli.hpp"
#include "support.hpp"

using namespace eqlat;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& rel) { return (oracle::data_dir() / rel).string(); }

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("validate exit codes") {
  const std::vector<std::pair<std::string, int>> cases{
      {"affine_m3.eqs", 0},
      {"chain3_split.eqs", 0},
      {"pentagon_sample.eqs", 0},
      {"pentagon.lat", 0},
      {"m3_triangle.ums", 0},
      {"chain3_metric.ums", 0},
      {"amalgam/n5_left.ums", 0},
      {"invalid/top_not_trivial.eqs", 1},
      {"invalid/meet_broken.eqs", 1},
      {"invalid/triangle.ums", 1},
      {"invalid/cycle.lat", 2},
      {"invalid/missing_pair.ums", 2},
      {"invalid/missing_relation.eqs", 2},
      {"invalid/bad_syntax.eqs", 2},
  };
  for (const auto& [file, code] : cases) {
    CAPTURE(file);
    const auto r = run({"validate", data(file)});
    CHECK(r.code == code);
    if (code == 0) CHECK(r.out.starts_with("valid "));
    if (code == 1) CHECK(r.out.find("VIOLATION ") != std::string::npos);
    if (code == 2) CHECK_FALSE(r.err.empty());
  }
  const auto r = run({"validate", data("invalid/meet_broken.eqs")});
  CHECK(r.out == "invalid structure meet_broken with 3 points\nVIOLATION meet-preservation a b x y\n");
  CHECK(run({"validate", data("affine_m3.eqs")}).out == "valid structure affine_m3 with 4 points\n");
  CHECK(run({"validate", data("invalid/bad_syntax.eqs")}).err.find("bad_syntax.eqs:4:") != std::string::npos);
}

TEST_CASE("usage and read errors") {
  const auto missing = run({"validate", "/no/such/file.eqs"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot read") != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"validate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"search-failure", "catalog:chain:3", "--max-size", "9"}).code == 2);
  CHECK(run({"--cap", "3", "search-failure", "catalog:chain:3", "--max-size", "4"}).code == 2);
}

TEST_CASE("phi and dot") {
  const auto r = run({"phi", "catalog:m3", "--dot"});
  CHECK(r.code == 0);
  CHECK(r.out.starts_with("digraph"));
  CHECK(count(r.out, "[label=") == 5);
  CHECK(count(r.out, " -> ") == 6);
  CHECK(r.out.find("\"^a\"") != std::string::npos);

  const auto lat = run({"phi", data("pentagon.lat")});
  CHECK(lat.code == 0);
  CHECK(lattice_isomorphic(parse_lattice(lat.out), catalog("n5")));
  CHECK(run({"dot", "catalog:boolean:2"}).out == render_dot(catalog("boolean:2")));
  CHECK(run({"catalog", "n5"}).out == print_lattice(catalog("n5")));
}

TEST_CASE("conversions") {
  const auto m = run({"to-metric", data("affine_m3.eqs")});
  REQUIRE(m.code == 0);
  const auto doc = parse_space(m.out, "out", oracle::data_dir());
  CHECK(doc.source.ref == "phi:catalog:m3");
  CHECK(as_filter_space(doc) == to_metric(gen_affine_m3()));
  CHECK(m.out.find("d 00 01 ^a\n") != std::string::npos);

  const auto e = run({"to-eq", data("chain3_metric.ums")});
  REQUIRE(e.code == 0);
  const auto back = parse_structure(e.out, "out", oracle::data_dir());
  CHECK(back.source.ref == "catalog:chain:3");
  CHECK(to_metric(back.structure) == as_filter_space(load_space(data("chain3_metric.ums"))));
  CHECK(run({"to-eq", data("m3_triangle.ums")}).code == 0);
  CHECK(run({"to-eq", data("invalid/triangle.ums")}).code == 1);
}

TEST_CASE("symmetry subcommands") {
  const auto h = run({"check-homogeneous", data("affine_m3.eqs")});
  CHECK(h.code == 0);
  CHECK(h.out == "homogeneous\n");
  const auto p = run({"check-homogeneous", data("pentagon_sample.eqs")});
  CHECK(p.code == (is_homogeneous(load_structure(data("pentagon_sample.eqs")).structure).homogeneous ? 0 : 1));

  const auto a = run({"aut", data("affine_m3.eqs")});
  CHECK(a.code == 0);
  CHECK(a.out.starts_with("order 4\n"));
  CHECK(count(a.out, "\n") == 5);

  const auto inv = run({"inv-lattice", data("affine_m3.eqs"), "--expect", "catalog:m3"});
  CHECK(inv.code == 0);
  CHECK(inv.out.find("\nisomorphic to m3\n") != std::string::npos);
  CHECK(count(inv.out, "\nrel ") == 5);
  const auto no = run({"inv-lattice", data("affine_m3.eqs"), "--expect", "catalog:boolean:2"});
  CHECK(no.out.find("not isomorphic") != std::string::npos);
}

TEST_CASE("amalgamation subcommands") {
  const auto ok = run({"amalgamate", data("amalgam/base.ums"), data("amalgam/left.ums"), data("amalgam/right.ums")});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("points a0 a1 b0=c0\n") != std::string::npos);

  const auto bad =
      run({"amalgamate", data("amalgam/n5_base.ums"), data("amalgam/n5_left.ums"), data("amalgam/n5_right.ums")});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("VIOLATION triangle a0 c0 b0") != std::string::npos);

  const auto none = run({"search-failure", "catalog:chain:3", "--max-size", "4"});
  CHECK(none.code == 0);
  CHECK(none.out == "no failure up to size 4 (54 instances)\n");

  for (const char* kind : {"m3", "n5"}) {
    CAPTURE(kind);
    const auto r = run({"search-failure", std::string("catalog:") + kind, "--max-size", "4"});
    CHECK(r.code == 1);
    CHECK(r.out == read_file(oracle::data_dir() / "regression" / (std::string("search_") + kind + "_4.txt")));
  }
}
