#include "eqlat/cli.hpp"

#include <algorithm>
#include <functional>

#include <CLI11.hpp>

#include "eqlat/definability.hpp"
#include "eqlat/text_format.hpp"

namespace eqlat::cli {

namespace {

namespace fs = std::filesystem;

enum class Kind { lattice, structure, space };

/// Decided by extension, then by the header keyword.
Kind kind_of(const std::string& path) {
  if (path.starts_with("catalog:") || path.starts_with("phi:")) return Kind::lattice;
  const auto ext = fs::path(path).extension();
  if (ext == ".lat") return Kind::lattice;
  if (ext == ".eqs") return Kind::structure;
  if (ext == ".ums") return Kind::space;
  const std::string text = read_file(path);
  const auto start = text.find_first_not_of(" \t\r\n");
  const std::string_view head = start == std::string::npos ? "" : std::string_view(text).substr(start);
  if (head.starts_with("lattice")) return Kind::lattice;
  if (head.starts_with("structure")) return Kind::structure;
  if (head.starts_with("space")) return Kind::space;
  throw ParseError(path + ": cannot tell the format (expected .lat, .eqs or .ums)");
}

std::string format_map(const PartialMap& f, const std::vector<std::string>& src,
                       const std::vector<std::string>& dst) {
  std::string s;
  for (auto [x, y] : f.pairs()) s += (s.empty() ? "" : " ") + src[x] + "->" + dst[y];
  return s.empty() ? "(empty)" : s;
}

std::string format_blocks(const Partition& p, const std::vector<std::string>& points) {
  std::string s;
  bool first = true;
  for (const auto& block : p.blocks()) {
    if (!first) s += " |";
    first = false;
    for (Point x : block) s += " " + points[x];
  }
  return s;
}

/// Either kind of point structure, reduced to what the symmetry commands need.
struct Carrier {
  PairColoring coloring;
  std::vector<std::string> points;
};

Carrier load_carrier(const std::string& path, const Limits& limits) {
  switch (kind_of(path)) {
    case Kind::structure: {
      auto doc = load_structure(path, limits);
      return {pair_coloring(doc.structure), doc.structure.points()};
    }
    case Kind::space: {
      auto doc = load_space(path, limits);
      return {pair_coloring(doc.space), doc.space.points()};
    }
    case Kind::lattice:
      break;
  }
  throw ParseError(path + ": expected a structure (.eqs) or space (.ums)");
}

/// Validation findings of a loaded file, empty when valid.
ValidationReport validate_any(const std::string& path, std::string& summary, const Limits& limits) {
  switch (kind_of(path)) {
    case Kind::lattice: {
      auto src = load_lattice(path, limits);
      summary = "lattice " + src.lattice->name() + " with " + std::to_string(src.lattice->size()) + " elements";
      return {};
    }
    case Kind::structure: {
      auto doc = load_structure(path, limits);
      summary = "structure " + doc.name + " with " + std::to_string(doc.structure.size()) + " points";
      return validate_eqstruct(doc.structure);
    }
    case Kind::space: {
      auto doc = load_space(path, limits);
      summary = "space " + doc.name + " with " + std::to_string(doc.space.size()) + " points";
      return validate_umetric(doc.space);
    }
  }
  return {};
}

struct Failure {
  int code;
};

void require_valid(const ValidationReport& r, std::ostream& out, const std::string& what) {
  if (r.ok()) return;
  out << "invalid " << what << "\n" << r.str();
  throw Failure{1};
}

void print_amalgam_failure(const AmalgamFailure& f, const std::string& ref, std::ostream& out) {
  if (auto base = f.instance.base()) out << print_space("base", ref, *base);
  out << print_space("left", ref, f.instance.left());
  out << print_space("right", ref, f.instance.right());
  out << print_space("amalgam", ref, f.amalgam);
  const auto [x, y, z] = f.triangle;
  out << "VIOLATION triangle " << f.amalgam.point(x) << " " << f.amalgam.point(y) << " " << f.amalgam.point(z)
      << "\n";
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice-indexed equivalence structures and generalized ultrametric spaces", "eqlat"};
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t cap = 0;
  app.add_option("--cap", cap, "Override the point and amalgam size caps")->check(CLI::PositiveNumber);

  Limits limits;
  std::function<int()> action;
  auto on = [&](CLI::App* sub, std::function<int()> f) { sub->callback([&action, f] { action = f; }); };

  std::string input, second, third, expect;
  bool dot = false;
  std::size_t max_size = 0;

  auto* validate = app.add_subcommand("validate", "Check a .lat, .eqs or .ums file");
  validate->add_option("file", input, "Input file")->required();
  on(validate, [&] {
    std::string summary;
    const auto report = validate_any(input, summary, limits);
    if (!report.ok()) {
      out << "invalid " << summary << "\n" << report.str();
      return 1;
    }
    out << "valid " << summary << "\n";
    return 0;
  });

  auto* phi_cmd = app.add_subcommand("phi", "Print the filter lattice of a lattice");
  phi_cmd->add_option("lattice", input, "Lattice file or catalog:<kind>")->required();
  phi_cmd->add_flag("--dot", dot, "Emit a Hasse diagram in DOT format");
  on(phi_cmd, [&] {
    const auto src = load_lattice(input, limits);
    const FiniteLattice p = phi_as_lattice(FilterLattice(src.lattice));
    out << (dot ? render_dot(p) : print_lattice(p));
    return 0;
  });

  auto* to_metric_cmd = app.add_subcommand("to-metric", "Convert a structure (.eqs) to a space over phi(lattice)");
  to_metric_cmd->add_option("file", input, "Structure file")->required();
  on(to_metric_cmd, [&] {
    const auto doc = load_structure(input, limits);
    require_valid(validate_eqstruct(doc.structure), out, "structure " + doc.name);
    out << print_space(doc.name, "phi:" + doc.source.ref, as_phi_labeled(to_metric(doc.structure)));
    return 0;
  });

  auto* to_eq_cmd = app.add_subcommand("to-eq", "Convert a space (.ums) to a structure");
  to_eq_cmd->add_option("file", input, "Space file")->required();
  on(to_eq_cmd, [&] {
    const auto doc = load_space(input, limits);
    require_valid(validate_umetric(doc.space), out, "space " + doc.name);
    if (doc.source.is_phi) {
      out << print_structure(doc.name, doc.source.ref.substr(4), to_eq(as_filter_space(doc)));
    } else {
      out << print_structure(doc.name, doc.source.ref, from_distance_view(doc.space));
    }
    return 0;
  });

  auto* homog = app.add_subcommand("check-homogeneous", "Check that every partial isomorphism extends");
  homog->add_option("file", input, "Structure or space file")->required();
  on(homog, [&] {
    const auto c = load_carrier(input, limits);
    const auto verdict = is_homogeneous(c.coloring, limits);
    if (verdict.homogeneous) {
      out << "homogeneous\n";
      return 0;
    }
    out << "not homogeneous\nVIOLATION non-extendable " << format_map(*verdict.failure, c.points, c.points)
        << "\n";
    return 1;
  });

  auto* aut = app.add_subcommand("aut", "List the automorphisms");
  aut->add_option("file", input, "Structure or space file")->required();
  on(aut, [&] {
    const auto c = load_carrier(input, limits);
    const auto group = automorphism_group(c.coloring, limits);
    out << "order " << group.size() << "\n";
    for (const auto& p : group) out << format_map(PartialMap::from_images(p), c.points, c.points) << "\n";
    return 0;
  });

  auto* amalg = app.add_subcommand("amalgamate", "Amalgamate two spaces over a common base");
  amalg->add_option("base", input, "Base space")->required();
  amalg->add_option("left", second, "First extension")->required();
  amalg->add_option("right", third, "Second extension")->required();
  on(amalg, [&] {
    const auto a = load_space(input, limits);
    const auto b = load_space(second, limits);
    const auto c = load_space(third, limits);
    if (!(*a.source.lattice == *b.source.lattice) || !(*a.source.lattice == *c.source.lattice))
      throw ParseError("the three spaces must share a value lattice");
    for (const auto* d : {&a, &b, &c}) require_valid(validate_umetric(d->space), out, "space " + d->name);
    const auto inst = AmalgamInstance::make(a.space, b.space, c.space);
    const auto m = amalgamate(inst);
    const auto report = amalgam_violations(m);
    if (report.ok()) {
      out << print_space("amalgam", a.source.ref, collapse(m));
      return 0;
    }
    out << print_space("amalgam", a.source.ref, m) << report.str();
    return 1;
  });

  auto* search = app.add_subcommand("search-failure", "Search for an amalgamation failure");
  search->add_option("lattice", input, "Lattice file or catalog:<kind>")->required();
  search->add_option("--max-size", max_size, "Largest extension size")->required()->check(CLI::PositiveNumber);
  on(search, [&] {
    const auto src = load_lattice(input, limits);
    const auto report = check_amalgamation_property(src.lattice, max_size, limits);
    if (report.passed) {
      out << "no failure up to size " << max_size << " (" << report.instances << " instances)\n";
      return 0;
    }
    print_amalgam_failure(*report.failure, src.ref, out);
    return 1;
  });

  auto* inv = app.add_subcommand("inv-lattice", "Lattice of automorphism-invariant equivalence relations");
  inv->add_option("file", input, "Structure or space file")->required();
  inv->add_option("--expect", expect, "Exit 0 iff isomorphic to this lattice");
  on(inv, [&] {
    const auto c = load_carrier(input, limits);
    const auto result = invariant_eq_lattice(c.coloring, limits);
    out << "# equivalence relations invariant under all automorphisms\n" << print_lattice(result.lattice);
    for (Elem e = 0; e < result.lattice.size(); ++e)
      out << "rel " << result.lattice.label(e) << " :" << format_blocks(result.relations[e], c.points) << "\n";
    if (expect.empty()) return 0;
    const auto want = load_lattice(expect, limits);
    const bool iso = lattice_isomorphic(result.lattice, *want.lattice).has_value();
    out << (iso ? "isomorphic to " : "not isomorphic to ") << want.lattice->name() << "\n";
    return iso ? 0 : 1;
  });

  auto* cat = app.add_subcommand("catalog", "Print a catalog lattice, or list the kinds");
  cat->add_option("kind", input, "chain:N, boolean:N, m3, n5 or product(K1,K2)");
  on(cat, [&] {
    if (input.empty()) {
      out << "chain:N\nboolean:N\nm3\nn5\nproduct(K1,K2)\n";
      return 0;
    }
    out << print_lattice(catalog(input.starts_with("catalog:") ? input.substr(8) : input, limits));
    return 0;
  });

  auto* dot_cmd = app.add_subcommand("dot", "Hasse diagram of a lattice in DOT format");
  dot_cmd->add_option("lattice", input, "Lattice file or catalog:<kind>")->required();
  on(dot_cmd, [&] {
    out << render_dot(*load_lattice(input, limits).lattice);
    return 0;
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  if (cap != 0) {
    limits.max_points = cap;
    limits.max_amalgam_size = cap;
  }
  try {
    return action();
  } catch (const Failure& f) {
    return f.code;
  } catch (const ReadError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << " (raise it with --cap)\n";
  } catch (const LatticeError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const StructureError& e) {
    err << "error: " << e.what() << "\n";
  }
  return 2;
}

}  // namespace eqlat::cli
