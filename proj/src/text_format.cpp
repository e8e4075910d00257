#include "eqlat/text_format.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace eqlat {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
  std::string rest;  // text after the first token, comment stripped
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::istringstream in{std::string(raw)};
    Line line{number, {}, {}};
    for (std::string tok; in >> tok;) line.tokens.push_back(std::move(tok));
    if (line.tokens.empty()) continue;
    const auto first = raw.find(line.tokens.front());
    line.rest = std::string(raw.substr(first + line.tokens.front().size()));
    out.push_back(std::move(line));
  }
  return out;
}

class Reader {
public:
  Reader(std::string_view text, std::string_view source) : lines_(tokenize(text)), source_(source) {}

  [[noreturn]] void fail(std::size_t line, const std::string& what) const {
    throw ParseError(source_ + ":" + std::to_string(line) + ": " + what);
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_ + ": " + what); }

  const std::vector<Line>& lines() const { return lines_; }
  const std::string& source() const { return source_; }

  /// Checks the header keyword and returns the name it carries.
  std::string header(std::initializer_list<std::string_view> keywords) const {
    if (lines_.empty()) fail("empty input");
    const Line& h = lines_.front();
    bool known = false;
    for (auto k : keywords) known = known || h.tokens[0] == k;
    if (!known || h.tokens.size() != 2) fail(h.number, "expected '" + std::string(*keywords.begin()) + " <name>'");
    return h.tokens[1];
  }

  /// Index of the `end` line, which must be the last line.
  std::size_t end_index() const {
    for (std::size_t i = 0; i < lines_.size(); ++i) {
      if (lines_[i].tokens[0] != "end") continue;
      if (lines_[i].tokens.size() != 1) fail(lines_[i].number, "expected 'end' alone");
      if (i + 1 != lines_.size()) fail(lines_[i + 1].number, "unexpected content after 'end'");
      return i;
    }
    fail("missing 'end'");
  }

private:
  std::vector<Line> lines_;
  std::string source_;
};

template <class F>
auto wrap(const std::string& source, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const LatticeError& e) {
    throw ParseError(source + ": " + e.what());
  } catch (const StructureError& e) {
    throw ParseError(source + ": " + e.what());
  } catch (const PartitionError& e) {
    throw ParseError(source + ": " + e.what());
  } catch (const CapExceeded& e) {
    throw ParseError(source + ": " + e.what());
  }
}

std::string join_labels(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += " " + x;
  return s;
}

/// Shared header of .ums and .eqs: name, value lattice, points.
struct Header {
  std::string name;
  LatticeSource source;
  std::vector<std::string> points;
  std::size_t body_begin = 0;
  std::size_t body_end = 0;
};

Header read_header(const Reader& r, std::initializer_list<std::string_view> keywords,
                   const std::filesystem::path& base_dir, const Limits& limits) {
  Header h;
  h.name = r.header(keywords);
  h.body_end = r.end_index();
  const auto& lines = r.lines();
  bool have_lattice = false;
  bool have_points = false;
  std::size_t i = 1;
  for (; i < h.body_end && !(have_lattice && have_points); ++i) {
    const Line& l = lines[i];
    if (l.tokens[0] == "lattice" && !have_lattice) {
      if (l.tokens.size() != 2) r.fail(l.number, "expected 'lattice <file.lat|catalog:kind|phi:ref>'");
      try {
        h.source = resolve_lattice(l.tokens[1], base_dir, limits);
      } catch (const ReadError& e) {
        r.fail(l.number, e.what());
      } catch (const ParseError& e) {
        r.fail(l.number, std::string("in referenced lattice: ") + e.what());
      } catch (const LatticeError& e) {
        r.fail(l.number, e.what());
      } catch (const CapExceeded& e) {
        r.fail(l.number, e.what());
      }
      have_lattice = true;
    } else if (l.tokens[0] == "points" && !have_points) {
      if (l.tokens.size() < 2) r.fail(l.number, "expected 'points <label> ...'");
      h.points.assign(l.tokens.begin() + 1, l.tokens.end());
      try {
        detail::check_point_labels(h.points);
      } catch (const StructureError& e) {
        r.fail(l.number, e.what());
      }
      have_points = true;
    } else {
      r.fail(l.number, have_lattice ? "expected 'points <label> ...'" : "expected 'lattice <ref>'");
    }
  }
  if (!have_lattice) r.fail("missing 'lattice' line");
  if (!have_points) r.fail("missing 'points' line");
  h.body_begin = i;
  return h;
}

Point point_index(const Reader& r, const Line& l, const std::vector<std::string>& points, const std::string& label) {
  auto p = detail::find_label(points, label);
  if (!p) r.fail(l.number, "unknown point '" + label + "'");
  return *p;
}

Elem element_index(const Reader& r, const Line& l, const FiniteLattice& lat, const std::string& label) {
  auto e = lat.find(label);
  if (!e) r.fail(l.number, "unknown element '" + label + "' of lattice " + lat.name());
  return *e;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in || std::filesystem::is_directory(path)) throw ReadError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---------------------------------------------------------------------------

FiniteLattice parse_lattice(std::string_view text, std::string_view source, const Limits& limits) {
  const Reader r(text, source);
  const std::string name = r.header({"lattice"});
  const std::size_t end = r.end_index();
  std::vector<std::string> elements;
  bool have_elements = false;
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::pair<std::string, std::string>> covers;
  for (std::size_t i = 1; i < end; ++i) {
    const Line& l = r.lines()[i];
    if (l.tokens[0] == "elements") {
      if (have_elements) r.fail(l.number, "duplicate 'elements' line");
      if (l.tokens.size() < 2) r.fail(l.number, "expected 'elements <label> ...'");
      elements.assign(l.tokens.begin() + 1, l.tokens.end());
      for (std::size_t k = 0; k < elements.size(); ++k)
        if (std::find(elements.begin(), elements.begin() + k, elements[k]) != elements.begin() + k)
          r.fail(l.number, "duplicate element " + elements[k]);
      have_elements = true;
    } else if (l.tokens[0] == "cover") {
      if (!have_elements) r.fail(l.number, "'cover' before 'elements'");
      if (l.tokens.size() != 3) r.fail(l.number, "expected 'cover <lower> <upper>'");
      for (std::size_t k = 1; k < 3; ++k)
        if (std::find(elements.begin(), elements.end(), l.tokens[k]) == elements.end())
          r.fail(l.number, "cover references undeclared label '" + l.tokens[k] + "'");
      if (seen.emplace(l.tokens[1], l.tokens[2]).second) covers.emplace_back(l.tokens[1], l.tokens[2]);
    } else {
      r.fail(l.number, "expected 'elements', 'cover' or 'end'");
    }
  }
  if (!have_elements) r.fail("missing 'elements' line");
  return wrap(r.source(), [&] { return FiniteLattice::from_covers(name, elements, covers, limits); });
}

std::string print_lattice(const FiniteLattice& l) {
  std::string s = "lattice " + l.name() + "\nelements" + join_labels(l.labels()) + "\n";
  for (auto [lo, hi] : l.covers()) s += "cover " + l.label(lo) + " " + l.label(hi) + "\n";
  return s + "end\n";
}

LatticeSource resolve_lattice(std::string_view ref, const std::filesystem::path& base_dir, const Limits& limits) {
  LatticeSource src;
  src.ref = std::string(ref);
  if (ref.starts_with("catalog:")) {
    src.lattice = share(catalog(ref.substr(8), limits));
    src.base = src.lattice;
  } else if (ref.starts_with("phi:")) {
    LatticeSource inner = resolve_lattice(ref.substr(4), base_dir, limits);
    src.base = inner.lattice;
    src.lattice = share(phi_as_lattice(FilterLattice(src.base)));
    src.is_phi = true;
  } else {
    const std::filesystem::path p = base_dir / std::filesystem::path(ref);
    src.lattice = share(parse_lattice(read_file(p), p.string(), limits));
    src.base = src.lattice;
  }
  return src;
}

LatticeSource load_lattice(std::string_view ref_or_path, const Limits& limits) {
  return resolve_lattice(ref_or_path, {}, limits);
}

// ---------------------------------------------------------------------------

SpaceDoc parse_space(std::string_view text, std::string_view source, const std::filesystem::path& base_dir,
                     const Limits& limits) {
  const Reader r(text, source);
  Header h = read_header(r, {"space"}, base_dir, limits);
  const FiniteLattice& lat = *h.source.lattice;
  const std::size_t n = h.points.size();
  std::vector<std::optional<Elem>> d(n * n);
  for (std::size_t i = h.body_begin; i < h.body_end; ++i) {
    const Line& l = r.lines()[i];
    if (l.tokens[0] != "d" || l.tokens.size() != 4) r.fail(l.number, "expected 'd <p> <q> <element>'");
    const Point x = point_index(r, l, h.points, l.tokens[1]);
    const Point y = point_index(r, l, h.points, l.tokens[2]);
    if (x == y) r.fail(l.number, "diagonal distances are implicit");
    const Elem e = element_index(r, l, lat, l.tokens[3]);
    auto& slot = d[std::min(x, y) * n + std::max(x, y)];
    if (slot && *slot != e) r.fail(l.number, "conflicting distance for pair " + l.tokens[1] + " " + l.tokens[2]);
    slot = e;
  }
  for (Point x = 0; x < n; ++x)
    for (Point y = x + 1; y < n; ++y)
      if (!d[x * n + y]) r.fail("missing distance for pair " + h.points[x] + " " + h.points[y]);
  return wrap(r.source(), [&] {
    auto m = FiniteSpace::build(h.source.lattice, h.points, [&](Point x, Point y) { return *d[x * n + y]; });
    return SpaceDoc{h.name, h.source, std::move(m)};
  });
}

StructureDoc parse_structure(std::string_view text, std::string_view source, const std::filesystem::path& base_dir,
                             const Limits& limits) {
  const Reader r(text, source);
  Header h = read_header(r, {"structure", "space"}, base_dir, limits);
  const FiniteLattice& lat = *h.source.lattice;
  const std::size_t n = h.points.size();
  std::map<Elem, Partition> rel;
  for (std::size_t i = h.body_begin; i < h.body_end; ++i) {
    const Line& l = r.lines()[i];
    if (l.tokens[0] != "rel" || l.tokens.size() < 3 || l.tokens[2] != ":")
      r.fail(l.number, "expected 'rel <element> : p q | r ...'");
    const Elem e = element_index(r, l, lat, l.tokens[1]);
    if (rel.contains(e)) r.fail(l.number, "duplicate relation for element " + l.tokens[1]);
    std::string blocks_text = l.rest.substr(l.rest.find(':', l.rest.find(l.tokens[1]) + l.tokens[1].size()) + 1);
    std::replace(blocks_text.begin(), blocks_text.end(), '|', '\n');
    std::istringstream lines_in(blocks_text);
    std::vector<std::vector<Point>> blocks;
    for (std::string block; std::getline(lines_in, block);) {
      std::istringstream bin(block);
      std::vector<Point> b;
      for (std::string tok; bin >> tok;) b.push_back(point_index(r, l, h.points, tok));
      if (b.empty()) r.fail(l.number, "empty block");
      blocks.push_back(std::move(b));
    }
    try {
      rel.emplace(e, Partition::from_blocks(n, blocks));
    } catch (const PartitionError& err) {
      r.fail(l.number, err.what());
    }
  }
  return wrap(r.source(), [&] {
    auto a = EqStructure::make(h.source.lattice, h.points, std::move(rel));
    return StructureDoc{h.name, h.source, std::move(a)};
  });
}

std::string print_space(std::string_view name, std::string_view lattice_ref, const FiniteSpace& m) {
  std::string s = "space " + std::string(name) + "\nlattice " + std::string(lattice_ref) + "\npoints" +
                  join_labels(m.points()) + "\n";
  for (Point x = 0; x < m.size(); ++x)
    for (Point y = x + 1; y < m.size(); ++y)
      s += "d " + m.point(x) + " " + m.point(y) + " " + m.lattice().label(m.dist(x, y)) + "\n";
  return s + "end\n";
}

std::string print_structure(std::string_view name, std::string_view lattice_ref, const EqStructure& a) {
  const FiniteLattice& l = a.lattice();
  std::string s = "structure " + std::string(name) + "\nlattice " + std::string(lattice_ref) + "\npoints" +
                  join_labels(a.points()) + "\n";
  for (Elem e = 0; e < l.size(); ++e) {
    const Partition& p = a.relation(e);
    if (e == l.bottom() && p.is_discrete()) continue;
    if (e == l.top() && p.is_trivial()) continue;
    s += "rel " + l.label(e) + " :";
    bool first = true;
    for (const auto& block : p.blocks()) {
      if (!first) s += " |";
      first = false;
      for (Point x : block) s += " " + a.point(x);
    }
    s += "\n";
  }
  return s + "end\n";
}

SpaceDoc load_space(const std::filesystem::path& path, const Limits& limits) {
  return parse_space(read_file(path), path.string(), path.parent_path(), limits);
}

StructureDoc load_structure(const std::filesystem::path& path, const Limits& limits) {
  return parse_structure(read_file(path), path.string(), path.parent_path(), limits);
}

FilterSpace as_filter_space(const SpaceDoc& doc) {
  if (!doc.source.is_phi) throw StructureError("space is not valued in a filter lattice (expected 'lattice phi:...')");
  // Φ is materialized with element i standing for the principal filter of i.
  return filter_form(FiniteSpace(doc.source.base, doc.space.points(), doc.space.matrix()));
}

FiniteSpace as_phi_labeled(const FilterSpace& m) {
  auto l = share(phi_as_lattice(m.lattice()));
  return FiniteSpace::build(l, m.points(), [&](Point x, Point y) { return m.dist(x, y).bound(); });
}

// ---------------------------------------------------------------------------

std::string render_dot(const FiniteLattice& l) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  std::string s = "digraph " + quote(l.name()) + " {\n  rankdir=BT;\n";
  for (Elem e = 0; e < l.size(); ++e) s += "  n" + std::to_string(e) + " [label=" + quote(l.label(e)) + "];\n";
  for (auto [lo, hi] : l.covers()) s += "  n" + std::to_string(lo) + " -> n" + std::to_string(hi) + ";\n";
  return s + "}\n";
}

}  // namespace eqlat
