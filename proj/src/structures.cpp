#include "eqlat/structures.hpp"

#include <algorithm>
#include <set>

namespace eqlat {

std::string ValidationReport::str() const {
  std::string out;
  for (const auto& v : violations) {
    out += "VIOLATION " + v.kind;
    for (const auto& w : v.witness) out += " " + w;
    out += "\n";
  }
  return out;
}

namespace detail {

void check_point_labels(const std::vector<std::string>& points) {
  if (points.empty()) throw StructureError("empty carrier: at least one point is required");
  std::set<std::string_view> seen;
  for (const auto& p : points) {
    if (p.empty()) throw StructureError("empty point label");
    for (char c : p)
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '#' || c == '|' || c == ':')
        throw StructureError("point label contains a reserved character: \"" + p + "\"");
    if (!seen.insert(p).second) throw StructureError("duplicate point label: " + p);
  }
}

std::optional<Point> find_label(const std::vector<std::string>& points, std::string_view label) {
  auto it = std::find(points.begin(), points.end(), label);
  if (it == points.end()) return std::nullopt;
  return static_cast<Point>(it - points.begin());
}

std::vector<std::string> select_labels(const std::vector<std::string>& points, std::span<const Point> subset) {
  std::vector<std::string> out;
  out.reserve(subset.size());
  for (Point x : subset) out.push_back(points.at(x));
  return out;
}

void check_subset(std::size_t n, std::span<const Point> subset) {
  if (subset.empty()) throw StructureError("substructure on an empty point set");
  std::set<Point> seen;
  for (Point x : subset) {
    if (x >= n) throw StructureError("substructure names unknown point " + std::to_string(x));
    if (!seen.insert(x).second) throw StructureError("substructure lists point " + std::to_string(x) + " twice");
  }
}

void check_map(const PartialMap& f, std::size_t source_size, std::size_t target_size) {
  if (!f.is_total(source_size)) throw StructureError("map is not total on the source carrier");
  for (const auto& [s, t] : f.pairs())
    if (t >= target_size) throw StructureError("map sends a point outside the target carrier");
}

}  // namespace detail

// ---------------------------------------------------------------------------

EqStructure EqStructure::make(LatticeRef lattice, std::vector<std::string> points,
                              std::map<Elem, Partition> relations) {
  if (!lattice) throw StructureError("structure needs a lattice");
  detail::check_point_labels(points);
  const std::size_t n = points.size();
  EqStructure a;
  a.relations_.reserve(lattice->size());
  for (Elem e = 0; e < lattice->size(); ++e) {
    auto it = relations.find(e);
    if (it != relations.end()) {
      if (it->second.points() != n)
        throw StructureError("relation for " + lattice->label(e) + " is over the wrong number of points");
      a.relations_.push_back(it->second);
    } else if (e == lattice->bottom()) {
      a.relations_.push_back(Partition::discrete(n));
    } else if (e == lattice->top()) {
      a.relations_.push_back(Partition::trivial(n));
    } else {
      throw StructureError("missing relation for element " + lattice->label(e));
    }
  }
  for (const auto& [e, p] : relations)
    if (e >= lattice->size()) throw StructureError("relation given for an element outside the lattice");
  a.lattice_ = std::move(lattice);
  a.points_ = std::move(points);
  return a;
}

ValidationReport validate_eqstruct(const EqStructure& a) {
  ValidationReport r;
  const FiniteLattice& l = a.lattice();
  const auto n = static_cast<Point>(a.size());
  const auto& lab = [&](Elem e) { return l.label(e); };

  auto first_pair = [&](auto&& bad) -> std::optional<std::pair<Point, Point>> {
    for (Point x = 0; x < n; ++x)
      for (Point y = x + 1; y < n; ++y)
        if (bad(x, y)) return std::pair{x, y};
    return std::nullopt;
  };

  if (auto w = first_pair([&](Point x, Point y) { return a.related(l.bottom(), x, y); }))
    r.add("bottom-not-equality", {lab(l.bottom()), a.point(w->first), a.point(w->second)});
  if (auto w = first_pair([&](Point x, Point y) { return !a.related(l.top(), x, y); }))
    r.add("top-not-trivial", {lab(l.top()), a.point(w->first), a.point(w->second)});

  for (Elem e = 0; e < l.size(); ++e)
    for (Elem f = e + 1; f < l.size(); ++f) {
      const Elem m = l.meet(e, f);
      auto w = first_pair([&](Point x, Point y) {
        return a.related(m, x, y) != (a.related(e, x, y) && a.related(f, x, y));
      });
      if (w) r.add("meet-preservation", {lab(e), lab(f), a.point(w->first), a.point(w->second)});
    }

  for (Elem e = 0; e < l.size(); ++e)
    for (Elem f = 0; f < l.size(); ++f) {
      if (!l.less(e, f)) continue;
      auto w = first_pair([&](Point x, Point y) { return a.related(e, x, y) && !a.related(f, x, y); });
      if (w) r.add("monotonicity", {lab(e), lab(f), a.point(w->first), a.point(w->second)});
    }
  return r;
}

// ---------------------------------------------------------------------------

EqStructure induced_substructure(const EqStructure& a, std::span<const Point> subset) {
  detail::check_subset(a.size(), subset);
  std::map<Elem, Partition> rel;
  for (Elem e = 0; e < a.lattice().size(); ++e) rel.emplace(e, a.relation(e).restrict(subset));
  return EqStructure::make(a.lattice_ptr(), detail::select_labels(a.points(), subset), std::move(rel));
}

std::vector<Point> points_by_label(const std::vector<std::string>& points, std::span<const std::string> labels) {
  std::vector<Point> out;
  for (const auto& s : labels) {
    auto p = detail::find_label(points, s);
    if (!p) throw StructureError("unknown point " + s);
    out.push_back(*p);
  }
  return out;
}

// ---------------------------------------------------------------------------

PartialMap::PartialMap(std::vector<std::pair<Point, Point>> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  std::set<Point> targets;
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (i > 0 && pairs_[i].first == pairs_[i - 1].first)
      throw StructureError("map lists source " + std::to_string(pairs_[i].first) + " twice");
    if (!targets.insert(pairs_[i].second).second)
      throw StructureError("map is not injective: target " + std::to_string(pairs_[i].second) + " repeats");
  }
}

PartialMap PartialMap::identity(std::size_t n) {
  std::vector<std::pair<Point, Point>> p;
  for (Point x = 0; x < n; ++x) p.emplace_back(x, x);
  return PartialMap(std::move(p));
}

PartialMap PartialMap::from_images(std::span<const Point> images) {
  std::vector<std::pair<Point, Point>> p;
  for (Point x = 0; x < images.size(); ++x) p.emplace_back(x, images[x]);
  return PartialMap(std::move(p));
}

std::optional<Point> PartialMap::apply(Point x) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), std::pair<Point, Point>{x, 0});
  if (it == pairs_.end() || it->first != x) return std::nullopt;
  return it->second;
}

bool PartialMap::is_total(std::size_t n) const {
  if (pairs_.size() != n) return false;
  for (Point x = 0; x < n; ++x)
    if (pairs_[x].first != x) return false;
  return true;
}

PartialMap PartialMap::inverse() const {
  std::vector<std::pair<Point, Point>> p;
  for (const auto& [s, t] : pairs_) p.emplace_back(t, s);
  return PartialMap(std::move(p));
}

PartialMap compose(const PartialMap& g, const PartialMap& f) {
  std::vector<std::pair<Point, Point>> p;
  for (const auto& [s, t] : f.pairs())
    if (auto u = g.apply(t)) p.emplace_back(s, *u);
  return PartialMap(std::move(p));
}

MorphismVerdict is_embedding(const PartialMap& f, const EqStructure& a, const EqStructure& b) {
  if (!(a.lattice() == b.lattice())) throw StructureError("structures are over different lattices");
  detail::check_map(f, a.size(), b.size());
  for (Point x = 0; x < a.size(); ++x)
    for (Point y = x + 1; y < a.size(); ++y) {
      const Point fx = *f.apply(x), fy = *f.apply(y);
      for (Elem e = 0; e < a.lattice().size(); ++e)
        if (a.related(e, x, y) != b.related(e, fx, fy)) return {false, MapWitness{x, y, e}};
    }
  return {};
}

// ---------------------------------------------------------------------------

EqStructure gen_boolean_example(std::size_t n, const Limits& limits) {
  if (n < 1 || n > limits.max_boolean_example)
    throw StructureError("boolean example needs 1 <= n <= " + std::to_string(limits.max_boolean_example));
  auto lattice = share(make_boolean(n, limits));
  const std::size_t count = std::size_t(1) << n;
  std::vector<std::string> points;
  for (std::size_t v = 0; v < count; ++v) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += (v >> i & 1U) ? '1' : '0';
    points.push_back(s);
  }
  std::map<Elem, Partition> rel;
  for (Elem t = 0; t < lattice->size(); ++t) {
    // Coordinates outside T must agree: the class label is v restricted to them.
    const std::uint32_t kept = ~t & static_cast<std::uint32_t>(count - 1);
    std::vector<std::uint32_t> labels(count);
    for (std::size_t v = 0; v < count; ++v) labels[v] = static_cast<std::uint32_t>(v) & kept;
    rel.emplace(t, Partition::from_labels(labels));
  }
  return EqStructure::make(std::move(lattice), std::move(points), std::move(rel));
}

EqStructure gen_degenerate(LatticeRef lattice, std::vector<std::string> points) {
  if (points.size() < 2) throw StructureError("degenerate structure needs at least two points");
  std::map<Elem, Partition> rel;
  for (Elem e = 0; e < lattice->size(); ++e)
    rel.emplace(e, e == lattice->top() ? Partition::trivial(points.size()) : Partition::discrete(points.size()));
  return EqStructure::make(std::move(lattice), std::move(points), std::move(rel));
}

EqStructure gen_degenerate(LatticeRef lattice, std::size_t k) {
  std::vector<std::string> points;
  for (std::size_t i = 0; i < k; ++i) points.push_back("p" + std::to_string(i));
  return gen_degenerate(std::move(lattice), std::move(points));
}

EqStructure gen_affine_m3() {
  auto lattice = share(make_m3());
  std::vector<std::string> points{"00", "01", "10", "11"};
  // point index = 2*u + v for the label "uv"
  std::vector<std::uint32_t> first, second, sum;
  for (std::uint32_t p = 0; p < 4; ++p) {
    first.push_back(p >> 1);
    second.push_back(p & 1U);
    sum.push_back((p >> 1) ^ (p & 1U));
  }
  std::map<Elem, Partition> rel;
  rel.emplace(lattice->at("a"), Partition::from_labels(first));
  rel.emplace(lattice->at("b"), Partition::from_labels(second));
  rel.emplace(lattice->at("c"), Partition::from_labels(sum));
  return EqStructure::make(std::move(lattice), std::move(points), std::move(rel));
}

HomomorphismReport label_map_homomorphism(const EqStructure& a) {
  HomomorphismReport r;
  const FiniteLattice& l = a.lattice();
  for (Elem e = 0; e < l.size(); ++e)
    for (Elem f = e + 1; f < l.size(); ++f) {
      if (r.meets && a.relation(l.meet(e, f)) != a.relation(e).meet(a.relation(f))) {
        r.meets = false;
        r.meet_witness = std::pair{e, f};
      }
      if (r.joins && a.relation(l.join(e, f)) != a.relation(e).join(a.relation(f))) {
        r.joins = false;
        r.join_witness = std::pair{e, f};
      }
    }
  return r;
}

}  // namespace eqlat
