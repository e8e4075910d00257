#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eqlat/lattice.hpp"
#include "eqlat/partition.hpp"

namespace eqlat {

class StructureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Violation {
  std::string kind;
  std::vector<std::string> witness;
};

/// Findings of a validation pass; empty means valid.
struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string kind, std::vector<std::string> witness) {
    violations.push_back({std::move(kind), std::move(witness)});
  }
  /// One `VIOLATION <kind> <witness...>` line per finding.
  std::string str() const;
};

namespace detail {
void check_point_labels(const std::vector<std::string>& points);
std::optional<Point> find_label(const std::vector<std::string>& points, std::string_view label);
std::vector<std::string> select_labels(const std::vector<std::string>& points, std::span<const Point> subset);
}  // namespace detail

// ---------------------------------------------------------------------------

/// A finite carrier with one partition E_λ per element of a finite lattice.
class EqStructure {
public:
  /// Every element needs an explicit partition except bottom and top, which
  /// default to equality and the trivial relation. Throws StructureError on a
  /// missing relation, a partition over the wrong carrier, or an empty carrier.
  static EqStructure make(LatticeRef lattice, std::vector<std::string> points,
                          std::map<Elem, Partition> relations);

  const FiniteLattice& lattice() const { return *lattice_; }
  const LatticeRef& lattice_ptr() const { return lattice_; }
  std::size_t size() const { return points_.size(); }
  const std::string& point(Point x) const { return points_.at(x); }
  const std::vector<std::string>& points() const { return points_; }
  std::optional<Point> find_point(std::string_view label) const { return detail::find_label(points_, label); }

  const Partition& relation(Elem e) const { return relations_.at(e); }
  bool related(Elem e, Point x, Point y) const { return relations_.at(e).related(x, y); }

  friend bool operator==(const EqStructure& a, const EqStructure& b) {
    return *a.lattice_ == *b.lattice_ && a.points_ == b.points_ && a.relations_ == b.relations_;
  }

private:
  EqStructure() = default;

  LatticeRef lattice_;
  std::vector<std::string> points_;
  std::vector<Partition> relations_;
};

ValidationReport validate_eqstruct(const EqStructure& a);

// ---------------------------------------------------------------------------

/// A finite carrier with a distance matrix valued in any lattice provider.
template <LatticeProvider L>
class UltrametricSpace {
public:
  using value_type = typename L::value_type;

  /// `dist` is row-major n*n. Throws StructureError if the carrier is empty,
  /// the matrix has the wrong shape, or an entry is not in the value lattice.
  UltrametricSpace(std::shared_ptr<const L> lattice, std::vector<std::string> points,
                   std::vector<value_type> dist)
      : lattice_(std::move(lattice)), points_(std::move(points)), dist_(std::move(dist)) {
    if (!lattice_) throw StructureError("space needs a value lattice");
    detail::check_point_labels(points_);
    if (dist_.size() != points_.size() * points_.size()) throw StructureError("distance matrix has wrong shape");
    for (std::size_t i = 0; i < dist_.size(); ++i) {
      if (!lattice_->contains(dist_[i])) {
        throw StructureError("matrix entry at " + points_[i / points_.size()] + " " +
                             points_[i % points_.size()] + " is not an element of the value lattice");
      }
    }
  }

  /// Symmetric space with bottom on the diagonal and d(x,y) = f(x,y) for x < y.
  template <class F>
  static UltrametricSpace build(std::shared_ptr<const L> lattice, std::vector<std::string> points, F&& f) {
    const std::size_t n = points.size();
    std::vector<value_type> dist(n * n, lattice->bottom());
    for (Point x = 0; x < n; ++x)
      for (Point y = x + 1; y < n; ++y) dist[std::size_t(x) * n + y] = dist[std::size_t(y) * n + x] = f(x, y);
    return UltrametricSpace(std::move(lattice), std::move(points), std::move(dist));
  }

  const L& lattice() const { return *lattice_; }
  const std::shared_ptr<const L>& lattice_ptr() const { return lattice_; }
  std::size_t size() const { return points_.size(); }
  const std::string& point(Point x) const { return points_.at(x); }
  const std::vector<std::string>& points() const { return points_; }
  std::optional<Point> find_point(std::string_view label) const { return detail::find_label(points_, label); }

  const value_type& dist(Point x, Point y) const { return dist_[std::size_t(x) * points_.size() + y]; }
  const std::vector<value_type>& matrix() const { return dist_; }

  /// Copy with one entry (and its mirror) replaced.
  UltrametricSpace with_distance(Point x, Point y, const value_type& v) const {
    auto d = dist_;
    d[std::size_t(x) * size() + y] = v;
    d[std::size_t(y) * size() + x] = v;
    return UltrametricSpace(lattice_, points_, std::move(d));
  }

  friend bool operator==(const UltrametricSpace& a, const UltrametricSpace& b) {
    return *a.lattice_ == *b.lattice_ && a.points_ == b.points_ && a.dist_ == b.dist_;
  }

private:
  std::shared_ptr<const L> lattice_;
  std::vector<std::string> points_;
  std::vector<value_type> dist_;
};

using FiniteSpace = UltrametricSpace<FiniteLattice>;

/// Symmetry, identity of indiscernibles, and the ultrametric triangle
/// d(x,y) <= d(x,z) v d(y,z). Each violation names its smallest witness.
template <LatticeProvider L>
ValidationReport validate_umetric(const UltrametricSpace<L>& m) {
  ValidationReport r;
  const L& l = m.lattice();
  const auto n = static_cast<Point>(m.size());
  const auto bot = l.bottom();
  for (Point x = 0; x < n; ++x)
    if (!(m.dist(x, x) == bot)) r.add("identity", {m.point(x), m.point(x), l.format(m.dist(x, x))});
  for (Point x = 0; x < n; ++x)
    for (Point y = x + 1; y < n; ++y) {
      if (!(m.dist(x, y) == m.dist(y, x))) r.add("not-symmetric", {m.point(x), m.point(y)});
      if (m.dist(x, y) == bot || m.dist(y, x) == bot) r.add("identity", {m.point(x), m.point(y), l.format(bot)});
    }
  for (Point x = 0; x < n; ++x)
    for (Point y = x + 1; y < n; ++y)
      for (Point z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        if (!l.leq(m.dist(x, y), l.join(m.dist(x, z), m.dist(y, z)))) {
          r.add("triangle", {m.point(x), m.point(y), m.point(z)});
          break;
        }
      }
  return r;
}

// ---------------------------------------------------------------------------
// Substructures

namespace detail {
void check_subset(std::size_t n, std::span<const Point> subset);
}

EqStructure induced_substructure(const EqStructure& a, std::span<const Point> subset);

template <LatticeProvider L>
UltrametricSpace<L> induced_substructure(const UltrametricSpace<L>& m, std::span<const Point> subset) {
  detail::check_subset(m.size(), subset);
  std::vector<typename L::value_type> dist;
  dist.reserve(subset.size() * subset.size());
  for (Point x : subset)
    for (Point y : subset) dist.push_back(m.dist(x, y));
  return UltrametricSpace<L>(m.lattice_ptr(), detail::select_labels(m.points(), subset), std::move(dist));
}

/// Point indices for the given labels; throws StructureError on unknown labels.
std::vector<Point> points_by_label(const std::vector<std::string>& points, std::span<const std::string> labels);

// ---------------------------------------------------------------------------
// Maps

/// An injective finite partial map between carriers.
class PartialMap {
public:
  PartialMap() = default;
  /// Throws StructureError if a source or a target repeats.
  explicit PartialMap(std::vector<std::pair<Point, Point>> pairs);

  static PartialMap identity(std::size_t n);
  /// The total map x -> images[x].
  static PartialMap from_images(std::span<const Point> images);

  const std::vector<std::pair<Point, Point>>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  std::optional<Point> apply(Point x) const;
  bool is_total(std::size_t n) const;
  PartialMap inverse() const;

  friend bool operator==(const PartialMap&, const PartialMap&) = default;

private:
  std::vector<std::pair<Point, Point>> pairs_;  // sorted by source
};

/// g ∘ f, defined on the sources of f whose image lies in the domain of g.
PartialMap compose(const PartialMap& g, const PartialMap& f);

/// First source pair whose relations (or distance) differ after mapping,
/// with the first differing lattice element for structures.
struct MapWitness {
  Point x = 0, y = 0;
  std::optional<Elem> element;
  friend bool operator==(const MapWitness&, const MapWitness&) = default;
};

struct MorphismVerdict {
  bool holds = true;
  std::optional<MapWitness> witness;
  explicit operator bool() const { return holds; }
};

namespace detail {
void check_map(const PartialMap& f, std::size_t source_size, std::size_t target_size);
}

/// E_λ(x,y) in A iff E_λ(f x, f y) in B, for every λ and all x, y.
/// Throws StructureError on a lattice mismatch or a map not total on A.
MorphismVerdict is_embedding(const PartialMap& f, const EqStructure& a, const EqStructure& b);

/// d(x,y) = d(f x, f y) for all x, y.
template <LatticeProvider L>
MorphismVerdict is_isometry(const PartialMap& f, const UltrametricSpace<L>& m, const UltrametricSpace<L>& n) {
  if (!(m.lattice() == n.lattice())) throw StructureError("spaces have different value lattices");
  detail::check_map(f, m.size(), n.size());
  for (Point x = 0; x < m.size(); ++x)
    for (Point y = x + 1; y < m.size(); ++y)
      if (!(m.dist(x, y) == n.dist(*f.apply(x), *f.apply(y)))) return {false, MapWitness{x, y, std::nullopt}};
  return {};
}

// ---------------------------------------------------------------------------
// Generators

/// {0,1}^n with E_T(x,y) iff x and y agree on every coordinate i whose atom
/// is outside T; coatom i thus carries agreement in coordinate i.
EqStructure gen_boolean_example(std::size_t n, const Limits& limits = {});

/// E_λ is equality for λ below top and trivial at top. Points "p0".."p{k-1}".
EqStructure gen_degenerate(LatticeRef lattice, std::size_t k);
EqStructure gen_degenerate(LatticeRef lattice, std::vector<std::string> points);

/// The four points of the affine plane over F2 with the three parallel
/// classes of lines as the atoms of M3: a = first coordinate, b = second
/// coordinate, c = coordinate sum.
EqStructure gen_affine_m3();

/// Whether λ -> E_λ preserves meets and joins (join = transitive closure of
/// the union), with the first pair breaking each.
struct HomomorphismReport {
  bool meets = true;
  bool joins = true;
  std::optional<std::pair<Elem, Elem>> meet_witness;
  std::optional<std::pair<Elem, Elem>> join_witness;
};

HomomorphismReport label_map_homomorphism(const EqStructure& a);

}  // namespace eqlat
