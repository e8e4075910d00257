#pragma once

#include <random>

#include "eqlat/filter.hpp"
#include "eqlat/homogeneity.hpp"
#include "eqlat/structures.hpp"

namespace eqlat {

/// A space with distances in Φ(Λ) for a finite Λ.
using FilterSpace = UltrametricSpace<FilterLattice>;

/// m: d(x,y) is the filter {λ : E_λ(x,y)}. Throws StructureError with the
/// validation report if `a` is not a valid structure.
FilterSpace to_metric(const EqStructure& a);

/// The same distances read through Φ(Λ) ≅ Λ, as elements of Λ.
FiniteSpace to_metric_view(const EqStructure& a);

/// e: E_λ(x,y) iff λ is a member of d(x,y). Throws StructureError with the
/// validation report if `m` is not a valid space.
EqStructure to_eq(const FilterSpace& m);

/// e applied through the view: E_λ(x,y) iff d(x,y) <= λ.
EqStructure from_distance_view(const FiniteSpace& m);

/// Conversions between the Φ-valued form and its view in Λ.
FiniteSpace view_of(const FilterSpace& m);
FilterSpace filter_form(const FiniteSpace& m);

bool roundtrip_check(const EqStructure& a);
bool roundtrip_check(const FilterSpace& m);

struct TransferReport {
  MorphismVerdict embedding;
  MorphismVerdict isometry;

  bool agree() const {
    if (embedding.holds != isometry.holds) return false;
    if (embedding.holds) return true;
    return embedding.witness->x == isometry.witness->x && embedding.witness->y == isometry.witness->y;
  }
};

/// Embedding verdict for `f : a -> b` next to the isometry verdict for
/// `f : m(a) -> m(b)`; they must agree, witnesses included.
TransferReport verify_morphism_transfer(const PartialMap& f, const EqStructure& a, const EqStructure& b);

struct HomogeneityTransfer {
  HomogeneityVerdict structure;
  HomogeneityVerdict metric;

  bool agree() const { return structure.homogeneous == metric.homogeneous; }
};

HomogeneityTransfer homogeneity_transfer(const EqStructure& a, const Limits& limits = {});

/// Raises distances until the triangle inequality holds: while some
/// d(x,y) exceeds d(x,z) v d(y,z), d(x,z) is joined with d(x,y).
FiniteSpace repair_triangles(const FiniteSpace& m);

/// Random valid structure: random non-bottom distances, repaired, then read
/// back through `from_distance_view`.
EqStructure random_eqstructure(LatticeRef lattice, std::size_t points, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Dense chain

/// Structure over the rationals in [0,1] in which each pair's relating set
/// {λ : E_λ(x,y)} is an up-set given intensionally. Over a chain every up-set
/// is closed under meet, so meet preservation holds by construction.
class DenseChainStructure {
public:
  /// `relating(x, y)` for x < y gives the up-set of λ with E_λ(x,y).
  template <class F>
  static DenseChainStructure build(std::vector<std::string> points, F&& relating) {
    detail::check_point_labels(points);
    const std::size_t n = points.size();
    std::vector<DenseFilter> sets(n * n, DenseFilter::principal(Rational(0)));
    for (Point x = 0; x < n; ++x)
      for (Point y = x + 1; y < n; ++y) sets[std::size_t(x) * n + y] = sets[std::size_t(y) * n + x] = relating(x, y);
    return DenseChainStructure(std::move(points), std::move(sets));
  }

  std::size_t size() const { return points_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  const DenseFilter& relating_set(Point x, Point y) const { return sets_[std::size_t(x) * size() + y]; }
  bool related(const Rational& lambda, Point x, Point y) const;

  /// The least λ with E_λ(x,y), when one exists.
  std::optional<Rational> finest_relating_element(Point x, Point y) const;

private:
  DenseChainStructure(std::vector<std::string> p, std::vector<DenseFilter> s)
      : points_(std::move(p)), sets_(std::move(s)) {}

  std::vector<std::string> points_;
  std::vector<DenseFilter> sets_;
};

/// E_0 is equality and every E_λ is transitive, decided by probing each
/// interval the bounds of a triple cut [0,1] into.
ValidationReport validate_dense(const DenseChainStructure& s);

UltrametricSpace<DenseFilterLattice> to_metric(const DenseChainStructure& s);

}  // namespace eqlat
