#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eqlat/structures.hpp"

namespace eqlat {

/// A colour for every ordered pair of points. Isomorphisms between induced
/// substructures are exactly the colour-preserving injections, so both
/// structure kinds reduce to this form for symmetry questions.
struct PairColoring {
  std::size_t n = 0;
  std::vector<std::uint32_t> color;  // row-major n*n

  std::uint32_t at(Point x, Point y) const { return color[std::size_t(x) * n + y]; }
};

/// Colour = the set of λ with E_λ(x,y).
PairColoring pair_coloring(const EqStructure& a);

/// Colour = the distance value.
template <LatticeProvider L>
PairColoring pair_coloring(const UltrametricSpace<L>& m) {
  PairColoring c;
  c.n = m.size();
  std::vector<typename L::value_type> seen;
  for (const auto& v : m.matrix()) {
    std::uint32_t id = 0;
    while (id < seen.size() && !(seen[id] == v)) ++id;
    if (id == seen.size()) seen.push_back(v);
    c.color.push_back(id);
  }
  return c;
}

using Permutation = std::vector<Point>;

/// Calls `visit` for every colour-preserving permutation, in lexicographic
/// order of image vectors. Throws CapExceeded above `limits.max_points`.
void for_each_automorphism(const PairColoring& c, const std::function<void(const Permutation&)>& visit,
                           const Limits& limits = {});

std::vector<Permutation> automorphism_group(const PairColoring& c, const Limits& limits = {});

/// A colour-preserving permutation extending the injection source[i] -> target[i].
std::optional<Permutation> extend_to_automorphism(const PairColoring& c, std::span<const Point> source,
                                                  std::span<const Point> target);

template <class X>
std::vector<PartialMap> automorphisms(const X& x, const Limits& limits = {}) {
  std::vector<PartialMap> out;
  for (const auto& p : automorphism_group(pair_coloring(x), limits)) out.push_back(PartialMap::from_images(p));
  return out;
}

struct HomogeneityVerdict {
  bool homogeneous = true;
  /// A partial isomorphism of minimum size that extends to no automorphism.
  std::optional<PartialMap> failure;
};

HomogeneityVerdict is_homogeneous(const PairColoring& c, const Limits& limits = {});

template <class X>
HomogeneityVerdict is_homogeneous(const X& x, const Limits& limits = {}) {
  return is_homogeneous(pair_coloring(x), limits);
}

// ---------------------------------------------------------------------------
// Amalgamation

/// Two finite-valued spaces over a common base, identified by point names.
/// The base may be empty, in which case `base()` is absent.
class AmalgamInstance {
public:
  /// Throws StructureError unless every base point lies in both sides, the
  /// sides share no other point, both sides validate, and they induce the
  /// same distances on the base.
  static AmalgamInstance make(std::vector<std::string> base_points, FiniteSpace left, FiniteSpace right);
  /// As above, and also checks that `base` is the space both sides induce.
  static AmalgamInstance make(const FiniteSpace& base, FiniteSpace left, FiniteSpace right);

  const std::vector<std::string>& base_points() const { return base_points_; }
  std::optional<FiniteSpace> base() const;
  const FiniteSpace& left() const { return left_; }
  const FiniteSpace& right() const { return right_; }

private:
  AmalgamInstance(std::vector<std::string> b, FiniteSpace l, FiniteSpace r)
      : base_points_(std::move(b)), left_(std::move(l)), right_(std::move(r)) {}

  std::vector<std::string> base_points_;
  FiniteSpace left_;
  FiniteSpace right_;
};

/// Distance given to a left-only point b and a right-only point c: the meet
/// over the base of d(b,a) v d(a,c); top over an empty base.
Elem amalgam_distance(const FiniteLattice& l, std::span<const Elem> to_base_left,
                      std::span<const Elem> to_base_right);

/// The candidate amalgam: base points, then left-only points, then right-only
/// points. The result is not validated.
FiniteSpace amalgamate(const AmalgamInstance& inst);

/// Findings of a candidate amalgam other than bottom distances between two
/// distinct points. Such a pair is identified rather than rejected, so the
/// amalgam is the quotient and need not be strong.
ValidationReport amalgam_violations(const FiniteSpace& candidate);

/// The quotient of a candidate without violations: points at distance bottom
/// merge into one point labeled "x=y". Throws StructureError otherwise.
FiniteSpace collapse(const FiniteSpace& candidate);

/// True iff d(x,y) is not below the least upper bound of d(x,z) and d(y,z),
/// computed by scanning the order relation alone (not the join table).
bool is_triangle_violation(const FiniteSpace& m, Point x, Point y, Point z);

struct AmalgamFailure {
  AmalgamInstance instance;
  FiniteSpace amalgam;
  std::array<Point, 3> triangle;  // d(x,y) > d(x,z) v d(y,z) in the amalgam
};

struct AmalgamationReport {
  bool passed = true;
  std::size_t instances = 0;
  std::optional<AmalgamFailure> failure;
};

/// Runs the candidate amalgam on every instance with |B|, |C| <= max_size,
/// up to isomorphism, and checks it with `amalgam_violations`. Every triangle of an amalgam has at most two points on
/// one side and one on the other, so only instances adding one point to
/// the right and one or two to the left are generated; every larger instance
/// fails iff one of these sub-instances does. Throws CapExceeded above
/// `limits.max_amalgam_size`.
AmalgamationReport check_amalgamation_property(const LatticeRef& lattice, std::size_t max_size,
                                               const Limits& limits = {});

/// The first failing instance, re-validated with `is_triangle_violation`.
std::optional<AmalgamFailure> search_amalgam_failure(const LatticeRef& lattice, std::size_t max_size,
                                                     const Limits& limits = {});

// ---------------------------------------------------------------------------

struct IndexEntry {
  Elem lower, upper;
  /// For each E_upper-class in canonical order, how many E_lower-classes it splits into.
  std::vector<std::size_t> splits;
};

std::vector<IndexEntry> index_profile(const EqStructure& a);

}  // namespace eqlat
