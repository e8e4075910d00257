#pragma once

#include <optional>
#include <vector>

#include "eqlat/homogeneity.hpp"

namespace eqlat {

/// Orbits of the automorphism group on ordered pairs of points.
struct OrbitalPartition {
  std::size_t n = 0;
  std::vector<std::uint32_t> orbit_of;  // row-major n*n, canonical numbering
  std::size_t count = 0;

  std::uint32_t at(Point x, Point y) const { return orbit_of[std::size_t(x) * n + y]; }
};

OrbitalPartition orbitals(const PairColoring& c, const Limits& limits = {});

template <class X>
OrbitalPartition orbitals(const X& x, const Limits& limits = {}) {
  return orbitals(pair_coloring(x), limits);
}

/// The automorphism-invariant equivalence relations of a structure, ordered
/// by inclusion. Element i of `lattice` is realized by `relations[i]`;
/// elements are sorted finest first, then by block vector.
struct InvariantLattice {
  FiniteLattice lattice;
  std::vector<Partition> relations;
};

/// Enumerates unions of orbitals that are equivalence relations. Throws
/// CapExceeded when there are more than `limits.max_orbitals` orbitals.
InvariantLattice invariant_eq_lattice(const PairColoring& c, const Limits& limits = {});

template <class X>
InvariantLattice invariant_eq_lattice(const X& x, const Limits& limits = {}) {
  return invariant_eq_lattice(pair_coloring(x), limits);
}

/// For each element of the structure's lattice, the index of the invariant
/// relation equal to its E_λ, when the structure realizes its lattice.
std::optional<std::vector<Elem>> realizing_map(const EqStructure& a, const Limits& limits = {});

/// True iff the invariant lattice is isomorphic to the structure's lattice
/// through λ -> E_λ.
bool realizes(const EqStructure& a, const Limits& limits = {});

}  // namespace eqlat
