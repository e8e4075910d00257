#include "eqlat/definability.hpp"

#include <algorithm>
#include <numeric>

namespace eqlat {

OrbitalPartition orbitals(const PairColoring& c, const Limits& limits) {
  const std::size_t n = c.n;
  std::vector<std::uint32_t> parent(n * n);
  std::iota(parent.begin(), parent.end(), 0U);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for_each_automorphism(
      c,
      [&](const Permutation& p) {
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y) {
            const auto a = find(static_cast<std::uint32_t>(x * n + y));
            const auto b = find(static_cast<std::uint32_t>(p[x] * n + p[y]));
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
          }
      },
      limits);
  std::vector<std::uint32_t> labels(n * n);
  for (std::size_t i = 0; i < n * n; ++i) labels[i] = find(static_cast<std::uint32_t>(i));
  const Partition canon = Partition::from_labels(labels);
  OrbitalPartition out;
  out.n = n;
  out.count = canon.num_blocks();
  out.orbit_of.resize(n * n);
  for (std::size_t i = 0; i < n * n; ++i) out.orbit_of[i] = canon.block_of(static_cast<Point>(i));
  return out;
}

InvariantLattice invariant_eq_lattice(const PairColoring& c, const Limits& limits) {
  const OrbitalPartition orb = orbitals(c, limits);
  if (orb.count > limits.max_orbitals) {
    throw CapExceeded(std::to_string(orb.count) + " orbitals exceed the enumeration cap of " +
                      std::to_string(limits.max_orbitals));
  }
  const std::size_t n = c.n;
  std::uint64_t diagonal = 0;
  for (Point x = 0; x < n; ++x) diagonal |= std::uint64_t(1) << orb.at(x, x);

  std::vector<Partition> found;
  std::vector<std::uint32_t> labels(n);
  const std::uint64_t subsets = std::uint64_t(1) << orb.count;
  for (std::uint64_t s = 0; s < subsets; ++s) {
    if ((s & diagonal) != diagonal) continue;
    auto in = [&](Point x, Point y) { return (s >> orb.at(x, y) & 1U) != 0; };
    bool equivalence = true;
    for (Point x = 0; x < n && equivalence; ++x)
      for (Point y = 0; y < n && equivalence; ++y) {
        if (!in(x, y)) continue;
        if (!in(y, x)) equivalence = false;
        for (Point z = 0; z < n && equivalence; ++z)
          if (in(y, z) && !in(x, z)) equivalence = false;
      }
    if (!equivalence) continue;
    for (Point x = 0; x < n; ++x) {
      Point y = 0;
      while (y < x && !in(x, y)) ++y;
      labels[x] = y;
    }
    found.push_back(Partition::from_labels(labels));
  }

  std::sort(found.begin(), found.end(), [](const Partition& a, const Partition& b) {
    if (a.num_blocks() != b.num_blocks()) return a.num_blocks() > b.num_blocks();
    return a < b;
  });

  const std::size_t m = found.size();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) names.push_back("r" + std::to_string(i));
  std::vector<std::uint8_t> leq(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) leq[i * m + j] = found[i].refines(found[j]);
  FiniteLattice lattice = FiniteLattice::from_order("invariant", std::move(names), std::move(leq));

  // The order-theoretic operations must be intersection and the transitive
  // closure of the union.
  for (Elem i = 0; i < m; ++i)
    for (Elem j = 0; j < m; ++j) {
      if (found[lattice.meet(i, j)] != found[i].meet(found[j]))
        throw std::logic_error("invariant relations are not closed under intersection");
      if (found[lattice.join(i, j)] != found[i].join(found[j]))
        throw std::logic_error("invariant relations: join is not the transitive closure of the union");
    }
  return {std::move(lattice), std::move(found)};
}

std::optional<std::vector<Elem>> realizing_map(const EqStructure& a, const Limits& limits) {
  const InvariantLattice inv = invariant_eq_lattice(a, limits);
  const FiniteLattice& l = a.lattice();
  if (!lattice_isomorphic(l, inv.lattice)) return std::nullopt;
  std::vector<Elem> map;
  for (Elem e = 0; e < l.size(); ++e) {
    auto it = std::find(inv.relations.begin(), inv.relations.end(), a.relation(e));
    if (it == inv.relations.end()) return std::nullopt;
    map.push_back(static_cast<Elem>(it - inv.relations.begin()));
  }
  if (!is_order_isomorphism(l, inv.lattice, map)) return std::nullopt;
  return map;
}

bool realizes(const EqStructure& a, const Limits& limits) { return realizing_map(a, limits).has_value(); }

}  // namespace eqlat
