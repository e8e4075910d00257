#pragma once

// Brute-force oracles and fixtures shared by the test binaries. Nothing here
// calls the library routine it is used to check.

#include <algorithm>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "eqlat/correspondence.hpp"
#include "eqlat/definability.hpp"
#include "eqlat/text_format.hpp"

namespace oracle {

using namespace eqlat;

inline std::filesystem::path data_dir() { return EQLAT_DATA_DIR; }

// ---------------------------------------------------------------------------
// Lattices from the order relation alone

inline std::optional<Elem> glb(const FiniteLattice& l, Elem x, Elem y) {
  std::optional<Elem> best;
  for (Elem z = 0; z < l.size(); ++z) {
    if (!l.leq(z, x) || !l.leq(z, y)) continue;
    bool greatest = true;
    for (Elem w = 0; w < l.size(); ++w)
      if (l.leq(w, x) && l.leq(w, y) && !l.leq(w, z)) greatest = false;
    if (greatest) best = z;
  }
  return best;
}

inline std::optional<Elem> lub(const FiniteLattice& l, Elem x, Elem y) {
  std::optional<Elem> best;
  for (Elem z = 0; z < l.size(); ++z) {
    if (!l.leq(x, z) || !l.leq(y, z)) continue;
    bool least = true;
    for (Elem w = 0; w < l.size(); ++w)
      if (l.leq(x, w) && l.leq(y, w) && !l.leq(z, w)) least = false;
    if (least) best = z;
  }
  return best;
}

inline bool distributive(const FiniteLattice& l) {
  for (Elem x = 0; x < l.size(); ++x)
    for (Elem y = 0; y < l.size(); ++y)
      for (Elem z = 0; z < l.size(); ++z)
        if (*glb(l, x, *lub(l, y, z)) != *lub(l, *glb(l, x, y), *glb(l, x, z))) return false;
  return true;
}

inline bool join_irreducible(const FiniteLattice& l, Elem x) {
  if (x == l.bottom()) return false;
  for (Elem a = 0; a < l.size(); ++a)
    for (Elem b = 0; b < l.size(); ++b)
      if (a != x && b != x && *lub(l, a, b) == x) return false;
  return true;
}

/// Every finite lattice in the catalog with at most `max_size` elements.
inline std::vector<std::string> catalog_kinds(std::size_t max_size) {
  std::vector<std::pair<std::string, std::size_t>> base;
  for (std::size_t n = 1; n <= 16; ++n) base.emplace_back("chain:" + std::to_string(n), n);
  for (std::size_t n = 1; n <= 4; ++n) base.emplace_back("boolean:" + std::to_string(n), std::size_t(1) << n);
  base.emplace_back("m3", 5);
  base.emplace_back("n5", 5);
  std::vector<std::string> out;
  for (const auto& [k, n] : base)
    if (n <= max_size) out.push_back(k);
  const std::vector<std::pair<std::string, std::size_t>> factors{
      {"chain:2", 2}, {"chain:3", 3}, {"chain:4", 4}, {"boolean:2", 4}, {"m3", 5}, {"n5", 5}};
  for (std::size_t i = 0; i < factors.size(); ++i)
    for (std::size_t j = i; j < factors.size(); ++j) {
      const auto& [a, na] = factors[i];
      const auto& [b, nb] = factors[j];
      if (na * nb <= max_size) out.push_back("product(" + a + "," + b + ")");
    }
  return out;
}

// ---------------------------------------------------------------------------
// Filters as explicit sets

inline std::vector<bool> upset_of(const FiniteLattice& l, Elem x) {
  std::vector<bool> s(l.size());
  for (Elem y = 0; y < l.size(); ++y) s[y] = l.leq(x, y);
  return s;
}

inline bool is_filter_set(const FiniteLattice& l, const std::vector<bool>& s) {
  bool nonempty = false;
  for (Elem x = 0; x < l.size(); ++x) {
    if (!s[x]) continue;
    nonempty = true;
    for (Elem y = 0; y < l.size(); ++y) {
      if (l.leq(x, y) && !s[y]) return false;
      if (s[y] && !s[*glb(l, x, y)]) return false;
    }
  }
  return nonempty;
}

/// Some nonempty subset of `gens` meets to `target` iff the generators above it do.
inline bool meet_witness_exists(const FiniteLattice& l, Elem target, const std::vector<Elem>& gens) {
  Elem m = l.top();
  bool any = false;
  for (Elem g : gens)
    if (l.leq(target, g)) m = *glb(l, m, g), any = true;
  return any && m == target;
}

/// Smallest-size subset of `gens` with meet exactly `target`, lexicographic
/// by position within a size.
inline std::optional<std::vector<Elem>> meet_witness(const FiniteLattice& l, Elem target,
                                                     const std::vector<Elem>& gens) {
  const std::size_t n = gens.size();
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
      Elem m = l.top();
      std::vector<Elem> chosen;
      for (std::size_t i = 0; i < n; ++i)
        if (pick[i]) chosen.push_back(gens[i]), m = *glb(l, m, gens[i]);
      if (m == target) return chosen;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Pair data of both structure kinds

inline bool same_pair(const EqStructure& a, Point x, Point y, const EqStructure& b, Point u, Point v) {
  for (Elem e = 0; e < a.lattice().size(); ++e)
    if (a.related(e, x, y) != b.related(e, u, v)) return false;
  return true;
}

template <class L>
bool same_pair(const UltrametricSpace<L>& a, Point x, Point y, const UltrametricSpace<L>& b, Point u, Point v) {
  return a.dist(x, y) == b.dist(u, v);
}

template <class X>
bool preserves(const X& a, const X& b, const std::vector<std::pair<Point, Point>>& f) {
  for (auto [x, u] : f)
    for (auto [y, v] : f)
      if (!same_pair(a, x, y, b, u, v)) return false;
  return true;
}

/// Every permutation checked directly against the definition.
template <class X>
std::vector<std::vector<Point>> automorphisms(const X& a) {
  std::vector<Point> p(a.size());
  std::iota(p.begin(), p.end(), Point{0});
  std::vector<std::vector<Point>> out;
  do {
    std::vector<std::pair<Point, Point>> f;
    for (Point x = 0; x < p.size(); ++x) f.emplace_back(x, p[x]);
    if (preserves(a, a, f)) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Every structure-preserving injection from every subset extends to one of
/// the automorphisms.
template <class X>
bool homogeneous(const X& a) {
  const auto group = oracle::automorphisms(a);
  const auto n = static_cast<Point>(a.size());
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    std::vector<Point> dom;
    for (Point x = 0; x < n; ++x)
      if (mask >> x & 1U) dom.push_back(x);
    std::vector<Point> img(n);
    std::iota(img.begin(), img.end(), Point{0});
    // every injection dom -> points, via permutations of an image prefix
    std::vector<std::vector<Point>> images;
    std::function<void(std::size_t, std::vector<Point>&, std::vector<bool>&)> rec =
        [&](std::size_t i, std::vector<Point>& cur, std::vector<bool>& used) {
          if (i == dom.size()) {
            images.push_back(cur);
            return;
          }
          for (Point y = 0; y < n; ++y) {
            if (used[y]) continue;
            used[y] = true;
            cur.push_back(y);
            rec(i + 1, cur, used);
            cur.pop_back();
            used[y] = false;
          }
        };
    std::vector<Point> cur;
    std::vector<bool> used(n, false);
    rec(0, cur, used);
    for (const auto& im : images) {
      std::vector<std::pair<Point, Point>> f;
      for (std::size_t i = 0; i < dom.size(); ++i) f.emplace_back(dom[i], im[i]);
      if (!preserves(a, a, f)) continue;
      bool extends = false;
      for (const auto& g : group) {
        bool agree = true;
        for (auto [x, y] : f) agree = agree && g[x] == y;
        if (agree) {
          extends = true;
          break;
        }
      }
      if (!extends) return false;
    }
  }
  return true;
}

/// All set partitions of {0..n-1} as canonical label vectors.
inline std::vector<std::vector<std::uint32_t>> set_partitions(std::size_t n) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur(n);
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t blocks) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (std::uint32_t b = 0; b <= blocks; ++b) {
      cur[i] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  if (n == 0) return {{}};
  cur[0] = 0;
  rec(1, 1);
  return out;
}

/// Equivalence relations preserved by every automorphism.
template <class X>
std::vector<std::vector<std::uint32_t>> invariant_partitions(const X& a) {
  const auto group = oracle::automorphisms(a);
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& p : set_partitions(a.size())) {
    bool invariant = true;
    for (const auto& g : group)
      for (Point x = 0; x < a.size() && invariant; ++x)
        for (Point y = 0; y < a.size() && invariant; ++y)
          invariant = (p[x] == p[y]) == (p[g[x]] == p[g[y]]);
    if (invariant) out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ultrametric checks written from the axioms

inline bool triangle_ok(const FiniteLattice& l, Elem xy, Elem xz, Elem yz) { return l.leq(xy, *lub(l, xz, yz)); }

inline bool umetric_ok(const FiniteSpace& m) {
  const FiniteLattice& l = m.lattice();
  for (Point x = 0; x < m.size(); ++x)
    for (Point y = 0; y < m.size(); ++y) {
      if (m.dist(x, y) != m.dist(y, x)) return false;
      if ((m.dist(x, y) == l.bottom()) != (x == y)) return false;
      for (Point z = 0; z < m.size(); ++z)
        if (!triangle_ok(l, m.dist(x, y), m.dist(x, z), m.dist(y, z))) return false;
    }
  return true;
}

/// The classical max-form condition on integer ranks.
inline bool classical_ultrametric(const std::vector<int>& d, std::size_t n) {
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (d[x * n + y] != d[y * n + x]) return false;
      if ((d[x * n + y] == 0) != (x == y)) return false;
      for (std::size_t z = 0; z < n; ++z)
        if (d[x * n + y] > std::max(d[x * n + z], d[y * n + z])) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Fixtures

inline LatticeRef lat(const std::string& kind) { return share(catalog(kind)); }

/// Every built-in structure: generators, hand-written data files, and a few
/// seeded random structures over non-distributive lattices.
inline std::vector<std::pair<std::string, EqStructure>> structure_fixtures() {
  std::vector<std::pair<std::string, EqStructure>> out;
  out.emplace_back("affine_m3", gen_affine_m3());
  for (std::size_t n = 1; n <= 3; ++n) out.emplace_back("boolean_example_" + std::to_string(n), gen_boolean_example(n));
  for (const char* k : {"chain:2", "chain:3", "boolean:2", "m3", "n5"})
    for (std::size_t pts = 2; pts <= 4; ++pts)
      out.emplace_back(std::string("degenerate_") + k + "_" + std::to_string(pts), gen_degenerate(lat(k), pts));
  for (const auto& entry : std::filesystem::directory_iterator(data_dir())) {
    if (entry.path().extension() != ".eqs") continue;
    auto doc = load_structure(entry.path());
    if (validate_eqstruct(doc.structure).ok()) out.emplace_back(entry.path().filename().string(), doc.structure);
  }
  std::mt19937_64 rng(20261019);
  for (const char* k : {"m3", "n5", "product(chain:2,chain:3)"})
    for (std::size_t pts = 3; pts <= 5; ++pts)
      out.emplace_back(std::string("random_") + k + "_" + std::to_string(pts), random_eqstructure(lat(k), pts, rng));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace oracle
