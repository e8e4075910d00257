#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "eqlat/limits.hpp"

namespace eqlat {

/// Dense element id of a finite lattice.
using Elem = std::uint32_t;

using Rational = boost::rational<std::int64_t>;

class LatticeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bounded finite lattice with full order, meet and join tables.
///
/// Element ids are dense (0..size()-1) and index the label table. Values
/// are immutable once built; use `from_covers` or the catalog to get one.
class FiniteLattice {
public:
  using value_type = Elem;

  /// Builds a lattice from its covering pairs. The order is the
  /// reflexive-transitive closure of `covers`; tables are derived from it.
  /// Throws LatticeError naming a witness on cycles, missing bounds, or a
  /// pair without meet or join.
  static FiniteLattice from_covers(std::string name, std::vector<std::string> names,
                                   std::span<const std::pair<std::string, std::string>> covers,
                                   const Limits& limits = {});

  /// Same as above with covers given by element id.
  static FiniteLattice from_cover_ids(std::string name, std::vector<std::string> names,
                                      std::span<const std::pair<Elem, Elem>> covers,
                                      const Limits& limits = {});

  /// Builds a lattice from an explicit order relation (row-major, size n*n).
  static FiniteLattice from_order(std::string name, std::vector<std::string> names,
                                  std::vector<std::uint8_t> leq, const Limits& limits = {});

  const std::string& name() const { return name_; }
  std::size_t size() const { return names_.size(); }
  const std::string& label(Elem x) const { return names_.at(x); }
  const std::vector<std::string>& labels() const { return names_; }
  std::optional<Elem> find(std::string_view label) const;
  /// Like find, but throws LatticeError when the label is unknown.
  Elem at(std::string_view label) const;

  bool leq(Elem x, Elem y) const { return leq_[index(x, y)] != 0; }
  bool less(Elem x, Elem y) const { return x != y && leq(x, y); }
  Elem meet(Elem x, Elem y) const { return meet_[index(x, y)]; }
  Elem join(Elem x, Elem y) const { return join_[index(x, y)]; }
  Elem bottom() const { return bottom_; }
  Elem top() const { return top_; }
  bool contains(Elem x) const { return x < size(); }

  static constexpr bool is_finite() { return true; }
  std::vector<Elem> enumerate() const;
  std::string format(Elem x) const { return x < size() ? label(x) : "#" + std::to_string(x); }

  /// Meet of a nonempty family; top for an empty one.
  Elem meet_all(std::span<const Elem> xs) const;
  /// Join of a family; bottom for an empty one.
  Elem join_all(std::span<const Elem> xs) const;

  /// Hasse diagram edges (lower, upper), sorted by (lower, upper).
  std::vector<std::pair<Elem, Elem>> covers() const;
  bool covers_pair(Elem lower, Elem upper) const;

  FiniteLattice renamed(std::string name) const;
  /// Same order under new labels (one per element id).
  FiniteLattice relabeled(std::string name, const std::vector<std::string>& names) const;

  /// Structural and label equality; the display name is ignored.
  friend bool operator==(const FiniteLattice& a, const FiniteLattice& b) {
    return a.names_ == b.names_ && a.leq_ == b.leq_;
  }

private:
  FiniteLattice() = default;
  std::size_t index(Elem x, Elem y) const { return std::size_t(x) * names_.size() + y; }

  std::string name_;
  std::vector<std::string> names_;
  std::vector<std::uint8_t> leq_;
  std::vector<Elem> meet_;
  std::vector<Elem> join_;
  Elem bottom_ = 0;
  Elem top_ = 0;
};

using LatticeRef = std::shared_ptr<const FiniteLattice>;

inline LatticeRef share(FiniteLattice l) { return std::make_shared<const FiniteLattice>(std::move(l)); }

// ---------------------------------------------------------------------------
// Lattice providers

/// Capability contract shared by every value lattice: finite lattices, the
/// dense rational chain, and filter lattices over either.
template <class L>
concept LatticeProvider =
    std::equality_comparable<typename L::value_type> &&
    requires(const L& l, const typename L::value_type& a, const typename L::value_type& b) {
      { l.leq(a, b) } -> std::same_as<bool>;
      { l.meet(a, b) } -> std::convertible_to<typename L::value_type>;
      { l.join(a, b) } -> std::convertible_to<typename L::value_type>;
      { l.bottom() } -> std::convertible_to<typename L::value_type>;
      { l.top() } -> std::convertible_to<typename L::value_type>;
      { l.contains(a) } -> std::same_as<bool>;
      { l.format(a) } -> std::convertible_to<std::string>;
      { L::is_finite() } -> std::same_as<bool>;
    };

template <class L>
concept FiniteLatticeProvider = LatticeProvider<L> && L::is_finite() && requires(const L& l) {
  { l.enumerate() } -> std::convertible_to<std::vector<typename L::value_type>>;
};

/// The rationals in [0,1] under the usual order.
class DenseUnitChain {
public:
  using value_type = Rational;

  bool leq(const Rational& x, const Rational& y) const { return x <= y; }
  Rational meet(const Rational& x, const Rational& y) const { return x < y ? x : y; }
  Rational join(const Rational& x, const Rational& y) const { return x < y ? y : x; }
  Rational bottom() const { return Rational(0); }
  Rational top() const { return Rational(1); }
  bool contains(const Rational& x) const { return x >= Rational(0) && x <= Rational(1); }
  static constexpr bool is_finite() { return false; }
  std::string format(const Rational& x) const;

  /// A third element strictly between two distinct elements.
  Rational between(const Rational& x, const Rational& y) const { return (x + y) / 2; }

  /// All p/q in [0,1] with 1 <= q <= max_denominator, ascending, deduplicated.
  std::vector<Rational> sample(std::int64_t max_denominator) const;

  friend bool operator==(const DenseUnitChain&, const DenseUnitChain&) { return true; }
};

/// Checks every lattice axiom on the given sample of elements. Returns a
/// description of the first failure, or nothing when all hold.
template <LatticeProvider L>
std::optional<std::string> check_lattice_axioms(const L& l, std::span<const typename L::value_type> xs) {
  auto fail = [&](std::string what, std::initializer_list<typename L::value_type> w) {
    std::string s = std::move(what);
    for (const auto& v : w) s += " " + l.format(v);
    return std::optional<std::string>(std::move(s));
  };
  const auto bot = l.bottom();
  const auto top = l.top();
  for (const auto& x : xs) {
    if (!l.leq(x, x)) return fail("reflexivity", {x});
    if (!l.leq(bot, x) || !l.leq(x, top)) return fail("bounds", {x});
    if (!(l.meet(x, x) == x) || !(l.join(x, x) == x)) return fail("idempotence", {x});
    for (const auto& y : xs) {
      const auto m = l.meet(x, y);
      const auto j = l.join(x, y);
      if (!(m == l.meet(y, x)) || !(j == l.join(y, x))) return fail("commutativity", {x, y});
      if (l.leq(x, y) && l.leq(y, x) && !(x == y)) return fail("antisymmetry", {x, y});
      if (!l.leq(m, x) || !l.leq(m, y) || !l.leq(x, j) || !l.leq(y, j)) return fail("bound-of-pair", {x, y});
      if (!(l.meet(x, j) == x) || !(l.join(x, m) == x)) return fail("absorption", {x, y});
      if (l.leq(x, y) != (m == x)) return fail("order-vs-meet", {x, y});
      for (const auto& z : xs) {
        if (l.leq(x, y) && l.leq(y, z) && !l.leq(x, z)) return fail("transitivity", {x, y, z});
        if (!(l.meet(l.meet(x, y), z) == l.meet(x, l.meet(y, z)))) return fail("meet-associativity", {x, y, z});
        if (!(l.join(l.join(x, y), z) == l.join(x, l.join(y, z)))) return fail("join-associativity", {x, y, z});
        if (l.leq(z, x) && l.leq(z, y) && !l.leq(z, m)) return fail("meet-is-greatest", {x, y, z});
        if (l.leq(x, z) && l.leq(y, z) && !l.leq(j, z)) return fail("join-is-least", {x, y, z});
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Catalog

/// Parses and builds a catalog lattice. Accepted kinds:
///   chain:N   boolean:N   m3   n5   product(K1,K2)
/// Throws LatticeError on an unknown kind or a size over the limits.
FiniteLattice catalog(std::string_view kind, const Limits& limits = {});

FiniteLattice make_chain(std::size_t n, const Limits& limits = {});
/// Subsets of n atoms ordered by inclusion. Element id = atom bitmask; the
/// empty set is labeled "0", other sets by their atom letters ("a", "ab", ...).
FiniteLattice make_boolean(std::size_t atoms, const Limits& limits = {});
FiniteLattice make_m3();
FiniteLattice make_n5();
/// Componentwise order; element id = i * |right| + j, label "(x,y)".
FiniteLattice make_product(const FiniteLattice& left, const FiniteLattice& right, const Limits& limits = {});

// ---------------------------------------------------------------------------
// Classification

struct Triple {
  Elem x, y, z;
  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Distributivity verdict with the lexicographically first violating triple
/// of x∧(y∨z) = (x∧y)∨(x∧z).
struct DistributivityResult {
  bool distributive = true;
  std::optional<Triple> witness;
};

DistributivityResult is_distributive(const FiniteLattice& l);

enum class ForbiddenKind { m3, n5 };

/// A five-element sublattice isomorphic to M3 or N5.
///
/// For M3 the atoms are `a`, `b`, `c`; for N5 the chain is bottom < a < b < top
/// and `c` is the side element.
struct ForbiddenSublattice {
  ForbiddenKind kind;
  Elem bottom, a, b, c, top;
};

std::optional<ForbiddenSublattice> find_forbidden(const FiniteLattice& l);

std::vector<Elem> join_irreducibles(const FiniteLattice& l);
bool is_join_irreducible(const FiniteLattice& l, Elem x);

/// Order isomorphism from `a` onto `b` (image of each element of `a`), if one exists.
std::optional<std::vector<Elem>> lattice_isomorphic(const FiniteLattice& a, const FiniteLattice& b);

/// True iff `map` (indexed by ids of `a`) is an order isomorphism onto `b`.
bool is_order_isomorphism(const FiniteLattice& a, const FiniteLattice& b, std::span<const Elem> map);

}  // namespace eqlat
