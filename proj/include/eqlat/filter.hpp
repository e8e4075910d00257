#pragma once

#include <compare>
#include <concepts>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eqlat/lattice.hpp"

namespace eqlat {

enum class FilterKind : std::uint8_t { principal, strict_above };

/// Intensional description of a filter: either the principal filter {y : y >= x}
/// or, over the dense chain only, the strict upper set {y : y > q} with q < 1.
template <class V>
class FilterDescriptor {
public:
  static FilterDescriptor principal(V x) { return FilterDescriptor(FilterKind::principal, std::move(x)); }

  /// (q, 1] as a filter of the dense chain. q = 1 would describe the empty
  /// set, which is not a filter, so it is refused.
  static FilterDescriptor strict_above(V q)
    requires std::same_as<V, Rational>
  {
    if (q >= Rational(1)) throw LatticeError("StrictAbove(1) is the empty set and not a filter");
    if (q < Rational(0)) throw LatticeError("StrictAbove bound must lie in [0,1)");
    return FilterDescriptor(FilterKind::strict_above, std::move(q));
  }

  FilterKind kind() const { return kind_; }
  bool is_principal() const { return kind_ == FilterKind::principal; }
  const V& bound() const { return bound_; }

  friend bool operator==(const FilterDescriptor&, const FilterDescriptor&) = default;

private:
  FilterDescriptor(FilterKind k, V b) : kind_(k), bound_(std::move(b)) {}

  FilterKind kind_;
  V bound_;
};

/// Membership of x in the described filter.
template <LatticeProvider Base>
bool member(const Base& base, const FilterDescriptor<typename Base::value_type>& f,
            const typename Base::value_type& x) {
  if (!base.contains(x)) throw LatticeError("element " + base.format(x) + " is not in the base lattice");
  if (f.is_principal()) return base.leq(f.bound(), x);
  return base.leq(f.bound(), x) && !(f.bound() == x);
}

/// The filter generated by a finite nonempty set: the principal filter of its meet.
template <LatticeProvider Base>
FilterDescriptor<typename Base::value_type> generated_filter(const Base& base,
                                                             std::span<const typename Base::value_type> gens) {
  if (gens.empty()) throw LatticeError("generated_filter needs at least one generator");
  auto m = gens.front();
  for (const auto& g : gens) {
    if (!base.contains(g)) throw LatticeError("generator " + base.format(g) + " is not in the base lattice");
    m = base.meet(m, g);
  }
  return FilterDescriptor<typename Base::value_type>::principal(m);
}

/// The lattice of filters of `Base` ordered by reverse inclusion: join is
/// intersection, meet is the filter generated by the union.
///
/// Strict descriptors only arise over a chain, where both the intersection
/// and the union of two filters is one of the two.
template <LatticeProvider Base>
class PhiLattice {
public:
  using base_value = typename Base::value_type;
  using value_type = FilterDescriptor<base_value>;

  explicit PhiLattice(std::shared_ptr<const Base> base) : base_(std::move(base)) {}

  const Base& base() const { return *base_; }
  const std::shared_ptr<const Base>& base_ptr() const { return base_; }

  bool member(const value_type& f, const base_value& x) const { return eqlat::member(*base_, f, x); }

  /// F <= G iff F contains G.
  bool leq(const value_type& f, const value_type& g) const {
    if (g.is_principal()) return member(f, g.bound());
    return base_->leq(f.bound(), g.bound());
  }

  value_type join(const value_type& f, const value_type& g) const {
    if (f.is_principal() && g.is_principal()) return value_type::principal(base_->join(f.bound(), g.bound()));
    return leq(f, g) ? g : f;
  }

  value_type meet(const value_type& f, const value_type& g) const {
    if (f.is_principal() && g.is_principal()) {
      const base_value gens[] = {f.bound(), g.bound()};
      return generated_filter(*base_, std::span<const base_value>(gens));
    }
    return leq(f, g) ? f : g;
  }

  value_type bottom() const { return value_type::principal(base_->bottom()); }
  value_type top() const { return value_type::principal(base_->top()); }

  bool contains(const value_type& f) const {
    if (!base_->contains(f.bound())) return false;
    return f.is_principal() || !(f.bound() == base_->top());
  }

  static constexpr bool is_finite() { return Base::is_finite(); }

  std::string format(const value_type& f) const {
    return (f.is_principal() ? "^" : "^>") + base_->format(f.bound());
  }

  value_type embed(const base_value& x) const { return value_type::principal(x); }

  /// Every filter of a finite base, in element order of their minima.
  std::vector<value_type> enumerate() const
    requires FiniteLatticeProvider<Base>
  {
    std::vector<value_type> out;
    for (const auto& x : base_->enumerate()) out.push_back(value_type::principal(x));
    return out;
  }

  friend bool operator==(const PhiLattice& a, const PhiLattice& b) { return *a.base_ == *b.base_; }

private:
  std::shared_ptr<const Base> base_;
};

using FilterLattice = PhiLattice<FiniteLattice>;
using Filter = FilterDescriptor<Elem>;
using FilterLatticeRef = std::shared_ptr<const FilterLattice>;

using DenseFilterLattice = PhiLattice<DenseUnitChain>;
using DenseFilter = FilterDescriptor<Rational>;

// ---------------------------------------------------------------------------
// Finite bases

/// Φ(Λ) for a finite lattice; the embedding is `FilterLattice::embed`.
FilterLatticeRef phi(LatticeRef base);

/// Membership vector of a filter over the base's element ids.
std::vector<bool> upset(const FiniteLattice& base, const Filter& f);

/// True iff `set` (indexed by element id) is nonempty, upward closed and
/// closed under binary meet.
bool is_filter(const FiniteLattice& base, const std::vector<bool>& set);

/// The principal descriptor of `set` if it is a filter.
std::optional<Filter> descriptor_of(const FiniteLattice& base, const std::vector<bool>& set);

/// Φ(Λ) materialized as a finite lattice ordered by reverse inclusion of the
/// extensional filters, labels "^<element>".
FiniteLattice phi_as_lattice(const FilterLattice& phi);

/// Smallest nonempty L0 ⊆ L whose meet is exactly `target`, scanning subsets
/// by size and then lexicographically. Nothing if no such subset exists.
std::optional<std::vector<Elem>> finite_meet_witness(const FiniteLattice& l, Elem target,
                                                     std::span<const Elem> gens);

// ---------------------------------------------------------------------------
// Dense chain: pair model of Φ([0,1]) as ([0,1] x {0,1}) minus (1,1)

struct LexPair {
  Rational value;
  int flag = 0;  // 0: principal, 1: strict

  friend bool operator==(const LexPair&, const LexPair&) = default;
  friend bool operator<(const LexPair& a, const LexPair& b) {
    return a.value < b.value || (a.value == b.value && a.flag < b.flag);
  }
};

LexPair to_lex(const DenseFilter& f);
/// Throws LatticeError for (1,1), the pair with no filter.
DenseFilter from_lex(const LexPair& p);

struct DenseModelReport {
  std::size_t descriptors = 0;
  std::size_t comparisons = 0;
  bool top_pair_excluded = false;
  std::vector<std::string> mismatches;

  bool ok() const { return mismatches.empty() && top_pair_excluded; }
};

/// Compares the lexicographic pair model with the descriptor operations of
/// Φ over every pair of descriptors whose bounds have denominator at most
/// `max_denominator`, and decides inclusion, intersection and union
/// extensionally by probing every interval the two bounds cut [0,1] into.
DenseModelReport phi_dense_chain_model(std::int64_t max_denominator = 32);

}  // namespace eqlat
