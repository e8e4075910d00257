#include "eqlat/filter.hpp"

#include <algorithm>

namespace eqlat {

FilterLatticeRef phi(LatticeRef base) {
  if (!base) throw LatticeError("phi needs a base lattice");
  return std::make_shared<const FilterLattice>(std::move(base));
}

std::vector<bool> upset(const FiniteLattice& base, const Filter& f) {
  std::vector<bool> out(base.size());
  for (Elem x = 0; x < base.size(); ++x) out[x] = member(base, f, x);
  return out;
}

bool is_filter(const FiniteLattice& base, const std::vector<bool>& set) {
  if (set.size() != base.size()) return false;
  if (std::none_of(set.begin(), set.end(), [](bool b) { return b; })) return false;
  for (Elem x = 0; x < base.size(); ++x) {
    if (!set[x]) continue;
    for (Elem y = 0; y < base.size(); ++y) {
      if (base.leq(x, y) && !set[y]) return false;
      if (set[y] && !set[base.meet(x, y)]) return false;
    }
  }
  return true;
}

std::optional<Filter> descriptor_of(const FiniteLattice& base, const std::vector<bool>& set) {
  if (!is_filter(base, set)) return std::nullopt;
  std::vector<Elem> members;
  for (Elem x = 0; x < base.size(); ++x)
    if (set[x]) members.push_back(x);
  return Filter::principal(base.meet_all(members));
}

FiniteLattice phi_as_lattice(const FilterLattice& phi) {
  const FiniteLattice& base = phi.base();
  const auto filters = phi.enumerate();
  const std::size_t n = filters.size();
  std::vector<std::vector<bool>> sets;
  sets.reserve(n);
  for (const auto& f : filters) sets.push_back(upset(base, f));
  std::vector<std::uint8_t> leq(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      bool contains = true;
      for (std::size_t x = 0; x < base.size() && contains; ++x) contains = !sets[j][x] || sets[i][x];
      leq[i * n + j] = contains;
    }
  std::vector<std::string> names;
  names.reserve(n);
  for (const auto& f : filters) names.push_back(phi.format(f));
  return FiniteLattice::from_order("phi(" + base.name() + ")", std::move(names), std::move(leq));
}

std::optional<std::vector<Elem>> finite_meet_witness(const FiniteLattice& l, Elem target,
                                                     std::span<const Elem> gens) {
  if (!l.contains(target)) throw LatticeError("target element out of range");
  std::vector<Elem> cands;
  for (Elem g : gens) {
    if (!l.contains(g)) throw LatticeError("generator out of range");
    // Only elements above the target can appear in a subset meeting to it.
    if (l.leq(target, g)) cands.push_back(g);
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  const std::size_t n = cands.size();
  if (n == 0 || l.meet_all(cands) != target) return std::nullopt;

  std::vector<std::size_t> pick;
  for (std::size_t size = 1; size <= n; ++size) {
    pick.resize(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      Elem m = l.top();
      for (std::size_t i : pick) m = l.meet(m, cands[i]);
      if (m == target) {
        std::vector<Elem> out;
        for (std::size_t i : pick) out.push_back(cands[i]);
        return out;
      }
      // next combination in lexicographic order
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

LexPair to_lex(const DenseFilter& f) { return LexPair{f.bound(), f.is_principal() ? 0 : 1}; }

DenseFilter from_lex(const LexPair& p) {
  if (p.flag == 0) {
    if (p.value < Rational(0) || p.value > Rational(1)) throw LatticeError("pair value outside [0,1]");
    return DenseFilter::principal(p.value);
  }
  if (p.flag != 1) throw LatticeError("pair flag must be 0 or 1");
  if (p.value == Rational(1)) throw LatticeError("(1,1) corresponds to the empty set, which is not a filter");
  return DenseFilter::strict_above(p.value);
}

namespace {

/// Points that meet every piece of the partition of [0,1] cut by a and b.
std::vector<Rational> probes(const Rational& a, const Rational& b) {
  const Rational lo = std::min(a, b), hi = std::max(a, b);
  std::vector<Rational> out{Rational(0), lo, hi, Rational(1)};
  if (lo > Rational(0)) out.push_back(lo / 2);
  if (lo < hi) out.push_back((lo + hi) / 2);
  if (hi < Rational(1)) out.push_back((hi + 1) / 2);
  return out;
}

}  // namespace

DenseModelReport phi_dense_chain_model(std::int64_t max_denominator) {
  DenseModelReport report;
  const auto chain = std::make_shared<const DenseUnitChain>();
  const DenseFilterLattice phi(chain);

  std::vector<DenseFilter> descs;
  for (const auto& q : chain->sample(max_denominator)) {
    descs.push_back(DenseFilter::principal(q));
    if (q < Rational(1)) descs.push_back(DenseFilter::strict_above(q));
  }
  report.descriptors = descs.size();

  auto mismatch = [&](const std::string& what, const DenseFilter& f, const DenseFilter& g) {
    report.mismatches.push_back(what + " " + phi.format(f) + " " + phi.format(g));
  };

  for (const auto& f : descs) {
    const LexPair pf = to_lex(f);
    if (!(from_lex(pf) == f)) mismatch("pair-roundtrip", f, f);
    for (const auto& g : descs) {
      ++report.comparisons;
      const LexPair pg = to_lex(g);
      const bool lex_leq = !(pg < pf);
      const DenseFilter j = phi.join(f, g);
      const DenseFilter m = phi.meet(f, g);
      if (phi.leq(f, g) != lex_leq) mismatch("order", f, g);
      if (!(to_lex(j) == std::max(pf, pg))) mismatch("join", f, g);
      if (!(to_lex(m) == std::min(pf, pg))) mismatch("meet", f, g);

      // Membership is constant on each piece [0,lo), lo, (lo,hi), hi, (hi,1],
      // so probing one point per piece decides the set identities exactly.
      bool contains = true;
      for (const auto& x : probes(f.bound(), g.bound())) {
        const bool in_f = phi.member(f, x), in_g = phi.member(g, x);
        if (in_g && !in_f) contains = false;
        if (phi.member(j, x) != (in_f && in_g)) mismatch("join-is-intersection", f, g);
        if (phi.member(m, x) != (in_f || in_g)) mismatch("meet-is-generated-filter", f, g);
      }
      if (contains != phi.leq(f, g)) mismatch("order-is-reverse-inclusion", f, g);
    }
  }

  try {
    (void)from_lex(LexPair{Rational(1), 1});
  } catch (const LatticeError&) {
    try {
      (void)DenseFilter::strict_above(Rational(1));
    } catch (const LatticeError&) {
      report.top_pair_excluded = true;
    }
  }
  return report;
}

}  // namespace eqlat
