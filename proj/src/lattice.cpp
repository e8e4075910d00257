#include "eqlat/lattice.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace eqlat {

namespace {

std::string pair_text(const std::vector<std::string>& names, Elem x, Elem y) {
  return names[x] + " " + names[y];
}

void check_size(std::size_t n, const Limits& limits) {
  if (n == 0) throw LatticeError("empty lattice: at least one element is required");
  if (n > limits.max_lattice_elements) {
    throw LatticeError("lattice has " + std::to_string(n) + " elements, cap is " +
                       std::to_string(limits.max_lattice_elements));
  }
}

void check_labels(const std::vector<std::string>& names) {
  std::map<std::string_view, Elem> seen;
  for (Elem i = 0; i < names.size(); ++i) {
    if (names[i].empty()) throw LatticeError("empty element label");
    for (char c : names[i]) {
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '#') {
        throw LatticeError("element label contains whitespace or '#': \"" + names[i] + "\"");
      }
    }
    if (!seen.emplace(names[i], i).second) throw LatticeError("duplicate element label: " + names[i]);
  }
}

}  // namespace

FiniteLattice FiniteLattice::from_covers(std::string name, std::vector<std::string> names,
                                         std::span<const std::pair<std::string, std::string>> covers,
                                         const Limits& limits) {
  check_labels(names);
  std::map<std::string_view, Elem> index;
  for (Elem i = 0; i < names.size(); ++i) index.emplace(names[i], i);
  std::vector<std::pair<Elem, Elem>> ids;
  ids.reserve(covers.size());
  for (const auto& [lo, hi] : covers) {
    auto a = index.find(lo);
    auto b = index.find(hi);
    if (a == index.end()) throw LatticeError("cover references undeclared label: " + lo);
    if (b == index.end()) throw LatticeError("cover references undeclared label: " + hi);
    ids.emplace_back(a->second, b->second);
  }
  return from_cover_ids(std::move(name), std::move(names), ids, limits);
}

FiniteLattice FiniteLattice::from_cover_ids(std::string name, std::vector<std::string> names,
                                            std::span<const std::pair<Elem, Elem>> covers,
                                            const Limits& limits) {
  const std::size_t n = names.size();
  check_size(n, limits);
  check_labels(names);
  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> up(n * words, 0);
  auto set = [&](std::size_t i, std::size_t j) { up[i * words + j / 64] |= std::uint64_t(1) << (j % 64); };
  auto test = [&](std::size_t i, std::size_t j) { return (up[i * words + j / 64] >> (j % 64)) & 1U; };
  for (std::size_t i = 0; i < n; ++i) set(i, i);
  for (const auto& [lo, hi] : covers) {
    if (lo >= n || hi >= n) throw LatticeError("cover references an element id out of range");
    if (lo == hi) throw LatticeError("cycle: " + pair_text(names, lo, hi));
    set(lo, hi);
  }
  // Warshall over bitset rows.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i != k && test(i, k)) {
        for (std::size_t w = 0; w < words; ++w) up[i * words + w] |= up[k * words + w];
      }
    }
  }
  std::vector<std::uint8_t> leq(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) leq[i * n + j] = static_cast<std::uint8_t>(test(i, j));
  for (Elem i = 0; i < n; ++i)
    for (Elem j = i + 1; j < n; ++j)
      if (leq[i * n + j] && leq[j * n + i]) throw LatticeError("cycle: " + pair_text(names, i, j));
  return from_order(std::move(name), std::move(names), std::move(leq), limits);
}

FiniteLattice FiniteLattice::from_order(std::string name, std::vector<std::string> names,
                                        std::vector<std::uint8_t> leq, const Limits& limits) {
  const std::size_t n = names.size();
  check_size(n, limits);
  check_labels(names);
  if (leq.size() != n * n) throw LatticeError("order table has wrong size");
  auto le = [&](std::size_t i, std::size_t j) { return leq[i * n + j] != 0; };
  for (Elem i = 0; i < n; ++i)
    if (!le(i, i)) throw LatticeError("order is not reflexive at " + names[i]);
  for (Elem i = 0; i < n; ++i)
    for (Elem j = i + 1; j < n; ++j)
      if (le(i, j) && le(j, i)) throw LatticeError("cycle: " + pair_text(names, i, j));
  for (Elem i = 0; i < n; ++i)
    for (Elem j = 0; j < n; ++j)
      if (le(i, j))
        for (Elem k = 0; k < n; ++k)
          if (le(j, k) && !le(i, k))
            throw LatticeError("order is not transitive: " + names[i] + " " + names[j] + " " + names[k]);

  FiniteLattice l;
  l.name_ = std::move(name);
  l.names_ = std::move(names);
  l.leq_ = leq;

  std::vector<Elem> minimal, maximal;
  for (Elem x = 0; x < n; ++x) {
    bool is_min = true, is_max = true;
    for (Elem y = 0; y < n; ++y) {
      if (y != x && le(y, x)) is_min = false;
      if (y != x && le(x, y)) is_max = false;
    }
    if (is_min) minimal.push_back(x);
    if (is_max) maximal.push_back(x);
  }
  if (minimal.size() != 1) throw LatticeError("no unique bottom: " + pair_text(l.names_, minimal[0], minimal[1]));
  if (maximal.size() != 1) throw LatticeError("no unique top: " + pair_text(l.names_, maximal[0], maximal[1]));
  l.bottom_ = minimal[0];
  l.top_ = maximal[0];

  l.meet_.assign(n * n, 0);
  l.join_.assign(n * n, 0);
  std::vector<Elem> bounds;
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = x; y < n; ++y) {
      bounds.clear();
      for (Elem z = 0; z < n; ++z)
        if (le(z, x) && le(z, y)) bounds.push_back(z);
      Elem g = bounds.front();
      for (Elem z : bounds)
        if (le(g, z)) g = z;
      for (Elem z : bounds)
        if (!le(z, g)) throw LatticeError("no meet: " + pair_text(l.names_, x, y));
      l.meet_[x * n + y] = l.meet_[y * n + x] = g;

      bounds.clear();
      for (Elem z = 0; z < n; ++z)
        if (le(x, z) && le(y, z)) bounds.push_back(z);
      Elem u = bounds.front();
      for (Elem z : bounds)
        if (le(z, u)) u = z;
      for (Elem z : bounds)
        if (!le(u, z)) throw LatticeError("no join: " + pair_text(l.names_, x, y));
      l.join_[x * n + y] = l.join_[y * n + x] = u;
    }
  }
  return l;
}

std::optional<Elem> FiniteLattice::find(std::string_view label) const {
  auto it = std::find(names_.begin(), names_.end(), label);
  if (it == names_.end()) return std::nullopt;
  return static_cast<Elem>(it - names_.begin());
}

Elem FiniteLattice::at(std::string_view label) const {
  if (auto e = find(label)) return *e;
  throw LatticeError("unknown element \"" + std::string(label) + "\" in lattice " + name_);
}

std::vector<Elem> FiniteLattice::enumerate() const {
  std::vector<Elem> all(size());
  std::iota(all.begin(), all.end(), Elem{0});
  return all;
}

Elem FiniteLattice::meet_all(std::span<const Elem> xs) const {
  Elem m = top_;
  for (Elem x : xs) m = meet(m, x);
  return m;
}

Elem FiniteLattice::join_all(std::span<const Elem> xs) const {
  Elem j = bottom_;
  for (Elem x : xs) j = join(j, x);
  return j;
}

bool FiniteLattice::covers_pair(Elem lower, Elem upper) const {
  if (!less(lower, upper)) return false;
  for (Elem z = 0; z < size(); ++z)
    if (less(lower, z) && less(z, upper)) return false;
  return true;
}

std::vector<std::pair<Elem, Elem>> FiniteLattice::covers() const {
  std::vector<std::pair<Elem, Elem>> out;
  for (Elem x = 0; x < size(); ++x)
    for (Elem y = 0; y < size(); ++y)
      if (covers_pair(x, y)) out.emplace_back(x, y);
  return out;
}

FiniteLattice FiniteLattice::renamed(std::string name) const {
  FiniteLattice l = *this;
  l.name_ = std::move(name);
  return l;
}

FiniteLattice FiniteLattice::relabeled(std::string name, const std::vector<std::string>& names) const {
  if (names.size() != size()) throw LatticeError("relabeling needs one label per element");
  check_labels(names);
  FiniteLattice l = *this;
  l.name_ = std::move(name);
  l.names_ = names;
  return l;
}

// ---------------------------------------------------------------------------

std::string DenseUnitChain::format(const Rational& x) const {
  if (x.denominator() == 1) return std::to_string(x.numerator());
  return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
}

std::vector<Rational> DenseUnitChain::sample(std::int64_t max_denominator) const {
  std::set<Rational> seen;
  for (std::int64_t q = 1; q <= max_denominator; ++q)
    for (std::int64_t p = 0; p <= q; ++p) seen.insert(Rational(p, q));
  return {seen.begin(), seen.end()};
}

// ---------------------------------------------------------------------------
// Catalog

FiniteLattice make_chain(std::size_t n, const Limits& limits) {
  if (n < 1) throw LatticeError("chain needs n >= 1");
  if (n > limits.max_lattice_elements) throw LatticeError("chain " + std::to_string(n) + " exceeds element cap");
  std::vector<std::string> names;
  std::vector<std::pair<Elem, Elem>> covers;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    if (i > 0) covers.emplace_back(Elem(i - 1), Elem(i));
  }
  return FiniteLattice::from_cover_ids("chain" + std::to_string(n), std::move(names), covers, limits);
}

FiniteLattice make_boolean(std::size_t atoms, const Limits& limits) {
  if (atoms < 1) throw LatticeError("boolean needs n >= 1");
  if (atoms > limits.max_boolean_atoms) {
    throw LatticeError("boolean " + std::to_string(atoms) + " exceeds atom cap " +
                       std::to_string(limits.max_boolean_atoms));
  }
  const std::size_t n = std::size_t(1) << atoms;
  std::vector<std::string> names(n);
  for (std::size_t mask = 0; mask < n; ++mask) {
    if (mask == 0) {
      names[mask] = "0";
      continue;
    }
    for (std::size_t i = 0; i < atoms; ++i)
      if (mask >> i & 1U) names[mask] += static_cast<char>('a' + i);
  }
  std::vector<std::uint8_t> leq(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) leq[x * n + y] = (x & ~y) == 0;
  return FiniteLattice::from_order("boolean" + std::to_string(atoms), std::move(names), std::move(leq), limits);
}

FiniteLattice make_m3() {
  std::vector<std::pair<Elem, Elem>> covers{{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}};
  return FiniteLattice::from_cover_ids("m3", {"0", "a", "b", "c", "1"}, covers);
}

FiniteLattice make_n5() {
  std::vector<std::pair<Elem, Elem>> covers{{0, 1}, {1, 2}, {2, 4}, {0, 3}, {3, 4}};
  return FiniteLattice::from_cover_ids("n5", {"0", "a", "b", "c", "1"}, covers);
}

FiniteLattice make_product(const FiniteLattice& left, const FiniteLattice& right, const Limits& limits) {
  const std::size_t nl = left.size(), nr = right.size();
  const std::size_t n = nl * nr;
  if (n > limits.max_lattice_elements) throw LatticeError("product exceeds element cap");
  std::vector<std::string> names;
  names.reserve(n);
  for (Elem i = 0; i < nl; ++i)
    for (Elem j = 0; j < nr; ++j) names.push_back("(" + left.label(i) + "," + right.label(j) + ")");
  std::vector<std::uint8_t> leq(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      leq[a * n + b] = left.leq(Elem(a / nr), Elem(b / nr)) && right.leq(Elem(a % nr), Elem(b % nr));
  return FiniteLattice::from_order("product(" + left.name() + "," + right.name() + ")", std::move(names),
                                   std::move(leq), limits);
}

namespace {

std::size_t parse_count(std::string_view kind, std::string_view digits) {
  if (digits.empty() || digits.size() > 6 ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw LatticeError("bad size in catalog kind \"" + std::string(kind) + "\"");
  }
  return std::stoul(std::string(digits));
}

}  // namespace

FiniteLattice catalog(std::string_view kind, const Limits& limits) {
  if (kind == "m3") return make_m3();
  if (kind == "n5") return make_n5();
  if (kind.starts_with("chain:")) return make_chain(parse_count(kind, kind.substr(6)), limits);
  if (kind.starts_with("boolean:")) return make_boolean(parse_count(kind, kind.substr(8)), limits);
  if (kind.starts_with("product(") && kind.ends_with(")")) {
    std::string_view inner = kind.substr(8, kind.size() - 9);
    int depth = 0;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (inner[i] == '(') ++depth;
      if (inner[i] == ')') --depth;
      if (inner[i] == ',' && depth == 0) {
        FiniteLattice l = catalog(inner.substr(0, i), limits);
        FiniteLattice r = catalog(inner.substr(i + 1), limits);
        return make_product(l, r, limits);
      }
    }
  }
  throw LatticeError("unknown catalog kind \"" + std::string(kind) +
                     "\" (expected chain:N, boolean:N, m3, n5, product(K1,K2))");
}

// ---------------------------------------------------------------------------
// Classification

DistributivityResult is_distributive(const FiniteLattice& l) {
  const Elem n = static_cast<Elem>(l.size());
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y)
      for (Elem z = 0; z < n; ++z)
        if (l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z)))
          return {false, Triple{x, y, z}};
  return {};
}

std::optional<ForbiddenSublattice> find_forbidden(const FiniteLattice& l) {
  const Elem n = static_cast<Elem>(l.size());
  for (Elem a = 0; a < n; ++a)
    for (Elem b = a + 1; b < n; ++b)
      for (Elem c = b + 1; c < n; ++c) {
        const Elem m = l.meet(a, b), j = l.join(a, b);
        if (l.meet(a, c) != m || l.meet(b, c) != m || l.join(a, c) != j || l.join(b, c) != j) continue;
        if (a == m || b == m || c == m || a == j || b == j || c == j) continue;
        return ForbiddenSublattice{ForbiddenKind::m3, m, a, b, c, j};
      }
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) {
      if (!l.less(a, b)) continue;
      for (Elem c = 0; c < n; ++c) {
        if (l.leq(a, c) || l.leq(c, a) || l.leq(b, c) || l.leq(c, b)) continue;
        if (l.meet(a, c) != l.meet(b, c) || l.join(a, c) != l.join(b, c)) continue;
        return ForbiddenSublattice{ForbiddenKind::n5, l.meet(a, c), a, b, c, l.join(a, c)};
      }
    }
  return std::nullopt;
}

bool is_join_irreducible(const FiniteLattice& l, Elem x) {
  if (x == l.bottom()) return false;
  const Elem n = static_cast<Elem>(l.size());
  for (Elem a = 0; a < n; ++a)
    for (Elem b = a; b < n; ++b)
      if (l.join(a, b) == x && a != x && b != x) return false;
  return true;
}

std::vector<Elem> join_irreducibles(const FiniteLattice& l) {
  std::vector<Elem> out;
  for (Elem x = 0; x < l.size(); ++x)
    if (is_join_irreducible(l, x)) out.push_back(x);
  return out;
}

bool is_order_isomorphism(const FiniteLattice& a, const FiniteLattice& b, std::span<const Elem> map) {
  if (a.size() != b.size() || map.size() != a.size()) return false;
  std::vector<bool> hit(b.size(), false);
  for (Elem img : map) {
    if (img >= b.size() || hit[img]) return false;
    hit[img] = true;
  }
  for (Elem x = 0; x < a.size(); ++x)
    for (Elem y = 0; y < a.size(); ++y)
      if (a.leq(x, y) != b.leq(map[x], map[y])) return false;
  return true;
}

namespace {

struct Signature {
  std::size_t below, above, lower_covers, upper_covers;
  auto operator<=>(const Signature&) const = default;
};

std::vector<Signature> signatures(const FiniteLattice& l) {
  std::vector<Signature> sig(l.size(), Signature{0, 0, 0, 0});
  for (Elem x = 0; x < l.size(); ++x)
    for (Elem y = 0; y < l.size(); ++y) {
      if (l.leq(y, x)) ++sig[x].below;
      if (l.leq(x, y)) ++sig[x].above;
    }
  for (const auto& [lo, hi] : l.covers()) {
    ++sig[lo].upper_covers;
    ++sig[hi].lower_covers;
  }
  return sig;
}

bool extend_iso(const FiniteLattice& a, const FiniteLattice& b, const std::vector<Signature>& sa,
                const std::vector<Signature>& sb, std::vector<Elem>& map, std::vector<bool>& used, Elem next) {
  if (next == a.size()) return true;
  for (Elem cand = 0; cand < b.size(); ++cand) {
    if (used[cand] || !(sa[next] == sb[cand])) continue;
    bool ok = true;
    for (Elem prev = 0; prev < next && ok; ++prev) {
      ok = a.leq(prev, next) == b.leq(map[prev], cand) && a.leq(next, prev) == b.leq(cand, map[prev]);
    }
    if (!ok) continue;
    map[next] = cand;
    used[cand] = true;
    if (extend_iso(a, b, sa, sb, map, used, next + 1)) return true;
    used[cand] = false;
  }
  return false;
}

}  // namespace

std::optional<std::vector<Elem>> lattice_isomorphic(const FiniteLattice& a, const FiniteLattice& b) {
  if (a.size() != b.size()) return std::nullopt;
  auto sa = signatures(a);
  auto sb = signatures(b);
  auto sorted_a = sa, sorted_b = sb;
  std::sort(sorted_a.begin(), sorted_a.end());
  std::sort(sorted_b.begin(), sorted_b.end());
  if (sorted_a != sorted_b) return std::nullopt;
  std::vector<Elem> map(a.size(), 0);
  std::vector<bool> used(b.size(), false);
  if (!extend_iso(a, b, sa, sb, map, used, 0)) return std::nullopt;
  return map;
}

}  // namespace eqlat
