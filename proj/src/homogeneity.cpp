#include "eqlat/homogeneity.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace eqlat {

PairColoring pair_coloring(const EqStructure& a) {
  PairColoring c;
  c.n = a.size();
  std::map<std::vector<bool>, std::uint32_t> ids;
  std::vector<bool> profile(a.lattice().size());
  for (Point x = 0; x < c.n; ++x)
    for (Point y = 0; y < c.n; ++y) {
      for (Elem e = 0; e < a.lattice().size(); ++e) profile[e] = a.related(e, x, y);
      auto [it, fresh] = ids.emplace(profile, static_cast<std::uint32_t>(ids.size()));
      c.color.push_back(it->second);
    }
  return c;
}

namespace {

void check_cap(std::size_t n, const Limits& limits) {
  if (n > limits.max_points) {
    throw CapExceeded("structure has " + std::to_string(n) + " points, cap is " + std::to_string(limits.max_points));
  }
}

std::vector<std::vector<std::uint32_t>> profiles(const PairColoring& c) {
  std::vector<std::vector<std::uint32_t>> out(c.n);
  for (Point x = 0; x < c.n; ++x) {
    for (Point y = 0; y < c.n; ++y)
      if (y != x) out[x].push_back(c.at(x, y) * 2U), out[x].push_back(c.at(y, x) * 2U + 1U);
    std::sort(out[x].begin(), out[x].end());
    out[x].push_back(c.at(x, x));
  }
  return out;
}

/// Backtracking over images of the unassigned points, in increasing order.
class Extender {
public:
  explicit Extender(const PairColoring& c) : c_(c), profile_(profiles(c)) {}

  /// Presets x -> t; false if inconsistent with earlier presets.
  bool preset(std::span<const Point> source, std::span<const Point> target) {
    image_.assign(c_.n, unset);
    used_.assign(c_.n, false);
    for (std::size_t i = 0; i < source.size(); ++i) {
      const Point x = source[i], t = target[i];
      if (x >= c_.n || t >= c_.n || image_[x] != unset || used_[t]) return false;
      if (!compatible(x, t)) return false;
      image_[x] = t;
      used_[t] = true;
    }
    return true;
  }

  /// Visits completions; `visit` returns false to stop. Returns false if stopped.
  template <class F>
  bool run(F&& visit) {
    return step(0, visit);
  }

private:
  static constexpr Point unset = static_cast<Point>(-1);

  bool compatible(Point x, Point t) const {
    if (profile_[x] != profile_[t]) return false;
    for (Point p = 0; p < c_.n; ++p) {
      if (image_[p] == unset) continue;
      if (c_.at(p, x) != c_.at(image_[p], t) || c_.at(x, p) != c_.at(t, image_[p])) return false;
    }
    return true;
  }

  template <class F>
  bool step(Point x, F& visit) {
    while (x < c_.n && image_[x] != unset) ++x;
    if (x == c_.n) return visit(image_);
    for (Point t = 0; t < c_.n; ++t) {
      if (used_[t] || !compatible(x, t)) continue;
      image_[x] = t;
      used_[t] = true;
      const bool go_on = step(x + 1, visit);
      image_[x] = unset;
      used_[t] = false;
      if (!go_on) return false;
    }
    return true;
  }

  const PairColoring& c_;
  std::vector<std::vector<std::uint32_t>> profile_;
  std::vector<Point> image_;
  std::vector<bool> used_;
};

}  // namespace

void for_each_automorphism(const PairColoring& c, const std::function<void(const Permutation&)>& visit,
                           const Limits& limits) {
  check_cap(c.n, limits);
  Extender ext(c);
  ext.preset({}, {});
  ext.run([&](const Permutation& p) {
    visit(p);
    return true;
  });
}

std::vector<Permutation> automorphism_group(const PairColoring& c, const Limits& limits) {
  std::vector<Permutation> out;
  for_each_automorphism(c, [&](const Permutation& p) { out.push_back(p); }, limits);
  return out;
}

std::optional<Permutation> extend_to_automorphism(const PairColoring& c, std::span<const Point> source,
                                                  std::span<const Point> target) {
  if (source.size() != target.size()) return std::nullopt;
  Extender ext(c);
  if (!ext.preset(source, target)) return std::nullopt;
  std::optional<Permutation> found;
  ext.run([&](const Permutation& p) {
    found = p;
    return false;
  });
  return found;
}

HomogeneityVerdict is_homogeneous(const PairColoring& c, const Limits& limits) {
  check_cap(c.n, limits);
  const auto n = static_cast<Point>(c.n);
  std::vector<Point> source, target;
  std::vector<bool> used(n, false);
  std::optional<PartialMap> failure;

  // Partial isomorphisms with increasing domains; each one of size `k` is
  // tested for an extension, so the first failure has minimum size.
  std::function<bool(Point, std::size_t)> dfs = [&](Point from, std::size_t k) -> bool {
    if (source.size() == k) {
      if (extend_to_automorphism(c, source, target)) return true;
      std::vector<std::pair<Point, Point>> pairs;
      for (std::size_t i = 0; i < k; ++i) pairs.emplace_back(source[i], target[i]);
      failure = PartialMap(std::move(pairs));
      return false;
    }
    for (Point s = from; s < n; ++s) {
      for (Point t = 0; t < n; ++t) {
        if (used[t] || c.at(s, s) != c.at(t, t)) continue;
        bool ok = true;
        for (std::size_t i = 0; i < source.size() && ok; ++i)
          ok = c.at(source[i], s) == c.at(target[i], t) && c.at(s, source[i]) == c.at(t, target[i]);
        if (!ok) continue;
        source.push_back(s);
        target.push_back(t);
        used[t] = true;
        const bool go_on = dfs(s + 1, k);
        source.pop_back();
        target.pop_back();
        used[t] = false;
        if (!go_on) return false;
      }
    }
    return true;
  };

  for (std::size_t k = 1; k <= n; ++k)
    if (!dfs(0, k)) return {false, std::move(failure)};
  return {};
}

// ---------------------------------------------------------------------------
// Amalgamation

AmalgamInstance AmalgamInstance::make(std::vector<std::string> base_points, FiniteSpace left, FiniteSpace right) {
  if (!(left.lattice() == right.lattice())) throw StructureError("amalgam sides have different value lattices");
  std::set<std::string> base(base_points.begin(), base_points.end());
  if (base.size() != base_points.size()) throw StructureError("base lists a point twice");
  for (const auto& p : base_points) {
    if (!left.find_point(p)) throw StructureError("base point " + p + " missing from left side");
    if (!right.find_point(p)) throw StructureError("base point " + p + " missing from right side");
  }
  for (const auto& p : left.points())
    if (!base.contains(p) && right.find_point(p))
      throw StructureError("point " + p + " is on both sides but not in the base");
  if (auto r = validate_umetric(left); !r.ok()) throw StructureError("left side is invalid:\n" + r.str());
  if (auto r = validate_umetric(right); !r.ok()) throw StructureError("right side is invalid:\n" + r.str());
  const auto lb = points_by_label(left.points(), base_points);
  const auto rb = points_by_label(right.points(), base_points);
  for (std::size_t i = 0; i < lb.size(); ++i)
    for (std::size_t j = i + 1; j < lb.size(); ++j)
      if (left.dist(lb[i], lb[j]) != right.dist(rb[i], rb[j]))
        throw StructureError("sides disagree on the base distance " + base_points[i] + " " + base_points[j]);
  return AmalgamInstance(std::move(base_points), std::move(left), std::move(right));
}

AmalgamInstance AmalgamInstance::make(const FiniteSpace& base, FiniteSpace left, FiniteSpace right) {
  AmalgamInstance inst = make(base.points(), std::move(left), std::move(right));
  if (!(*inst.base() == base)) throw StructureError("base is not the substructure both sides induce");
  return inst;
}

std::optional<FiniteSpace> AmalgamInstance::base() const {
  if (base_points_.empty()) return std::nullopt;
  const auto idx = points_by_label(left_.points(), base_points_);
  return induced_substructure(left_, idx);
}

Elem amalgam_distance(const FiniteLattice& l, std::span<const Elem> to_base_left, std::span<const Elem> to_base_right) {
  Elem d = l.top();
  for (std::size_t a = 0; a < to_base_left.size(); ++a) d = l.meet(d, l.join(to_base_left[a], to_base_right[a]));
  return d;
}

FiniteSpace amalgamate(const AmalgamInstance& inst) {
  const FiniteSpace& b = inst.left();
  const FiniteSpace& c = inst.right();
  const FiniteLattice& l = b.lattice();
  const auto& base = inst.base_points();
  std::set<std::string> in_base(base.begin(), base.end());

  // Each amalgam point remembers where it came from: side 0 = left, 1 = right.
  struct Origin {
    int side;
    Point index;
  };
  std::vector<std::string> labels;
  std::vector<Origin> origin;
  for (const auto& p : base) {
    labels.push_back(p);
    origin.push_back({0, *b.find_point(p)});
  }
  for (Point x = 0; x < b.size(); ++x)
    if (!in_base.contains(b.point(x))) labels.push_back(b.point(x)), origin.push_back({0, x});
  for (Point x = 0; x < c.size(); ++x)
    if (!in_base.contains(c.point(x))) labels.push_back(c.point(x)), origin.push_back({1, x});

  const auto base_in_b = points_by_label(b.points(), base);
  const auto base_in_c = points_by_label(c.points(), base);
  std::vector<Elem> tb(base.size()), tc(base.size());

  return FiniteSpace::build(b.lattice_ptr(), labels, [&](Point x, Point y) {
    const Origin ox = origin[x], oy = origin[y];
    if (ox.side == 0 && oy.side == 0) return b.dist(ox.index, oy.index);
    if (ox.side == 1 && oy.side == 1) return c.dist(ox.index, oy.index);
    // x < y, so x is on the left and y is right-only
    if (x < base.size()) return c.dist(base_in_c[x], oy.index);
    // x is left-only, y is right-only (left points precede right ones)
    for (std::size_t a = 0; a < base.size(); ++a) {
      tb[a] = b.dist(ox.index, base_in_b[a]);
      tc[a] = c.dist(base_in_c[a], oy.index);
    }
    return amalgam_distance(l, tb, tc);
  });
}

ValidationReport amalgam_violations(const FiniteSpace& candidate) {
  ValidationReport r;
  for (auto& v : validate_umetric(candidate).violations)
    if (v.kind != "identity" || v.witness[0] == v.witness[1]) r.violations.push_back(std::move(v));
  return r;
}

FiniteSpace collapse(const FiniteSpace& candidate) {
  if (auto r = amalgam_violations(candidate); !r.ok()) throw StructureError("candidate amalgam is invalid:\n" + r.str());
  const FiniteLattice& l = candidate.lattice();
  const auto n = static_cast<Point>(candidate.size());
  // With the triangle inequality, distance bottom is an equivalence relation.
  std::vector<Point> rep(n);
  std::vector<Point> kept;
  std::vector<std::string> labels;
  for (Point x = 0; x < n; ++x) {
    Point y = 0;
    while (y < x && candidate.dist(x, y) != l.bottom()) ++y;
    rep[x] = y == x ? x : rep[y];
    if (rep[x] == x) {
      kept.push_back(x);
      labels.push_back(candidate.point(x));
    } else {
      auto pos = std::find(kept.begin(), kept.end(), rep[x]) - kept.begin();
      labels[pos] += "=" + candidate.point(x);
    }
  }
  return FiniteSpace::build(candidate.lattice_ptr(), labels,
                            [&](Point i, Point j) { return candidate.dist(kept[i], kept[j]); });
}

bool is_triangle_violation(const FiniteSpace& m, Point x, Point y, Point z) {
  const FiniteLattice& l = m.lattice();
  const Elem p = m.dist(x, z), q = m.dist(y, z), target = m.dist(x, y);
  // least upper bound of {p, q} from the order relation alone
  std::optional<Elem> lub;
  for (Elem u = 0; u < l.size(); ++u) {
    if (!l.leq(p, u) || !l.leq(q, u)) continue;
    bool least = true;
    for (Elem v = 0; v < l.size() && least; ++v)
      if (l.leq(p, v) && l.leq(q, v) && !l.leq(u, v)) least = false;
    if (least) lub = u;
  }
  return !lub || !l.leq(target, *lub);
}

namespace {

/// Small dense distance matrix used by the instance enumeration.
struct Mat {
  std::size_t n = 0;
  std::vector<Elem> d;

  Elem at(std::size_t i, std::size_t j) const { return d[i * n + j]; }
};

Mat extend(const Mat& a, std::span<const Elem> type) {
  Mat m;
  m.n = a.n + 1;
  m.d.assign(m.n * m.n, 0);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j) m.d[i * m.n + j] = a.at(i, j);
  for (std::size_t i = 0; i < a.n; ++i) m.d[i * m.n + a.n] = m.d[a.n * m.n + i] = type[i];
  return m;
}

void fill_diagonal(Mat& m, Elem bottom) {
  for (std::size_t i = 0; i < m.n; ++i) m.d[i * m.n + i] = bottom;
}

/// Triangle inequality only; bottom off the diagonal is an identification.
bool triangles_hold(const FiniteLattice& l, const Mat& m) {
  for (std::size_t x = 0; x < m.n; ++x)
    for (std::size_t y = x + 1; y < m.n; ++y) {
      for (std::size_t z = 0; z < m.n; ++z)
        if (z != x && z != y && !l.leq(m.at(x, y), l.join(m.at(x, z), m.at(y, z)))) return false;
    }
  return true;
}

/// All t such that a plus a point at distances t is a valid space, lexicographic.
std::vector<std::vector<Elem>> extension_types(const FiniteLattice& l, const Mat& a) {
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> t(a.n);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == a.n) {
      out.push_back(t);
      return;
    }
    for (Elem v = 0; v < l.size(); ++v) {
      if (v == l.bottom()) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        const Elem ij = a.at(i, j);
        ok = l.leq(ij, l.join(v, t[j])) && l.leq(v, l.join(ij, t[j])) && l.leq(t[j], l.join(ij, v));
      }
      if (!ok) continue;
      t[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<Elem> upper_triangle(const Mat& m, std::span<const std::size_t> perm) {
  std::vector<Elem> out;
  for (std::size_t j = 1; j < m.n; ++j)
    for (std::size_t i = 0; i < j; ++i) out.push_back(m.at(perm[i], perm[j]));
  return out;
}

/// Canonical iff no relabeling gives a lexicographically smaller upper triangle.
bool is_canonical(const Mat& m) {
  std::vector<std::size_t> perm(m.n);
  for (std::size_t i = 0; i < m.n; ++i) perm[i] = i;
  const auto own = upper_triangle(m, perm);
  while (std::next_permutation(perm.begin(), perm.end()))
    if (upper_triangle(m, perm) < own) return false;
  return true;
}

std::vector<Mat> canonical_spaces(const FiniteLattice& l, std::size_t k) {
  std::vector<Mat> all{Mat{}};
  for (std::size_t size = 0; size < k; ++size) {
    std::vector<Mat> next;
    for (const auto& a : all)
      for (const auto& t : extension_types(l, a)) {
        Mat m = extend(a, t);
        fill_diagonal(m, l.bottom());
        next.push_back(std::move(m));
      }
    all = std::move(next);
  }
  std::vector<Mat> out;
  for (auto& m : all)
    if (is_canonical(m)) out.push_back(std::move(m));
  std::sort(out.begin(), out.end(), [](const Mat& a, const Mat& b) { return a.d < b.d; });
  return out;
}

std::vector<std::vector<std::size_t>> mat_automorphisms(const Mat& m) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> perm(m.n);
  for (std::size_t i = 0; i < m.n; ++i) perm[i] = i;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < m.n && ok; ++i)
      for (std::size_t j = 0; j < m.n && ok; ++j) ok = m.at(perm[i], perm[j]) == m.at(i, j);
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<Elem> act(std::span<const std::size_t> sigma, std::span<const Elem> t) {
  std::vector<Elem> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[sigma[i]] = t[i];
  return out;
}

std::vector<Elem> concat(std::initializer_list<std::span<const Elem>> parts) {
  std::vector<Elem> out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

class InstanceSearch {
public:
  InstanceSearch(LatticeRef lattice, std::size_t max_size) : lattice_(std::move(lattice)), max_size_(max_size) {}

  AmalgamationReport run() {
    const FiniteLattice& l = *lattice_;
    AmalgamationReport report;
    for (std::size_t k = 0; k + 1 <= max_size_; ++k) {
      for (const Mat& base : canonical_spaces(l, k)) {
        const auto auts = mat_automorphisms(base);
        const auto types = extension_types(l, base);
        if (auto f = one_and_one(base, auts, types, report)) return fail(report, std::move(*f));
        if (k + 2 <= max_size_)
          if (auto f = two_and_one(base, auts, types, report)) return fail(report, std::move(*f));
      }
    }
    return report;
  }

private:
  struct Candidate {
    Mat base;
    std::vector<std::vector<Elem>> left_types;  // one per left-only point
    std::vector<Elem> left_internal;            // d(b1,b2) when there are two
    std::vector<Elem> right_type;
  };

  static AmalgamationReport fail(AmalgamationReport r, AmalgamFailure f) {
    r.passed = false;
    r.failure = std::move(f);
    return r;
  }

  std::optional<AmalgamFailure> one_and_one(const Mat& base, const std::vector<std::vector<std::size_t>>& auts,
                                            const std::vector<std::vector<Elem>>& types, AmalgamationReport& report) {
    const FiniteLattice& l = *lattice_;
    for (std::size_t i = 0; i < types.size(); ++i)
      for (std::size_t j = i; j < types.size(); ++j) {
        const auto& tb = types[i];
        const auto& tc = types[j];
        const auto own = concat({tb, tc});
        bool canonical = true;
        for (const auto& s : auts) {
          const auto sb = act(s, tb), sc = act(s, tc);
          if (concat({sb, sc}) < own || concat({sc, sb}) < own) {
            canonical = false;
            break;
          }
        }
        if (!canonical) continue;
        ++report.instances;
        Mat m = extend(base, tb);
        std::vector<Elem> tcc = tc;
        tcc.push_back(amalgam_distance(l, tb, tc));
        m = extend(m, tcc);
        fill_diagonal(m, l.bottom());
        if (!triangles_hold(l, m)) return materialize(Candidate{base, {tb}, {}, tc});
      }
    return std::nullopt;
  }

  std::optional<AmalgamFailure> two_and_one(const Mat& base, const std::vector<std::vector<std::size_t>>& auts,
                                            const std::vector<std::vector<Elem>>& types, AmalgamationReport& report) {
    const FiniteLattice& l = *lattice_;
    for (const auto& t1 : types)
      for (const auto& t2 : types)
        for (Elem e = 0; e < l.size(); ++e) {
          if (e == l.bottom()) continue;
          bool left_ok = true;
          for (std::size_t a = 0; a < base.n && left_ok; ++a)
            left_ok = l.leq(e, l.join(t1[a], t2[a])) && l.leq(t1[a], l.join(e, t2[a])) &&
                      l.leq(t2[a], l.join(e, t1[a]));
          if (!left_ok) continue;
          const Elem es[] = {e};
          for (const auto& tc : types) {
            const auto own = concat({t1, t2, es, tc});
            bool canonical = true;
            for (const auto& s : auts) {
              const auto s1 = act(s, t1), s2 = act(s, t2), sc = act(s, tc);
              if (concat({s1, s2, es, sc}) < own || concat({s2, s1, es, sc}) < own) {
                canonical = false;
                break;
              }
            }
            if (!canonical) continue;
            ++report.instances;
            Mat m = extend(base, t1);
            std::vector<Elem> t2e = t2;
            t2e.push_back(e);
            m = extend(m, t2e);
            std::vector<Elem> tcc = tc;
            tcc.push_back(amalgam_distance(l, t1, tc));
            tcc.push_back(amalgam_distance(l, t2, tc));
            m = extend(m, tcc);
            fill_diagonal(m, l.bottom());
            if (!triangles_hold(l, m)) return materialize(Candidate{base, {t1, t2}, {e}, tc});
          }
        }
    return std::nullopt;
  }

  /// Builds the failing instance as labeled spaces and re-derives the
  /// violation through the public amalgam path.
  AmalgamFailure materialize(const Candidate& cand) const {
    const std::size_t k = cand.base.n;
    std::vector<std::string> base_labels, left_labels, right_labels;
    for (std::size_t i = 0; i < k; ++i) base_labels.push_back("a" + std::to_string(i));
    left_labels = base_labels;
    for (std::size_t i = 0; i < cand.left_types.size(); ++i) left_labels.push_back("b" + std::to_string(i));
    right_labels = base_labels;
    right_labels.push_back("c0");

    auto left = FiniteSpace::build(lattice_, left_labels, [&](Point x, Point y) {
      if (y < k) return cand.base.at(x, y);
      if (x < k) return cand.left_types[y - k][x];
      return cand.left_internal[0];
    });
    auto right = FiniteSpace::build(lattice_, right_labels, [&](Point x, Point y) {
      if (y < k) return cand.base.at(x, y);
      return cand.right_type[x];
    });
    auto inst = AmalgamInstance::make(base_labels, std::move(left), std::move(right));
    auto amalgam = amalgamate(inst);
    const auto n = static_cast<Point>(amalgam.size());
    for (Point x = 0; x < n; ++x)
      for (Point y = x + 1; y < n; ++y)
        for (Point z = 0; z < n; ++z)
          if (z != x && z != y && is_triangle_violation(amalgam, x, y, z))
            return AmalgamFailure{std::move(inst), std::move(amalgam), {x, y, z}};
    throw std::logic_error("amalgam flagged invalid but no triangle violation re-validates");
  }

  LatticeRef lattice_;
  std::size_t max_size_;
};

void check_amalgam_cap(std::size_t max_size, const Limits& limits) {
  if (max_size < 1) throw StructureError("max size must be at least 1");
  if (max_size > limits.max_amalgam_size) {
    throw CapExceeded("max size " + std::to_string(max_size) + " exceeds cap " +
                      std::to_string(limits.max_amalgam_size));
  }
}

}  // namespace

AmalgamationReport check_amalgamation_property(const LatticeRef& lattice, std::size_t max_size, const Limits& limits) {
  check_amalgam_cap(max_size, limits);
  return InstanceSearch(lattice, max_size).run();
}

std::optional<AmalgamFailure> search_amalgam_failure(const LatticeRef& lattice, std::size_t max_size,
                                                     const Limits& limits) {
  auto report = check_amalgamation_property(lattice, max_size, limits);
  if (report.passed) return std::nullopt;
  const auto& f = *report.failure;
  if (amalgam_violations(f.amalgam).ok() ||
      !is_triangle_violation(f.amalgam, f.triangle[0], f.triangle[1], f.triangle[2]))
    throw std::logic_error("amalgam witness does not re-validate as a triangle violation");
  return std::move(report.failure);
}

// ---------------------------------------------------------------------------

std::vector<IndexEntry> index_profile(const EqStructure& a) {
  std::vector<IndexEntry> out;
  for (const auto& [lo, hi] : a.lattice().covers()) {
    const Partition& fine = a.relation(lo);
    const Partition& coarse = a.relation(hi);
    IndexEntry entry{lo, hi, {}};
    for (const auto& block : coarse.blocks()) {
      std::set<std::uint32_t> sub;
      for (Point x : block) sub.insert(fine.block_of(x));
      entry.splits.push_back(sub.size());
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace eqlat
