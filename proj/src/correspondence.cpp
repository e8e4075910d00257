#include "eqlat/correspondence.hpp"

#include <algorithm>
#include <set>

namespace eqlat {

namespace {

void require_valid(const ValidationReport& r, const char* what) {
  if (!r.ok()) throw StructureError(std::string(what) + " is invalid:\n" + r.str());
}

/// Builds E_λ for every λ from a pair predicate that is known to be an
/// equivalence relation for each λ.
template <class Related>
EqStructure structure_from(LatticeRef lattice, const std::vector<std::string>& points, Related&& related) {
  const auto n = static_cast<Point>(points.size());
  std::map<Elem, Partition> rel;
  std::vector<std::uint32_t> labels(n);
  for (Elem e = 0; e < lattice->size(); ++e) {
    for (Point x = 0; x < n; ++x) {
      Point y = 0;
      while (y < x && !related(e, x, y)) ++y;
      labels[x] = y;
    }
    rel.emplace(e, Partition::from_labels(labels));
  }
  return EqStructure::make(std::move(lattice), points, std::move(rel));
}

}  // namespace

FilterSpace to_metric(const EqStructure& a) {
  require_valid(validate_eqstruct(a), "structure");
  const FiniteLattice& l = a.lattice();
  auto phi_l = phi(a.lattice_ptr());
  std::vector<bool> set(l.size());
  auto m = FilterSpace::build(phi_l, a.points(), [&](Point x, Point y) {
    for (Elem e = 0; e < l.size(); ++e) set[e] = a.related(e, x, y);
    auto f = descriptor_of(l, set);
    if (!f) throw std::logic_error("relating set of a valid structure is not a filter");
    return *f;
  });
  if (!validate_umetric(m).ok()) throw std::logic_error("to_metric produced an invalid space");
  return m;
}

FiniteSpace to_metric_view(const EqStructure& a) { return view_of(to_metric(a)); }

EqStructure to_eq(const FilterSpace& m) {
  require_valid(validate_umetric(m), "space");
  const FilterLattice& phi_l = m.lattice();
  auto a = structure_from(phi_l.base_ptr(), m.points(),
                          [&](Elem e, Point x, Point y) { return phi_l.member(m.dist(x, y), e); });
  if (!validate_eqstruct(a).ok()) throw std::logic_error("to_eq produced an invalid structure");
  return a;
}

EqStructure from_distance_view(const FiniteSpace& m) {
  require_valid(validate_umetric(m), "space");
  const FiniteLattice& l = m.lattice();
  return structure_from(m.lattice_ptr(), m.points(),
                        [&](Elem e, Point x, Point y) { return l.leq(m.dist(x, y), e); });
}

FiniteSpace view_of(const FilterSpace& m) {
  return FiniteSpace::build(m.lattice().base_ptr(), m.points(), [&](Point x, Point y) {
    const Filter& f = m.dist(x, y);
    if (!f.is_principal()) throw std::logic_error("non-principal filter over a finite lattice");
    return f.bound();
  });
}

FilterSpace filter_form(const FiniteSpace& m) {
  auto phi_l = phi(m.lattice_ptr());
  return FilterSpace::build(phi_l, m.points(), [&](Point x, Point y) { return Filter::principal(m.dist(x, y)); });
}

bool roundtrip_check(const EqStructure& a) { return to_eq(to_metric(a)) == a; }

bool roundtrip_check(const FilterSpace& m) { return to_metric(to_eq(m)) == m; }

TransferReport verify_morphism_transfer(const PartialMap& f, const EqStructure& a, const EqStructure& b) {
  if (!(a.lattice() == b.lattice())) throw StructureError("structures are over different lattices");
  return {is_embedding(f, a, b), is_isometry(f, to_metric(a), to_metric(b))};
}

HomogeneityTransfer homogeneity_transfer(const EqStructure& a, const Limits& limits) {
  return {is_homogeneous(a, limits), is_homogeneous(to_metric(a), limits)};
}

FiniteSpace repair_triangles(const FiniteSpace& m) {
  const FiniteLattice& l = m.lattice();
  const std::size_t n = m.size();
  std::vector<Elem> d = m.matrix();
  auto at = [&](std::size_t x, std::size_t y) -> Elem& { return d[x * n + y]; };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z) {
          if (x == y || z == x || z == y) continue;
          if (!l.leq(at(x, y), l.join(at(x, z), at(y, z)))) {
            at(x, z) = at(z, x) = l.join(at(x, z), at(x, y));
            changed = true;
          }
        }
  }
  return FiniteSpace(m.lattice_ptr(), m.points(), std::move(d));
}

EqStructure random_eqstructure(LatticeRef lattice, std::size_t points, std::mt19937_64& rng) {
  if (points > 1 && lattice->size() < 2) throw StructureError("a one-element lattice only admits one point");
  std::vector<Elem> non_bottom;
  for (Elem e = 0; e < lattice->size(); ++e)
    if (e != lattice->bottom()) non_bottom.push_back(e);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < points; ++i) labels.push_back("x" + std::to_string(i));
  std::uniform_int_distribution<std::size_t> pick(0, non_bottom.empty() ? 0 : non_bottom.size() - 1);
  auto raw = FiniteSpace::build(lattice, labels, [&](Point, Point) { return non_bottom[pick(rng)]; });
  return from_distance_view(repair_triangles(raw));
}

// ---------------------------------------------------------------------------

bool DenseChainStructure::related(const Rational& lambda, Point x, Point y) const {
  return member(DenseUnitChain{}, relating_set(x, y), lambda);
}

std::optional<Rational> DenseChainStructure::finest_relating_element(Point x, Point y) const {
  const DenseFilter& f = relating_set(x, y);
  if (f.is_principal()) return f.bound();
  return std::nullopt;
}

ValidationReport validate_dense(const DenseChainStructure& s) {
  ValidationReport r;
  const DenseUnitChain chain;
  const auto n = static_cast<Point>(s.size());
  for (Point x = 0; x < n; ++x)
    for (Point y = x + 1; y < n; ++y)
      if (s.related(Rational(0), x, y)) r.add("bottom-not-equality", {"0", s.points()[x], s.points()[y]});

  for (Point x = 0; x < n; ++x)
    for (Point y = 0; y < n; ++y)
      for (Point z = 0; z < n; ++z) {
        if (x == y || y == z || x == z) continue;
        std::set<Rational> cuts{Rational(0), Rational(1), s.relating_set(x, y).bound(), s.relating_set(x, z).bound(),
                                s.relating_set(z, y).bound()};
        std::vector<Rational> probes(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) probes.push_back(chain.between(probes[i], probes[i + 1]));
        for (const auto& lambda : probes)
          if (s.related(lambda, x, z) && s.related(lambda, z, y) && !s.related(lambda, x, y)) {
            r.add("transitivity", {chain.format(lambda), s.points()[x], s.points()[y], s.points()[z]});
            break;
          }
      }
  return r;
}

UltrametricSpace<DenseFilterLattice> to_metric(const DenseChainStructure& s) {
  require_valid(validate_dense(s), "structure");
  auto phi_l = std::make_shared<const DenseFilterLattice>(std::make_shared<const DenseUnitChain>());
  auto m = UltrametricSpace<DenseFilterLattice>::build(phi_l, s.points(),
                                                       [&](Point x, Point y) { return s.relating_set(x, y); });
  if (!validate_umetric(m).ok()) throw std::logic_error("to_metric produced an invalid space");
  return m;
}

}  // namespace eqlat
