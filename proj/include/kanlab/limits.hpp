#pragma once

#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "presheaf.hpp"
#include "search.hpp"

namespace kanlab {

enum class ConeKind { product, pullback, pushout, coproduct, equalizer, coequalizer };

inline const char* to_string(ConeKind k) {
  switch (k) {
    case ConeKind::product: return "product";
    case ConeKind::pullback: return "pullback";
    case ConeKind::pushout: return "pushout";
    case ConeKind::coproduct: return "coproduct";
    case ConeKind::equalizer: return "equalizer";
    case ConeKind::coequalizer: return "coequalizer";
  }
  return "?";
}

/// A computed (co)limit: apex, named legs, and the diagram it was built from.
struct ConeResult {
  ConeKind kind;
  Presheaf apex;
  std::vector<std::pair<std::string, PresheafMap>> legs;
  std::vector<PresheafMap> diagram;

  const PresheafMap& leg(std::string_view name) const {
    for (const auto& [n, m] : legs)
      if (n == name) return m;
    throw ContractError("cone has no leg named '" + std::string(name) + "'");
  }
};

// ---------------------------------------------------------------------------
// Limits

/// Levelwise product; the element (x, y) has index x * |Y(c)| + y.
inline ConeResult product(const Presheaf& x, const Presheaf& y) {
  require_same_base(x, y, "product");
  const auto& base = x.base();
  std::vector<std::size_t> sizes(base.object_count());
  for (ObjectId c = 0; c < sizes.size(); ++c) sizes[c] = x.size(c) * y.size(c);
  auto apex = Presheaf::build(x.base_ptr(), sizes, [&](MorphismId s, Elem e) {
    const auto c = base.target(s);
    const auto d = base.source(s);
    return x.act(s, e / y.size(c)) * y.size(d) + y.act(s, e % y.size(c));
  });
  auto pr1 = PresheafMap::build(apex, x, [&](ObjectId c, Elem e) { return e / y.size(c); });
  auto pr2 = PresheafMap::build(apex, y, [&](ObjectId c, Elem e) { return e % y.size(c); });
  return {ConeKind::product, apex, {{"pr1", pr1}, {"pr2", pr2}}, {}};
}

/// ⟨f, g⟩: W -> X × Y into the canonical product.
inline PresheafMap pair(const PresheafMap& f, const PresheafMap& g) {
  if (!(f.source() == g.source())) throw ContractError("pair: maps have different sources");
  const auto prod = product(f.target(), g.target());
  return PresheafMap::build(f.source(), prod.apex,
                            [&](ObjectId c, Elem w) { return f(c, w) * g.target().size(c) + g(c, w); });
}

/// f × g between canonical products.
inline PresheafMap product_map(const PresheafMap& f, const PresheafMap& g) {
  const auto src = product(f.source(), g.source());
  return pair(compose(f, src.leg("pr1")), compose(g, src.leg("pr2")));
}

/// Pullback of f: X -> Z and g: Y -> Z; elements (x, y) with f x = g y in
/// lexicographic order.
inline ConeResult pullback(const PresheafMap& f, const PresheafMap& g) {
  if (!(f.target() == g.target())) throw ContractError("pullback: maps have different targets");
  const auto& x = f.source();
  const auto& y = g.source();
  const auto& base = x.base();
  std::vector<std::vector<std::pair<Elem, Elem>>> elems(base.object_count());
  std::vector<std::map<std::pair<Elem, Elem>, Elem>> index(base.object_count());
  std::vector<std::size_t> sizes(base.object_count());
  for (ObjectId c = 0; c < sizes.size(); ++c) {
    for (Elem a = 0; a < x.size(c); ++a)
      for (Elem b = 0; b < y.size(c); ++b)
        if (f(c, a) == g(c, b)) {
          index[c].emplace(std::make_pair(a, b), elems[c].size());
          elems[c].emplace_back(a, b);
        }
    sizes[c] = elems[c].size();
  }
  auto apex = Presheaf::build(x.base_ptr(), sizes, [&](MorphismId s, Elem e) {
    const auto [a, b] = elems[base.target(s)][e];
    return index[base.source(s)].at({x.act(s, a), y.act(s, b)});
  });
  auto pr1 = PresheafMap::build(apex, x, [&](ObjectId c, Elem e) { return elems[c][e].first; });
  auto pr2 = PresheafMap::build(apex, y, [&](ObjectId c, Elem e) { return elems[c][e].second; });
  return {ConeResult{ConeKind::pullback, apex, {{"pr1", pr1}, {"pr2", pr2}}, {f, g}}};
}

/// Mediating map W -> apex for a competitor (q1, q2) of a pullback cone.
inline PresheafMap gap(const ConeResult& cone, const PresheafMap& q1, const PresheafMap& q2) {
  if (cone.kind != ConeKind::pullback && cone.kind != ConeKind::product)
    throw ContractError("gap requires a pullback or product cone");
  const auto& pr1 = cone.leg("pr1");
  const auto& pr2 = cone.leg("pr2");
  if (!(q1.source() == q2.source()) || !(q1.target() == pr1.target()) || !(q2.target() == pr2.target()))
    throw ContractError("gap: competitor cone has the wrong shape");
  if (cone.kind == ConeKind::pullback && !(compose(cone.diagram[0], q1) == compose(cone.diagram[1], q2)))
    throw ContractError("gap: competitor cone does not commute");
  const auto& base = cone.apex.base();
  std::vector<std::map<std::pair<Elem, Elem>, Elem>> index(base.object_count());
  for (ObjectId c = 0; c < index.size(); ++c)
    for (Elem e = 0; e < cone.apex.size(c); ++e) index[c].emplace(std::make_pair(pr1(c, e), pr2(c, e)), e);
  return PresheafMap::build(q1.source(), cone.apex, [&](ObjectId c, Elem w) {
    auto it = index[c].find({q1(c, w), q2(c, w)});
    if (it == index[c].end()) throw ContractError("gap: competitor element has no mediating element");
    return it->second;
  });
}

/// Equalizer of a parallel pair: elements with f x = g x, order kept.
inline ConeResult equalizer(const PresheafMap& f, const PresheafMap& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target()))
    throw ContractError("equalizer: maps are not parallel");
  std::vector<std::vector<char>> member(f.base().object_count());
  for (ObjectId c = 0; c < member.size(); ++c) {
    member[c].resize(f.source().size(c));
    for (Elem x = 0; x < member[c].size(); ++x) member[c][x] = f(c, x) == g(c, x);
  }
  auto incl = subpresheaf(f.source(), member);
  return {ConeKind::equalizer, incl.source(), {{"incl", incl}}, {f, g}};
}

/// True when e equalizes f, g and the comparison into their equalizer is an
/// isomorphism.
inline bool is_equalizer_fork(const PresheafMap& e, const PresheafMap& f, const PresheafMap& g) {
  if (!(compose(f, e) == compose(g, e))) return false;
  const auto eq = equalizer(f, g);
  const auto cmp = factor_through_mono(eq.leg("incl"), e);
  return cmp && is_iso(*cmp);
}

// ---------------------------------------------------------------------------
// Colimits

namespace detail {

// Union-find whose class representative is always the minimal index.
class MinUnionFind {
public:
  explicit MinUnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) parent_[b] = a;
    else parent_[a] = b;
  }

private:
  std::vector<std::size_t> parent_;
};

// Quotient of a presheaf by the relation generated by pairs related at each
// level; classes are ordered by their minimal member.
struct Quotient {
  Presheaf apex;
  std::vector<std::vector<Elem>> class_of;  // per level, element -> class
  std::vector<std::vector<Elem>> rep;       // per level, class -> minimal member
};

inline Quotient quotient(const Presheaf& p, const std::vector<std::vector<std::pair<Elem, Elem>>>& related) {
  const auto& base = p.base();
  Quotient q;
  q.class_of.resize(base.object_count());
  q.rep.resize(base.object_count());
  std::vector<std::size_t> sizes(base.object_count());
  for (ObjectId c = 0; c < sizes.size(); ++c) {
    MinUnionFind uf(p.size(c));
    for (auto [a, b] : related[c]) uf.unite(a, b);
    q.class_of[c].resize(p.size(c));
    std::vector<Elem> root_class(p.size(c), static_cast<Elem>(-1));
    for (Elem e = 0; e < p.size(c); ++e) {
      const auto r = uf.find(e);
      if (root_class[r] == static_cast<Elem>(-1)) {
        root_class[r] = q.rep[c].size();
        q.rep[c].push_back(e);
      }
      q.class_of[c][e] = root_class[r];
    }
    sizes[c] = q.rep[c].size();
  }
  q.apex = Presheaf::build(p.base_ptr(), sizes, [&](MorphismId s, Elem k) {
    return q.class_of[base.source(s)][p.act(s, q.rep[base.target(s)][k])];
  });
  return q;
}

// Disjoint union B ⊔ C with B's elements first at each level.
inline Presheaf disjoint_union(const Presheaf& b, const Presheaf& c) {
  const auto& base = b.base();
  std::vector<std::size_t> sizes(base.object_count());
  for (ObjectId o = 0; o < sizes.size(); ++o) sizes[o] = b.size(o) + c.size(o);
  return Presheaf::build(b.base_ptr(), sizes, [&](MorphismId s, Elem e) {
    const auto t = base.target(s);
    const auto d = base.source(s);
    return e < b.size(t) ? b.act(s, e) : b.size(d) + c.act(s, e - b.size(t));
  });
}

} // namespace detail

/// Pushout of f: A -> B and g: A -> C, computed levelwise as
/// (B ⊔ C) / (f a ~ g a) with minimal representatives.
inline ConeResult pushout(const PresheafMap& f, const PresheafMap& g) {
  if (!(f.source() == g.source())) throw ContractError("pushout: maps have different sources");
  const auto& b = f.target();
  const auto& c = g.target();
  const auto& base = b.base();
  const auto sum = detail::disjoint_union(b, c);
  std::vector<std::vector<std::pair<Elem, Elem>>> related(base.object_count());
  for (ObjectId o = 0; o < related.size(); ++o)
    for (Elem a = 0; a < f.source().size(o); ++a) related[o].emplace_back(f(o, a), b.size(o) + g(o, a));
  const auto q = detail::quotient(sum, related);
  auto in1 = PresheafMap::build(b, q.apex, [&](ObjectId o, Elem e) { return q.class_of[o][e]; });
  auto in2 = PresheafMap::build(c, q.apex, [&](ObjectId o, Elem e) { return q.class_of[o][b.size(o) + e]; });
  return {ConeKind::pushout, q.apex, {{"in1", in1}, {"in2", in2}}, {f, g}};
}

inline ConeResult coproduct(const Presheaf& b, const Presheaf& c) {
  auto po = pushout(from_initial(b), from_initial(c));
  po.kind = ConeKind::coproduct;
  return po;
}

/// Mediating map apex -> W for a cocone (k1, k2) of a pushout or coproduct.
inline PresheafMap cogap(const ConeResult& cone, const PresheafMap& k1, const PresheafMap& k2) {
  if (cone.kind != ConeKind::pushout && cone.kind != ConeKind::coproduct)
    throw ContractError("cogap requires a pushout cone");
  const auto& in1 = cone.leg("in1");
  const auto& in2 = cone.leg("in2");
  if (!(k1.target() == k2.target()) || !(k1.source() == in1.source()) || !(k2.source() == in2.source()))
    throw ContractError("cogap: competitor cocone has the wrong shape");
  if (!(compose(k1, cone.diagram[0]) == compose(k2, cone.diagram[1])))
    throw ContractError("cogap: competitor cocone does not commute");
  constexpr Elem none = static_cast<Elem>(-1);
  std::vector<std::vector<Elem>> comps(cone.apex.base().object_count());
  for (ObjectId o = 0; o < comps.size(); ++o) {
    comps[o].assign(cone.apex.size(o), none);
    auto put = [&](Elem e, Elem v) {
      if (comps[o][e] == none) comps[o][e] = v;
      else if (comps[o][e] != v) throw ContractError("cogap: cocone is not constant on a class");
    };
    for (Elem b = 0; b < in1.source().size(o); ++b) put(in1(o, b), k1(o, b));
    for (Elem c = 0; c < in2.source().size(o); ++c) put(in2(o, c), k2(o, c));
    for (Elem v : comps[o])
      if (v == none) throw ContractError("cogap: pushout element outside the image of both injections");
  }
  return PresheafMap(cone.apex, k1.target(), std::move(comps));
}

/// Coequalizer of a parallel pair f, g: X -> Y.
inline ConeResult coequalizer(const PresheafMap& f, const PresheafMap& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target()))
    throw ContractError("coequalizer: maps are not parallel");
  std::vector<std::vector<std::pair<Elem, Elem>>> related(f.base().object_count());
  for (ObjectId o = 0; o < related.size(); ++o)
    for (Elem x = 0; x < f.source().size(o); ++x) related[o].emplace_back(f(o, x), g(o, x));
  const auto q = detail::quotient(f.target(), related);
  auto quot = PresheafMap::build(f.target(), q.apex, [&](ObjectId o, Elem y) { return q.class_of[o][y]; });
  return {ConeKind::coequalizer, q.apex, {{"quot", quot}}, {f, g}};
}

// ---------------------------------------------------------------------------
// Squares

/// A commutative square
///     tl --top--> tr
///     |left       |right
///     bl --bottom-> br
struct Square {
  PresheafMap top;
  PresheafMap left;
  PresheafMap right;
  PresheafMap bottom;

  bool well_typed() const {
    return top.source() == left.source() && top.target() == right.source() && left.target() == bottom.source() &&
           right.target() == bottom.target();
  }
  bool commutes() const { return well_typed() && compose(right, top) == compose(bottom, left); }
  PresheafMap diagonal() const { return compose(right, top); }
};

/// True iff the square is a pullback; throws if it does not commute.
inline bool check_pullback_square(const Square& sq) {
  if (!sq.well_typed()) throw ContractError("check_pullback_square: square is not well typed");
  if (!sq.commutes()) throw ContractError("check_pullback_square: square does not commute");
  const auto pb = pullback(sq.bottom, sq.right);
  return is_iso(gap(pb, sq.left, sq.top));
}

/// The pushout of the span bl <- tl -> tr of a square, and the cogap map
/// into br.
struct CogapResult {
  ConeResult pushout;
  PresheafMap cogap;
};

inline CogapResult cogap_of_square(const Square& sq) {
  if (!sq.commutes()) throw ContractError("cogap_of_square: square does not commute");
  auto po = pushout(sq.left, sq.top);
  auto k = cogap(po, sq.bottom, sq.right);
  return {std::move(po), std::move(k)};
}

/// A square pulled back along f: X -> br. The new bottom-right corner is X
/// itself; the other corners are pullbacks of f along the corner maps into
/// br, with first projections landing in X.
struct PulledBackSquare {
  ConeResult tl, tr, bl;  // pullback(f, corner -> br)
  Square face;            // the pulled-back square, face.right/bottom land in X
  Square left_face;       // tl' -> bl' over tl -> bl
  Square back_face;       // tl' -> tr' over tl -> tr
  Square right_face;      // tr' -> X over tr -> br
  Square front_face;      // bl' -> X over bl -> br
};

inline PulledBackSquare pull_back_square(const Square& sq, const PresheafMap& f) {
  if (!sq.commutes()) throw ContractError("pull_back_square: square does not commute");
  if (!(f.target() == sq.right.target())) throw ContractError("pull_back_square: map does not land in the corner");
  PulledBackSquare out{pullback(f, sq.diagonal()), pullback(f, sq.right), pullback(f, sq.bottom), {}, {}, {}, {}, {}};
  const auto& tl_x = out.tl.leg("pr1");
  const auto& tl_o = out.tl.leg("pr2");
  auto top = gap(out.tr, tl_x, compose(sq.top, tl_o));
  auto left = gap(out.bl, tl_x, compose(sq.left, tl_o));
  const auto& b = out.tr.leg("pr1");
  const auto& a = out.bl.leg("pr1");
  out.face = Square{top, left, b, a};
  out.left_face = Square{left, tl_o, out.bl.leg("pr2"), sq.left};
  out.back_face = Square{top, tl_o, out.tr.leg("pr2"), sq.top};
  out.right_face = Square{b, out.tr.leg("pr2"), f, sq.right};
  out.front_face = Square{a, out.bl.leg("pr2"), f, sq.bottom};
  return out;
}

/// Stability of one pushout under pullback along f: the pushout of the
/// pulled-back span compared with the pullback of the cogap.
struct H1Check {
  bool holds;
  PresheafMap comparison;  // pushout of pulled-back span -> pullback of the cogap
};

inline H1Check check_h1_instance(const Square& sq, const PresheafMap& f) {
  const auto original = cogap_of_square(sq);
  const auto pulled = pull_back_square(sq, f);
  const auto pulled_cogap = cogap_of_square(pulled.face);
  const auto pb = pullback(f, original.cogap);
  // pulled-back pushout -> original pushout, induced by the corner projections
  const auto to_original = cogap(pulled_cogap.pushout, compose(original.pushout.leg("in1"), pulled.bl.leg("pr2")),
                                 compose(original.pushout.leg("in2"), pulled.tr.leg("pr2")));
  auto cmp = gap(pb, pulled_cogap.cogap, to_original);
  const bool ok = is_iso(cmp);
  return {ok, std::move(cmp)};
}

// ---------------------------------------------------------------------------
// Universal-property verification by exhaustive competitor enumeration.

/// Checks a pullback cone against every competitor cone from each
/// representable; for presheaves this is the full universal property.
inline ValidationReport verify_pullback_universal(const ConeResult& cone, SearchBudget budget = {}) {
  ValidationReport report;
  const auto& f = cone.diagram.at(0);
  const auto& g = cone.diagram.at(1);
  const auto& base = cone.apex.base();
  for (ObjectId d = 0; d < base.object_count(); ++d) {
    const auto rep = yoneda(cone.apex.base_ptr(), d);
    const auto to_apex = enumerate_maps(rep, cone.apex, budget);
    for (const auto& q1 : enumerate_maps(rep, f.source(), budget)) {
      for (const auto& q2 : enumerate_maps(rep, g.source(), budget)) {
        if (!(compose(f, q1) == compose(g, q2))) continue;
        std::size_t mediating = 0;
        for (const auto& m : to_apex)
          if (compose(cone.leg("pr1"), m) == q1 && compose(cone.leg("pr2"), m) == q2) ++mediating;
        if (mediating != 1)
          report.add("competitor from y(" + base.object_name(d) + ") has " + std::to_string(mediating) +
                     " mediating maps");
      }
    }
  }
  return report;
}

/// Checks a pushout cone against every cocone into cofree(c, 2) for each
/// base object c; these test objects jointly detect colimits.
inline ValidationReport verify_pushout_universal(const ConeResult& cone, SearchBudget budget = {}) {
  ValidationReport report;
  const auto& f = cone.diagram.at(0);
  const auto& g = cone.diagram.at(1);
  const auto& base = cone.apex.base();
  for (ObjectId c = 0; c < base.object_count(); ++c) {
    const auto w = cofree(cone.apex.base_ptr(), c, 2);
    const auto from_apex = enumerate_maps(cone.apex, w, budget);
    for (const auto& k1 : enumerate_maps(f.target(), w, budget)) {
      for (const auto& k2 : enumerate_maps(g.target(), w, budget)) {
        if (!(compose(k1, f) == compose(k2, g))) continue;
        std::size_t mediating = 0;
        for (const auto& m : from_apex)
          if (compose(m, cone.leg("in1")) == k1 && compose(m, cone.leg("in2")) == k2) ++mediating;
        if (mediating != 1)
          report.add("cocone into cofree(" + base.object_name(c) + ", 2) has " + std::to_string(mediating) +
                     " mediating maps");
      }
    }
  }
  return report;
}

} // namespace kanlab
