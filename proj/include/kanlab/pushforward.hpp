#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "context.hpp"
#include "errors.hpp"
#include "frobenius.hpp"
#include "lifting.hpp"
#include "limits.hpp"
#include "presheaf.hpp"
#include "search.hpp"

namespace kanlab {

namespace detail {

/// Index of the element (x, y) of a canonical pullback, per level.
class PairIndex {
public:
  explicit PairIndex(const ConeResult& cone) : levels_(cone.apex.base().object_count()) {
    const auto& pr1 = cone.leg("pr1");
    const auto& pr2 = cone.leg("pr2");
    for (ObjectId c = 0; c < levels_.size(); ++c)
      for (Elem e = 0; e < cone.apex.size(c); ++e) levels_[c].emplace(std::pair{pr1(c, e), pr2(c, e)}, e);
  }

  std::optional<Elem> find(ObjectId c, Elem x, Elem y) const {
    auto it = levels_[c].find({x, y});
    if (it == levels_[c].end()) return std::nullopt;
    return it->second;
  }

  Elem at(ObjectId c, Elem x, Elem y) const {
    if (auto e = find(c, x, y)) return *e;
    throw ContractError("pair is not an element of the pullback");
  }

private:
  std::vector<std::map<std::pair<Elem, Elem>, Elem>> levels_;
};

} // namespace detail

/// Dependent product p⋆f: X′ -> Y′ of f: X -> Y along p: Y -> Y′. An element
/// of X′ at c is a pair (b, s) with b ∈ Y′(c) and s a section of f over the
/// fibre y(c) ×_{Y′} Y of b.
struct PushforwardResult {
  struct Section {
    Elem base_elem;
    std::vector<std::vector<Elem>> values;  // components of a map fibre -> X
  };

  PresheafMap f;
  PresheafMap p;
  Presheaf x_prime;
  PresheafMap pf;
  std::vector<std::vector<Section>> sections;      // per level, in element order
  std::vector<std::vector<ConeResult>> fibres;     // pullback(yoneda_element(Y′, c, b), p)
  std::vector<std::vector<detail::PairIndex>> fibre_index;

  std::optional<Elem> find(ObjectId c, Elem b, const std::vector<std::vector<Elem>>& values) const {
    for (Elem e = 0; e < sections[c].size(); ++e)
      if (sections[c][e].base_elem == b && sections[c][e].values == values) return e;
    return std::nullopt;
  }
};

inline PushforwardResult pushforward(const PresheafMap& f, const PresheafMap& p, SearchBudget budget = {}) {
  if (!(f.target() == p.source())) throw ContractError("pushforward: f must land in the source of p");
  const auto& base = f.base();
  const auto& Yp = p.target();
  const std::size_t n = base.object_count();

  PushforwardResult r{f, p, {}, {}, {}, {}, {}};
  r.sections.resize(n);
  r.fibres.resize(n);
  r.fibre_index.resize(n);
  for (ObjectId c = 0; c < n; ++c) {
    for (Elem b = 0; b < Yp.size(c); ++b) {
      auto fib = pullback(yoneda_element(Yp, c, b), p);
      for (auto& s : enumerate_maps_over(fib.leg("pr2"), f, budget))
        r.sections[c].push_back({b, s.components()});
      r.fibre_index[c].emplace_back(fib);
      r.fibres[c].push_back(std::move(fib));
    }
  }

  std::vector<std::size_t> sizes(n);
  for (ObjectId c = 0; c < n; ++c) sizes[c] = r.sections[c].size();
  std::vector<std::vector<Elem>> actions(base.morphism_count());
  for (MorphismId rho = 0; rho < base.morphism_count(); ++rho) {
    const ObjectId d = base.source(rho);
    const ObjectId c = base.target(rho);
    actions[rho].resize(sizes[c]);
    for (Elem e = 0; e < sizes[c]; ++e) {
      const auto& sec = r.sections[c][e];
      const Elem b2 = Yp.act(rho, sec.base_elem);
      const auto& fib2 = r.fibres[d][b2];
      std::vector<std::vector<Elem>> values(n);
      for (ObjectId k = 0; k < n; ++k) {
        const auto& pr1 = fib2.leg("pr1");
        const auto& pr2 = fib2.leg("pr2");
        values[k].resize(fib2.apex.size(k));
        for (Elem w = 0; w < fib2.apex.size(k); ++w) {
          const MorphismId sigma = base.hom(k, d)[pr1(k, w)];
          const Elem idx = yoneda_index(base, base.compose(rho, sigma));
          values[k][w] = sec.values[k][r.fibre_index[c][sec.base_elem].at(k, idx, pr2(k, w))];
        }
      }
      auto found = r.find(d, b2, values);
      if (!found) throw ConstructionError("pushforward: restricted section is missing");
      actions[rho][e] = *found;
    }
  }
  r.x_prime = Presheaf(f.source().base_ptr(), sizes, std::move(actions));
  r.pf = PresheafMap::build(r.x_prime, Yp, [&](ObjectId c, Elem e) { return r.sections[c][e].base_elem; });
  return r;
}

/// m: p*A -> X over Y, for A over Y′ via alpha, gives A -> X′ over Y′.
/// p*A is the canonical pullback(alpha, p).
inline PresheafMap transpose(const PushforwardResult& pf, const PresheafMap& alpha, const PresheafMap& m) {
  if (!(alpha.target() == pf.p.target())) throw ContractError("transpose: A must live over Y'");
  const auto pa = pullback(alpha, pf.p);
  if (!(m.source() == pa.apex) || !(m.target() == pf.f.source()))
    throw ContractError("transpose: map must go from p*A to X");
  if (!(compose(pf.f, m) == pa.leg("pr2"))) throw ContractError("transpose: map is not over Y");
  const detail::PairIndex index(pa);
  const auto& base = alpha.base();
  const auto& A = alpha.source();
  return PresheafMap::build(A, pf.x_prime, [&](ObjectId c, Elem a) {
    const Elem b = alpha(c, a);
    const auto& fib = pf.fibres[c][b];
    std::vector<std::vector<Elem>> values(base.object_count());
    for (ObjectId k = 0; k < values.size(); ++k) {
      values[k].resize(fib.apex.size(k));
      for (Elem w = 0; w < fib.apex.size(k); ++w) {
        const MorphismId sigma = base.hom(k, c)[fib.leg("pr1")(k, w)];
        values[k][w] = m(k, index.at(k, A.act(sigma, a), fib.leg("pr2")(k, w)));
      }
    }
    auto e = pf.find(c, b, values);
    if (!e) throw ConstructionError("transpose: section not found in X'");
    return *e;
  });
}

/// n: A -> X′ over Y′ gives p*A -> X over Y.
inline PresheafMap transpose_inverse(const PushforwardResult& pf, const PresheafMap& alpha, const PresheafMap& n) {
  if (!(n.source() == alpha.source()) || !(n.target() == pf.x_prime))
    throw ContractError("transpose_inverse: map must go from A to X'");
  if (!(compose(pf.pf, n) == alpha)) throw ContractError("transpose_inverse: map is not over Y'");
  const auto pa = pullback(alpha, pf.p);
  const auto& base = alpha.base();
  return PresheafMap::build(pa.apex, pf.f.source(), [&](ObjectId c, Elem w) {
    const Elem a = pa.leg("pr1")(c, w);
    const Elem y = pa.leg("pr2")(c, w);
    const auto& sec = pf.sections[c][n(c, a)];
    const Elem id_idx = yoneda_index(base, base.identity(c));
    return sec.values[c][pf.fibre_index[c][sec.base_elem].at(c, id_idx, y)];
  });
}

struct AdjunctionCheck {
  std::size_t left_count = 0;   // |Hom_{/Y}(p*A, X)|
  std::size_t right_count = 0;  // |Hom_{/Y′}(A, X′)|
  ValidationReport report;
  bool ok() const { return report.ok() && left_count == right_count; }
};

/// Exhaustive check that transpose is a bijection for A over Y′.
inline AdjunctionCheck verify_adjunction(const PushforwardResult& pf, const PresheafMap& alpha,
                                         SearchBudget budget = {}) {
  AdjunctionCheck out;
  const auto pa = pullback(alpha, pf.p);
  const auto left = enumerate_maps_over(pa.leg("pr2"), pf.f, budget);
  const auto right = enumerate_maps_over(alpha, pf.pf, budget);
  out.left_count = left.size();
  out.right_count = right.size();
  if (left.size() != right.size()) out.report.add("hom-set sizes differ");
  std::vector<std::vector<std::vector<Elem>>> images;
  for (const auto& m : left) {
    auto n = transpose(pf, alpha, m);
    if (!(transpose_inverse(pf, alpha, n) == m)) out.report.add("transpose_inverse o transpose != id");
    images.push_back(n.components());
  }
  std::sort(images.begin(), images.end());
  if (std::adjacent_find(images.begin(), images.end()) != images.end()) out.report.add("transpose is not injective");
  for (const auto& n : right)
    if (!(transpose(pf, alpha, transpose_inverse(pf, alpha, n)) == n)) out.report.add("transpose o transpose_inverse != id");
  return out;
}

/// Witness for p⋆f built from witnesses for f and p. Queries must come with
/// the gtc presenting their left leg.
inline FibrationWitness frobenius_witness(const PresheafContext& ctx, const PushforwardResult& pf,
                                          const FibrationWitness& f_witness, const FibrationWitness& p_witness) {
  if (!(f_witness.map() == pf.f) || !(p_witness.map() == pf.p))
    throw ContractError("frobenius_witness: witnesses do not match the pushforward");
  auto strategy = [ctx, pf, f_witness, p_witness](const LiftingProblem& pb,
                                                  const GtcSpec* gtc) -> std::optional<PresheafMap> {
    if (!gtc || !(gtc->u == pb.u)) throw ContractError("frobenius witness needs the gtc presenting the left leg");
    auto stage = [&](const char* name, auto&& fn) {
      try {
        return fn();
      } catch (const WitnessFailure& e) {
        throw WitnessFailure(std::string("frobenius witness, ") + name + ": " + e.what(), e.problem());
      } catch (const Error& e) {
        throw WitnessFailure(std::string("frobenius witness, ") + name + ": " + e.what(), pb);
      }
    };
    const auto& h = pb.bottom;
    // (1) pull u back along p
    const auto p_b = pullback(h, pf.p);
    const auto pw = pullback_witness(p_witness, p_b);
    // (2) p*u as a retract of a gtc
    const auto cert = stage("retract certificate", [&] { return pullback_gtc_retract(ctx, *gtc, pw); });
    // (3) the transposed problem against f
    const auto& q = cert.cube.pulled_u;  // pr1: Q -> P_B, pr2: Q -> A
    const auto alpha = compose(h, pb.u);
    const auto pa = pullback(alpha, pf.p);
    const auto to_pa = gap(pa, q.leg("pr2"), compose(p_b.leg("pr2"), q.leg("pr1")));
    const auto g_hat = compose(transpose_inverse(pf, alpha, pb.top), to_pa);
    LiftingProblem transposed{q.leg("pr1"), pf.f, g_hat, p_b.leg("pr2")};
    const auto data = retract_onto_pullback(cert);
    const auto res = stage("lift against f", [&] {
      return lift_via_retract(transposed, cert.v.u, data,
                              [&](const LiftingProblem& induced) { return f_witness.try_lift(induced, &cert.v); });
    });
    if (!res.lift) throw WitnessFailure("frobenius witness, lift against f: f witness has no lift", res.induced);
    // (4) transpose back
    auto l = transpose(pf, h, *res.lift);
    if (!pb.is_lift(l)) throw ConstructionError("frobenius witness: transposed map is not a lift");
    return l;
  };
  return FibrationWitness(pf.pf, "frobenius(" + f_witness.name() + ", " + p_witness.name() + ")", std::move(strategy));
}

} // namespace kanlab
