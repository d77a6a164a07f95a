#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "gtc.hpp"
#include "presheaf.hpp"
#include "search.hpp"

namespace kanlab {

/// A commuting square
///     A --top--> X
///     |u         |p
///     B -bottom> Y
/// asking for a diagonal B -> X.
struct LiftingProblem {
  PresheafMap u;
  PresheafMap p;
  PresheafMap top;
  PresheafMap bottom;

  bool well_typed() const {
    return u.source() == top.source() && top.target() == p.source() && u.target() == bottom.source() &&
           bottom.target() == p.target();
  }
  bool commutes() const { return well_typed() && compose(p, top) == compose(bottom, u); }

  void require_commutes(const char* who) const {
    if (!well_typed()) throw ContractError(std::string(who) + ": lifting problem is not well typed");
    if (!commutes()) throw ContractError(std::string(who) + ": lifting square does not commute");
  }

  bool is_lift(const PresheafMap& l) const {
    return l.source() == u.target() && l.target() == p.source() && compose(l, u) == top && compose(p, l) == bottom;
  }
};

namespace detail {

inline MapSearch lift_search(const LiftingProblem& pb, SearchBudget budget) {
  const auto& B = pb.u.target();
  const auto& X = pb.p.source();
  MapSearch search(B, X, budget);
  const auto& base = B.base();
  for (ObjectId c = 0; c < base.object_count(); ++c) {
    std::vector<std::vector<Elem>> fibre(pb.p.target().size(c));
    for (Elem x = 0; x < X.size(c); ++x) fibre[pb.p(c, x)].push_back(x);
    for (Elem b = 0; b < B.size(c); ++b) search.restrict(c, b, fibre[pb.bottom(c, b)]);
    for (Elem a = 0; a < pb.u.source().size(c); ++a) search.fix(c, pb.u(c, a), pb.top(c, a));
  }
  return search;
}

inline void append_presheaf_key(std::string& out, const Presheaf& p) {
  out += 'P';
  for (auto s : p.sizes()) out += std::to_string(s) + ',';
  for (const auto& a : p.actions()) {
    out += '|';
    for (auto v : a) out += std::to_string(v) + ',';
  }
}

inline void append_map_key(std::string& out, const PresheafMap& m) {
  append_presheaf_key(out, m.source());
  append_presheaf_key(out, m.target());
  out += 'M';
  for (const auto& comp : m.components()) {
    out += '|';
    for (auto v : comp) out += std::to_string(v) + ',';
  }
}

} // namespace detail

/// Bit-exact encoding of a lifting problem, used as a cache key.
inline std::string canonical_encoding(const LiftingProblem& pb) {
  std::string out;
  for (const auto* m : {&pb.u, &pb.p, &pb.top, &pb.bottom}) {
    detail::append_map_key(out, *m);
    out += ';';
  }
  return out;
}

/// The canonically first diagonal filler, or nullopt when none exists. The
/// search is complete: nullopt means no lift.
inline std::optional<PresheafMap> solve_lift(const LiftingProblem& pb, SearchBudget budget = {}) {
  pb.require_commutes("solve_lift");
  auto search = detail::lift_search(pb, budget);
  std::optional<PresheafMap> found;
  search.run([&](const std::vector<std::vector<Elem>>& comps) {
    found.emplace(pb.u.target(), pb.p.source(), comps);
    return false;
  });
  if (found && !pb.is_lift(*found)) throw ConstructionError("solve_lift produced a non-lift");
  return found;
}

/// Every diagonal filler in canonical order.
inline std::vector<PresheafMap> all_lifts(const LiftingProblem& pb, SearchBudget budget = {}) {
  pb.require_commutes("all_lifts");
  auto search = detail::lift_search(pb, budget);
  std::vector<PresheafMap> out;
  search.run([&](const std::vector<std::vector<Elem>>& comps) {
    out.emplace_back(pb.u.target(), pb.p.source(), comps);
    return true;
  });
  return out;
}

/// Every commuting square from u to p, bottoms in canonical order and tops
/// in canonical order within each bottom.
inline std::vector<LiftingProblem> commuting_squares(const PresheafMap& u, const PresheafMap& p,
                                                     SearchBudget budget = {}) {
  std::vector<LiftingProblem> out;
  for (auto& h : enumerate_maps(u.target(), p.target(), budget)) {
    const auto hu = compose(h, u);
    for (auto& g : enumerate_maps_over(hu, p, budget)) out.push_back({u, p, g, h});
  }
  return out;
}

class WitnessFailure : public Error {
public:
  WitnessFailure(const std::string& what, LiftingProblem problem)
      : Error(what), problem_(std::make_shared<LiftingProblem>(std::move(problem))) {}

  const LiftingProblem& problem() const { return *problem_; }

private:
  std::shared_ptr<LiftingProblem> problem_;
};

/// A map p together with a procedure producing lifts against it. Lifts are
/// checked before they are returned and cached by the problem's canonical
/// encoding. Copies share the cache; concurrent queries are safe.
class FibrationWitness {
public:
  /// Returns a lift or nullopt. The gtc, when given, presents the left leg.
  using Strategy = std::function<std::optional<PresheafMap>(const LiftingProblem&, const GtcSpec*)>;

  FibrationWitness(PresheafMap p, std::string name, Strategy strategy)
      : state_(std::make_shared<State>(std::move(p), std::move(name), std::move(strategy))) {}

  /// Witness answering every query by exhaustive search.
  static FibrationWitness search(PresheafMap p, SearchBudget budget = {}) {
    return FibrationWitness(std::move(p), "search",
                            [budget](const LiftingProblem& pb, const GtcSpec*) { return solve_lift(pb, budget); });
  }

  const PresheafMap& map() const { return state_->p; }
  const std::string& name() const { return state_->name; }

  std::optional<PresheafMap> try_lift(const LiftingProblem& pb, const GtcSpec* gtc = nullptr) const {
    if (!(pb.p == state_->p)) throw ContractError("witness '" + state_->name + "' asked about a different map");
    pb.require_commutes("witness");
    auto key = canonical_encoding(pb);
    if (gtc) {
      key += "gtc:";
      detail::append_map_key(key, gtc->c);
      detail::append_map_key(key, gtc->i);
    }
    {
      std::lock_guard lock(state_->mutex);
      if (auto it = state_->cache.find(key); it != state_->cache.end()) return it->second;
    }
    auto result = state_->strategy(pb, gtc);
    if (result && !pb.is_lift(*result))
      throw ConstructionError("witness '" + state_->name + "' returned a map that is not a lift");
    std::lock_guard lock(state_->mutex);
    return state_->cache.emplace(std::move(key), std::move(result)).first->second;
  }

  PresheafMap lift(const LiftingProblem& pb, const GtcSpec* gtc = nullptr) const {
    if (auto l = try_lift(pb, gtc)) return *l;
    throw WitnessFailure("witness '" + state_->name + "': not a fibration against required instance", pb);
  }

  std::size_t cache_size() const {
    std::lock_guard lock(state_->mutex);
    return state_->cache.size();
  }

private:
  struct State {
    State(PresheafMap p_, std::string name_, Strategy strategy_)
        : p(std::move(p_)), name(std::move(name_)), strategy(std::move(strategy_)) {}
    PresheafMap p;
    std::string name;
    Strategy strategy;
    mutable std::mutex mutex;
    std::map<std::string, std::optional<PresheafMap>> cache;
  };
  std::shared_ptr<State> state_;
};

/// Witness for the pullback projection pr1: Y ×_{Y'} X -> Y of p: X -> Y'
/// along h: Y -> Y', answering queries through the witness for p.
inline FibrationWitness pullback_witness(const FibrationWitness& p_witness, const ConeResult& cone) {
  if (cone.kind != ConeKind::pullback || !(cone.diagram.at(1) == p_witness.map()))
    throw ContractError("pullback_witness: cone is not a pullback of the witnessed map");
  auto strategy = [p_witness, cone](const LiftingProblem& pb, const GtcSpec* gtc) -> std::optional<PresheafMap> {
    const auto& h = cone.diagram.at(0);
    LiftingProblem outer{pb.u, p_witness.map(), compose(cone.leg("pr2"), pb.top), compose(h, pb.bottom)};
    auto l = p_witness.try_lift(outer, gtc);
    if (!l) return std::nullopt;
    return gap(cone, pb.bottom, *l);
  };
  return FibrationWitness(cone.leg("pr1"), "pullback of " + p_witness.name(), std::move(strategy));
}

struct RlpCertificate {
  bool ok = true;
  std::vector<PresheafMap> lifts;              // one per family member when ok
  std::optional<std::size_t> counterexample;  // index of the first unsolvable member
};

/// Solves every problem of a curated family against p.
inline RlpCertificate rlp_certificate(const PresheafMap& p, const std::vector<LiftingProblem>& family,
                                      SearchBudget budget = {}) {
  RlpCertificate cert;
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (!(family[k].p == p)) throw ContractError("rlp_certificate: family member has a different right leg");
    auto l = solve_lift(family[k], budget);
    if (!l) {
      cert.ok = false;
      cert.lifts.clear();
      cert.counterexample = k;
      return cert;
    }
    cert.lifts.push_back(std::move(*l));
  }
  return cert;
}

/// u: A -> B as a retract of v: A' -> B' in the arrow category.
struct RetractData {
  PresheafMap s_dom;  // A -> A'
  PresheafMap r_dom;  // A' -> A
  PresheafMap s_cod;  // B -> B'
  PresheafMap r_cod;  // B' -> B
};

inline ValidationReport check_retract(const PresheafMap& u, const PresheafMap& v, const RetractData& d) {
  const bool typed = d.s_dom.source() == u.source() && d.s_dom.target() == v.source() &&
                     d.r_dom.source() == v.source() && d.r_dom.target() == u.source() &&
                     d.s_cod.source() == u.target() && d.s_cod.target() == v.target() &&
                     d.r_cod.source() == v.target() && d.r_cod.target() == u.target();
  if (!typed) throw ContractError("check_retract: retract data does not align with u and v");
  ValidationReport r;
  if (!(compose(d.r_dom, d.s_dom) == identity(u.source()))) r.add("r_dom o s_dom != id");
  if (!(compose(d.r_cod, d.s_cod) == identity(u.target()))) r.add("r_cod o s_cod != id");
  if (!(compose(v, d.s_dom) == compose(d.s_cod, u))) r.add("v o s_dom != s_cod o u");
  if (!(compose(u, d.r_dom) == compose(d.r_cod, v))) r.add("u o r_dom != r_cod o v");
  return r;
}

struct RetractLift {
  std::optional<PresheafMap> lift;
  LiftingProblem induced;  // the problem posed against v
};

using LiftSolver = std::function<std::optional<PresheafMap>(const LiftingProblem&)>;

/// Solves a problem with left leg u by solving the induced problem with left
/// leg v and restricting along s_cod.
inline RetractLift lift_via_retract(const LiftingProblem& pb, const PresheafMap& v, const RetractData& d,
                                    const LiftSolver& solver) {
  pb.require_commutes("lift_via_retract");
  if (auto r = check_retract(pb.u, v, d); !r.ok())
    throw PreconditionError("lift_via_retract: retract data fails: " + r.violations.front());
  LiftingProblem induced{v, pb.p, compose(pb.top, d.r_dom), compose(pb.bottom, d.r_cod)};
  RetractLift out{std::nullopt, induced};
  auto l = solver(induced);
  if (!l) return out;
  auto lift = compose(*l, d.s_cod);
  if (!pb.is_lift(lift)) throw ConstructionError("lift_via_retract: restricted map is not a lift");
  out.lift = std::move(lift);
  return out;
}

} // namespace kanlab
