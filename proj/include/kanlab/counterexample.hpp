#pragma once

#include <string>
#include <vector>

#include "context.hpp"
#include "gtc.hpp"
#include "lifting.hpp"
#include "limits.hpp"
#include "serialize.hpp"
#include "transcript.hpp"

namespace kanlab {

/// The vertex inclusions of Δ¹ over the simplex category truncated at 1:
/// vertex₀ is left anodyne, vertex₁ is a left fibration, and the pullback of
/// the first along the second is not a trivial cofibration.
struct CounterexampleReport {
  BasePtr base;
  PresheafMap p;  // vertex₀: 1 -> Δ¹
  PresheafMap q;  // vertex₁: 1 -> Δ¹
  GtcSpec biased; // (initial -> 1) ⊗ vertex₀
  std::size_t family_size = 0;
  std::size_t family_solved = 0;
  ConeResult pullback_pq;
  LiftingProblem llp;  // q*p against initial -> 1
  bool llp_lift_found = false;
  Transcript checks;

  bool ok() const { return checks.all_passed(); }

  NamedObjects objects() const {
    NamedObjects o;
    o.add("1", p.source());
    o.add("Delta1", p.target());
    o.add("0", initial(base));
    o.add("D", biased.D());
    o.add("ZI", biased.codomain());
    o.add("P", pullback_pq.apex);
    o.add("p", p, "1", "Delta1");
    o.add("q", q, "1", "Delta1");
    o.add("biased_u", biased.u, "D", "ZI");
    o.add("pr1", pullback_pq.leg("pr1"), "P", "1");
    o.add("pr2", pullback_pq.leg("pr2"), "P", "1");
    o.add("initial_to_1", from_initial(p.source()), "0", "1");
    return o;
  }
};

inline CounterexampleReport left_fibration_counterexample(SearchBudget budget = {}) {
  const auto base = preset_simplex(1);
  const auto ctx = PresheafContext::with_representable_interval(base, "[1]", CofibrationClass::monomorphisms(), budget);
  const auto one = terminal(base);
  CounterexampleReport r{base, endpoint(base, 0), endpoint(base, 1), biased_gtc(ctx, from_initial(one), endpoint(base, 0)), 0, 0, {}, {}, false, {}};

  // (a) with c = initial -> 1 the domain of c ⊗ vertex₀ is 1 and the map is vertex₀
  const auto& g = r.biased;
  const bool d_terminal = g.D() == one;
  r.checks.add("(a) domain of (0 -> 1) (x) vertex0 is terminal", d_terminal);
  bool a_equal = false;
  if (d_terminal) {
    const auto to_delta = compose(g.z_times_i.leg("pr2"), g.u);
    a_equal = to_delta == r.p && is_iso(g.z_times_i.leg("pr2"));
  }
  r.checks.add("(a) vertex0 equals (0 -> 1) (x) vertex0", a_equal);

  // (b) vertex₁ against every square from the curated biased family
  for (const auto& c : {from_initial(one), boundary_inclusion(base, 1)}) {
    const auto spec = biased_gtc(ctx, c, endpoint(base, 0));
    for (const auto& pb : commuting_squares(spec.u, r.q, budget)) {
      ++r.family_size;
      if (solve_lift(pb, budget)) ++r.family_solved;
    }
  }
  r.checks.add("(b) vertex1 solves every biased family problem", r.family_size > 0 && r.family_solved == r.family_size);

  // (c) the pullback of vertex₀ along vertex₁ is empty
  r.pullback_pq = pullback(r.p, r.q);
  r.checks.add("(c) pullback of vertex0 along vertex1 has empty domain", r.pullback_pq.apex.is_empty());

  // (d) q*p: 0 -> 1 has no lift against the fibration 0 -> 1
  const auto zero_to_one = from_initial(one);
  r.llp = LiftingProblem{r.pullback_pq.leg("pr2"), zero_to_one, identity(initial(base)), identity(one)};
  r.llp_lift_found = solve_lift(r.llp, budget).has_value();
  r.checks.add("(d) q*p fails the left lifting property against 0 -> 1", !r.llp_lift_found);
  bool zero_is_fibration = true;
  for (const auto& c : {from_initial(one), boundary_inclusion(base, 1)}) {
    const auto spec = biased_gtc(ctx, c, endpoint(base, 0));
    for (const auto& pb : commuting_squares(spec.u, zero_to_one, budget))
      zero_is_fibration = zero_is_fibration && solve_lift(pb, budget).has_value();
  }
  r.checks.add("(d) 0 -> 1 solves every biased family problem", zero_is_fibration);
  return r;
}

} // namespace kanlab
