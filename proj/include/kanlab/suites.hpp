#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "context.hpp"
#include "frobenius.hpp"
#include "gtc.hpp"
#include "lifting.hpp"
#include "limits.hpp"
#include "random.hpp"

namespace kanlab {

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty() && cases > 0; }
  void check(bool passed, const std::string& what) {
    if (!passed) failures.push_back(what);
  }
};

/// Bases the randomized suites cycle through, each with its interval.
inline std::vector<PresheafContext> suite_contexts(SearchBudget budget = {}) {
  std::vector<PresheafContext> out;
  for (auto base : {preset_simplex(1), preset_simplex(2), preset_cube(1)})
    out.push_back(PresheafContext::with_representable_interval(base, "[1]", CofibrationClass::monomorphisms(), budget));
  const auto chain = preset_poset({"0", "1"}, {{"0", "0"}, {"1", "1"}, {"0", "1"}});
  const auto diamond = preset_poset({"b", "x", "y", "t"}, {{"b", "b"}, {"x", "x"}, {"y", "y"}, {"t", "t"}, {"b", "x"},
                                                           {"b", "y"}, {"x", "t"}, {"y", "t"}, {"b", "t"}});
  for (auto base : {chain, diamond})
    out.emplace_back(base, cofree(base, 0, 2), CofibrationClass::monomorphisms(), budget);
  return out;
}

/// gtc(0 -> X, i) is the graph of i up to isomorphism over X × I, and the
/// graph is mono.
inline SuiteResult lemma4_suite(std::uint64_t seed, std::size_t cases = 60, SearchBudget budget = {}) {
  SuiteResult r{"lemma4", 0, {}};
  Rng rng(seed);
  const auto ctxs = suite_contexts(budget);
  for (std::size_t k = 0; k < cases; ++k) {
    const auto& ctx = ctxs[k % ctxs.size()];
    const auto X = random_presheaf(ctx.base(), rng);
    const auto i = random_map(X, ctx.interval(), rng, 512, budget);
    const std::string tag = "case " + std::to_string(k) + " over base " + std::to_string(k % ctxs.size());
    ++r.cases;
    if (!i) {
      r.check(false, tag + ": no map into the interval");
      continue;
    }
    const auto spec = build_gtc(ctx, from_initial(X), *i);
    const auto graph = graph_map(ctx, *i);
    const auto phi = find_isomorphism_over(spec.u, graph, budget);
    r.check(phi.has_value() && compose(graph, *phi) == spec.u, tag + ": u is not the graph up to isomorphism");
    r.check(is_mono(graph), tag + ": graph is not mono");
    r.check(compose(product(X, ctx.interval()).leg("pr1"), graph) == identity(X), tag + ": pr1 o graph != id");
  }
  return r;
}

/// The defining square of a gtc is a pullback and c × 1 is mono.
inline SuiteResult lemma5_suite(std::uint64_t seed, std::size_t cases = 60, SearchBudget budget = {}) {
  SuiteResult r{"lemma5", 0, {}};
  Rng rng(seed);
  const auto ctxs = suite_contexts(budget);
  for (std::size_t k = 0; k < cases; ++k) {
    const auto& ctx = ctxs[k % ctxs.size()];
    const auto& I = ctx.interval();
    const auto Z = random_presheaf(ctx.base(), rng);
    const auto c = random_inclusion(Z, rng);
    const auto i = random_map(Z, I, rng, 512, budget);
    const std::string tag = "case " + std::to_string(k) + " over base " + std::to_string(k % ctxs.size());
    ++r.cases;
    if (!i) {
      r.check(false, tag + ": no map into the interval");
      continue;
    }
    const auto& C = c.source();
    const Square sq{pair(identity(C), compose(*i, c)), c, product_map(c, identity(I)), pair(identity(Z), *i)};
    r.check(sq.commutes(), tag + ": square does not commute");
    r.check(check_pullback_square(sq), tag + ": square is not a pullback");
    r.check(is_mono(sq.right), tag + ": c x 1 is not mono");
    const auto spec = build_gtc(ctx, c, *i);
    r.check(spec.transcript.all_passed(), tag + ": gtc transcript has a failure");
  }
  return r;
}

namespace detail {

inline std::string morphism_digits(const IndexCategory& base, MorphismId m) {
  const auto& id = base.morphism(m).id;
  return id.substr(id.find(':') + 1);
}

} // namespace detail

/// Δⁿ × {ε} ∪ ∂Δⁿ × Δ¹ inside Δⁿ × Δ¹, read off from the vertex sequences
/// of the simplices: a pair (σ, τ) belongs when σ misses a vertex or τ is
/// constant at ε.
inline PresheafMap open_prism_union(const BasePtr& base, std::size_t n, int eps) {
  const auto prod = product(yoneda(base, "[" + std::to_string(n) + "]"), yoneda(base, "[1]"));
  const auto top = base->object("[" + std::to_string(n) + "]");
  const auto one = base->object("[1]");
  std::vector<std::vector<char>> member(base->object_count());
  for (ObjectId k = 0; k < member.size(); ++k) {
    member[k].assign(prod.apex.size(k), 0);
    for (Elem e = 0; e < prod.apex.size(k); ++e) {
      const auto sigma = detail::morphism_digits(*base, base->hom(k, top)[prod.leg("pr1")(k, e)]);
      const auto tau = detail::morphism_digits(*base, base->hom(k, one)[prod.leg("pr2")(k, e)]);
      bool surjective = true;
      for (std::size_t v = 0; v <= n; ++v) surjective = surjective && sigma.find(char('0' + v)) != std::string::npos;
      const bool constant = tau.find_first_not_of(char('0' + eps)) == std::string::npos;
      member[k][e] = !surjective || constant;
    }
  }
  return subpresheaf(prod.apex, member);
}

/// prism_gtc(n, ε) against the open prism union, for n ≤ max_n.
inline SuiteResult prism_suite(std::size_t max_n = 2, SearchBudget budget = {}) {
  SuiteResult r{"kan-prisms", 0, {}};
  const auto base = preset_simplex(3);
  const auto ctx = PresheafContext::with_representable_interval(base, "[1]", CofibrationClass::monomorphisms(), budget);
  for (std::size_t n = 0; n <= max_n; ++n) {
    for (int eps : {0, 1}) {
      ++r.cases;
      const std::string tag = "n=" + std::to_string(n) + " eps=" + std::to_string(eps);
      const auto g = prism_gtc(ctx, n, eps);
      const auto uni = open_prism_union(base, n, eps);
      r.check(g.D().sizes() == uni.source().sizes(), tag + ": level counts differ from the union");
      const auto iso = find_isomorphism_over(g.u, uni, budget);
      r.check(iso.has_value(), tag + ": no isomorphism over the prism");
      const auto direct = build_gtc(ctx, boundary_inclusion(base, n), compose(endpoint(base, eps), to_terminal(yoneda(base, "[" + std::to_string(n) + "]"))));
      r.check(direct.u == g.u, tag + ": prism gtc differs from gtc(boundary, constant)");
    }
  }
  return r;
}

/// solve_lift against all_lifts on random lifting problems.
inline SuiteResult engine_suite(std::uint64_t seed, std::size_t cases = 120, SearchBudget budget = {}) {
  SuiteResult r{"solve-vs-all", 0, {}};
  Rng rng(seed);
  const auto ctxs = suite_contexts(budget);
  std::size_t attempts = 0;
  while (r.cases < cases && attempts < cases * 20) {
    const auto& ctx = ctxs[attempts++ % ctxs.size()];
    const auto& base = ctx.base();
    const auto B = random_presheaf(base, rng, 3);
    const auto u = random_inclusion(B, rng);
    const auto X = random_presheaf(base, rng, 3);
    const auto Y = random_presheaf(base, rng, 3);
    const auto p = random_map(X, Y, rng, 256, budget);
    if (!p) continue;
    const auto h = random_map(B, Y, rng, 256, budget);
    if (!h) continue;
    const auto tops = enumerate_maps_over(compose(*h, u), *p, budget);
    if (tops.empty()) continue;
    LiftingProblem pb{u, *p, tops[rng.below(tops.size())], *h};
    const std::string tag = "problem " + std::to_string(r.cases);
    ++r.cases;
    const auto first = solve_lift(pb, budget);
    const auto all = all_lifts(pb, budget);
    r.check(first.has_value() == !all.empty(), tag + ": existence disagrees");
    if (first && !all.empty()) r.check(*first == all.front(), tag + ": first lift is not canonical");
    for (std::size_t k = 0; k < all.size(); ++k) {
      r.check(pb.is_lift(all[k]), tag + ": enumerated map is not a lift");
      if (k) r.check(canonical_less(all[k - 1], all[k]), tag + ": lifts out of order");
    }
  }
  return r;
}

/// |Hom(y(c), X)| = |X(c)| on every object of the given bases.
inline SuiteResult yoneda_suite(std::uint64_t seed, const std::vector<BasePtr>& bases, std::size_t per_base = 4,
                                SearchBudget budget = {}) {
  SuiteResult r{"yoneda", 0, {}};
  Rng rng(seed);
  for (const auto& base : bases) {
    std::vector<Presheaf> xs{terminal(base), initial(base)};
    for (ObjectId c = 0; c < base->object_count(); ++c) xs.push_back(yoneda(base, c));
    for (std::size_t k = 0; k < per_base; ++k) xs.push_back(random_presheaf(base, rng));
    for (ObjectId c = 0; c < base->object_count(); ++c)
      for (const auto& x : xs) {
        ++r.cases;
        r.check(count_maps(yoneda(base, c), x, budget) == x.size(c),
                "object " + base->object_name(c) + ": count law fails");
      }
  }
  return r;
}

struct TransferResult {
  std::size_t problems = 0;
  std::size_t solvable = 0;
  std::size_t agreements = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty() && agreements == problems; }
};

/// Random problems with left leg p*u against each declared fibration: the
/// lift through the retract exists exactly when a direct lift exists.
inline TransferResult transfer_suite(const RetractCertificate& cert, const std::vector<PresheafMap>& fibrations,
                                     std::size_t count, std::uint64_t seed, SearchBudget budget = {}) {
  TransferResult r;
  Rng rng(seed);
  const auto& u = cert.cube.pstar_u;
  const auto data = cert.retract;
  std::size_t attempts = 0;
  while (r.problems < count && attempts < count * 20 && !fibrations.empty()) {
    const auto& q = fibrations[attempts++ % fibrations.size()];
    const auto h = random_map(u.target(), q.target(), rng, 512, budget);
    if (!h) continue;
    const auto tops = enumerate_maps_over(compose(*h, u), q, budget);
    if (tops.empty()) continue;
    LiftingProblem pb{u, q, tops[rng.below(tops.size())], *h};
    const std::string tag = "problem " + std::to_string(r.problems);
    ++r.problems;
    const auto via = lift_via_retract(pb, cert.v.u, data,
                                      [&](const LiftingProblem& induced) { return solve_lift(induced, budget); });
    const auto direct = all_lifts(pb, budget);
    if (via.lift.has_value() == !direct.empty()) ++r.agreements;
    else r.failures.push_back(tag + ": retract transfer disagrees with direct search");
    if (via.lift) {
      ++r.solvable;
      if (!pb.is_lift(*via.lift)) r.failures.push_back(tag + ": transferred map is not a lift");
    }
  }
  return r;
}

} // namespace kanlab
