#include <gtest/gtest.h>

#include <thread>

#include "kanlab/gtc.hpp"
#include "kanlab/lifting.hpp"
#include "kanlab/scenario.hpp"
#include "oracles.hpp"

using namespace kanlab;

namespace {

struct Edge {
  BasePtr base = preset_simplex(1);
  PresheafContext ctx = PresheafContext::with_representable_interval(base, "[1]");
  Presheaf one = terminal(base);
  Presheaf d1 = yoneda(base, "[1]");
};

/// The problem ⟨1,t⟩ against p with top id and bottom z × 1.
LiftingProblem graph_problem(const PresheafContext& ctx, const PresheafMap& p, const PresheafMap& z, const PresheafMap& t) {
  return {graph_map(ctx, t), p, identity(p.source()), product_map(z, identity(ctx.interval()))};
}

std::vector<LiftingProblem> all_problems(const PresheafMap& u, const PresheafMap& p) { return commuting_squares(u, p); }

} // namespace

TEST(Lifting, IsoLeftLegAlwaysLifts) {
  Edge e;
  const auto k = cofree(e.base, 0, 2);
  const auto swap = pair(product(e.d1, e.d1).leg("pr2"), product(e.d1, e.d1).leg("pr1"));
  const auto p = to_terminal(k);
  for (const auto& pb : all_problems(swap, p)) {
    const auto l = solve_lift(pb);
    ASSERT_TRUE(l.has_value());
    EXPECT_EQ(*l, compose(pb.top, inverse(swap)));
    EXPECT_EQ(all_lifts(pb).size(), 1u);
  }
}

TEST(Lifting, EmptyTargetHasNoLift) {
  Edge e;
  const auto z = from_initial(e.one);
  const LiftingProblem pb{z, z, identity(initial(e.base)), identity(e.one)};
  EXPECT_FALSE(solve_lift(pb).has_value());
  EXPECT_TRUE(all_lifts(pb).empty());
}

TEST(Lifting, IdentityAgainstIdentity) {
  Edge e;
  const auto id = identity(e.d1);
  const LiftingProblem pb{id, id, id, id};
  const auto lifts = all_lifts(pb);
  ASSERT_EQ(lifts.size(), 1u);
  EXPECT_EQ(lifts.front(), id);
}

TEST(Lifting, NonCommutingSquareIsRejected) {
  Edge e;
  const LiftingProblem pb{endpoint(e.base, 0), identity(e.d1), endpoint(e.base, 1), identity(e.d1)};
  EXPECT_FALSE(pb.commutes());
  EXPECT_THROW(solve_lift(pb), ContractError);
}

TEST(Lifting, AllLiftsAgreeWithBruteForce) {
  Edge e;
  const auto c = boundary_inclusion(e.base, 1);
  const auto g = build_gtc(e.ctx, c, identity(e.d1));
  const auto k = cofree(e.base, 0, 2);
  const auto p = to_terminal(k);
  std::size_t checked = 0;
  for (const auto& pb : all_problems(g.u, p)) {
    const auto lifts = all_lifts(pb);
    std::size_t expected = 0;
    for (const auto& comps : oracle::brute_force_maps(pb.u.target(), pb.p.source()))
      expected += pb.is_lift(PresheafMap(pb.u.target(), pb.p.source(), comps));
    EXPECT_EQ(lifts.size(), expected);
    const auto first = solve_lift(pb);
    ASSERT_EQ(first.has_value(), !lifts.empty());
    if (first) {
      EXPECT_EQ(*first, lifts.front());
    }
    if (++checked == 6) break;
  }
  EXPECT_EQ(checked, 6u);
}

TEST(Lifting, DaggerZeroOnThePrismScenario) {
  const auto s = load_scenario_file(std::string(KANLAB_SCENARIO_DIR) + "/prop7_reflexive_graphs.json");
  const auto ctx = s.context();
  const auto p = s.objects.map("p");
  const auto zi = product(s.objects.presheaf("Z"), ctx.interval());
  const auto z = compose(zi.leg("pr1"), p);
  const auto t = compose(zi.leg("pr2"), p);
  const auto pb = graph_problem(ctx, p, z, t);
  ASSERT_TRUE(pb.commutes());
  const auto H = solve_lift(pb);
  ASSERT_TRUE(H.has_value());
  const auto xi = product(p.source(), ctx.interval());
  EXPECT_EQ(compose(*H, graph_map(ctx, t)), identity(p.source()));
  EXPECT_EQ(compose(p, *H), product_map(z, identity(ctx.interval())));
  EXPECT_EQ(compose(z, *H), compose(z, xi.leg("pr1")));
  EXPECT_EQ(compose(t, *H), xi.leg("pr2"));
  const auto all = all_lifts(pb);
  ASSERT_FALSE(all.empty());
  EXPECT_EQ(all.front(), *H);
}

TEST(Lifting, RlpCertificates) {
  Edge e;
  const auto ctx3 = PresheafContext::with_representable_interval(preset_simplex(2), "[1]");
  const auto& b3 = ctx3.base();
  const auto k = cofree(b3, 0, 2);
  const auto to_one = to_terminal(k);
  std::vector<LiftingProblem> family;
  for (std::size_t n = 0; n <= 1; ++n)
    for (int eps : {0, 1})
      for (auto& pb : commuting_squares(prism_gtc(ctx3, n, eps).u, to_one)) family.push_back(pb);
  ASSERT_FALSE(family.empty());
  const auto cert = rlp_certificate(to_one, family);
  EXPECT_TRUE(cert.ok);
  EXPECT_EQ(cert.lifts.size(), family.size());

  const auto z = from_initial(e.one);
  const auto bad = rlp_certificate(z, {LiftingProblem{z, z, identity(initial(e.base)), identity(e.one)}});
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.counterexample, std::optional<std::size_t>(0));

  const auto q = endpoint(e.base, 1);
  std::vector<LiftingProblem> biased;
  for (const auto& c : {from_initial(e.one), boundary_inclusion(e.base, 1)})
    for (auto& pb : commuting_squares(biased_gtc(e.ctx, c, endpoint(e.base, 0)).u, q)) biased.push_back(pb);
  ASSERT_FALSE(biased.empty());
  EXPECT_TRUE(rlp_certificate(q, biased).ok);
}

TEST(Lifting, RetractChecks) {
  Edge e;
  const auto u = endpoint(e.base, 0);
  const RetractData ident{identity(u.source()), identity(u.source()), identity(u.target()), identity(u.target())};
  EXPECT_TRUE(check_retract(u, u, ident).ok());
  const auto two = coproduct(e.one, e.one);
  const auto w = identity(two.apex);
  const auto swap = cogap(two, two.leg("in2"), two.leg("in1"));
  const RetractData broken{w, swap, w, w};
  const auto r = check_retract(w, w, broken);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violations.front(), "r_dom o s_dom != id");
}

TEST(Lifting, LiftViaIdentityRetract) {
  Edge e;
  const auto c = boundary_inclusion(e.base, 1);
  const auto g = build_gtc(e.ctx, c, identity(e.d1));
  const auto p = to_terminal(cofree(e.base, 0, 2));
  const RetractData ident{identity(g.D()), identity(g.D()), identity(g.codomain()), identity(g.codomain())};
  for (const auto& pb : all_problems(g.u, p)) {
    const auto direct = solve_lift(pb);
    const auto via = lift_via_retract(pb, g.u, ident, [](const LiftingProblem& q) { return solve_lift(q); });
    EXPECT_EQ(via.lift, direct);
  }
  const auto pb = all_problems(g.u, p).front();
  const RetractData broken{identity(g.D()), identity(g.D()), identity(g.codomain()),
                           compose(pair(identity(c.target()), identity(e.d1)), product(c.target(), e.d1).leg("pr1"))};
  EXPECT_THROW(lift_via_retract(pb, g.u, broken, [](const LiftingProblem& q) { return solve_lift(q); }),
               PreconditionError);
}

TEST(Lifting, WitnessCachesIdenticalAnswers) {
  Edge e;
  const auto g = build_gtc(e.ctx, boundary_inclusion(e.base, 1), identity(e.d1));
  const auto w = FibrationWitness::search(to_terminal(cofree(e.base, 0, 2)));
  const auto problems = all_problems(g.u, w.map());
  for (const auto& pb : problems) {
    const auto first = w.try_lift(pb);
    const auto again = w.try_lift(pb);
    EXPECT_EQ(first, again);
  }
  EXPECT_EQ(w.cache_size(), problems.size());
}

TEST(Lifting, WitnessIsSafeUnderConcurrentQueries) {
  Edge e;
  const auto g = build_gtc(e.ctx, boundary_inclusion(e.base, 1), identity(e.d1));
  const auto w = FibrationWitness::search(to_terminal(cofree(e.base, 0, 2)));
  const auto problems = all_problems(g.u, w.map());
  std::vector<std::optional<PresheafMap>> expected;
  for (const auto& pb : problems) expected.push_back(solve_lift(pb));
  std::vector<std::vector<std::optional<PresheafMap>>> seen(4);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < seen.size(); ++t)
    threads.emplace_back([&, t] {
      for (std::size_t k = 0; k < problems.size(); ++k) seen[t].push_back(w.try_lift(problems[(k + t) % problems.size()]));
    });
  for (auto& th : threads) th.join();
  for (std::size_t t = 0; t < seen.size(); ++t)
    for (std::size_t k = 0; k < problems.size(); ++k) EXPECT_EQ(seen[t][k], expected[(k + t) % problems.size()]);
  EXPECT_EQ(w.cache_size(), problems.size());
}

TEST(Lifting, WitnessRejectsOtherMaps) {
  Edge e;
  const auto w = FibrationWitness::search(to_terminal(e.d1));
  const auto id = identity(e.d1);
  EXPECT_THROW(w.try_lift(LiftingProblem{id, id, id, id}), ContractError);
  const auto z = from_initial(e.one);
  const auto w0 = FibrationWitness::search(z);
  EXPECT_THROW(w0.lift(LiftingProblem{z, z, identity(initial(e.base)), identity(e.one)}), WitnessFailure);
}
