#include <gtest/gtest.h>

#include "kanlab/gtc.hpp"
#include "kanlab/limits.hpp"
#include "kanlab/search.hpp"

using namespace kanlab;

namespace {

struct Edge {
  BasePtr base = preset_simplex(1);
  ObjectId v = base->object("[0]");
  ObjectId e = base->object("[1]");
  Presheaf one = terminal(base);
  Presheaf d1 = yoneda(base, "[1]");
};

std::size_t total(const std::vector<std::size_t>& v) {
  std::size_t n = 0;
  for (auto x : v) n += x;
  return n;
}

/// The c ⊗ (constant ε) square over an edge: C = ∂Δ¹ -> Z = Δ¹, i = constant.
Square def3_square(const BasePtr& b, int eps) {
  const auto c = boundary_inclusion(b, 1);
  const auto I = yoneda(b, "[1]");
  const auto i = compose(endpoint(b, eps), to_terminal(c.target()));
  const auto& C = c.source();
  return Square{pair(identity(C), compose(i, c)), c, product_map(c, identity(I)), pair(identity(c.target()), i)};
}

} // namespace

TEST(Limits, ProductOfEdges) {
  Edge g;
  const auto pr = product(g.d1, g.d1);
  EXPECT_EQ(pr.apex.size(g.v), 2u * 2u);
  EXPECT_EQ(pr.apex.size(g.e), 3u * 3u);
  EXPECT_TRUE(validate_presheaf(pr.apex).ok());
  EXPECT_TRUE(verify_pullback_universal(pullback(to_terminal(g.d1), to_terminal(g.d1))).ok());
}

TEST(Limits, ProductWithTerminal) {
  Edge g;
  const auto pr = product(g.d1, g.one);
  EXPECT_TRUE(is_iso(pr.leg("pr1")));
}

TEST(Limits, InitialIsEmpty) {
  for (const auto& b : {preset_simplex(2), preset_cube(1)}) {
    const auto z = initial(b);
    for (ObjectId c = 0; c < b->object_count(); ++c) EXPECT_EQ(z.size(c), 0u);
  }
}

TEST(Limits, PullbackOfDistinctVerticesIsEmpty) {
  Edge g;
  const auto pb = pullback(endpoint(g.base, 0), endpoint(g.base, 1));
  EXPECT_TRUE(pb.apex.is_empty());
  EXPECT_TRUE(verify_pullback_universal(pb).ok());
}

TEST(Limits, PullbackOfIdentities) {
  Edge g;
  const auto x = cofree(g.base, 0, 2);
  const auto pb = pullback(identity(x), identity(x));
  EXPECT_TRUE(is_iso(pb.leg("pr1")));
  EXPECT_EQ(pb.leg("pr1"), pb.leg("pr2"));
}

TEST(Limits, PullbackElementsAreMatchingPairs) {
  Edge g;
  const auto k = cofree(g.base, 0, 2);
  const auto h = enumerate_maps(g.d1, k);
  ASSERT_FALSE(h.empty());
  const auto pb = pullback(h.back(), identity(k));
  for (ObjectId c = 0; c < 2; ++c) {
    std::size_t pairs = 0;
    for (Elem x = 0; x < g.d1.size(c); ++x)
      for (Elem y = 0; y < k.size(c); ++y) pairs += h.back()(c, x) == y;
    EXPECT_EQ(pb.apex.size(c), pairs);
  }
  EXPECT_TRUE(is_iso(pb.leg("pr1")));
}

TEST(Limits, GapIsTheMediatingMap) {
  Edge g;
  const auto pr = product(g.d1, g.d1);
  const auto diag = gap(pr, identity(g.d1), identity(g.d1));
  EXPECT_EQ(compose(pr.leg("pr1"), diag), identity(g.d1));
  EXPECT_EQ(compose(pr.leg("pr2"), diag), identity(g.d1));
  EXPECT_EQ(diag, pair(identity(g.d1), identity(g.d1)));
}

TEST(Limits, PushoutOverInitialIsCoproduct) {
  Edge g;
  const auto k = cofree(g.base, 0, 2);
  const auto po = pushout(from_initial(g.d1), from_initial(k));
  for (ObjectId c = 0; c < 2; ++c) EXPECT_EQ(po.apex.size(c), g.d1.size(c) + k.size(c));
  const auto co = coproduct(g.d1, k);
  EXPECT_EQ(po.apex.sizes(), co.apex.sizes());
  EXPECT_TRUE(verify_pushout_universal(po).ok());
}

TEST(Limits, PushoutAlongIdentity) {
  Edge g;
  const auto gmap = endpoint(g.base, 1);
  const auto po = pushout(identity(g.one), gmap);
  EXPECT_TRUE(is_iso(po.leg("in2")));
  EXPECT_EQ(po.apex.sizes(), g.d1.sizes());
}

TEST(Limits, OpenBoxDomainCounts) {
  // Δ¹ × {0} ∪ ∂Δ¹ × Δ¹ counted inside Δ¹ × Δ¹ from vertex sequences:
  // (σ, τ) belongs when σ is degenerate-or-face (misses a vertex) or τ is constant 0.
  Edge g;
  const auto pr = product(g.d1, g.d1);
  std::vector<std::size_t> expected(2, 0);
  for (ObjectId c = 0; c < 2; ++c)
    for (Elem e = 0; e < pr.apex.size(c); ++e) {
      const auto& s = g.base->morphism(g.base->hom(c, g.e)[pr.leg("pr1")(c, e)]).id;
      const auto& t = g.base->morphism(g.base->hom(c, g.e)[pr.leg("pr2")(c, e)]).id;
      const auto sd = s.substr(s.find(':') + 1);
      const auto td = t.substr(t.find(':') + 1);
      const bool misses = sd.find('0') == std::string::npos || sd.find('1') == std::string::npos;
      const bool zero = td.find('1') == std::string::npos;
      expected[c] += misses || zero;
    }
  EXPECT_EQ(expected, (std::vector<std::size_t>{4, 7}));
  const auto sq = def3_square(g.base, 0);
  const auto po = pushout(sq.left, sq.top);
  EXPECT_EQ(po.apex.sizes(), expected);
  EXPECT_TRUE(verify_pushout_universal(po).ok());
}

TEST(Limits, CogapThroughPushout) {
  Edge g;
  const auto sq = def3_square(g.base, 1);
  const auto cg = cogap_of_square(sq);
  EXPECT_EQ(compose(cg.cogap, cg.pushout.leg("in1")), sq.bottom);
  EXPECT_EQ(compose(cg.cogap, cg.pushout.leg("in2")), sq.right);
  EXPECT_TRUE(is_mono(cg.cogap));
}

TEST(Limits, Equalizers) {
  Edge g;
  const auto k = cofree(g.base, 0, 2);
  const auto eq = equalizer(identity(k), identity(k));
  EXPECT_TRUE(is_iso(eq.leg("incl")));
  EXPECT_TRUE(equalizer(endpoint(g.base, 0), endpoint(g.base, 1)).apex.is_empty());
  const auto two = discrete(g.base, 2);
  const auto p0 = pair(endpoint(g.base, 0), global_element(two, 0));
  const auto p1 = pair(endpoint(g.base, 1), global_element(two, 0));
  EXPECT_TRUE(equalizer(p0, p1).apex.is_empty());
  EXPECT_TRUE(is_equalizer_fork(eq.leg("incl"), identity(k), identity(k)));
}

TEST(Limits, Def3SquareIsAPullback) {
  Edge g;
  for (int eps : {0, 1}) EXPECT_TRUE(check_pullback_square(def3_square(g.base, eps)));
}

TEST(Limits, ShrunkApexIsNotAPullback) {
  Edge g;
  const auto sq = def3_square(g.base, 0);
  const auto& C = sq.top.source();
  const auto s = generated_subpresheaf(C, {{g.v, 0}});
  ASSERT_LT(s.source().total_size(), C.total_size());
  const Square shrunk{compose(sq.top, s), compose(sq.left, s), sq.right, sq.bottom};
  ASSERT_TRUE(shrunk.commutes());
  EXPECT_FALSE(check_pullback_square(shrunk));
}

TEST(Limits, GraphPulledBackAlongCTimesOne) {
  // pullback of <1,i>: Z -> Z×I along c×1 recovers C
  Edge g;
  const auto sq = def3_square(g.base, 0);
  const auto pb = pullback(sq.bottom, sq.right);
  EXPECT_EQ(pb.apex.sizes(), sq.top.source().sizes());
  EXPECT_TRUE(is_iso(gap(pb, sq.left, sq.top)));
}

TEST(Limits, H1InstanceOnTheDef3Square) {
  Edge g;
  const auto sq = def3_square(g.base, 0);
  const auto zi = sq.right.target();
  const auto x = product(zi, cofree(g.base, 0, 2));
  const auto h1 = check_h1_instance(sq, x.leg("pr1"));
  EXPECT_TRUE(h1.holds);
  const auto pulled = pull_back_square(sq, x.leg("pr1"));
  for (const auto* f : {&pulled.face, &pulled.left_face, &pulled.back_face, &pulled.right_face, &pulled.front_face})
    EXPECT_TRUE(check_pullback_square(*f));
}

TEST(Limits, QuotientByRelation) {
  Edge g;
  const auto c = coequalizer(endpoint(g.base, 0), endpoint(g.base, 1));
  EXPECT_EQ(c.apex.size(g.v), 1u);
  EXPECT_EQ(c.apex.size(g.e), 2u);
  EXPECT_EQ(total(c.apex.sizes()), 3u);
}
