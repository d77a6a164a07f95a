#include <gtest/gtest.h>

#include <algorithm>

#include "kanlab/random.hpp"
#include "kanlab/search.hpp"
#include "oracles.hpp"

using namespace kanlab;

namespace {

std::vector<std::vector<std::vector<Elem>>> sorted_components(const std::vector<PresheafMap>& maps) {
  std::vector<std::vector<std::vector<Elem>>> out;
  for (const auto& m : maps) out.push_back(m.components());
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

TEST(Search, EndomorphismsOfTheEdge) {
  const auto b = preset_simplex(1);
  const auto y1 = yoneda(b, "[1]");
  const auto maps = enumerate_maps(y1, y1);
  EXPECT_EQ(maps.size(), 3u);
  EXPECT_EQ(maps.size(), oracle::brute_force_maps(y1, y1).size());
  EXPECT_EQ(maps.size(), b->hom(b->object("[1]"), b->object("[1]")).size());
}

TEST(Search, InitialAndTerminal) {
  const auto b = preset_cube(1);
  for (const auto& x : {yoneda(b, "[1]"), cofree(b, 0, 2), discrete(b, 2)}) {
    EXPECT_EQ(enumerate_maps(initial(b), x).size(), 1u);
    EXPECT_EQ(enumerate_maps(x, terminal(b)).size(), 1u);
  }
}

TEST(Search, AgreesWithBruteForce) {
  Rng rng(7);
  for (const auto& b : {preset_simplex(1), preset_cube(1)}) {
    for (int k = 0; k < 12; ++k) {
      const auto x = random_presheaf(b, rng, 3);
      const auto y = random_presheaf(b, rng, 3);
      const auto maps = enumerate_maps(x, y);
      EXPECT_EQ(sorted_components(maps), [&] {
        auto v = oracle::brute_force_maps(x, y);
        std::sort(v.begin(), v.end());
        return v;
      }());
      EXPECT_EQ(count_maps(x, y), maps.size());
      for (std::size_t j = 1; j < maps.size(); ++j) EXPECT_TRUE(canonical_less(maps[j - 1], maps[j]));
    }
  }
}

TEST(Search, YonedaCountLaw) {
  for (const auto& b : {preset_simplex(2), preset_cube(1)}) {
    const auto k = cofree(b, 0, 2);
    for (ObjectId c = 0; c < b->object_count(); ++c) {
      EXPECT_EQ(count_maps(yoneda(b, c), k), k.size(c));
      for (ObjectId d = 0; d < b->object_count(); ++d)
        EXPECT_EQ(count_maps(yoneda(b, c), yoneda(b, d)), b->hom(c, d).size());
    }
  }
}

TEST(Search, BudgetIsEnforced) {
  const auto b = preset_simplex(2);
  const auto k = cofree(b, 0, 3);
  EXPECT_THROW(enumerate_maps(k, k, SearchBudget{20}), BudgetExceeded);
  EXPECT_THROW(count_maps(k, k, SearchBudget{20}), SizeError);
}

TEST(Search, IsomorphismSearch) {
  const auto b = preset_simplex(1);
  const auto y1 = yoneda(b, "[1]");
  const auto pr = product(y1, terminal(b));
  const auto iso = find_isomorphism(pr.apex, y1);
  ASSERT_TRUE(iso.has_value());
  EXPECT_TRUE(is_iso(*iso));
  EXPECT_FALSE(find_isomorphism(y1, cofree(b, 0, 2)).has_value());
}

TEST(Search, Deterministic) {
  const auto b = preset_cube(1);
  const auto x = cofree(b, 0, 2);
  const auto y = product(yoneda(b, "[1]"), discrete(b, 2)).apex;
  EXPECT_EQ(sorted_components(enumerate_maps(x, y)), sorted_components(enumerate_maps(x, y)));
  const auto a = enumerate_maps(x, y);
  const auto c = enumerate_maps(x, y);
  ASSERT_EQ(a.size(), c.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k], c[k]);
}
