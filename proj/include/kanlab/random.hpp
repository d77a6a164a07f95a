#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "limits.hpp"
#include "presheaf.hpp"
#include "search.hpp"

namespace kanlab {

/// Seeded source of choices. Draws are reduced modulo the range so that
/// sequences agree across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  bool coin() { return below(2) == 1; }

private:
  std::mt19937_64 engine_;
};

/// Ambient presheaves from which random ones are cut out as subpresheaves.
inline std::vector<Presheaf> ambient_pool(const BasePtr& base) {
  std::vector<Presheaf> pool;
  for (ObjectId c = 0; c < base->object_count(); ++c) pool.push_back(yoneda(base, c));
  pool.push_back(cofree(base, 0, 2));
  pool.push_back(discrete(base, 2));
  const std::size_t singles = pool.size();
  for (std::size_t a = 0; a < singles; ++a)
    for (std::size_t b = a; b < singles; ++b) {
      auto prod = product(pool[a], pool[b]).apex;
      if (prod.total_size() <= 64) pool.push_back(std::move(prod));
    }
  return pool;
}

/// A random subpresheaf of a random ambient presheaf with every level of
/// size at most max_level, generated by one to four random elements; the
/// largest of three draws is kept. Returns the inclusion.
inline PresheafMap random_subpresheaf(const BasePtr& base, Rng& rng, std::size_t max_level = 4) {
  const auto pool = ambient_pool(base);
  std::optional<PresheafMap> best;
  for (int draws = 0, attempt = 0; draws < 3 && attempt < 200; ++attempt) {
    const auto& amb = pool[rng.below(pool.size())];
    std::vector<std::pair<ObjectId, Elem>> seeds;
    const std::size_t count = 1 + rng.below(4);
    for (std::size_t k = 0; k < count; ++k) {
      const ObjectId c = rng.below(base->object_count());
      if (amb.size(c) == 0) continue;
      seeds.emplace_back(c, rng.below(amb.size(c)));
    }
    auto incl = generated_subpresheaf(amb, seeds);
    bool small = true;
    for (auto s : incl.source().sizes()) small = small && s <= max_level;
    if (!small) continue;
    ++draws;
    if (!best || incl.source().total_size() > best->source().total_size()) best = std::move(incl);
  }
  return best ? *best : identity(terminal(base));
}

inline Presheaf random_presheaf(const BasePtr& base, Rng& rng, std::size_t max_level = 4) {
  return random_subpresheaf(base, rng, max_level).source();
}

/// A random subpresheaf inclusion into x, possibly empty or all of x.
inline PresheafMap random_inclusion(const Presheaf& x, Rng& rng) {
  const auto& base = x.base();
  std::vector<std::pair<ObjectId, Elem>> seeds;
  const std::size_t count = rng.below(3);
  for (std::size_t k = 0; k < count; ++k) {
    const ObjectId c = rng.below(base.object_count());
    if (x.size(c) == 0) continue;
    seeds.emplace_back(c, rng.below(x.size(c)));
  }
  return generated_subpresheaf(x, seeds);
}

/// Up to cap maps x -> y in canonical order, then one drawn uniformly.
inline std::optional<PresheafMap> random_map(const Presheaf& x, const Presheaf& y, Rng& rng, std::size_t cap = 512,
                                             SearchBudget budget = {}) {
  std::vector<PresheafMap> maps;
  MapSearch search(x, y, budget);
  search.run([&](const std::vector<std::vector<Elem>>& comps) {
    maps.emplace_back(x, y, comps);
    return maps.size() < cap;
  });
  if (maps.empty()) return std::nullopt;
  return maps[rng.below(maps.size())];
}

} // namespace kanlab
