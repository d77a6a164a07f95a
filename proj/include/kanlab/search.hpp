#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "presheaf.hpp"

namespace kanlab {

struct SearchBudget {
  /// Cap on attempted value assignments across one search.
  std::uint64_t max_visits = 10'000'000;
};

/// Objects in search order: most non-identity morphisms into the object
/// first, ties by index. Maps are compared lexicographically on their
/// component values listed object by object in this order.
inline std::vector<ObjectId> search_object_order(const IndexCategory& base) {
  std::vector<ObjectId> order(base.object_count());
  for (ObjectId c = 0; c < order.size(); ++c) order[c] = c;
  std::stable_sort(order.begin(), order.end(),
                   [&](ObjectId a, ObjectId b) { return base.into(a).size() > base.into(b).size(); });
  return order;
}

/// Canonical comparison of two maps with the same source and target.
inline bool canonical_less(const PresheafMap& a, const PresheafMap& b) {
  for (ObjectId c : search_object_order(a.base())) {
    if (a.component(c) != b.component(c)) return a.component(c) < b.component(c);
  }
  return false;
}

/// Backtracking search for natural transformations X -> Y. Values are
/// assigned highest-level-first; each assignment is propagated along every
/// action out of its level, so faces of chosen elements are forced rather
/// than searched. Solutions arrive in canonical order.
class MapSearch {
public:
  MapSearch(Presheaf source, Presheaf target, SearchBudget budget = {})
      : x_(std::move(source)), y_(std::move(target)), budget_(budget) {
    require_same_base(x_, y_, "map search");
    const auto n = x_.base().object_count();
    domains_.resize(n);
    masks_.resize(n);
    for (ObjectId c = 0; c < n; ++c) {
      domains_[c].resize(x_.size(c));
      masks_[c].resize(x_.size(c));
    }
  }

  /// Intersects the allowed values of element x at level c with `values`.
  void restrict(ObjectId c, Elem x, const std::vector<Elem>& values) {
    std::vector<char> mask(y_.size(c), 0);
    for (Elem v : values)
      if (v < mask.size()) mask[v] = 1;
    auto& cur = masks_[c][x];
    if (!cur.empty())
      for (std::size_t v = 0; v < mask.size(); ++v) mask[v] = mask[v] && cur[v];
    cur = std::move(mask);
    auto& dom = domains_[c][x];
    dom.clear();
    for (Elem v = 0; v < cur.size(); ++v)
      if (cur[v]) dom.push_back(v);
  }

  void fix(ObjectId c, Elem x, Elem value) { restrict(c, x, {value}); }

  /// Calls on_solution(components) for each map in canonical order until it
  /// returns false. Returns the number of solutions reported.
  template <class OnSolution>
  std::size_t run(OnSolution&& on_solution) {
    const auto& base = x_.base();
    const auto n = base.object_count();
    for (ObjectId c = 0; c < n; ++c)
      for (Elem x = 0; x < x_.size(c); ++x)
        if (!masks_[c][x].empty() && domains_[c][x].empty()) return 0;

    vars_.clear();
    for (ObjectId c : search_object_order(base))
      for (Elem x = 0; x < x_.size(c); ++x) vars_.emplace_back(c, x);
    values_.assign(n, {});
    for (ObjectId c = 0; c < n; ++c) values_[c].assign(x_.size(c), kNone);
    trail_.clear();
    visits_ = 0;
    found_ = 0;
    stopped_ = false;
    descend(0, on_solution);
    return found_;
  }

  std::uint64_t visits() const { return visits_; }

private:
  static constexpr Elem kNone = static_cast<Elem>(-1);

  bool allowed(ObjectId c, Elem x, Elem v) const {
    const auto& m = masks_[c][x];
    return m.empty() || m[v];
  }

  bool assign(ObjectId c0, Elem x0, Elem v0) {
    const auto& base = x_.base();
    std::vector<std::tuple<ObjectId, Elem, Elem>> pending{{c0, x0, v0}};
    while (!pending.empty()) {
      auto [c, x, v] = pending.back();
      pending.pop_back();
      auto& slot = values_[c][x];
      if (slot != kNone) {
        if (slot != v) return false;
        continue;
      }
      if (!allowed(c, x, v)) return false;
      slot = v;
      trail_.emplace_back(c, x);
      for (MorphismId s : base.into(c)) pending.emplace_back(base.source(s), x_.act(s, x), y_.act(s, v));
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      auto [c, x] = trail_.back();
      trail_.pop_back();
      values_[c][x] = kNone;
    }
  }

  template <class OnSolution>
  void descend(std::size_t pos, OnSolution& on_solution) {
    while (pos < vars_.size() && values_[vars_[pos].first][vars_[pos].second] != kNone) ++pos;
    if (pos == vars_.size()) {
      ++found_;
      if (!on_solution(values_)) stopped_ = true;
      return;
    }
    const auto [c, x] = vars_[pos];
    auto try_value = [&](Elem v) {
      if (++visits_ > budget_.max_visits)
        throw BudgetExceeded("search budget of " + std::to_string(budget_.max_visits) +
                             " visits exceeded while assigning level '" + x_.base().object_name(c) + "'");
      const auto mark = trail_.size();
      if (assign(c, x, v)) descend(pos + 1, on_solution);
      undo(mark);
    };
    if (masks_[c][x].empty()) {
      for (Elem v = 0; v < y_.size(c) && !stopped_; ++v) try_value(v);
    } else {
      for (Elem v : domains_[c][x]) {
        if (stopped_) break;
        try_value(v);
      }
    }
  }

  Presheaf x_;
  Presheaf y_;
  SearchBudget budget_;
  std::vector<std::vector<std::vector<Elem>>> domains_;
  std::vector<std::vector<std::vector<char>>> masks_;
  std::vector<std::pair<ObjectId, Elem>> vars_;
  std::vector<std::vector<Elem>> values_;
  std::vector<std::pair<ObjectId, Elem>> trail_;
  std::uint64_t visits_ = 0;
  std::size_t found_ = 0;
  bool stopped_ = false;
};

/// Every natural transformation x -> y, duplicate-free, in canonical order.
inline std::vector<PresheafMap> enumerate_maps(const Presheaf& x, const Presheaf& y, SearchBudget budget = {}) {
  MapSearch search(x, y, budget);
  std::vector<PresheafMap> out;
  search.run([&](const std::vector<std::vector<Elem>>& comps) {
    out.emplace_back(x, y, comps);
    return true;
  });
  return out;
}

inline std::size_t count_maps(const Presheaf& x, const Presheaf& y, SearchBudget budget = {}) {
  MapSearch search(x, y, budget);
  return search.run([](const auto&) { return true; });
}

/// Maps m: s -> t with t_over∘m = s_over (morphisms of the slice over a
/// common base presheaf).
inline std::vector<PresheafMap> enumerate_maps_over(const PresheafMap& s_over, const PresheafMap& t_over,
                                                    SearchBudget budget = {}) {
  if (!(s_over.target() == t_over.target())) throw ContractError("enumerate_maps_over: different slice bases");
  const auto& s = s_over.source();
  const auto& t = t_over.source();
  MapSearch search(s, t, budget);
  const auto& base = s.base();
  for (ObjectId c = 0; c < base.object_count(); ++c) {
    std::vector<std::vector<Elem>> fibre(t_over.target().size(c));
    for (Elem e = 0; e < t.size(c); ++e) fibre[t_over(c, e)].push_back(e);
    for (Elem x = 0; x < s.size(c); ++x) search.restrict(c, x, fibre[s_over(c, x)]);
  }
  std::vector<PresheafMap> out;
  search.run([&](const std::vector<std::vector<Elem>>& comps) {
    out.emplace_back(s, t, comps);
    return true;
  });
  return out;
}

/// Some isomorphism x -> y, searching all maps; the canonical-first one.
inline std::optional<PresheafMap> find_isomorphism(const Presheaf& x, const Presheaf& y, SearchBudget budget = {}) {
  if (x.sizes() != y.sizes()) return std::nullopt;
  MapSearch search(x, y, budget);
  std::optional<PresheafMap> found;
  search.run([&](const std::vector<std::vector<Elem>>& comps) {
    PresheafMap m(x, y, comps);
    if (is_iso(m)) {
      found = std::move(m);
      return false;
    }
    return true;
  });
  return found;
}

/// An isomorphism φ: source(a) -> source(b) with b∘φ = a, if one exists.
inline std::optional<PresheafMap> find_isomorphism_over(const PresheafMap& a, const PresheafMap& b,
                                                        SearchBudget budget = {}) {
  if (!(a.target() == b.target())) throw ContractError("find_isomorphism_over: maps have different targets");
  if (a.source().sizes() != b.source().sizes()) return std::nullopt;
  if (is_mono(b)) {
    auto phi = factor_through_mono(b, a);
    if (phi && is_iso(*phi)) return phi;
    return std::nullopt;
  }
  std::optional<PresheafMap> found;
  for (auto& m : enumerate_maps_over(a, b, budget)) {
    if (is_iso(m)) {
      found = std::move(m);
      break;
    }
  }
  return found;
}

} // namespace kanlab
