#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "index_category.hpp"

namespace kanlab {

/// Elements of a level are dense indices 0..size-1.
using Elem = std::size_t;

/// A finite presheaf: a set per base object and, for each base morphism
/// σ: d -> c, a function level(c) -> level(d). Immutable and cheap to copy.
class Presheaf {
public:
  Presheaf() = default;

  Presheaf(BasePtr base, std::vector<std::size_t> sizes, std::vector<std::vector<Elem>> actions) {
    if (!base) throw ContractError("presheaf needs a base category");
    if (sizes.size() != base->object_count())
      throw ContractError("presheaf has " + std::to_string(sizes.size()) + " levels but the base has " +
                          std::to_string(base->object_count()) + " objects");
    if (actions.size() != base->morphism_count())
      throw ContractError("presheaf must give one action per base morphism");
    for (MorphismId f = 0; f < actions.size(); ++f) {
      const auto& mi = base->morphism(f);
      if (actions[f].size() != sizes[mi.target])
        throw ContractError("action of '" + mi.id + "' has the wrong length");
      for (Elem v : actions[f])
        if (v >= sizes[mi.source]) throw ContractError("action of '" + mi.id + "' leaves its level");
    }
    data_ = std::make_shared<const Data>(Data{std::move(base), std::move(sizes), std::move(actions)});
  }

  /// Builds the action tables from a callback act(σ, x).
  template <class Act>
  static Presheaf build(BasePtr base, std::vector<std::size_t> sizes, Act&& act) {
    std::vector<std::vector<Elem>> actions(base->morphism_count());
    for (MorphismId f = 0; f < base->morphism_count(); ++f) {
      const auto c = base->target(f);
      actions[f].resize(sizes[c]);
      for (Elem x = 0; x < sizes[c]; ++x) actions[f][x] = act(f, x);
    }
    return Presheaf(std::move(base), std::move(sizes), std::move(actions));
  }

  bool valid() const { return static_cast<bool>(data_); }
  const IndexCategory& base() const { return *data_->base; }
  const BasePtr& base_ptr() const { return data_->base; }
  std::size_t size(ObjectId c) const { return data_->sizes.at(c); }
  const std::vector<std::size_t>& sizes() const { return data_->sizes; }
  Elem act(MorphismId f, Elem x) const { return data_->actions[f][x]; }
  const std::vector<Elem>& action(MorphismId f) const { return data_->actions.at(f); }
  const std::vector<std::vector<Elem>>& actions() const { return data_->actions; }

  std::size_t total_size() const {
    return std::accumulate(data_->sizes.begin(), data_->sizes.end(), std::size_t{0});
  }
  bool is_empty() const { return total_size() == 0; }

  friend bool operator==(const Presheaf& a, const Presheaf& b) {
    if (a.data_ == b.data_) return true;
    if (!a.data_ || !b.data_) return false;
    return same_base(a.data_->base, b.data_->base) && a.data_->sizes == b.data_->sizes &&
           a.data_->actions == b.data_->actions;
  }

private:
  struct Data {
    BasePtr base;
    std::vector<std::size_t> sizes;
    std::vector<std::vector<Elem>> actions;
  };
  std::shared_ptr<const Data> data_;
};

/// A natural transformation given by one component array per base object.
class PresheafMap {
public:
  PresheafMap() = default;

  PresheafMap(Presheaf source, Presheaf target, std::vector<std::vector<Elem>> components)
      : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
    if (!same_base(source_.base_ptr(), target_.base_ptr()))
      throw ContractError("map between presheaves over different bases");
    const auto& base = source_.base();
    if (components_.size() != base.object_count()) throw ContractError("map needs one component per base object");
    for (ObjectId c = 0; c < base.object_count(); ++c) {
      if (components_[c].size() != source_.size(c))
        throw ContractError("component at '" + base.object_name(c) + "' has the wrong length");
      for (Elem v : components_[c])
        if (v >= target_.size(c))
          throw ContractError("component at '" + base.object_name(c) + "' leaves the target level");
    }
  }

  template <class Fn>
  static PresheafMap build(Presheaf source, Presheaf target, Fn&& fn) {
    std::vector<std::vector<Elem>> comps(source.base().object_count());
    for (ObjectId c = 0; c < comps.size(); ++c) {
      comps[c].resize(source.size(c));
      for (Elem x = 0; x < source.size(c); ++x) comps[c][x] = fn(c, x);
    }
    return PresheafMap(std::move(source), std::move(target), std::move(comps));
  }

  const Presheaf& source() const { return source_; }
  const Presheaf& target() const { return target_; }
  Elem operator()(ObjectId c, Elem x) const { return components_[c][x]; }
  const std::vector<Elem>& component(ObjectId c) const { return components_.at(c); }
  const std::vector<std::vector<Elem>>& components() const { return components_; }
  const IndexCategory& base() const { return source_.base(); }

  friend bool operator==(const PresheafMap& a, const PresheafMap& b) {
    return a.components_ == b.components_ && a.source_ == b.source_ && a.target_ == b.target_;
  }

private:
  Presheaf source_;
  Presheaf target_;
  std::vector<std::vector<Elem>> components_;
};

inline void require_same_base(const Presheaf& a, const Presheaf& b, const char* what) {
  if (!same_base(a.base_ptr(), b.base_ptr())) throw ContractError(std::string(what) + ": presheaves over different bases");
}

inline ValidationReport validate_presheaf(const Presheaf& p) {
  ValidationReport report;
  const auto& base = p.base();
  for (ObjectId c = 0; c < base.object_count(); ++c) {
    const auto id = base.identity(c);
    for (Elem x = 0; x < p.size(c); ++x) {
      if (p.act(id, x) != x) {
        report.add("identity at '" + base.object_name(c) + "' does not act trivially");
        break;
      }
    }
  }
  // f: a -> b, g: b -> c; action(g∘f) must equal action(f)∘action(g)
  for (MorphismId f = 0; f < base.morphism_count(); ++f) {
    for (MorphismId g = 0; g < base.morphism_count(); ++g) {
      if (base.target(f) != base.source(g)) continue;
      const auto gf = base.compose(g, f);
      const auto c = base.target(g);
      for (Elem x = 0; x < p.size(c); ++x) {
        if (p.act(gf, x) != p.act(f, p.act(g, x))) {
          report.add("functoriality fails for pair ('" + base.morphism(g).id + "', '" + base.morphism(f).id + "')");
          break;
        }
      }
    }
  }
  return report;
}

inline ValidationReport validate_map(const PresheafMap& m) {
  ValidationReport report;
  const auto& base = m.base();
  for (MorphismId s = 0; s < base.morphism_count(); ++s) {
    const auto d = base.source(s);
    const auto c = base.target(s);
    for (Elem x = 0; x < m.source().size(c); ++x) {
      if (m(d, m.source().act(s, x)) != m.target().act(s, m(c, x))) {
        report.add("naturality fails along '" + base.morphism(s).id + "' at element " + std::to_string(x) +
                   " of level '" + base.object_name(c) + "'");
        break;
      }
    }
  }
  return report;
}

inline PresheafMap identity(const Presheaf& x) {
  return PresheafMap::build(x, x, [](ObjectId, Elem e) { return e; });
}

/// g∘f
inline PresheafMap compose(const PresheafMap& g, const PresheafMap& f) {
  if (!(f.target() == g.source())) throw ContractError("compose: target of f is not the source of g");
  return PresheafMap::build(f.source(), g.target(), [&](ObjectId c, Elem x) { return g(c, f(c, x)); });
}

template <class... Maps>
PresheafMap compose(const PresheafMap& h, const PresheafMap& g, const Maps&... rest) {
  return compose(h, compose(g, rest...));
}

inline bool is_mono(const PresheafMap& m) {
  for (ObjectId c = 0; c < m.base().object_count(); ++c) {
    std::vector<char> hit(m.target().size(c), 0);
    for (Elem v : m.component(c)) {
      if (hit[v]) return false;
      hit[v] = 1;
    }
  }
  return true;
}

inline bool is_epi(const PresheafMap& m) {
  for (ObjectId c = 0; c < m.base().object_count(); ++c) {
    std::vector<char> hit(m.target().size(c), 0);
    for (Elem v : m.component(c)) hit[v] = 1;
    for (char h : hit)
      if (!h) return false;
  }
  return true;
}

inline bool is_iso(const PresheafMap& m) { return is_mono(m) && is_epi(m); }

inline PresheafMap inverse(const PresheafMap& m) {
  if (!is_iso(m)) throw ContractError("inverse: map is not an isomorphism");
  std::vector<std::vector<Elem>> inv(m.base().object_count());
  for (ObjectId c = 0; c < inv.size(); ++c) {
    inv[c].resize(m.target().size(c));
    for (Elem x = 0; x < m.source().size(c); ++x) inv[c][m(c, x)] = x;
  }
  return PresheafMap(m.target(), m.source(), std::move(inv));
}

/// The unique w with m∘w = f, when it exists; m must be mono.
inline std::optional<PresheafMap> factor_through_mono(const PresheafMap& m, const PresheafMap& f) {
  if (!(m.target() == f.target())) throw ContractError("factor_through_mono: maps have different targets");
  if (!is_mono(m)) throw ContractError("factor_through_mono: map is not a monomorphism");
  std::vector<std::vector<Elem>> comps(m.base().object_count());
  for (ObjectId c = 0; c < comps.size(); ++c) {
    constexpr Elem none = static_cast<Elem>(-1);
    std::vector<Elem> pre(m.target().size(c), none);
    for (Elem x = 0; x < m.source().size(c); ++x) pre[m(c, x)] = x;
    for (Elem w = 0; w < f.source().size(c); ++w) {
      const Elem v = pre[f(c, w)];
      if (v == none) return std::nullopt;
      comps[c].push_back(v);
    }
  }
  return PresheafMap(f.source(), m.source(), std::move(comps));
}

inline Presheaf terminal(const BasePtr& base) {
  return Presheaf::build(base, std::vector<std::size_t>(base->object_count(), 1), [](MorphismId, Elem) { return Elem{0}; });
}

inline Presheaf initial(const BasePtr& base) {
  return Presheaf::build(base, std::vector<std::size_t>(base->object_count(), 0), [](MorphismId, Elem) { return Elem{0}; });
}

inline PresheafMap to_terminal(const Presheaf& x) {
  return PresheafMap::build(x, terminal(x.base_ptr()), [](ObjectId, Elem) { return Elem{0}; });
}

inline PresheafMap from_initial(const Presheaf& x) {
  return PresheafMap::build(initial(x.base_ptr()), x, [](ObjectId, Elem) { return Elem{0}; });
}

/// Representable presheaf: level(d) = Hom(d, c) in table order, acting by
/// precomposition.
inline Presheaf yoneda(const BasePtr& base, ObjectId c) {
  if (c >= base->object_count()) throw ContractError("yoneda: unknown object");
  std::vector<std::size_t> sizes(base->object_count());
  for (ObjectId d = 0; d < sizes.size(); ++d) sizes[d] = base->hom(d, c).size();
  return Presheaf::build(base, std::move(sizes), [&](MorphismId s, Elem x) {
    const auto d = base->target(s);
    const auto h = base->hom(d, c)[x];
    const auto hs = base->compose(h, s);
    const auto& dst = base->hom(base->source(s), c);
    return static_cast<Elem>(std::find(dst.begin(), dst.end(), hs) - dst.begin());
  });
}

inline Presheaf yoneda(const BasePtr& base, const std::string& object) { return yoneda(base, base->object(object)); }

/// Position of morphism h inside y(c) at level source(h).
inline Elem yoneda_index(const IndexCategory& base, MorphismId h) {
  const auto& hs = base.hom(base.source(h), base.target(h));
  return static_cast<Elem>(std::find(hs.begin(), hs.end(), h) - hs.begin());
}

/// The map y(c) -> X classifying x ∈ X(c).
inline PresheafMap yoneda_element(const Presheaf& x, ObjectId c, Elem e) {
  const auto y = yoneda(x.base_ptr(), c);
  return PresheafMap::build(y, x, [&](ObjectId d, Elem k) { return x.act(x.base().hom(d, c)[k], e); });
}

/// Presheaf generated by sets of elements closed under all actions; the
/// member mask must already be closed. Elements keep their relative order.
inline PresheafMap subpresheaf(const Presheaf& x, const std::vector<std::vector<char>>& member) {
  const auto& base = x.base();
  for (MorphismId s = 0; s < base.morphism_count(); ++s)
    for (Elem e = 0; e < x.size(base.target(s)); ++e)
      if (member[base.target(s)][e] && !member[base.source(s)][x.act(s, e)])
        throw ContractError("subpresheaf: membership is not closed under '" + base.morphism(s).id + "'");
  std::vector<std::vector<Elem>> incl(base.object_count());
  std::vector<std::vector<Elem>> index(base.object_count());
  std::vector<std::size_t> sizes(base.object_count());
  for (ObjectId c = 0; c < base.object_count(); ++c) {
    index[c].assign(x.size(c), 0);
    for (Elem e = 0; e < x.size(c); ++e)
      if (member[c][e]) {
        index[c][e] = incl[c].size();
        incl[c].push_back(e);
      }
    sizes[c] = incl[c].size();
  }
  auto sub = Presheaf::build(x.base_ptr(), sizes, [&](MorphismId s, Elem k) {
    return index[base.source(s)][x.act(s, incl[base.target(s)][k])];
  });
  return PresheafMap(std::move(sub), x, std::move(incl));
}

/// Closure of the seed elements (object, element) under all actions.
inline std::vector<std::vector<char>> generated_members(const Presheaf& x,
                                                        const std::vector<std::pair<ObjectId, Elem>>& seeds) {
  const auto& base = x.base();
  std::vector<std::vector<char>> member(base.object_count());
  for (ObjectId c = 0; c < member.size(); ++c) member[c].assign(x.size(c), 0);
  std::vector<std::pair<ObjectId, Elem>> stack(seeds.begin(), seeds.end());
  while (!stack.empty()) {
    auto [c, e] = stack.back();
    stack.pop_back();
    if (member[c][e]) continue;
    member[c][e] = 1;
    for (MorphismId s : base.into(c)) stack.emplace_back(base.source(s), x.act(s, e));
  }
  return member;
}

inline PresheafMap generated_subpresheaf(const Presheaf& x, const std::vector<std::pair<ObjectId, Elem>>& seeds) {
  return subpresheaf(x, generated_members(x, seeds));
}

/// Image factorization m = incl ∘ e: the image subpresheaf inclusion.
inline PresheafMap image(const PresheafMap& m) {
  std::vector<std::vector<char>> member(m.base().object_count());
  for (ObjectId c = 0; c < member.size(); ++c) {
    member[c].assign(m.target().size(c), 0);
    for (Elem v : m.component(c)) member[c][v] = 1;
  }
  return subpresheaf(m.target(), member);
}

/// Right adjoint to evaluation at c, applied to a k-element set:
/// level(d) = functions Hom(c, d) -> k, so maps P -> cofree(c, k)
/// correspond to functions P(c) -> k. Elements are base-k digit strings.
inline Presheaf cofree(const BasePtr& base, ObjectId c, std::size_t k) {
  std::vector<std::size_t> sizes(base->object_count());
  for (ObjectId d = 0; d < sizes.size(); ++d) {
    std::size_t n = 1;
    for (std::size_t r = 0; r < base->hom(c, d).size(); ++r) {
      n *= k;
      if (n > 1'000'000) throw SizeError("cofree presheaf level too large");
    }
    sizes[d] = n;
  }
  // digit r of an element at level d is its value on hom(c, d)[r], most
  // significant first
  auto digits = [&](ObjectId d, Elem e) {
    const auto& h = base->hom(c, d);
    std::vector<std::size_t> out(h.size());
    for (std::size_t r = h.size(); r-- > 0;) {
      out[r] = e % k;
      e /= k;
    }
    return out;
  };
  return Presheaf::build(base, sizes, [&](MorphismId s, Elem e) {
    // s: d' -> d; new value on ρ: c -> d' is old value on s∘ρ
    const auto d = base->target(s);
    const auto dp = base->source(s);
    const auto old = digits(d, e);
    const auto& hd = base->hom(c, d);
    Elem out = 0;
    for (MorphismId rho : base->hom(c, dp)) {
      const auto sr = base->compose(s, rho);
      const auto pos = static_cast<std::size_t>(std::find(hd.begin(), hd.end(), sr) - hd.begin());
      out = out * k + old[pos];
    }
    return out;
  });
}

/// Constant presheaf on k points (all actions identities).
inline Presheaf discrete(const BasePtr& base, std::size_t k) {
  return Presheaf::build(base, std::vector<std::size_t>(base->object_count(), k), [](MorphismId, Elem e) { return e; });
}

/// The global element 1 -> X determined by e ∈ X(t) for a terminal base
/// object t.
inline PresheafMap global_element(const Presheaf& x, Elem e) {
  const auto t = x.base().terminal_object();
  if (!t) throw ContractError("global_element: base has no terminal object");
  if (e >= x.size(*t)) throw ContractError("global_element: element out of range");
  return PresheafMap::build(terminal(x.base_ptr()), x,
                            [&](ObjectId c, Elem) { return x.act(x.base().hom(c, *t).front(), e); });
}

} // namespace kanlab
