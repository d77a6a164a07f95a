#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace kanlab {

using ObjectId = std::size_t;
using MorphismId = std::size_t;

struct MorphismInfo {
  std::string id;
  ObjectId source;
  ObjectId target;

  friend bool operator==(const MorphismInfo&, const MorphismInfo&) = default;
};

/// Records how a category was produced so it can be serialized by reference.
struct PresetInfo {
  enum class Kind { none, simplex, cube, poset };
  Kind kind = Kind::none;
  std::size_t n = 0;
  std::vector<std::string> elements;                       // poset only
  std::vector<std::pair<std::string, std::string>> order;  // poset only, x <= y

  friend bool operator==(const PresetInfo&, const PresetInfo&) = default;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string v) { violations.push_back(std::move(v)); }
};

/// A finite category given by explicit tables. The composition table is
/// stored densely; entry (g, f) holds g∘f or is empty.
class IndexCategory {
public:
  IndexCategory(std::vector<std::string> objects, std::vector<MorphismInfo> morphisms,
                std::vector<MorphismId> identities,
                std::vector<std::tuple<MorphismId, MorphismId, MorphismId>> composites,
                PresetInfo preset = {})
      : objects_(std::move(objects)), morphisms_(std::move(morphisms)),
        identities_(std::move(identities)), preset_(std::move(preset)) {
    const std::size_t m = morphisms_.size();
    for (const auto& mi : morphisms_) {
      if (mi.source >= objects_.size() || mi.target >= objects_.size())
        throw ContractError("morphism '" + mi.id + "' has an endpoint outside the object list");
    }
    if (identities_.size() != objects_.size())
      throw ContractError("identity table must name one morphism per object");
    for (auto id : identities_)
      if (id >= m) throw ContractError("identity table refers to an unknown morphism");
    table_.assign(m * m, kUndefined);
    for (const auto& [g, f, gf] : composites) {
      if (g >= m || f >= m || gf >= m) throw ContractError("composition table refers to an unknown morphism");
      table_[g * m + f] = static_cast<std::int64_t>(gf);
    }
    hom_.assign(objects_.size() * objects_.size(), {});
    into_.assign(objects_.size(), {});
    for (MorphismId k = 0; k < m; ++k) {
      const auto& mi = morphisms_[k];
      hom_[mi.source * objects_.size() + mi.target].push_back(k);
      if (!is_identity(k)) into_[mi.target].push_back(k);
    }
  }

  std::size_t object_count() const { return objects_.size(); }
  std::size_t morphism_count() const { return morphisms_.size(); }
  const std::string& object_name(ObjectId c) const { return objects_.at(c); }
  const std::vector<std::string>& objects() const { return objects_; }
  const MorphismInfo& morphism(MorphismId f) const { return morphisms_.at(f); }
  const std::vector<MorphismInfo>& morphisms() const { return morphisms_; }
  ObjectId source(MorphismId f) const { return morphisms_.at(f).source; }
  ObjectId target(MorphismId f) const { return morphisms_.at(f).target; }
  MorphismId identity(ObjectId c) const { return identities_.at(c); }
  const std::vector<MorphismId>& identities() const { return identities_; }
  const PresetInfo& preset() const { return preset_; }

  bool is_identity(MorphismId f) const {
    return identities_[source(f)] == f;
  }

  std::optional<MorphismId> try_compose(MorphismId g, MorphismId f) const {
    const auto v = table_.at(g * morphisms_.size() + f);
    if (v == kUndefined) return std::nullopt;
    return static_cast<MorphismId>(v);
  }

  /// g∘f; throws if the pair is not composable or the table has a hole.
  MorphismId compose(MorphismId g, MorphismId f) const {
    if (target(f) != source(g))
      throw ContractError("cannot compose '" + morphism(g).id + "' after '" + morphism(f).id + "'");
    auto r = try_compose(g, f);
    if (!r) throw ContractError("composition table has no entry for ('" + morphism(g).id + "', '" + morphism(f).id + "')");
    return *r;
  }

  /// Morphisms a -> b, in table order.
  const std::vector<MorphismId>& hom(ObjectId a, ObjectId b) const {
    return hom_.at(a * objects_.size() + b);
  }

  /// Non-identity morphisms with target c (each acts out of level c).
  const std::vector<MorphismId>& into(ObjectId c) const { return into_.at(c); }

  std::optional<ObjectId> find_object(const std::string& name) const {
    for (ObjectId c = 0; c < objects_.size(); ++c)
      if (objects_[c] == name) return c;
    return std::nullopt;
  }

  ObjectId object(const std::string& name) const {
    if (auto c = find_object(name)) return *c;
    throw ContractError("unknown base object '" + name + "'");
  }

  std::optional<MorphismId> find_morphism(const std::string& id) const {
    for (MorphismId f = 0; f < morphisms_.size(); ++f)
      if (morphisms_[f].id == id) return f;
    return std::nullopt;
  }

  MorphismId morphism_by_id(const std::string& id) const {
    if (auto f = find_morphism(id)) return *f;
    throw ContractError("unknown base morphism '" + id + "'");
  }

  /// An object t with exactly one morphism c -> t for every c.
  std::optional<ObjectId> terminal_object() const {
    for (ObjectId t = 0; t < objects_.size(); ++t) {
      bool ok = true;
      for (ObjectId c = 0; c < objects_.size() && ok; ++c) ok = hom(c, t).size() == 1;
      if (ok) return t;
    }
    return std::nullopt;
  }

  /// All defined table entries as (g, f, g∘f), ordered by (g, f).
  std::vector<std::tuple<MorphismId, MorphismId, MorphismId>> composites() const {
    std::vector<std::tuple<MorphismId, MorphismId, MorphismId>> out;
    const std::size_t m = morphisms_.size();
    for (MorphismId g = 0; g < m; ++g)
      for (MorphismId f = 0; f < m; ++f)
        if (auto gf = try_compose(g, f)) out.emplace_back(g, f, *gf);
    return out;
  }

  friend bool operator==(const IndexCategory& a, const IndexCategory& b) {
    return a.objects_ == b.objects_ && a.morphisms_ == b.morphisms_ &&
           a.identities_ == b.identities_ && a.table_ == b.table_;
  }

private:
  static constexpr std::int64_t kUndefined = -1;

  std::vector<std::string> objects_;
  std::vector<MorphismInfo> morphisms_;
  std::vector<MorphismId> identities_;
  std::vector<std::int64_t> table_;
  std::vector<std::vector<MorphismId>> hom_;
  std::vector<std::vector<MorphismId>> into_;
  PresetInfo preset_;
};

using BasePtr = std::shared_ptr<const IndexCategory>;

inline bool same_base(const BasePtr& a, const BasePtr& b) {
  return a == b || (a && b && *a == *b);
}

/// Lists every violated category law; never throws.
inline ValidationReport validate_index_category(const IndexCategory& cat) {
  ValidationReport report;
  const std::size_t m = cat.morphism_count();
  auto name = [&](MorphismId f) { return "'" + cat.morphism(f).id + "'"; };

  for (ObjectId c = 0; c < cat.object_count(); ++c) {
    const auto id = cat.identity(c);
    if (cat.source(id) != c || cat.target(id) != c)
      report.add("identity of object '" + cat.object_name(c) + "' is not an endomorphism of it");
  }
  for (MorphismId g = 0; g < m; ++g) {
    for (MorphismId f = 0; f < m; ++f) {
      const bool composable = cat.target(f) == cat.source(g);
      const auto gf = cat.try_compose(g, f);
      if (composable && !gf) {
        report.add("missing composite for pair (" + name(g) + ", " + name(f) + ")");
      } else if (!composable && gf) {
        report.add("composite defined for non-composable pair (" + name(g) + ", " + name(f) + ")");
      } else if (gf && (cat.source(*gf) != cat.source(f) || cat.target(*gf) != cat.target(g))) {
        report.add("composite of (" + name(g) + ", " + name(f) + ") has the wrong endpoints");
      }
    }
  }
  if (!report.ok()) return report;

  for (MorphismId f = 0; f < m; ++f) {
    if (cat.compose(f, cat.identity(cat.source(f))) != f)
      report.add("right identity law fails for " + name(f));
    if (cat.compose(cat.identity(cat.target(f)), f) != f)
      report.add("left identity law fails for " + name(f));
  }
  for (MorphismId f = 0; f < m; ++f) {
    for (ObjectId b = 0; b < cat.object_count(); ++b) {
      for (MorphismId g : cat.hom(cat.target(f), b)) {
        const auto gf = cat.compose(g, f);
        for (ObjectId c = 0; c < cat.object_count(); ++c) {
          for (MorphismId h : cat.hom(b, c)) {
            if (cat.compose(h, gf) != cat.compose(cat.compose(h, g), f))
              report.add("associativity fails for (" + name(h) + ", " + name(g) + ", " + name(f) + ")");
          }
        }
      }
    }
  }
  return report;
}

namespace detail {

// Builds a category whose morphisms are concrete payloads composed by a
// user function. Morphism ids are produced by `label`.
template <class Payload, class Compose, class Label>
IndexCategory concrete_category(std::vector<std::string> objects,
                                std::vector<std::tuple<ObjectId, ObjectId, Payload>> arrows,
                                const std::vector<Payload>& identity_payloads, Compose&& comp,
                                Label&& label, PresetInfo preset) {
  std::map<std::tuple<ObjectId, ObjectId, Payload>, MorphismId> lookup;
  std::vector<MorphismInfo> infos;
  infos.reserve(arrows.size());
  for (MorphismId k = 0; k < arrows.size(); ++k) {
    const auto& [s, t, pl] = arrows[k];
    lookup.emplace(arrows[k], k);
    infos.push_back({label(s, t, pl), s, t});
  }
  std::vector<MorphismId> identities;
  for (ObjectId c = 0; c < objects.size(); ++c)
    identities.push_back(lookup.at({c, c, identity_payloads[c]}));
  std::vector<std::tuple<MorphismId, MorphismId, MorphismId>> composites;
  for (MorphismId g = 0; g < arrows.size(); ++g) {
    for (MorphismId f = 0; f < arrows.size(); ++f) {
      const auto& [gs, gt, gp] = arrows[g];
      const auto& [fs, ft, fp] = arrows[f];
      if (ft != gs) continue;
      composites.emplace_back(g, f, lookup.at({fs, gt, comp(gp, fp)}));
    }
  }
  return IndexCategory(std::move(objects), std::move(infos), std::move(identities),
                       std::move(composites), std::move(preset));
}

inline std::string bracket(std::size_t a) { return "[" + std::to_string(a) + "]"; }

} // namespace detail

inline constexpr std::size_t kDefaultSimplexBound = 4;
inline constexpr std::size_t kDefaultCubeBound = 3;

/// Truncated simplex category: objects [0..n], morphisms all order-preserving
/// maps {0<..<a} -> {0<..<b}. Morphism ids read "[a]->[b]:v0v1..va".
inline BasePtr preset_simplex(std::size_t n, std::size_t bound = kDefaultSimplexBound) {
  if (n > bound)
    throw SizeError("simplex truncation " + std::to_string(n) + " exceeds bound " + std::to_string(bound));
  using Map = std::vector<std::size_t>;
  std::vector<std::string> objects;
  std::vector<std::tuple<ObjectId, ObjectId, Map>> arrows;
  std::vector<Map> ids;
  for (std::size_t a = 0; a <= n; ++a) {
    objects.push_back(detail::bracket(a));
    Map id(a + 1);
    for (std::size_t k = 0; k <= a; ++k) id[k] = k;
    ids.push_back(id);
  }
  for (std::size_t a = 0; a <= n; ++a) {
    for (std::size_t b = 0; b <= n; ++b) {
      // monotone sequences of length a+1 with values in [0, b]
      Map cur(a + 1, 0);
      while (true) {
        arrows.emplace_back(a, b, cur);
        std::size_t pos = a + 1;
        while (pos > 0 && cur[pos - 1] == b) --pos;
        if (pos == 0) break;
        const std::size_t v = cur[pos - 1] + 1;
        for (std::size_t k = pos - 1; k <= a; ++k) cur[k] = v;
      }
    }
  }
  auto comp = [](const Map& g, const Map& f) {
    Map r(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) r[k] = g[f[k]];
    return r;
  };
  auto label = [](ObjectId s, ObjectId t, const Map& m) {
    std::string out = detail::bracket(s) + "->" + detail::bracket(t) + ":";
    for (auto v : m) out += std::to_string(v);
    return out;
  };
  PresetInfo info;
  info.kind = PresetInfo::Kind::simplex;
  info.n = n;
  return std::make_shared<const IndexCategory>(
      detail::concrete_category(std::move(objects), std::move(arrows), ids, comp, label, std::move(info)));
}

/// Truncated cartesian cube category: a morphism [m] -> [k] assigns to each
/// of the k target coordinates a source coordinate x0..x{m-1} or a constant.
/// Ids read "[m]->[k]:(t1,..,tk)".
inline BasePtr preset_cube(std::size_t n, std::size_t bound = kDefaultCubeBound) {
  if (n > bound)
    throw SizeError("cube truncation " + std::to_string(n) + " exceeds bound " + std::to_string(bound));
  // term encoding: 0, 1 constants; 2 + r is coordinate x_r
  using Map = std::vector<std::size_t>;
  std::vector<std::string> objects;
  std::vector<std::tuple<ObjectId, ObjectId, Map>> arrows;
  std::vector<Map> ids;
  for (std::size_t a = 0; a <= n; ++a) {
    objects.push_back(detail::bracket(a));
    Map id(a);
    for (std::size_t r = 0; r < a; ++r) id[r] = 2 + r;
    ids.push_back(id);
  }
  for (std::size_t m = 0; m <= n; ++m) {
    for (std::size_t k = 0; k <= n; ++k) {
      const std::size_t choices = m + 2;
      Map cur(k, 0);
      while (true) {
        arrows.emplace_back(m, k, cur);
        std::size_t pos = k;
        while (pos > 0 && cur[pos - 1] == choices - 1) cur[--pos] = 0;
        if (pos == 0) break;
        ++cur[pos - 1];
      }
    }
  }
  auto comp = [](const Map& g, const Map& f) {
    Map r(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) r[j] = g[j] < 2 ? g[j] : f[g[j] - 2];
    return r;
  };
  auto label = [](ObjectId s, ObjectId t, const Map& m) {
    std::string out = detail::bracket(s) + "->" + detail::bracket(t) + ":(";
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) out += ",";
      out += m[j] < 2 ? std::to_string(m[j]) : "x" + std::to_string(m[j] - 2);
    }
    return out + ")";
  };
  PresetInfo info;
  info.kind = PresetInfo::Kind::cube;
  info.n = n;
  return std::make_shared<const IndexCategory>(
      detail::concrete_category(std::move(objects), std::move(arrows), ids, comp, label, std::move(info)));
}

/// Thin category of a finite poset; the relation must be a partial order.
/// Morphism ids read "x<=y".
inline BasePtr preset_poset(const std::vector<std::string>& elements,
                            const std::vector<std::pair<std::string, std::string>>& relation) {
  const std::size_t n = elements.size();
  std::vector<char> le(n * n, 0);
  auto index = [&](const std::string& e) {
    auto it = std::find(elements.begin(), elements.end(), e);
    if (it == elements.end()) throw ContractError("poset relation mentions unknown element '" + e + "'");
    return static_cast<std::size_t>(it - elements.begin());
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (elements[a] == elements[b]) throw ContractError("duplicate poset element '" + elements[a] + "'");
  for (const auto& [x, y] : relation) le[index(x) * n + index(y)] = 1;
  for (std::size_t a = 0; a < n; ++a)
    if (!le[a * n + a]) throw ContractError("poset relation is not reflexive at '" + elements[a] + "'");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && le[a * n + b] && le[b * n + a])
        throw ContractError("poset relation is not antisymmetric on '" + elements[a] + "', '" + elements[b] + "'");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (le[a * n + b] && le[b * n + c] && !le[a * n + c])
          throw ContractError("poset relation is not transitive through '" + elements[b] + "'");

  using Payload = int;
  std::vector<std::tuple<ObjectId, ObjectId, Payload>> arrows;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (le[a * n + b]) arrows.emplace_back(a, b, 0);
  auto comp = [](Payload, Payload) { return 0; };
  auto label = [&](ObjectId s, ObjectId t, Payload) { return elements[s] + "<=" + elements[t]; };
  PresetInfo info;
  info.kind = PresetInfo::Kind::poset;
  info.n = n;
  info.elements = elements;
  info.order = relation;
  return std::make_shared<const IndexCategory>(detail::concrete_category(
      elements, std::move(arrows), std::vector<Payload>(n, 0), comp, label, std::move(info)));
}

/// The category with one object and one morphism.
inline BasePtr terminal_category() { return preset_simplex(0); }

} // namespace kanlab
