#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "index_category.hpp"
#include "presheaf.hpp"

namespace kanlab {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw InputError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(path + ": missing field '" + key + "'");
  return *it;
}

template <class T>
T get_as(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline ObjectId object_at(const IndexCategory& base, const std::string& name, const std::string& path) {
  if (auto c = base.find_object(name)) return *c;
  throw InputError(path + ": unknown base object '" + name + "'");
}

} // namespace detail

inline json base_to_json(const IndexCategory& base) {
  const auto& pi = base.preset();
  switch (pi.kind) {
  case PresetInfo::Kind::simplex: return {{"preset", "simplex"}, {"n", pi.n}};
  case PresetInfo::Kind::cube: return {{"preset", "cube"}, {"n", pi.n}};
  case PresetInfo::Kind::poset: {
    json order = json::array();
    for (const auto& [x, y] : pi.order) order.push_back({x, y});
    return {{"preset", "poset"}, {"elements", pi.elements}, {"order", order}};
  }
  case PresetInfo::Kind::none: break;
  }
  json morphisms = json::array();
  for (const auto& m : base.morphisms())
    morphisms.push_back({{"id", m.id}, {"source", base.object_name(m.source)}, {"target", base.object_name(m.target)}});
  json identities = json::object();
  for (ObjectId c = 0; c < base.object_count(); ++c)
    identities[base.object_name(c)] = base.morphism(base.identity(c)).id;
  json composites = json::array();
  for (const auto& [g, f, gf] : base.composites())
    composites.push_back({base.morphism(g).id, base.morphism(f).id, base.morphism(gf).id});
  return {{"objects", base.objects()}, {"morphisms", morphisms}, {"identities", identities}, {"composites", composites}};
}

inline BasePtr base_from_json(const json& j, const std::string& path = "base") {
  if (j.contains("preset")) {
    const auto kind = detail::get_as<std::string>(j["preset"], path + ".preset");
    if (kind == "simplex" || kind == "cube") {
      const auto n = detail::get_as<std::size_t>(detail::field(j, "n", path), path + ".n");
      return kind == "simplex" ? preset_simplex(n) : preset_cube(n);
    }
    if (kind == "poset") {
      auto elements = detail::get_as<std::vector<std::string>>(detail::field(j, "elements", path), path + ".elements");
      auto order = detail::get_as<std::vector<std::pair<std::string, std::string>>>(detail::field(j, "order", path),
                                                                                     path + ".order");
      return preset_poset(elements, order);
    }
    throw InputError(path + ".preset: unknown preset '" + kind + "'");
  }
  auto objects = detail::get_as<std::vector<std::string>>(detail::field(j, "objects", path), path + ".objects");
  std::map<std::string, ObjectId> obj;
  for (ObjectId c = 0; c < objects.size(); ++c)
    if (!obj.emplace(objects[c], c).second) throw InputError(path + ".objects: duplicate object '" + objects[c] + "'");
  auto find_obj = [&](const std::string& name, const std::string& p) {
    auto it = obj.find(name);
    if (it == obj.end()) throw InputError(p + ": unknown object '" + name + "'");
    return it->second;
  };
  std::vector<MorphismInfo> morphisms;
  std::map<std::string, MorphismId> mor;
  const auto& jm = detail::field(j, "morphisms", path);
  for (std::size_t k = 0; k < jm.size(); ++k) {
    const auto p = path + ".morphisms[" + std::to_string(k) + "]";
    auto id = detail::get_as<std::string>(detail::field(jm[k], "id", p), p + ".id");
    auto s = find_obj(detail::get_as<std::string>(detail::field(jm[k], "source", p), p), p + ".source");
    auto t = find_obj(detail::get_as<std::string>(detail::field(jm[k], "target", p), p), p + ".target");
    if (!mor.emplace(id, morphisms.size()).second) throw InputError(p + ": duplicate morphism id '" + id + "'");
    morphisms.push_back({id, s, t});
  }
  auto find_mor = [&](const std::string& id, const std::string& p) {
    auto it = mor.find(id);
    if (it == mor.end()) throw InputError(p + ": unknown morphism '" + id + "'");
    return it->second;
  };
  std::vector<MorphismId> identities(objects.size());
  const auto& ji = detail::field(j, "identities", path);
  for (ObjectId c = 0; c < objects.size(); ++c)
    identities[c] = find_mor(detail::get_as<std::string>(detail::field(ji, objects[c], path + ".identities"),
                                                         path + ".identities"),
                             path + ".identities." + objects[c]);
  std::vector<std::tuple<MorphismId, MorphismId, MorphismId>> composites;
  const auto& jc = detail::field(j, "composites", path);
  for (std::size_t k = 0; k < jc.size(); ++k) {
    const auto p = path + ".composites[" + std::to_string(k) + "]";
    auto t = detail::get_as<std::vector<std::string>>(jc[k], p);
    if (t.size() != 3) throw InputError(p + ": expected [g, f, g o f]");
    composites.emplace_back(find_mor(t[0], p), find_mor(t[1], p), find_mor(t[2], p));
  }
  auto cat = std::make_shared<const IndexCategory>(std::move(objects), std::move(morphisms), std::move(identities),
                                                   std::move(composites));
  if (auto r = validate_index_category(*cat); !r.ok()) throw InputError(path + ": " + r.violations.front());
  return cat;
}

/// Sizes by object name and non-identity actions by morphism id.
inline json presheaf_to_json(const Presheaf& x) {
  const auto& base = x.base();
  json sizes = json::object();
  for (ObjectId c = 0; c < base.object_count(); ++c) sizes[base.object_name(c)] = x.size(c);
  json actions = json::object();
  for (MorphismId f = 0; f < base.morphism_count(); ++f)
    if (!base.is_identity(f)) actions[base.morphism(f).id] = x.action(f);
  return {{"sizes", sizes}, {"actions", actions}};
}

inline Presheaf presheaf_from_json(const BasePtr& base, const json& j, const std::string& path) {
  const auto& js = detail::field(j, "sizes", path);
  std::vector<std::size_t> sizes(base->object_count());
  for (ObjectId c = 0; c < sizes.size(); ++c)
    sizes[c] = detail::get_as<std::size_t>(detail::field(js, base->object_name(c), path + ".sizes"),
                                           path + ".sizes." + base->object_name(c));
  const json empty = json::object();
  const auto& ja = j.contains("actions") ? j["actions"] : empty;
  for (const auto& [key, value] : ja.items())
    if (!base->find_morphism(key)) throw InputError(path + ".actions: unknown morphism '" + key + "'");
  std::vector<std::vector<Elem>> actions(base->morphism_count());
  for (MorphismId f = 0; f < actions.size(); ++f) {
    const auto& mi = base->morphism(f);
    if (base->is_identity(f)) {
      actions[f].resize(sizes[mi.target]);
      for (Elem e = 0; e < actions[f].size(); ++e) actions[f][e] = e;
      if (ja.contains(mi.id) &&
          detail::get_as<std::vector<Elem>>(ja[mi.id], path + ".actions." + mi.id) != actions[f])
        throw InputError(path + ".actions." + mi.id + ": identity must act trivially");
      continue;
    }
    if (!ja.contains(mi.id)) throw InputError(path + ".actions: missing action of '" + mi.id + "'");
    actions[f] = detail::get_as<std::vector<Elem>>(ja[mi.id], path + ".actions." + mi.id);
  }
  try {
    return Presheaf(base, std::move(sizes), std::move(actions));
  } catch (const ContractError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline json components_to_json(const PresheafMap& m) {
  json out = json::object();
  for (ObjectId c = 0; c < m.base().object_count(); ++c) out[m.base().object_name(c)] = m.component(c);
  return out;
}

inline PresheafMap map_from_json(const Presheaf& source, const Presheaf& target, const json& j,
                                 const std::string& path) {
  const auto& base = source.base();
  std::vector<std::vector<Elem>> comps(base.object_count());
  for (ObjectId c = 0; c < comps.size(); ++c)
    comps[c] = detail::get_as<std::vector<Elem>>(detail::field(j, base.object_name(c), path),
                                                 path + "." + base.object_name(c));
  try {
    return PresheafMap(source, target, std::move(comps));
  } catch (const ContractError& e) {
    throw InputError(path + ": " + e.what());
  }
}

/// Presheaves and maps under names; maps remember the names of their ends.
class NamedObjects {
public:
  struct MapEntry {
    PresheafMap map;
    std::string source;
    std::string target;
  };

  void add(const std::string& name, Presheaf x) {
    if (presheaves_.count(name) && !(presheaves_.at(name) == x))
      throw ContractError("presheaf name '" + name + "' is already bound");
    presheaves_.insert_or_assign(name, std::move(x));
  }

  void add(const std::string& name, PresheafMap m) {
    auto s = name_of(m.source());
    auto t = name_of(m.target());
    if (!s || !t) throw ContractError("map '" + name + "' has an unnamed end");
    maps_.insert_or_assign(name, MapEntry{std::move(m), *s, *t});
  }

  void add(const std::string& name, PresheafMap m, std::string source, std::string target) {
    if (!(presheaf(source) == m.source()) || !(presheaf(target) == m.target()))
      throw ContractError("map '" + name + "' does not run from '" + source + "' to '" + target + "'");
    maps_.insert_or_assign(name, MapEntry{std::move(m), std::move(source), std::move(target)});
  }

  std::optional<std::string> name_of(const Presheaf& x) const {
    for (const auto& [name, p] : presheaves_)
      if (p == x) return name;
    return std::nullopt;
  }

  bool has_presheaf(const std::string& name) const { return presheaves_.count(name) != 0; }
  bool has_map(const std::string& name) const { return maps_.count(name) != 0; }

  const Presheaf& presheaf(const std::string& name) const {
    auto it = presheaves_.find(name);
    if (it == presheaves_.end()) throw InputError("unknown presheaf '" + name + "'");
    return it->second;
  }

  const PresheafMap& map(const std::string& name) const { return entry(name).map; }

  const MapEntry& entry(const std::string& name) const {
    auto it = maps_.find(name);
    if (it == maps_.end()) throw InputError("unknown map '" + name + "'");
    return it->second;
  }

  const std::map<std::string, Presheaf>& presheaves() const { return presheaves_; }
  const std::map<std::string, MapEntry>& maps() const { return maps_; }

  friend bool operator==(const NamedObjects& a, const NamedObjects& b) {
    if (a.presheaves_ != b.presheaves_ || a.maps_.size() != b.maps_.size()) return false;
    for (const auto& [name, e] : a.maps_) {
      auto it = b.maps_.find(name);
      if (it == b.maps_.end() || !(it->second.map == e.map) || it->second.source != e.source ||
          it->second.target != e.target)
        return false;
    }
    return true;
  }

private:
  std::map<std::string, Presheaf> presheaves_;
  std::map<std::string, MapEntry> maps_;
};

inline json objects_to_json(const NamedObjects& objs) {
  json ps = json::object();
  for (const auto& [name, x] : objs.presheaves()) ps[name] = presheaf_to_json(x);
  json ms = json::object();
  for (const auto& [name, e] : objs.maps())
    ms[name] = {{"source", e.source}, {"target", e.target}, {"components", components_to_json(e.map)}};
  return {{"presheaves", ps}, {"maps", ms}};
}

inline NamedObjects objects_from_json(const BasePtr& base, const json& j, const std::string& path = "") {
  NamedObjects out;
  for (const auto& [name, value] : detail::field(j, "presheaves", path).items())
    out.add(name, presheaf_from_json(base, value, path + "presheaves." + name));
  for (const auto& [name, value] : detail::field(j, "maps", path).items()) {
    const auto p = path + "maps." + name;
    const auto s = detail::get_as<std::string>(detail::field(value, "source", p), p + ".source");
    const auto t = detail::get_as<std::string>(detail::field(value, "target", p), p + ".target");
    if (!out.has_presheaf(s)) throw InputError(p + ".source: unknown presheaf '" + s + "'");
    if (!out.has_presheaf(t)) throw InputError(p + ".target: unknown presheaf '" + t + "'");
    out.add(name, map_from_json(out.presheaf(s), out.presheaf(t), detail::field(value, "components", p),
                                p + ".components"),
            s, t);
  }
  return out;
}

/// Parses text, turning syntax errors into InputError with line and column.
inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(origin + ": " + e.what());
  }
}

} // namespace kanlab
