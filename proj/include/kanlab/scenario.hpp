#pragma once

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "context.hpp"
#include "gtc.hpp"
#include "limits.hpp"
#include "serialize.hpp"

namespace kanlab {

inline constexpr const char* kScenarioSchema = "kanlab.scenario/1";

/// A scenario document after every reference has been resolved.
struct Scenario {
  std::string name;
  std::string description;
  BasePtr base;
  std::string interval;
  std::string cofibrations = "monomorphisms";
  NamedObjects objects;
  std::vector<std::string> fibrations;  // maps declared fibrant, witnessed by search
  json task;

  PresheafContext context(SearchBudget budget = {}) const {
    CofibrationClass cof = cofibrations == "all" ? CofibrationClass::all_maps() : CofibrationClass::monomorphisms();
    return PresheafContext(base, objects.presheaf(interval), std::move(cof), budget);
  }

  const std::string& task_kind() const { return task.at("kind").get_ref<const std::string&>(); }

  friend bool operator==(const Scenario& a, const Scenario& b) {
    return a.name == b.name && a.description == b.description && base_to_json(*a.base) == base_to_json(*b.base) &&
           a.interval == b.interval && a.cofibrations == b.cofibrations && a.objects == b.objects &&
           a.fibrations == b.fibrations && a.task == b.task;
  }
};

namespace detail {

inline const std::set<std::string>& task_kinds() {
  static const std::set<std::string> k{"validate", "lift", "gtc", "prop7", "cor9", "counterexample"};
  return k;
}

/// Resolves named constructors on demand, detecting cycles.
class ScenarioResolver {
public:
  ScenarioResolver(BasePtr base, const json& presheaves, const json& maps)
      : base_(std::move(base)), pj_(presheaves), mj_(maps) {}

  Presheaf presheaf(const std::string& name) {
    if (out_.has_presheaf(name)) return out_.presheaf(name);
    const std::string path = "presheaves." + name;
    if (!pj_.contains(name)) throw InputError("unknown presheaf '" + name + "'");
    if (!active_.insert("P" + name).second) throw InputError(path + ": definition is cyclic");
    auto x = build_presheaf(pj_[name], path);
    active_.erase("P" + name);
    out_.add(name, x);
    return x;
  }

  PresheafMap map(const std::string& name) {
    if (auto it = maps_.find(name); it != maps_.end()) return it->second.map;
    const std::string path = "maps." + name;
    if (!mj_.contains(name)) throw InputError("unknown map '" + name + "'");
    if (!active_.insert("M" + name).second) throw InputError(path + ": definition is cyclic");
    auto m = build_map(mj_[name], path);
    active_.erase("M" + name);
    Pending entry{m, {}, {}};
    if (const auto& j = mj_[name]; j.contains("explicit")) {
      entry.source = j["explicit"]["source"].get<std::string>();
      entry.target = j["explicit"]["target"].get<std::string>();
    }
    maps_.emplace(name, std::move(entry));
    return m;
  }

  /// Names the ends of every map once all presheaves are known; ends that
  /// match no declared presheaf are added as "<map>.source" / "<map>.target".
  NamedObjects take() {
    for (auto& [name, e] : maps_) {
      if (e.source.empty()) e.source = out_.name_of(e.map.source()).value_or("");
      if (e.target.empty()) e.target = out_.name_of(e.map.target()).value_or("");
      if (e.source.empty()) out_.add(e.source = name + ".source", e.map.source());
      if (e.target.empty()) out_.add(e.target = name + ".target", e.map.target());
      out_.add(name, e.map, e.source, e.target);
    }
    return std::move(out_);
  }

private:
  static std::pair<std::string, const json*> single(const json& j, const std::string& path) {
    if (!j.is_object() || j.size() != 1) throw InputError(path + ": expected an object with exactly one constructor");
    return {j.begin().key(), &j.begin().value()};
  }

  std::string str(const json& j, const std::string& path) { return get_as<std::string>(j, path); }

  std::pair<std::string, std::string> two(const json& j, const std::string& path) {
    auto v = get_as<std::vector<std::string>>(j, path);
    if (v.size() != 2) throw InputError(path + ": expected two names");
    return {v[0], v[1]};
  }

  int leg(const json& j, const std::string& path) {
    const auto l = get_as<int>(field(j, "leg", path), path + ".leg");
    if (l != 1 && l != 2) throw InputError(path + ".leg: must be 1 or 2");
    return l;
  }

  Presheaf build_presheaf(const json& j, const std::string& path) {
    const auto [kind, arg] = single(j, path);
    const auto p = path + "." + kind;
    if (kind == "explicit") return presheaf_from_json(base_, *arg, p);
    if (kind == "yoneda") return yoneda(base_, object_at(*base_, str(*arg, p), p));
    if (kind == "terminal") return terminal(base_);
    if (kind == "initial") return initial(base_);
    if (kind == "discrete") return discrete(base_, get_as<std::size_t>(*arg, p));
    if (kind == "cofree")
      return cofree(base_, object_at(*base_, str(field(*arg, "object", p), p + ".object"), p + ".object"),
                    get_as<std::size_t>(field(*arg, "k", p), p + ".k"));
    if (kind == "product") {
      auto [a, b] = two(*arg, p);
      return product(presheaf(a), presheaf(b)).apex;
    }
    if (kind == "coproduct") {
      auto [a, b] = two(*arg, p);
      return coproduct(presheaf(a), presheaf(b)).apex;
    }
    if (kind == "pullback") {
      auto [f, g] = two(*arg, p);
      return pullback(map(f), map(g)).apex;
    }
    if (kind == "pushout") {
      auto [f, g] = two(*arg, p);
      return pushout(map(f), map(g)).apex;
    }
    if (kind == "source") return map(str(*arg, p)).source();
    if (kind == "target") return map(str(*arg, p)).target();
    throw InputError(path + ": unknown presheaf constructor '" + kind + "'");
  }

  PresheafMap build_map(const json& j, const std::string& path) {
    const auto [kind, arg] = single(j, path);
    const auto p = path + "." + kind;
    if (kind == "explicit") {
      const auto s = presheaf(str(field(*arg, "source", p), p + ".source"));
      const auto t = presheaf(str(field(*arg, "target", p), p + ".target"));
      return map_from_json(s, t, field(*arg, "components", p), p + ".components");
    }
    if (kind == "identity") return identity(presheaf(str(*arg, p)));
    if (kind == "to_terminal") return to_terminal(presheaf(str(*arg, p)));
    if (kind == "from_initial") return from_initial(presheaf(str(*arg, p)));
    if (kind == "compose") {
      auto names = get_as<std::vector<std::string>>(*arg, p);
      if (names.empty()) throw InputError(p + ": nothing to compose");
      auto acc = map(names.back());
      for (auto it = names.rbegin() + 1; it != names.rend(); ++it) {
        const auto g = map(*it);
        if (!(g.source() == acc.target())) throw InputError(p + ": '" + *it + "' does not compose with its right neighbour");
        acc = compose(g, acc);
      }
      return acc;
    }
    if (kind == "projection" || kind == "injection") {
      auto [a, b] = two(field(*arg, "of", p), p + ".of");
      const auto l = leg(*arg, p);
      if (kind == "projection") return product(presheaf(a), presheaf(b)).leg(l == 1 ? "pr1" : "pr2");
      return coproduct(presheaf(a), presheaf(b)).leg(l == 1 ? "in1" : "in2");
    }
    if (kind == "pullback_leg" || kind == "pushout_leg") {
      auto [f, g] = two(field(*arg, "of", p), p + ".of");
      const auto l = leg(*arg, p);
      if (kind == "pullback_leg") return pullback(map(f), map(g)).leg(l == 1 ? "pr1" : "pr2");
      return pushout(map(f), map(g)).leg(l == 1 ? "in1" : "in2");
    }
    if (kind == "pair" || kind == "product_map" || kind == "copair") {
      auto [f, g] = two(*arg, p);
      const auto mf = map(f);
      const auto mg = map(g);
      if (kind == "pair") {
        if (!(mf.source() == mg.source())) throw InputError(p + ": maps have different sources");
        return pair(mf, mg);
      }
      if (kind == "product_map") return product_map(mf, mg);
      if (!(mf.target() == mg.target())) throw InputError(p + ": maps have different targets");
      return cogap(coproduct(mf.source(), mg.source()), mf, mg);
    }
    if (kind == "boundary") return boundary_inclusion(base_, get_as<std::size_t>(*arg, p));
    if (kind == "endpoint") {
      const auto eps = get_as<int>(*arg, p);
      if (eps != 0 && eps != 1) throw InputError(p + ": endpoint must be 0 or 1");
      return endpoint(base_, eps);
    }
    if (kind == "yoneda_element" || kind == "global_element") {
      const auto x = presheaf(str(field(*arg, "of", p), p + ".of"));
      const auto e = get_as<Elem>(field(*arg, "element", p), p + ".element");
      if (kind == "global_element") {
        if (!base_->terminal_object() || e >= x.size(*base_->terminal_object()))
          throw InputError(p + ": no such global element");
        return global_element(x, e);
      }
      const auto c = object_at(*base_, str(field(*arg, "object", p), p + ".object"), p + ".object");
      if (e >= x.size(c)) throw InputError(p + ".element: out of range");
      return yoneda_element(x, c, e);
    }
    if (kind == "inclusion") {
      const auto x = presheaf(str(field(*arg, "of", p), p + ".of"));
      std::vector<std::pair<ObjectId, Elem>> seeds;
      for (const auto& g : field(*arg, "generators", p)) {
        const auto pr = get_as<std::pair<std::string, Elem>>(g, p + ".generators");
        const auto c = object_at(*base_, pr.first, p + ".generators");
        if (pr.second >= x.size(c)) throw InputError(p + ".generators: element out of range");
        seeds.emplace_back(c, pr.second);
      }
      return generated_subpresheaf(x, seeds);
    }
    if (kind == "constant") {
      const auto x = presheaf(str(field(*arg, "from", p), p + ".from"));
      const auto pt = map(str(field(*arg, "point", p), p + ".point"));
      if (!(pt.source() == terminal(base_))) throw InputError(p + ".point: must be a map out of the terminal presheaf");
      return compose(pt, to_terminal(x));
    }
    throw InputError(path + ": unknown map constructor '" + kind + "'");
  }

  BasePtr base_;
  const json& pj_;
  const json& mj_;
  struct Pending {
    PresheafMap map;
    std::string source;
    std::string target;
  };

  std::set<std::string> active_;
  std::map<std::string, Pending> maps_;
  NamedObjects out_;
};

} // namespace detail

/// Parses and resolves a scenario document; all declared objects are
/// validated before this returns.
inline Scenario load_scenario(const json& doc) {
  using detail::field;
  using detail::get_as;
  const auto schema = get_as<std::string>(field(doc, "schema", "scenario"), "schema");
  if (schema != kScenarioSchema) throw InputError("schema: unsupported schema '" + schema + "'");
  Scenario s;
  s.name = get_as<std::string>(field(doc, "name", "scenario"), "name");
  if (doc.contains("description")) s.description = get_as<std::string>(doc["description"], "description");
  s.base = base_from_json(field(doc, "base", "scenario"), "base");
  s.interval = get_as<std::string>(field(doc, "interval", "scenario"), "interval");
  if (doc.contains("cofibrations")) s.cofibrations = get_as<std::string>(doc["cofibrations"], "cofibrations");
  if (s.cofibrations != "monomorphisms" && s.cofibrations != "all")
    throw InputError("cofibrations: must be 'monomorphisms' or 'all'");
  const json empty = json::object();
  const auto& pj = doc.contains("presheaves") ? doc["presheaves"] : empty;
  const auto& mj = doc.contains("maps") ? doc["maps"] : empty;
  if (!pj.is_object()) throw InputError("presheaves: expected an object");
  if (!mj.is_object()) throw InputError("maps: expected an object");
  detail::ScenarioResolver resolver(s.base, pj, mj);
  try {
    for (const auto& [name, v] : pj.items()) resolver.presheaf(name);
    for (const auto& [name, v] : mj.items()) resolver.map(name);
  } catch (const InputError&) {
    throw;
  } catch (const ContractError& e) {
    throw InputError(e.what());
  }
  s.objects = resolver.take();
  if (!s.objects.has_presheaf(s.interval)) throw InputError("interval: unknown presheaf '" + s.interval + "'");
  if (doc.contains("fibrations")) s.fibrations = get_as<std::vector<std::string>>(doc["fibrations"], "fibrations");
  for (const auto& f : s.fibrations)
    if (!s.objects.has_map(f)) throw InputError("fibrations: unknown map '" + f + "'");
  s.task = field(doc, "task", "scenario");
  const auto kind = get_as<std::string>(field(s.task, "kind", "task"), "task.kind");
  if (!detail::task_kinds().count(kind)) throw InputError("task.kind: unknown task '" + kind + "'");

  for (const auto& [name, x] : s.objects.presheaves())
    if (auto r = validate_presheaf(x); !r.ok()) throw InputError("presheaves." + name + ": " + r.violations.front());
  for (const auto& [name, e] : s.objects.maps())
    if (auto r = validate_map(e.map); !r.ok()) throw InputError("maps." + name + ": " + r.violations.front());
  return s;
}

/// Scenario with every object written out as explicit tables.
inline json emit_scenario(const Scenario& s) {
  json ps = json::object();
  for (const auto& [name, x] : s.objects.presheaves()) ps[name] = {{"explicit", presheaf_to_json(x)}};
  json ms = json::object();
  for (const auto& [name, e] : s.objects.maps())
    ms[name] = {{"explicit", {{"source", e.source}, {"target", e.target}, {"components", components_to_json(e.map)}}}};
  json out = {{"schema", kScenarioSchema}, {"name", s.name},       {"base", base_to_json(*s.base)},
              {"interval", s.interval},    {"cofibrations", s.cofibrations}, {"presheaves", ps},
              {"maps", ms},                {"fibrations", s.fibrations},     {"task", s.task}};
  if (!s.description.empty()) out["description"] = s.description;
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Scenario load_scenario_file(const std::string& path) {
  return load_scenario(parse_json_text(read_text_file(path), path));
}

} // namespace kanlab
