#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "context.hpp"
#include "frobenius.hpp"
#include "limits.hpp"
#include "serialize.hpp"
#include "transcript.hpp"

namespace kanlab {

inline constexpr const char* kCertificateSchema = "kanlab.certificate/1";

/// Every object and morphism of a retract certificate under a fixed name.
inline NamedObjects certificate_objects(const PresheafContext& ctx, const RetractCertificate& cert) {
  const auto& cube = cert.cube;
  const auto& gtc = cube.gtc;
  const auto& I = ctx.interval();
  NamedObjects o;
  o.add("I", I);
  o.add("Z", gtc.c.target());
  o.add("C", gtc.c.source());
  o.add("ZI", gtc.codomain());
  o.add("D", gtc.D());
  o.add("X", cube.X());
  o.add("XZ", cube.XZ());
  o.add("XCI", cube.XCI());
  o.add("XC", cube.XC());
  o.add("XD", cube.XD());
  const auto xi = product(cube.X(), I);
  const auto xci_i = product(cube.XCI(), I);
  o.add("XI", xi.apex);
  o.add("XCI_I", xci_i.apex);
  o.add("VD", cert.v.D());

  o.add("c", gtc.c, "C", "Z");
  o.add("i", gtc.i, "Z", "I");
  o.add("u", gtc.u, "D", "ZI");
  o.add("p", cube.p, "X", "ZI");
  o.add("z", cube.z, "X", "Z");
  o.add("t", cube.t, "X", "I");
  o.add("pr1_ZI", gtc.z_times_i.leg("pr1"), "ZI", "Z");
  o.add("pr2_ZI", gtc.z_times_i.leg("pr2"), "ZI", "I");
  o.add("pr1_XI", xi.leg("pr1"), "XI", "X");
  o.add("pr2_XI", xi.leg("pr2"), "XI", "I");
  o.add("pr1_XCI_I", xci_i.leg("pr1"), "XCI_I", "XCI");
  o.add("pr2_XCI_I", xci_i.leg("pr2"), "XCI_I", "I");
  o.add("a", cube.a, "XZ", "X");
  o.add("b", cube.b, "XCI", "X");
  o.add("e_z", cube.e_z(), "XC", "XZ");
  o.add("e_ci", cube.e_ci(), "XC", "XCI");
  o.add("xd_in1", cube.x_d.leg("in1"), "XZ", "XD");
  o.add("xd_in2", cube.x_d.leg("in2"), "XCI", "XD");
  o.add("pstar_u", cube.pstar_u, "XD", "X");
  o.add("graph_t", cert.graph_t, "X", "XI");
  o.add("graph_iz", cert.graph_iz, "X", "XI");
  o.add("H", cert.H, "XI", "X");
  o.add("z_times_1", product_map(cube.z, identity(I)), "XI", "ZI");
  o.add("dagger1_left", cert.dagger1_left, "XZ", "X");
  o.add("dagger1_right", cert.dagger1_right, "X", "XZ");
  o.add("dagger2_left", cert.dagger2_left, "XCI", "XCI_I");
  o.add("dagger2_right", cert.dagger2_right, "XCI_I", "XCI");
  o.add("b_times_1", product_map(cube.b, identity(I)), "XCI_I", "XI");
  o.add("v_u", cert.v.u, "VD", "XI");
  o.add("v_in1", cert.v.domain.leg("in1"), "X", "VD");
  o.add("v_in2", cert.v.domain.leg("in2"), "XCI_I", "VD");
  o.add("s_dom", cert.retract.s_dom, "XD", "VD");
  o.add("r_dom", cert.retract.r_dom, "VD", "XD");
  o.add("s_cod", cert.retract.s_cod, "X", "XI");
  o.add("r_cod", cert.retract.r_cod, "XI", "X");
  return o;
}

namespace detail {

struct CertificateEquation {
  std::string name;
  std::vector<std::string> lhs;  // composite, rightmost applied first
  std::vector<std::string> rhs;  // "id:<presheaf>" for an identity
};

inline const std::vector<std::pair<std::string, std::pair<std::string, std::string>>>& certificate_typing() {
  static const std::vector<std::pair<std::string, std::pair<std::string, std::string>>> t = {
      {"c", {"C", "Z"}},          {"i", {"Z", "I"}},           {"u", {"D", "ZI"}},
      {"p", {"X", "ZI"}},         {"z", {"X", "Z"}},           {"t", {"X", "I"}},
      {"pr1_ZI", {"ZI", "Z"}},    {"pr2_ZI", {"ZI", "I"}},     {"pr1_XI", {"XI", "X"}},
      {"pr2_XI", {"XI", "I"}},    {"pr1_XCI_I", {"XCI_I", "XCI"}}, {"pr2_XCI_I", {"XCI_I", "I"}},
      {"a", {"XZ", "X"}},         {"b", {"XCI", "X"}},         {"e_z", {"XC", "XZ"}},
      {"e_ci", {"XC", "XCI"}},    {"xd_in1", {"XZ", "XD"}},    {"xd_in2", {"XCI", "XD"}},
      {"pstar_u", {"XD", "X"}},   {"graph_t", {"X", "XI"}},    {"graph_iz", {"X", "XI"}},
      {"H", {"XI", "X"}},         {"z_times_1", {"XI", "ZI"}}, {"dagger1_left", {"XZ", "X"}},
      {"dagger1_right", {"X", "XZ"}}, {"dagger2_left", {"XCI", "XCI_I"}}, {"dagger2_right", {"XCI_I", "XCI"}},
      {"b_times_1", {"XCI_I", "XI"}}, {"v_u", {"VD", "XI"}},   {"v_in1", {"X", "VD"}},
      {"v_in2", {"XCI_I", "VD"}}, {"s_dom", {"XD", "VD"}},     {"r_dom", {"VD", "XD"}},
      {"s_cod", {"X", "XI"}},     {"r_cod", {"XI", "X"}},
  };
  return t;
}

inline const std::vector<CertificateEquation>& certificate_equations() {
  static const std::vector<CertificateEquation> eqs = {
      {"p = <z,t> (first)", {"pr1_ZI", "p"}, {"z"}},
      {"p = <z,t> (second)", {"pr2_ZI", "p"}, {"t"}},
      {"<1,t> is a graph (first)", {"pr1_XI", "graph_t"}, {"id:X"}},
      {"<1,t> is a graph (second)", {"pr2_XI", "graph_t"}, {"t"}},
      {"<1,iz> is a graph (first)", {"pr1_XI", "graph_iz"}, {"id:X"}},
      {"<1,iz> is a graph (second)", {"pr2_XI", "graph_iz"}, {"i", "z"}},
      {"z x 1 (first)", {"pr1_ZI", "z_times_1"}, {"z", "pr1_XI"}},
      {"z x 1 (second)", {"pr2_ZI", "z_times_1"}, {"pr2_XI"}},
      {"b x 1 (first)", {"pr1_XI", "b_times_1"}, {"b", "pr1_XCI_I"}},
      {"b x 1 (second)", {"pr2_XI", "b_times_1"}, {"pr2_XCI_I"}},
      {"H o <1,t> = id", {"H", "graph_t"}, {"id:X"}},
      {"z o H = z o pr1", {"z", "H"}, {"z", "pr1_XI"}},
      {"t o H = pr2", {"t", "H"}, {"pr2_XI"}},
      {"p o H = z x 1", {"p", "H"}, {"z_times_1"}},
      {"top face commutes", {"a", "e_z"}, {"b", "e_ci"}},
      {"p*u restricts to a", {"pstar_u", "xd_in1"}, {"a"}},
      {"p*u restricts to b", {"pstar_u", "xd_in2"}, {"b"}},
      {"a equalizes iz and t", {"i", "z", "a"}, {"t", "a"}},
      {"dagger1 left arrow is a", {"dagger1_left"}, {"a"}},
      {"dagger1 left square", {"graph_iz", "dagger1_left"}, {"graph_t", "dagger1_left"}},
      {"dagger1 right square", {"dagger1_left", "dagger1_right"}, {"H", "graph_iz"}},
      {"dagger1 top composite", {"dagger1_right", "dagger1_left"}, {"id:XZ"}},
      {"dagger1 bottom composite", {"H", "graph_t"}, {"id:X"}},
      {"dagger2 left square", {"b_times_1", "dagger2_left"}, {"graph_t", "b"}},
      {"dagger2 right square", {"b", "dagger2_right"}, {"H", "b_times_1"}},
      {"dagger2 top composite", {"dagger2_right", "dagger2_left"}, {"id:XCI"}},
      {"dagger2 left arrow is <1,tb>", {"pr2_XCI_I", "dagger2_left"}, {"t", "b"}},
      {"v cocone on X", {"v_u", "v_in1"}, {"graph_iz"}},
      {"v cocone on XCI x I", {"v_u", "v_in2"}, {"b_times_1"}},
      {"v square commutes", {"v_in1", "b"}, {"v_in2", "graph_izb"}},
      {"section on X_Z", {"s_dom", "xd_in1"}, {"v_in1", "a"}},
      {"section on X_CxI", {"s_dom", "xd_in2"}, {"v_in2", "dagger2_left"}},
      {"retraction on X", {"r_dom", "v_in1"}, {"xd_in1", "dagger1_right"}},
      {"retraction on XCI x I", {"r_dom", "v_in2"}, {"xd_in2", "dagger2_right"}},
      {"s_cod = <1,t>", {"s_cod"}, {"graph_t"}},
      {"r_cod = H", {"r_cod"}, {"H"}},
      {"retract: r_dom o s_dom = id", {"r_dom", "s_dom"}, {"id:XD"}},
      {"retract: r_cod o s_cod = id", {"r_cod", "s_cod"}, {"id:X"}},
      {"retract: v o s_dom = s_cod o p*u", {"v_u", "s_dom"}, {"s_cod", "pstar_u"}},
      {"retract: p*u o r_dom = r_cod o v", {"pstar_u", "r_dom"}, {"r_cod", "v_u"}},
  };
  return eqs;
}

} // namespace detail

/// Checks a certificate from its raw tables alone: typing, naturality of
/// every map, and every equation, recomputing all composites.
inline Transcript reverify_certificate(const NamedObjects& o) {
  Transcript tr;
  for (const auto& [name, x] : o.presheaves()) tr.add("presheaf " + name + " is valid", validate_presheaf(x).ok());
  for (const auto& [name, ends] : detail::certificate_typing()) {
    if (!o.has_map(name)) {
      tr.add("map " + name + " is present", false);
      continue;
    }
    const auto& e = o.entry(name);
    tr.add("map " + name + " is typed " + ends.first + " -> " + ends.second,
           e.source == ends.first && e.target == ends.second);
    tr.add("map " + name + " is natural", validate_map(e.map).ok());
  }
  if (!tr.all_passed()) return tr;

  // ⟨1, izb⟩ enters the v-square check and is rebuilt from its components
  const auto& b = o.map("b");
  const auto izb = compose(o.map("i"), compose(o.map("z"), b));
  const auto xci_i = o.presheaf("XCI_I");
  const auto& pr1 = o.map("pr1_XCI_I");
  const auto& pr2 = o.map("pr2_XCI_I");
  std::optional<PresheafMap> graph_izb;
  {
    std::vector<std::vector<Elem>> comps(b.base().object_count());
    bool ok = true;
    for (ObjectId c = 0; c < comps.size() && ok; ++c) {
      for (Elem x = 0; x < b.source().size(c) && ok; ++x) {
        Elem found = static_cast<Elem>(-1);
        for (Elem w = 0; w < xci_i.size(c); ++w)
          if (pr1(c, w) == x && pr2(c, w) == izb(c, x)) found = w;
        ok = found != static_cast<Elem>(-1);
        comps[c].push_back(found);
      }
    }
    tr.add("<1,izb> exists in XCI x I", ok);
    if (ok) graph_izb = PresheafMap(b.source(), xci_i, std::move(comps));
  }

  auto evaluate = [&](const std::vector<std::string>& chain) -> std::optional<PresheafMap> {
    std::optional<PresheafMap> acc;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      PresheafMap m;
      if (it->rfind("id:", 0) == 0) m = identity(o.presheaf(it->substr(3)));
      else if (*it == "graph_izb") {
        if (!graph_izb) return std::nullopt;
        m = *graph_izb;
      } else m = o.map(*it);
      if (acc && !(m.source() == acc->target())) return std::nullopt;
      acc = acc ? compose(m, *acc) : m;
    }
    return acc;
  };
  for (const auto& eq : detail::certificate_equations()) {
    auto l = evaluate(eq.lhs);
    auto r = evaluate(eq.rhs);
    tr.add(eq.name, l && r && *l == *r);
  }
  tr.add("a is mono", is_mono(o.map("a")));
  tr.add("b is mono", is_mono(b));
  return tr;
}

inline json certificate_to_json(const PresheafContext& ctx, const RetractCertificate& cert) {
  auto objs = objects_to_json(certificate_objects(ctx, cert));
  json checks = json::array();
  for (const auto* t : {&cert.cube.gtc.transcript, &cert.cube.transcript, &cert.v.transcript, &cert.transcript})
    for (const auto& r : t->records()) checks.push_back({{"name", r.name}, {"passed", r.passed}});
  return {{"schema", kCertificateSchema},
          {"kind", "retract"},
          {"base", base_to_json(*ctx.base())},
          {"presheaves", objs["presheaves"]},
          {"maps", objs["maps"]},
          {"construction_checks", checks}};
}

/// Re-verifies a certificate document, or a report that embeds one.
inline Transcript reverify_certificate_json(const json& doc) {
  const json& cert = doc.contains("certificate") ? doc["certificate"] : doc;
  const auto schema = detail::get_as<std::string>(detail::field(cert, "schema", "certificate"), "certificate.schema");
  if (schema != kCertificateSchema) throw InputError("certificate.schema: unsupported schema '" + schema + "'");
  const auto kind = detail::get_as<std::string>(detail::field(cert, "kind", "certificate"), "certificate.kind");
  if (kind != "retract") throw InputError("certificate.kind: unsupported kind '" + kind + "'");
  const auto base = base_from_json(detail::field(cert, "base", "certificate"), "certificate.base");
  return reverify_certificate(objects_from_json(base, cert, "certificate."));
}

} // namespace kanlab
