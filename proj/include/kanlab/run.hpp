#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "certificate.hpp"
#include "counterexample.hpp"
#include "frobenius.hpp"
#include "gtc.hpp"
#include "lifting.hpp"
#include "pushforward.hpp"
#include "scenario.hpp"
#include "serialize.hpp"
#include "suites.hpp"

namespace kanlab {

inline constexpr const char* kReportSchema = "kanlab.report/1";

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitInvalidInput = 2, kExitBudget = 3 };

struct RunOptions {
  std::string format = "text";
  std::uint64_t seed = 20240601;
  SearchBudget budget{};
};

struct RunOutcome {
  json report;
  int exit_code = kExitOk;
};

namespace detail {

class ReportBuilder {
public:
  bool check(const std::string& name, bool passed) {
    checks_.push_back({{"name", name}, {"passed", passed}});
    all_ = all_ && passed;
    return passed;
  }

  void append(const Transcript& t, const std::string& prefix) {
    for (const auto& r : t.records()) check(prefix + r.name, r.passed);
  }

  bool all_passed() const { return all_; }
  json& data() { return data_; }
  json checks() const { return checks_; }

private:
  json checks_ = json::array();
  json data_ = json::object();
  bool all_ = true;
};

inline std::string task_str(const json& task, const std::string& key) {
  return get_as<std::string>(field(task, key, "task"), "task." + key);
}

inline std::size_t task_size(const json& task, const std::string& key, std::size_t fallback) {
  return task.contains(key) ? get_as<std::size_t>(task[key], "task." + key) : fallback;
}

inline GtcSpec gtc_from_task(const Scenario& s, const PresheafContext& ctx, const json& spec, const std::string& path) {
  const auto c = s.objects.map(get_as<std::string>(field(spec, "c", path), path + ".c"));
  if (spec.contains("point")) return biased_gtc(ctx, c, s.objects.map(get_as<std::string>(spec["point"], path + ".point")));
  return build_gtc(ctx, c, s.objects.map(get_as<std::string>(field(spec, "i", path), path + ".i")));
}

inline json sizes_json(const Presheaf& x) {
  json out = json::object();
  for (ObjectId c = 0; c < x.base().object_count(); ++c) out[x.base().object_name(c)] = x.size(c);
  return out;
}

inline void run_validate(const Scenario& s, ReportBuilder& rb) {
  for (const auto& [name, x] : s.objects.presheaves()) rb.check("presheaf " + name + " is valid", validate_presheaf(x).ok());
  for (const auto& [name, e] : s.objects.maps()) rb.check("map " + name + " is natural", validate_map(e.map).ok());
  rb.check("base is a category", validate_index_category(*s.base).ok());
  rb.data()["presheaves"] = s.objects.presheaves().size();
  rb.data()["maps"] = s.objects.maps().size();
}

inline void run_lift(const Scenario& s, const RunOptions& opt, ReportBuilder& rb) {
  const auto& t = s.task;
  LiftingProblem pb{s.objects.map(task_str(t, "u")), s.objects.map(task_str(t, "p")), s.objects.map(task_str(t, "top")),
                    s.objects.map(task_str(t, "bottom"))};
  pb.require_commutes("lift task");
  const bool expect = !t.contains("expect") || get_as<std::string>(t["expect"], "task.expect") == "lift";
  const auto l = solve_lift(pb, opt.budget);
  const auto all = all_lifts(pb, opt.budget);
  rb.data()["lift_found"] = l.has_value();
  rb.data()["lift_count"] = all.size();
  if (l) rb.data()["lift"] = components_to_json(*l);
  rb.check("search agrees with enumeration", l.has_value() == !all.empty() && (!l || *l == all.front()));
  rb.check(expect ? "a lift exists" : "no lift exists", l.has_value() == expect);
}

inline void run_gtc(const Scenario& s, const PresheafContext& ctx, ReportBuilder& rb) {
  const auto g = gtc_from_task(s, ctx, s.task, "task");
  rb.append(g.transcript, "gtc: ");
  rb.check("u is mono", is_mono(g.u));
  rb.data()["domain_sizes"] = sizes_json(g.D());
  rb.data()["codomain_sizes"] = sizes_json(g.codomain());
  rb.data()["biased"] = g.point.has_value();
  rb.data()["u"] = components_to_json(g.u);
}

inline json run_prop7(const Scenario& s, const PresheafContext& ctx, const RunOptions& opt, ReportBuilder& rb) {
  const auto g = gtc_from_task(s, ctx, field(s.task, "gtc", "task"), "task.gtc");
  const auto p = s.objects.map(task_str(s.task, "p"));
  const auto witness = FibrationWitness::search(p, opt.budget);
  const auto cert = pullback_gtc_retract(ctx, g, witness);
  rb.append(g.transcript, "gtc: ");
  rb.append(cert.cube.transcript, "cube: ");
  rb.append(cert.v.transcript, "v: ");
  rb.append(cert.transcript, "certificate: ");
  rb.check("X_D level counts match the pullback of D", cert.cube.XD().sizes() == cert.cube.pulled_u.apex.sizes());
  rb.check("v.c = b", cert.v.c == cert.cube.b);
  rb.check("v.i = i o z", cert.v.i == compose(g.i, cert.cube.z));

  auto cj = certificate_to_json(ctx, cert);
  const auto rv = reverify_certificate_json(parse_json_text(cj.dump(), "certificate"));
  rb.append(rv, "re-verify: ");

  std::vector<PresheafMap> fibs;
  for (const auto& f : s.fibrations) fibs.push_back(s.objects.map(f));
  const auto count = task_size(s.task, "transfer_problems", 20);
  const auto tr = transfer_suite(cert, fibs, count, opt.seed, opt.budget);
  rb.check("transfer: lifts through the retract agree with direct search", tr.ok());
  auto& d = rb.data();
  d["X_sizes"] = sizes_json(cert.cube.X());
  d["XD_sizes"] = sizes_json(cert.cube.XD());
  d["v_domain_sizes"] = sizes_json(cert.v.D());
  d["reverify_checks"] = rv.records().size();
  d["transfer"] = {{"problems", tr.problems}, {"solvable", tr.solvable}, {"agreements", tr.agreements}};
  return cj;
}

inline void run_cor9(const Scenario& s, const PresheafContext& ctx, const RunOptions& opt, ReportBuilder& rb) {
  const auto& t = s.task;
  const auto max_problems = task_size(t, "max_problems", 400);
  const auto max_total = task_size(t, "max_test_size", 200);
  std::vector<GtcSpec> family;
  const auto& fam = field(t, "family", "task");
  for (std::size_t k = 0; k < fam.size(); ++k) family.push_back(gtc_from_task(s, ctx, fam[k], "task.family[" + std::to_string(k) + "]"));

  auto exercise = [&](const std::string& label, const PresheafMap& f, const PresheafMap& p, bool control) {
    const auto pf = pushforward(f, p, opt.budget);
    rb.check(label + "X' is a presheaf", validate_presheaf(pf.x_prime).ok());
    rb.check(label + "p*f is natural", validate_map(pf.pf).ok());
    json adj = json::array();
    if (!control) {
      std::vector<std::pair<std::string, PresheafMap>> tests;
      const auto& Yp = p.target();
      for (ObjectId c = 0; c < Yp.base().object_count(); ++c)
        for (Elem b = 0; b < Yp.size(c); ++b)
          tests.emplace_back("y(" + Yp.base().object_name(c) + ")@" + std::to_string(b), yoneda_element(Yp, c, b));
      if (t.contains("test_objects"))
        for (const auto& n : get_as<std::vector<std::string>>(t["test_objects"], "task.test_objects"))
          tests.emplace_back(n, s.objects.map(n));
      for (const auto& [name, alpha] : tests) {
        if (!(alpha.target() == p.target())) throw InputError("task.test_objects: '" + name + "' does not live over Y'");
        if (alpha.source().total_size() > max_total) continue;
        const auto a = verify_adjunction(pf, alpha, opt.budget);
        rb.check(label + "adjunction bijection for " + name, a.ok());
        adj.push_back({{"object", name}, {"left", a.left_count}, {"right", a.right_count}});
      }
    }
    const auto fw = FibrationWitness::search(f, opt.budget);
    const auto pw = FibrationWitness::search(p, opt.budget);
    const auto w = frobenius_witness(ctx, pf, fw, pw);
    std::size_t problems = 0, direct_ok = 0, witness_ok = 0, false_pos = 0, missed = 0;
    for (const auto& g : family) {
      auto squares = commuting_squares(g.u, pf.pf, opt.budget);
      if (squares.size() > max_problems) squares.resize(max_problems);
      for (const auto& pb : squares) {
        ++problems;
        const bool direct = solve_lift(pb, opt.budget).has_value();
        bool via = false;
        try {
          via = w.try_lift(pb, &g).has_value();
        } catch (const WitnessFailure&) {
          via = false;
        }
        direct_ok += direct;
        witness_ok += via;
        false_pos += via && !direct;
        missed += direct && !via;
      }
    }
    rb.check(label + "no false positives", false_pos == 0);
    if (control) rb.check(label + "control has an unsolvable problem", direct_ok < problems);
    else rb.check(label + "witness solves every directly solvable problem", missed == 0 && problems > 0);
    return json{{"x_prime_sizes", sizes_json(pf.x_prime)}, {"adjunction", adj},       {"problems", problems},
                {"direct_solvable", direct_ok},            {"witness_solved", witness_ok}, {"false_positives", false_pos},
                {"missed", missed}};
  };

  rb.data()["main"] = exercise("", s.objects.map(task_str(t, "f")), s.objects.map(task_str(t, "p")), false);
  json controls = json::array();
  if (t.contains("controls")) {
    const auto& cs = t["controls"];
    for (std::size_t k = 0; k < cs.size(); ++k) {
      const auto path = "task.controls[" + std::to_string(k) + "]";
      const auto f = s.objects.map(get_as<std::string>(field(cs[k], "f", path), path + ".f"));
      const auto p = s.objects.map(get_as<std::string>(field(cs[k], "p", path), path + ".p"));
      controls.push_back(exercise("control " + std::to_string(k) + ": ", f, p, true));
    }
  }
  rb.data()["controls"] = controls;
}

inline void run_counterexample(const RunOptions& opt, ReportBuilder& rb) {
  const auto r = left_fibration_counterexample(opt.budget);
  rb.append(r.checks, "");
  auto& d = rb.data();
  d["pullback_sizes"] = sizes_json(r.pullback_pq.apex);
  d["pullback_is_empty"] = r.pullback_pq.apex.is_empty();
  d["biased_family_problems"] = r.family_size;
  d["biased_family_solved"] = r.family_solved;
  d["llp_lift_found"] = r.llp_lift_found;
  d["objects"] = objects_to_json(r.objects());
}

} // namespace detail

/// Runs the scenario's task. Mathematical failures give exit code 1; input
/// errors and budget exhaustion are reported with codes 2 and 3.
inline RunOutcome run_scenario(const Scenario& s, const RunOptions& opt) {
  RunOutcome out;
  out.report = {{"schema", kReportSchema},
                {"scenario", s.name},
                {"task", s.task.at("kind")},
                {"options", {{"seed", opt.seed}, {"budget", opt.budget.max_visits}}}};
  detail::ReportBuilder rb;
  json certificate;
  try {
    const auto ctx = s.context(opt.budget);
    const auto& kind = s.task_kind();
    if (kind == "validate") detail::run_validate(s, rb);
    else if (kind == "lift") detail::run_lift(s, opt, rb);
    else if (kind == "gtc") detail::run_gtc(s, ctx, rb);
    else if (kind == "prop7") certificate = detail::run_prop7(s, ctx, opt, rb);
    else if (kind == "cor9") detail::run_cor9(s, ctx, opt, rb);
    else detail::run_counterexample(opt, rb);
    out.exit_code = rb.all_passed() ? kExitOk : kExitCheckFailed;
  } catch (const BudgetExceeded& e) {
    out.exit_code = kExitBudget;
    out.report["error"] = e.what();
  } catch (const ConstructionError& e) {
    out.exit_code = kExitCheckFailed;
    out.report["error"] = e.what();
  } catch (const WitnessFailure& e) {
    out.exit_code = kExitCheckFailed;
    out.report["error"] = e.what();
  } catch (const ContractError& e) {
    out.exit_code = kExitInvalidInput;
    out.report["error"] = e.what();
  } catch (const SizeError& e) {
    out.exit_code = kExitInvalidInput;
    out.report["error"] = e.what();
  }
  out.report["checks"] = rb.checks();
  out.report["data"] = rb.data();
  if (!certificate.is_null()) out.report["certificate"] = certificate;
  out.report["status"] = out.exit_code == kExitOk ? "pass" : out.exit_code == kExitCheckFailed ? "fail" : "error";
  out.report["exit_code"] = out.exit_code;
  return out;
}

/// Loads and runs a scenario file, mapping load errors to exit codes.
inline RunOutcome run_scenario_file(const std::string& path, const RunOptions& opt) {
  try {
    return run_scenario(load_scenario_file(path), opt);
  } catch (const BudgetExceeded& e) {
    return {{{"schema", kReportSchema}, {"file", path}, {"status", "error"}, {"exit_code", kExitBudget}, {"error", e.what()}},
            kExitBudget};
  } catch (const Error& e) {
    return {{{"schema", kReportSchema}, {"file", path}, {"status", "error"}, {"exit_code", kExitInvalidInput}, {"error", e.what()}},
            kExitInvalidInput};
  }
}

inline const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names{"kan-prisms", "frobenius", "left-fibration-counterexample", "lemmas"};
  return names;
}

namespace detail {

inline json suite_json(const SuiteResult& r) {
  return {{"name", r.name}, {"cases", r.cases}, {"failures", r.failures}, {"passed", r.ok()}};
}

} // namespace detail

/// Runs a bundled demonstration. Scenario files are read from scenario_dir.
inline RunOutcome run_demo(const std::string& name, const RunOptions& opt, const std::string& scenario_dir) {
  RunOutcome out;
  out.report = {{"schema", kReportSchema}, {"demo", name}, {"options", {{"seed", opt.seed}, {"budget", opt.budget.max_visits}}}};
  detail::ReportBuilder rb;
  auto add_suite = [&](const SuiteResult& r) {
    rb.check(r.name + " (" + std::to_string(r.cases) + " cases)", r.ok());
    rb.data()[r.name] = detail::suite_json(r);
  };
  try {
    if (name == "kan-prisms") {
      add_suite(prism_suite(2, opt.budget));
    } else if (name == "lemmas") {
      add_suite(lemma4_suite(opt.seed, 60, opt.budget));
      add_suite(lemma5_suite(opt.seed, 60, opt.budget));
    } else if (name == "left-fibration-counterexample") {
      detail::run_counterexample(opt, rb);
    } else if (name == "frobenius") {
      for (const auto* file : {"prop7_reflexive_graphs", "prop7_cube1", "cor9_reflexive_graphs", "cor9_finite_sets"}) {
        const auto r = run_scenario_file(scenario_dir + "/" + file + ".json", opt);
        rb.check(std::string(file), r.exit_code == kExitOk);
        rb.data()[file] = {{"status", r.report["status"]}, {"exit_code", r.exit_code},
                           {"checks", r.report.contains("checks") ? r.report["checks"].size() : 0}};
        if (r.exit_code != kExitOk && r.exit_code > out.exit_code) out.exit_code = r.exit_code;
      }
    } else {
      throw InputError("unknown demo '" + name + "'");
    }
    if (out.exit_code == kExitOk && !rb.all_passed()) out.exit_code = kExitCheckFailed;
  } catch (const BudgetExceeded& e) {
    out.exit_code = kExitBudget;
    out.report["error"] = e.what();
  } catch (const ContractError& e) {
    out.exit_code = kExitInvalidInput;
    out.report["error"] = e.what();
  } catch (const Error& e) {
    out.exit_code = kExitCheckFailed;
    out.report["error"] = e.what();
  }
  out.report["checks"] = rb.checks();
  out.report["data"] = rb.data();
  out.report["status"] = out.exit_code == kExitOk ? "pass" : out.exit_code == kExitCheckFailed ? "fail" : "error";
  out.report["exit_code"] = out.exit_code;
  return out;
}

namespace detail {

inline void flatten(const json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object() && !j.empty()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    return;
  }
  if (j.is_array() && !j.empty() && j.front().is_object()) {
    for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], prefix + "[" + std::to_string(k) + "]", out);
    return;
  }
  out << "  " << prefix << ": " << j.dump() << "\n";
}

} // namespace detail

/// Human-readable rendering of a report. Bulky tables (certificates and
/// serialized objects) are summarized.
inline std::string render_text(const json& report) {
  std::ostringstream out;
  if (report.contains("scenario")) out << "scenario: " << report["scenario"].get<std::string>() << "\n";
  if (report.contains("demo")) out << "demo: " << report["demo"].get<std::string>() << "\n";
  if (report.contains("file")) out << "file: " << report["file"].get<std::string>() << "\n";
  if (report.contains("task")) out << "task: " << report["task"].get<std::string>() << "\n";
  if (report.contains("checks"))
    for (const auto& c : report["checks"])
      out << (c["passed"].get<bool>() ? "[pass] " : "[FAIL] ") << c["name"].get<std::string>() << "\n";
  if (report.contains("data") && !report["data"].empty()) {
    out << "data:\n";
    for (const auto& [k, v] : report["data"].items()) {
      if (k == "objects") {
        out << "  objects: " << v["presheaves"].size() << " presheaves, " << v["maps"].size() << " maps\n";
        continue;
      }
      std::ostringstream part;
      detail::flatten(v, k, part);
      out << part.str();
    }
  }
  if (report.contains("certificate"))
    out << "certificate: " << report["certificate"]["presheaves"].size() << " presheaves, "
        << report["certificate"]["maps"].size() << " maps\n";
  if (report.contains("error")) out << "error: " << report["error"].get<std::string>() << "\n";
  out << "status: " << report["status"].get<std::string>() << " (exit " << report["exit_code"].get<int>() << ")\n";
  return out.str();
}

inline std::string render(const json& report, const std::string& format) {
  return format == "json" ? report.dump(2) + "\n" : render_text(report);
}

} // namespace kanlab
