#include <gtest/gtest.h>

#include <filesystem>

#include "kanlab/run.hpp"
#include "kanlab/scenario.hpp"

using namespace kanlab;

namespace {

std::string bundled(const std::string& name) { return std::string(KANLAB_SCENARIO_DIR) + "/" + name + ".json"; }

std::vector<std::string> bundled_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(KANLAB_SCENARIO_DIR))
    if (e.path().extension() == ".json") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

json minimal(json task) {
  return {{"schema", kScenarioSchema},
          {"name", "t"},
          {"base", {{"preset", "simplex"}, {"n", 1}}},
          {"interval", "I"},
          {"presheaves", {{"I", {{"yoneda", "[1]"}}}}},
          {"task", std::move(task)}};
}

std::string error_of(const json& doc) {
  try {
    load_scenario(doc);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

} // namespace

TEST(Scenario, BundledFilesRoundTrip) {
  const auto files = bundled_files();
  ASSERT_GE(files.size(), 6u);
  for (const auto& f : files) {
    const auto s = load_scenario_file(f);
    const auto emitted = emit_scenario(s);
    const auto again = load_scenario(parse_json_text(emitted.dump(2), "emitted"));
    EXPECT_TRUE(again == s) << f;
    EXPECT_EQ(emit_scenario(again), emitted) << f;
  }
}

TEST(Scenario, BaseRoundTrip) {
  const auto poset = preset_poset({"a", "b"}, {{"a", "a"}, {"b", "b"}, {"a", "b"}});
  for (const auto& b : {preset_simplex(2), preset_cube(1), poset}) {
    const auto back = base_from_json(base_to_json(*b), "base");
    EXPECT_EQ(base_to_json(*back), base_to_json(*b));
    EXPECT_EQ(back->morphisms(), b->morphisms());
  }
  // an explicit table survives as well
  const auto j = base_to_json(*preset_simplex(1));
  IndexCategory copy(preset_simplex(1)->objects(), preset_simplex(1)->morphisms(), preset_simplex(1)->identities(),
                     preset_simplex(1)->composites());
  const auto explicit_json = base_to_json(copy);
  EXPECT_FALSE(explicit_json.contains("preset"));
  const auto back = base_from_json(explicit_json, "base");
  EXPECT_EQ(back->morphisms(), copy.morphisms());
  EXPECT_EQ(back->composites(), copy.composites());
  (void)j;
}

TEST(Scenario, CertificateObjectsRoundTrip) {
  const auto out = run_scenario_file(bundled("prop7_cube1"), {});
  ASSERT_EQ(out.exit_code, 0);
  const auto& cert = out.report["certificate"];
  const auto base = base_from_json(cert["base"], "base");
  const auto objs = objects_from_json(base, cert);
  const auto again = objects_to_json(objs);
  EXPECT_EQ(again["presheaves"], cert["presheaves"]);
  EXPECT_EQ(again["maps"], cert["maps"]);
  EXPECT_TRUE(objects_from_json(base, again) == objs);
}

TEST(Scenario, ExitCodes) {
  EXPECT_EQ(run_scenario_file(bundled("prop7_reflexive_graphs"), {}).exit_code, kExitOk);
  EXPECT_EQ(run_scenario_file(bundled("left_fibration_counterexample"), {}).exit_code, kExitOk);
  EXPECT_EQ(run_scenario_file(bundled("noncommuting_lift"), {}).exit_code, kExitInvalidInput);
  EXPECT_EQ(run_scenario_file(bundled("does_not_exist"), {}).exit_code, kExitInvalidInput);
  RunOptions tight;
  tight.budget.max_visits = 10;
  EXPECT_EQ(run_scenario_file(bundled("prop7_cube1"), tight).exit_code, kExitBudget);
}

TEST(Scenario, MissingLiftFailsWhenRequired) {
  auto doc = minimal({{"kind", "lift"}, {"u", "u"}, {"p", "p"}, {"top", "top"}, {"bottom", "bottom"}});
  doc["presheaves"]["One"] = {{"terminal", true}};
  doc["presheaves"]["Empty"] = {{"initial", true}};
  doc["maps"] = {{"u", {{"from_initial", "One"}}},
                 {"p", {{"from_initial", "One"}}},
                 {"top", {{"identity", "Empty"}}},
                 {"bottom", {{"identity", "One"}}}};
  const auto s = load_scenario(doc);
  EXPECT_EQ(run_scenario(s, {}).exit_code, kExitCheckFailed);
  doc["task"]["expect"] = "no-lift";
  EXPECT_EQ(run_scenario(load_scenario(doc), {}).exit_code, kExitOk);
}

TEST(Scenario, CounterexampleReportStatesTheEmptyPullback) {
  const auto out = run_scenario_file(bundled("left_fibration_counterexample"), {});
  EXPECT_EQ(out.report["data"]["pullback_is_empty"], true);
  EXPECT_EQ(out.report["data"]["llp_lift_found"], false);
}

TEST(Scenario, Prop7ReportSummarizesTheCertificate) {
  const auto out = run_scenario_file(bundled("prop7_reflexive_graphs"), {});
  ASSERT_TRUE(out.report.contains("certificate"));
  EXPECT_EQ(out.report["certificate"]["schema"], kCertificateSchema);
  EXPECT_NE(render_text(out.report).find("certificate: 13 presheaves, 35 maps"), std::string::npos);
  EXPECT_TRUE(reverify_certificate_json(out.report).all_passed());
}

TEST(Scenario, ReportsAreDeterministic) {
  for (const auto* name : {"prop7_cube1", "cor9_finite_sets"}) {
    const auto a = run_scenario_file(bundled(name), {});
    const auto b = run_scenario_file(bundled(name), {});
    EXPECT_EQ(a.report.dump(), b.report.dump());
    EXPECT_EQ(render_text(a.report), render_text(b.report));
  }
}

TEST(Scenario, ErrorsNameTheField) {
  EXPECT_NE(error_of(json{{"name", "x"}}).find("schema"), std::string::npos);
  auto bad_schema = minimal({{"kind", "validate"}});
  bad_schema["schema"] = "kanlab.scenario/0";
  EXPECT_NE(error_of(bad_schema).find("schema"), std::string::npos);
  auto bad_task = minimal({{"kind", "dance"}});
  EXPECT_NE(error_of(bad_task).find("task.kind"), std::string::npos);
  auto bad_ctor = minimal({{"kind", "validate"}});
  bad_ctor["presheaves"]["Q"] = {{"fancy", 1}};
  EXPECT_NE(error_of(bad_ctor).find("presheaves.Q"), std::string::npos);
  auto cyclic = minimal({{"kind", "validate"}});
  cyclic["presheaves"]["A"] = {{"product", {"B", "I"}}};
  cyclic["presheaves"]["B"] = {{"product", {"A", "I"}}};
  EXPECT_NE(error_of(cyclic).find("cyclic"), std::string::npos);
  auto unknown_ref = minimal({{"kind", "validate"}});
  unknown_ref["maps"] = {{"m", {{"identity", "Nope"}}}};
  EXPECT_NE(error_of(unknown_ref).find("Nope"), std::string::npos);
  auto bad_table = minimal({{"kind", "validate"}});
  bad_table["presheaves"]["E"] = {{"explicit", {{"sizes", {{"[0]", 1}, {"[1]", 1}}}, {"actions", {{"[0]->[1]:0", {3}}}}}}};
  EXPECT_NE(error_of(bad_table).find("presheaves.E"), std::string::npos);
  try {
    parse_json_text("{\n  \"schema\": ,\n}", "doc.json");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Scenario, UnnaturalExplicitMapIsInvalid) {
  auto doc = minimal({{"kind", "validate"}});
  doc["maps"] = {{"m", {{"explicit", {{"source", "I"}, {"target", "I"}, {"components", {{"[0]", {1, 0}}, {"[1]", {0, 1, 2}}}}}}}}};
  EXPECT_NE(error_of(doc).find("maps.m"), std::string::npos);
}

TEST(Scenario, ValidateTask) {
  const auto s = load_scenario(minimal({{"kind", "validate"}}));
  const auto out = run_scenario(s, {});
  EXPECT_EQ(out.exit_code, kExitOk);
  EXPECT_EQ(out.report["status"], "pass");
}

TEST(Scenario, Demos) {
  for (const auto& name : demo_names()) {
    const auto out = run_demo(name, {}, KANLAB_SCENARIO_DIR);
    EXPECT_EQ(out.exit_code, kExitOk) << name;
  }
  EXPECT_EQ(run_demo("nope", {}, KANLAB_SCENARIO_DIR).exit_code, kExitInvalidInput);
}
