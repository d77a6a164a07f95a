#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kanlab/kanlab.hpp"

namespace {

std::uint64_t default_budget() {
  if (const char* env = std::getenv("KANLAB_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "ignoring malformed KANLAB_BUDGET='" << env << "'\n";
    }
  }
  return kanlab::SearchBudget{}.max_visits;
}

std::string scenario_dir() {
  if (const char* env = std::getenv("KANLAB_SCENARIOS")) return env;
  return KANLAB_SCENARIO_DIR;
}

int emit(const kanlab::RunOutcome& r, const std::string& format, const std::string& certificate_out) {
  std::cout << kanlab::render(r.report, format);
  if (!certificate_out.empty() && r.report.contains("certificate")) {
    std::ofstream out(certificate_out);
    if (!out) {
      std::cerr << "cannot write " << certificate_out << "\n";
      return kanlab::kExitInvalidInput;
    }
    out << r.report["certificate"].dump(2) << "\n";
  }
  return r.exit_code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite presheaf toolkit for generating trivial cofibrations and the Frobenius property"};
  app.require_subcommand(1);

  kanlab::RunOptions opt;
  opt.budget.max_visits = default_budget();
  std::string file;
  std::string demo_name;
  std::string certificate_out;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--seed", opt.seed, "Seed for randomized problems");
    sub->add_option("--budget", opt.budget.max_visits, "Search budget (assignments per search)");
  };

  auto* validate = app.add_subcommand("validate", "Parse a scenario and validate every declared object");
  validate->add_option("file", file, "Scenario file")->required();
  add_common(validate);

  auto* run = app.add_subcommand("run", "Run a scenario's task");
  run->add_option("file", file, "Scenario file")->required();
  run->add_option("--certificate-out", certificate_out, "Write the certificate, if any, to this file");
  add_common(run);

  auto* demo = app.add_subcommand("demo", "Run a bundled demonstration");
  demo->add_option("name", demo_name, "Demonstration")->required()->check(CLI::IsMember(kanlab::demo_names()));
  add_common(demo);

  auto* reverify = app.add_subcommand("re-verify", "Check a certificate from its raw tables");
  reverify->add_option("file", file, "Certificate or report file")->required();
  reverify->add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kanlab::kExitInvalidInput;
  }

  if (*validate) {
    kanlab::RunOutcome r;
    try {
      auto s = kanlab::load_scenario_file(file);
      s.task = {{"kind", "validate"}};
      r = kanlab::run_scenario(s, opt);
    } catch (const kanlab::Error& e) {
      r.exit_code = kanlab::kExitInvalidInput;
      r.report = {{"schema", kanlab::kReportSchema}, {"file", file}, {"status", "error"},
                  {"exit_code", r.exit_code}, {"error", e.what()}};
    }
    return emit(r, opt.format, "");
  }
  if (*run) return emit(kanlab::run_scenario_file(file, opt), opt.format, certificate_out);
  if (*demo) return emit(kanlab::run_demo(demo_name, opt, scenario_dir()), opt.format, "");

  kanlab::RunOutcome r;
  r.report = {{"schema", kanlab::kReportSchema}, {"file", file}};
  try {
    const auto doc = kanlab::parse_json_text(kanlab::read_text_file(file), file);
    const auto t = kanlab::reverify_certificate_json(doc);
    kanlab::json checks = kanlab::json::array();
    for (const auto& rec : t.records()) checks.push_back({{"name", rec.name}, {"passed", rec.passed}});
    r.report["checks"] = checks;
    r.exit_code = t.all_passed() ? kanlab::kExitOk : kanlab::kExitCheckFailed;
  } catch (const kanlab::Error& e) {
    r.exit_code = kanlab::kExitInvalidInput;
    r.report["error"] = e.what();
  }
  r.report["status"] = r.exit_code == kanlab::kExitOk ? "pass" : r.exit_code == kanlab::kExitCheckFailed ? "fail" : "error";
  r.report["exit_code"] = r.exit_code;
  return emit(r, opt.format, "");
}
