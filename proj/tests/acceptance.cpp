#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "kanlab/kanlab.hpp"
#include "oracles.hpp"

using namespace kanlab;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string scenario(const std::string& stem) { return std::string(KANLAB_SCENARIO_DIR) + "/" + stem + ".json"; }

std::string suite_detail(const SuiteResult& r) {
  std::string s = r.name + " " + std::to_string(r.cases) + " cases";
  if (!r.failures.empty()) s += ", first failure: " + r.failures.front();
  return s;
}

Outcome prop7() {
  Outcome o{true, ""};
  for (const auto* stem : {"prop7_reflexive_graphs", "prop7_cube1"}) {
    const auto r = run_scenario_file(scenario(stem), RunOptions{});
    const auto& tr = r.report["data"]["transfer"];
    const bool ok = r.exit_code == kExitOk && r.report["data"]["reverify_checks"].get<std::size_t>() > 0 &&
                    tr["agreements"].get<std::size_t>() >= 20 && tr["agreements"] == tr["problems"];
    o.passed = o.passed && ok;
    o.detail += std::string(stem) + (ok ? " ok" : " FAILED") + " (" + std::to_string(tr["agreements"].get<std::size_t>()) +
                " transfers); ";
  }
  return o;
}

Outcome cor9() {
  Outcome o{true, ""};
  for (const auto* stem : {"cor9_reflexive_graphs", "cor9_finite_sets"}) {
    const auto r = run_scenario_file(scenario(stem), RunOptions{});
    const bool ok = r.exit_code == kExitOk;
    o.passed = o.passed && ok;
    o.detail += std::string(stem) + (ok ? " ok; " : " FAILED; ");
  }
  return o;
}

Outcome counterexample() {
  const auto r = run_scenario_file(scenario("left_fibration_counterexample"), RunOptions{});
  const bool ok = r.exit_code == kExitOk && r.report["data"]["pullback_is_empty"].get<bool>() &&
                  !r.report["data"]["llp_lift_found"].get<bool>();
  return {ok, "empty pullback, no lift"};
}

Outcome prisms() {
  const auto suite = prism_suite(2);
  bool counts = true;
  const auto ctx = PresheafContext::with_representable_interval(preset_simplex(3), "[1]");
  for (std::size_t n = 0; n <= 2; ++n)
    for (int eps : {0, 1}) {
      const auto g = prism_gtc(ctx, n, eps);
      for (std::size_t k = 0; k <= 3; ++k) {
        const auto level = ctx.base()->object(detail::bracket(k));
        counts = counts && g.D().size(level) == oracle::open_prism_cells(n, k) &&
                 g.codomain().size(level) == oracle::prism_cells(n, k);
      }
    }
  return {suite.ok() && counts, suite_detail(suite) + (counts ? ", cell counts match" : ", cell counts differ")};
}

Outcome engine() {
  const std::vector<BasePtr> bases{preset_simplex(1), preset_simplex(2), preset_simplex(3), preset_cube(1), preset_cube(2),
                                   preset_poset({"a", "b", "c"}, {{"a", "a"}, {"b", "b"}, {"c", "c"}, {"a", "b"}, {"a", "c"}})};
  const auto y = yoneda_suite(kSeed, bases);
  const auto e = engine_suite(kSeed, 120);
  bool stable = true;
  for (const auto* stem : {"prop7_reflexive_graphs", "cor9_finite_sets", "left_fibration_counterexample"}) {
    const auto a = run_scenario_file(scenario(stem), RunOptions{});
    const auto b = run_scenario_file(scenario(stem), RunOptions{});
    stable = stable && a.report.dump() == b.report.dump();
  }
  return {y.ok() && e.ok() && e.cases >= 100 && stable,
          suite_detail(y) + "; " + suite_detail(e) + (stable ? "; reports byte-identical" : "; reports differ")};
}

} // namespace

int main() {
  struct Criterion {
    const char* id;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"AC1", 60, [] { auto r = lemma4_suite(kSeed, 60); return Outcome{r.ok() && r.cases >= 50, suite_detail(r)}; }},
      {"AC2", 60, [] { auto r = lemma5_suite(kSeed, 60); return Outcome{r.ok() && r.cases >= 50, suite_detail(r)}; }},
      {"AC3", 300, prop7},
      {"AC4", 300, cor9},
      {"AC5", 5, counterexample},
      {"AC6", 120, prisms},
      {"AC7", 120, engine},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.passed && s <= c.limit_s;
    failed += !pass;
    std::printf("[%s] %s %s (%.2fs, limit %.0fs)\n", pass ? "PASS" : "FAIL", c.id, o.detail.c_str(), s, c.limit_s);
  }
  return failed == 0 ? 0 : 1;
}
