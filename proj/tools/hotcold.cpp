// Command-line front end: single simulations, experiment grids, the analytical
// sweeps, lemma verification, testbed scenarios and a full report.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "hotcold/analysis.hpp"
#include "hotcold/config.hpp"
#include "hotcold/experiments.hpp"
#include "hotcold/report.hpp"
#include "hotcold/simulation.hpp"

namespace fs = std::filesystem;
using namespace hotcold;

namespace {

constexpr const char* kOutDirEnv = "HOTCOLD_OUT_DIR";
constexpr double kQuickDurationS = 200.0;
constexpr int kQuickRuns = 2;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::string out_dir;
  std::string config_path;
  std::vector<std::string> overrides;
  bool quick = false;
};

fs::path outDir(const GlobalOptions& g) {
  if (!g.out_dir.empty()) return g.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "results";
}

ExperimentConfig buildConfig(const GlobalOptions& g) {
  ExperimentConfig cfg =
      g.config_path.empty() ? configFromOverrides(g.overrides) : loadConfig(g.config_path, g.overrides);
  if (g.seed) {
    cfg.world.seed = *g.seed;
    cfg.grid.master_seed = *g.seed;
  }
  if (g.quick) {
    cfg.world.duration_s = kQuickDurationS;
    cfg.grid.base.duration_s = kQuickDurationS;
    cfg.grid.runs_per_point = kQuickRuns;
    cfg.scenario_iterations = kQuickRuns;
  }
  if (g.runs) {
    cfg.grid.runs_per_point = *g.runs;
    cfg.scenario_iterations = *g.runs;
  }
  cfg.world.validate();
  cfg.grid.validate();
  return cfg;
}

std::ofstream openOut(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void writeJson(const fs::path& path, const nlohmann::ordered_json& j) {
  auto out = openOut(path);
  out << j.dump(2) << '\n';
}

template <typename Fn>
auto timed(const char* label, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  auto result = fn();
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  std::cerr << fmt::format("{}: {:.2f} s\n", label, elapsed.count());
  return result;
}

// Keeps the points used by the tracker comparison figures.
GridResult comparisonSubset(const GridResult& grid, int sws_min, int sws_max) {
  GridResult out;
  for (const auto& p : grid.points) {
    if (p.point.tracker == TrackerKind::kHotCold &&
        (p.point.sws < sws_min || p.point.sws > sws_max))
      continue;
    out.points.push_back(p);
  }
  return out;
}

nlohmann::ordered_json writeGridFigures(const fs::path& dir, const GridResult& grid,
                                        const GridResult& comparison) {
  nlohmann::ordered_json best;
  const std::pair<Kpi, const char*> figures[] = {{Kpi::kAverageDistance, "5"},
                                                 {Kpi::kCyclesInRange, "6"},
                                                 {Kpi::kCyclesInHalt, "7"}};
  const bool has_hotcold = std::any_of(grid.points.begin(), grid.points.end(), [](const auto& p) {
    return p.point.tracker == TrackerKind::kHotCold;
  });
  for (const auto& [kpi, fig] : figures) {
    if (has_hotcold) {
      const SwsDifferenceTable table = swsDifferenceTable(grid, kpi);
      auto out = openOut(dir / fmt::format("fig{}.csv", fig));
      writeSwsDifferenceCsv(out, table);
      best[toString(kpi)] = table.bestSws();
    }
    auto out = openOut(dir / fmt::format("fig{}.csv", std::stoi(fig) + 3));
    writeSigmaComparisonCsv(out, comparison, kpi);
  }
  auto runs = openOut(dir / "grid_runs.csv");
  writeGridRunsCsv(runs, grid);
  return best;
}

int failedRuns(const GridResult& grid) {
  int failed = 0;
  for (const auto& p : grid.points)
    for (const auto& r : p.runs) failed += r ? 0 : 1;
  return failed;
}

int cmdSimulate(const GlobalOptions& g) {
  const ExperimentConfig cfg = buildConfig(g);
  const fs::path dir = outDir(g);
  const SimulationResult result = runSimulation(cfg.world);
  auto trace = openOut(dir / "trace.csv");
  writeTraceCsv(trace, result.trace);
  nlohmann::ordered_json j = metricsJson(result.metrics);
  j["tracker"] = trackerName(cfg.world.tracker);
  j["seed"] = cfg.world.seed;
  writeJson(dir / "metrics.json", j);
  std::cout << fmt::format("{}: average distance {:.3f} m, in range {:.2f}%, in halt {:.2f}%\n",
                           trackerName(cfg.world.tracker), result.metrics.average_distance_m,
                           result.metrics.percentInRange(), result.metrics.percentInHalt());
  return 0;
}

int cmdGrid(const GlobalOptions& g) {
  const ExperimentConfig cfg = buildConfig(g);
  const fs::path dir = outDir(g);
  const GridResult grid = timed("grid", [&] { return runGrid(cfg.grid); });
  const auto best = writeGridFigures(dir, grid, grid);
  for (const auto& p : grid.points)
    std::cout << fmt::format("{:<16} sigma {:>4g}  distance {:8.3f} +- {:7.3f}  range {:6.2f}%\n",
                             p.point.seriesName(), p.point.sigma_db, p.average_distance.mean,
                             p.average_distance.stddev, p.percent_in_range.mean);
  if (!best.empty()) std::cout << "best SWS per KPI: " << best.dump() << '\n';
  const int failed = failedRuns(grid);
  if (failed) std::cerr << failed << " run(s) failed, see grid_runs.csv\n";
  return failed ? 1 : 0;
}

int cmdRotationSweep(const GlobalOptions& g) {
  const fs::path dir = outDir(g);
  const auto sweep = timed("rotation sweep", [] { return analysis::rotationSweep(); });
  auto fig2 = openOut(dir / "fig2.csv");
  writeRotationHeatmapCsv(fig2, sweep);
  auto fig3 = openOut(dir / "fig3.csv");
  writeRotationSummaryCsv(fig3, sweep);
  if (sweep.best_fully_valid_phi) {
    const auto& s = sweep.summary(*sweep.best_fully_valid_phi);
    std::cout << fmt::format("best fully valid angle {} deg: {:.4f} rotations on average\n",
                             s.phi_deg, s.overall_mean);
  } else {
    std::cout << "no fully valid angle\n";
  }
  return 0;
}

int cmdExhaustiveSweep(const GlobalOptions& g, unsigned workers) {
  const fs::path dir = outDir(g);
  analysis::ExhaustiveSweepConfig cfg;
  cfg.workers = workers;
  const auto sweep = timed("exhaustive sweep", [&] { return analysis::exhaustiveSweep(cfg); });
  auto fig4 = openOut(dir / "fig4.csv");
  writeExhaustiveCsv(fig4, sweep);
  std::cout << fmt::format("{} runs, best angle {} deg: {:.5f} steps on average, {} cap hits\n",
                           sweep.runs, sweep.best_phi, sweep.overallMean(sweep.best_phi),
                           sweep.cap_hits);
  return 0;
}

int cmdVerifyLemmas(const GlobalOptions& g, int trials, double phi) {
  const fs::path dir = outDir(g);
  Rng rng(g.seed.value_or(1));
  const auto report = analysis::verifyLemmas(trials, rng, phi);
  writeJson(dir / "lemmas.json", lemmaReportJson(report));
  std::cout << fmt::format("{} trials at {} deg: {} violations\n", report.trials, phi,
                           report.totalViolations());
  return report.totalViolations() == 0 ? 0 : 1;
}

int cmdScenario(const GlobalOptions& g, const std::string& preset) {
  const ExperimentConfig cfg = buildConfig(g);
  const fs::path dir = outDir(g);
  std::vector<ScenarioPreset> presets;
  if (preset == "all") {
    presets = {ScenarioPreset::kStaticTarget, ScenarioPreset::kStraightLine,
               ScenarioPreset::kZigzag};
  } else {
    presets = {parseScenario(preset)};
  }
  for (ScenarioPreset p : presets) {
    const ScenarioResult result =
        runScenario(p, cfg.scenario_iterations, cfg.scenario_sigma_db, cfg.grid.master_seed);
    auto out = openOut(dir / (toString(p) + ".csv"));
    writeScenarioCsv(out, result);
    for (std::size_t it = 0; it < result.iterations.size(); ++it) {
      const auto& s = result.iterations[it];
      std::cout << fmt::format("{} iteration {}: {:.2f} m -> {:.2f} m\n", toString(p), it,
                               s.front().distance_m, s.back().distance_m);
    }
  }
  return 0;
}

int cmdReport(const GlobalOptions& g, unsigned workers) {
  ExperimentConfig cfg = buildConfig(g);
  const fs::path dir = outDir(g);
  nlohmann::ordered_json summary;

  const auto rotation = timed("rotation sweep", [] { return analysis::rotationSweep(); });
  {
    auto fig2 = openOut(dir / "fig2.csv");
    writeRotationHeatmapCsv(fig2, rotation);
    auto fig3 = openOut(dir / "fig3.csv");
    writeRotationSummaryCsv(fig3, rotation);
    nlohmann::ordered_json j;
    if (rotation.best_fully_valid_phi) {
      j["best_phi_deg"] = *rotation.best_fully_valid_phi;
      j["mean_rotations"] = rotation.summary(*rotation.best_fully_valid_phi).overall_mean;
    }
    summary["rotation_sweep"] = j;
  }

  analysis::ExhaustiveSweepConfig ecfg;
  ecfg.workers = workers;
  const auto exhaustive = timed("exhaustive sweep", [&] { return analysis::exhaustiveSweep(ecfg); });
  {
    auto fig4 = openOut(dir / "fig4.csv");
    writeExhaustiveCsv(fig4, exhaustive);
    summary["exhaustive_sweep"] = {{"runs", exhaustive.runs},
                                   {"best_phi_deg", exhaustive.best_phi},
                                   {"mean_steps", exhaustive.overallMean(exhaustive.best_phi)},
                                   {"cap_hits", exhaustive.cap_hits}};
  }

  Rng rng(cfg.grid.master_seed);
  const auto lemmas = analysis::verifyLemmas(10'000, rng);
  writeJson(dir / "lemmas.json", lemmaReportJson(lemmas));
  summary["lemmas"] = {{"trials", lemmas.trials}, {"violations", lemmas.totalViolations()}};

  // One grid covers both the SWS exploration and the tracker comparison.
  cfg.grid.sws_values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const GridResult grid = timed("grid", [&] { return runGrid(cfg.grid); });
  summary["grid"] = {{"best_sws", writeGridFigures(dir, grid, comparisonSubset(grid, 3, 7))},
                     {"failed_runs", failedRuns(grid)}};

  nlohmann::ordered_json scenarios;
  for (ScenarioPreset p :
       {ScenarioPreset::kStaticTarget, ScenarioPreset::kStraightLine, ScenarioPreset::kZigzag}) {
    const ScenarioResult result =
        runScenario(p, cfg.scenario_iterations, cfg.scenario_sigma_db, cfg.grid.master_seed);
    auto out = openOut(dir / (toString(p) + ".csv"));
    writeScenarioCsv(out, result);
    std::vector<double> final_distance;
    for (const auto& it : result.iterations) final_distance.push_back(it.back().distance_m);
    scenarios[toString(p)] = {{"mean_final_distance_m", summarize(final_distance).mean}};
  }
  summary["scenarios"] = scenarios;

  writeJson(dir / "summary.json", summary);
  std::cout << summary.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hot-Cold RSSI target following simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for single runs and master seed for grids");
  app.add_option("--runs", g.runs, "Runs per grid point and scenario iterations")
      ->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir,
                 fmt::format("Output directory (default ${} or ./results)", kOutDirEnv));
  app.add_option("--config", g.config_path, "Configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", g.overrides, "Override a config key: section.key=value")
      ->allow_extra_args(false);
  app.add_flag("--quick", g.quick, "Short runs: 200 s and 2 runs per point");

  auto* print_config = app.add_subcommand("print-config", "Print the default configuration");
  auto* simulate = app.add_subcommand("simulate", "Run one simulation, write trace and metrics");
  auto* grid = app.add_subcommand("grid", "Run the tracker/SWS/sigma grid");
  auto* rotation = app.add_subcommand("rotation-sweep", "Rotation count analysis");
  auto* exhaustive = app.add_subcommand("exhaustive-sweep", "Exhaustive step count analysis");
  auto* lemmas = app.add_subcommand("verify-lemmas", "Check the approach lemmas on random geometries");
  auto* scenario = app.add_subcommand("scenario", "Run a testbed scenario preset");
  auto* report = app.add_subcommand("report", "Produce every figure table and a summary");

  unsigned workers = 0;
  for (auto* sub : {exhaustive, report})
    sub->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");
  int trials = 10'000;
  double phi = 137.0;
  lemmas->add_option("--trials", trials, "Random geometries")->check(CLI::PositiveNumber);
  lemmas->add_option("--phi", phi, "Rotation angle in degrees");
  std::string preset = "all";
  scenario->add_option("--preset", preset, "scenario1, scenario2, scenario3 or all");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*print_config) {
      std::cout << defaultConfigText();
      return 0;
    }
    if (*simulate) return cmdSimulate(g);
    if (*grid) return cmdGrid(g);
    if (*rotation) return cmdRotationSweep(g);
    if (*exhaustive) return cmdExhaustiveSweep(g, workers);
    if (*lemmas) return cmdVerifyLemmas(g, trials, phi);
    if (*scenario) return cmdScenario(g, preset);
    if (*report) return cmdReport(g, workers);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
