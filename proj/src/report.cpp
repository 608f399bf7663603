#include "hotcold/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace hotcold {

namespace {

double kpiValue(const PointResult& p, Kpi kpi) {
  switch (kpi) {
    case Kpi::kAverageDistance:
      return p.average_distance.mean;
    case Kpi::kCyclesInRange:
      return p.percent_in_range.mean;
    case Kpi::kCyclesInHalt:
      return p.percent_in_halt.mean;
  }
  return std::nan("");
}

const KpiStats& kpiStats(const PointResult& p, Kpi kpi) {
  switch (kpi) {
    case Kpi::kAverageDistance:
      return p.average_distance;
    case Kpi::kCyclesInRange:
      return p.percent_in_range;
    case Kpi::kCyclesInHalt:
      return p.percent_in_halt;
  }
  throw std::logic_error("unknown KPI");
}

}  // namespace

std::string toString(Kpi kpi) {
  switch (kpi) {
    case Kpi::kAverageDistance:
      return "average_distance_m";
    case Kpi::kCyclesInRange:
      return "cycles_in_range_pct";
    case Kpi::kCyclesInHalt:
      return "cycles_in_halt_pct";
  }
  return "unknown";
}

std::string formatNumber(double value) { return fmt::format("{:.6f}", value); }

void writeTraceCsv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  out << "time_s,robot_x,robot_y,robot_heading_deg,target_x,target_y,rssi_dbm,in_range,in_halt,"
         "decision\n";
  for (const auto& r : trace) {
    fmt::print(out, "{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{},{},{}\n", r.time_s,
               r.robot.position.x(), r.robot.position.y(), rad2deg(r.robot.heading), r.target.x(),
               r.target.y(), r.rssi_dbm, r.in_range ? 1 : 0, r.in_halt ? 1 : 0, r.decision);
  }
}

nlohmann::ordered_json metricsJson(const MetricsReport& m) {
  nlohmann::ordered_json j;
  // NaN (no cycles) serializes as null.
  j["average_distance_m"] = m.average_distance_m;
  j["cycles_in_range"] = m.cycles_in_range;
  j["cycles_in_range_pct"] = m.percentInRange();
  j["cycles_in_halt"] = m.cycles_in_halt;
  j["cycles_in_halt_pct"] = m.percentInHalt();
  j["total_cycles"] = m.total_cycles;
  return j;
}

void writeRotationHeatmapCsv(std::ostream& out, const analysis::RotationSweep& sweep) {
  out << "phi_deg";
  for (int eps = sweep.eps_min; eps <= sweep.eps_max; ++eps) out << ",eps_" << eps;
  out << ",overall_mean,percent_valid\n";
  for (int phi = sweep.phi_min; phi <= sweep.phi_max; ++phi) {
    out << phi;
    for (int eps = sweep.eps_min; eps <= sweep.eps_max; ++eps) {
      const auto& c = sweep.cell(phi, eps);
      out << ',' << (c.mean_rotations ? formatNumber(*c.mean_rotations) : std::string("X"));
    }
    const auto& s = sweep.summary(phi);
    out << ',' << formatNumber(s.overall_mean) << ',' << formatNumber(s.percent_valid) << '\n';
  }
}

void writeRotationSummaryCsv(std::ostream& out, const analysis::RotationSweep& sweep) {
  out << "phi_deg,overall_mean,percent_valid\n";
  for (const auto& s : sweep.per_phi)
    out << s.phi_deg << ',' << formatNumber(s.overall_mean) << ',' << formatNumber(s.percent_valid)
        << '\n';
}

void writeExhaustiveCsv(std::ostream& out, const analysis::ExhaustiveSweep& sweep) {
  const auto& cfg = sweep.config;
  out << "phi_deg";
  for (int tau = cfg.tau_min; tau <= cfg.tau_max; ++tau) out << ",tau_" << tau;
  out << ",overall_mean,cap_hits\n";
  for (int phi = cfg.phi_min; phi <= cfg.phi_max; ++phi) {
    out << phi;
    std::int64_t caps = 0;
    for (int tau = cfg.tau_min; tau <= cfg.tau_max; ++tau) {
      const auto& c = sweep.cell(phi, tau);
      out << ',' << formatNumber(c.mean_steps);
      caps += c.cap_hits;
    }
    out << ',' << formatNumber(sweep.overallMean(phi)) << ',' << caps << '\n';
  }
}

int SwsDifferenceTable::bestSws() const {
  if (mean.empty()) throw std::logic_error("empty SWS table");
  const auto it = std::min_element(mean.begin(), mean.end());
  return sws_values[static_cast<std::size_t>(it - mean.begin())];
}

SwsDifferenceTable swsDifferenceTable(const GridResult& grid, Kpi kpi) {
  SwsDifferenceTable t;
  t.kpi = kpi;
  for (const auto& p : grid.points) {
    if (p.point.tracker != TrackerKind::kHotCold) continue;
    if (std::find(t.sws_values.begin(), t.sws_values.end(), p.point.sws) == t.sws_values.end())
      t.sws_values.push_back(p.point.sws);
    if (std::find(t.sigma_values.begin(), t.sigma_values.end(), p.point.sigma_db) ==
        t.sigma_values.end())
      t.sigma_values.push_back(p.point.sigma_db);
  }
  const bool lower_is_better = kpi == Kpi::kAverageDistance;
  t.difference.assign(t.sws_values.size(), std::vector<double>(t.sigma_values.size(), 0.0));
  for (std::size_t j = 0; j < t.sigma_values.size(); ++j) {
    std::vector<double> column;
    for (int sws : t.sws_values) {
      const PointResult* p = grid.find(TrackerKind::kHotCold, sws, t.sigma_values[j]);
      column.push_back(p ? kpiValue(*p, kpi) : std::nan(""));
    }
    double best = lower_is_better ? std::numeric_limits<double>::infinity()
                                  : -std::numeric_limits<double>::infinity();
    for (double v : column) {
      if (std::isnan(v)) continue;
      best = lower_is_better ? std::min(best, v) : std::max(best, v);
    }
    for (std::size_t i = 0; i < column.size(); ++i)
      t.difference[i][j] = lower_is_better ? column[i] - best : best - column[i];
  }
  for (const auto& row : t.difference) {
    const KpiStats s = summarize(row);
    t.mean.push_back(s.mean);
    t.stddev.push_back(s.stddev);
  }
  return t;
}

void writeSwsDifferenceCsv(std::ostream& out, const SwsDifferenceTable& table) {
  out << "sws";
  for (double sigma : table.sigma_values) out << ",sigma_" << fmt::format("{:g}", sigma);
  out << ",mean,std\n";
  for (std::size_t i = 0; i < table.sws_values.size(); ++i) {
    out << table.sws_values[i];
    for (double d : table.difference[i]) out << ',' << formatNumber(d);
    out << ',' << formatNumber(table.mean[i]) << ',' << formatNumber(table.stddev[i]) << '\n';
  }
}

void writeSigmaComparisonCsv(std::ostream& out, const GridResult& grid, Kpi kpi) {
  out << "sigma_db,series,mean,std,runs\n";
  std::vector<double> sigmas;
  for (const auto& p : grid.points)
    if (std::find(sigmas.begin(), sigmas.end(), p.point.sigma_db) == sigmas.end())
      sigmas.push_back(p.point.sigma_db);
  std::sort(sigmas.begin(), sigmas.end());
  for (double sigma : sigmas) {
    for (const auto& p : grid.points) {
      if (p.point.sigma_db != sigma) continue;
      const KpiStats& s = kpiStats(p, kpi);
      const auto ok = std::count_if(p.runs.begin(), p.runs.end(),
                                    [](const auto& r) { return r.has_value(); });
      out << formatNumber(sigma) << ',' << p.point.seriesName() << ',' << formatNumber(s.mean)
          << ',' << formatNumber(s.stddev) << ',' << ok << '\n';
    }
  }
}

void writeGridRunsCsv(std::ostream& out, const GridResult& grid) {
  out << "tracker,sws,sigma_db,run,seed,average_distance_m,cycles_in_range,cycles_in_halt,"
         "total_cycles,error\n";
  for (const auto& p : grid.points) {
    for (std::size_t r = 0; r < p.runs.size(); ++r) {
      out << toString(p.point.tracker) << ',' << p.point.sws << ',' << formatNumber(p.point.sigma_db)
          << ',' << r << ',' << p.seeds[r] << ',';
      if (const auto& m = p.runs[r]) {
        out << formatNumber(m->average_distance_m) << ',' << m->cycles_in_range << ','
            << m->cycles_in_halt << ',' << m->total_cycles << ",\n";
      } else {
        std::string err = p.errors[r];
        std::replace(err.begin(), err.end(), ',', ';');
        out << ",,,," << err << '\n';
      }
    }
  }
}

void writeScenarioCsv(std::ostream& out, const ScenarioResult& result) {
  out << "time_s,iteration,distance_m\n";
  for (std::size_t it = 0; it < result.iterations.size(); ++it)
    for (const auto& s : result.iterations[it])
      out << formatNumber(s.time_s) << ',' << it << ',' << formatNumber(s.distance_m) << '\n';
}

nlohmann::ordered_json lemmaReportJson(const analysis::LemmaReport& r) {
  auto coefficients = [](const analysis::ThresholdCoefficients& k) {
    nlohmann::ordered_json j;
    j["r1"] = {{"s", k.r1_s}, {"t", k.r1_t}};
    j["r2"] = {{"s", k.r2_s}, {"t", k.r2_t}};
    j["r3"] = {{"s", k.r3_s}, {"t", k.r3_t}};
    return j;
  };
  nlohmann::ordered_json j;
  j["trials"] = r.trials;
  j["phi_deg"] = r.phi_deg;
  j["lemma1"] = {{"checked", r.lemma1_checked}, {"violations", r.lemma1_violations}};
  j["first_rotation"] = {{"checked", r.first_rotation_checked},
                         {"violations", r.first_rotation_violations}};
  j["second_rotation"] = {{"checked", r.second_rotation_checked},
                          {"violations", r.second_rotation_violations}};
  j["net_approach"] = {{"checked", r.net_approach_checked},
                       {"violations", r.net_approach_violations}};
  j["ordering"] = {{"checked", r.ordering_checked},
                   {"r1_r2_violations", r.ordering_r1_r2_violations},
                   {"r1_r3_violations", r.ordering_r1_r3_violations}};
  j["total_violations"] = r.totalViolations();
  j["symbolic_coefficients"] = coefficients(r.symbolic);
  j["printed_coefficients_137"] = coefficients(r.printed);
  return j;
}

}  // namespace hotcold
