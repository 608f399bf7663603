#ifndef HOTCOLD_REPORT_HPP_
#define HOTCOLD_REPORT_HPP_

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hotcold/analysis.hpp"
#include "hotcold/experiments.hpp"
#include "hotcold/simulation.hpp"

namespace hotcold {

// CSV schemas (header row first, '\n' line endings, fixed 6-decimal floats):
//
//   trace        time_s,robot_x,robot_y,robot_heading_deg,target_x,target_y,
//                rssi_dbm,in_range,in_halt,decision
//   fig2         phi_deg,eps_0..eps_N,overall_mean,percent_valid  ('X' = invalid)
//   fig3         phi_deg,overall_mean,percent_valid
//   fig4         phi_deg,tau_1..tau_N,overall_mean,cap_hits
//   fig5/6/7     sws,sigma_<s>...,mean,std   (difference from the best SWS per sigma)
//   fig8/9/10    sigma_db,series,mean,std,runs
//   grid_runs    tracker,sws,sigma_db,run,seed,average_distance_m,cycles_in_range,
//                cycles_in_halt,total_cycles,error
//   scenario     time_s,iteration,distance_m

enum class Kpi { kAverageDistance, kCyclesInRange, kCyclesInHalt };

std::string toString(Kpi kpi);

std::string formatNumber(double value);

void writeTraceCsv(std::ostream& out, const std::vector<TraceRecord>& trace);

nlohmann::ordered_json metricsJson(const MetricsReport& metrics);

void writeRotationHeatmapCsv(std::ostream& out, const analysis::RotationSweep& sweep);
void writeRotationSummaryCsv(std::ostream& out, const analysis::RotationSweep& sweep);
void writeExhaustiveCsv(std::ostream& out, const analysis::ExhaustiveSweep& sweep);

/// Hot-Cold SWS table of one KPI: for each sigma, the distance of every SWS
/// from the best SWS at that sigma (minimum for distance, maximum for the
/// cycle counts), then mean and sample std across sigma per SWS.
struct SwsDifferenceTable {
  Kpi kpi = Kpi::kAverageDistance;
  std::vector<int> sws_values;
  std::vector<double> sigma_values;
  std::vector<std::vector<double>> difference;  // [sws][sigma], >= 0
  std::vector<double> mean;
  std::vector<double> stddev;

  /// SWS with the smallest mean difference.
  int bestSws() const;
};

SwsDifferenceTable swsDifferenceTable(const GridResult& grid, Kpi kpi);
void writeSwsDifferenceCsv(std::ostream& out, const SwsDifferenceTable& table);

/// KPI versus sigma for every series in the grid (long format).
void writeSigmaComparisonCsv(std::ostream& out, const GridResult& grid, Kpi kpi);

void writeGridRunsCsv(std::ostream& out, const GridResult& grid);

void writeScenarioCsv(std::ostream& out, const ScenarioResult& result);

nlohmann::ordered_json lemmaReportJson(const analysis::LemmaReport& report);

}  // namespace hotcold

#endif  // HOTCOLD_REPORT_HPP_
