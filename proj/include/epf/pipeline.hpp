#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>

#include "epf/arx.hpp"
#include "epf/config.hpp"
#include "epf/methods.hpp"
#include "epf/series.hpp"

namespace epf {

// Day-index arithmetic shared by the point and probabilistic stages. The
// forecast block covers the interval-calibration days followed by the
// out-of-sample days, and must leave the longest window plus seven lag days
// of history in front of it.
struct StageRanges {
  int forecast_first_day = 0;  // panel day index of the first forecast
  int forecast_days = 0;       // calib_days + oos_days
  int oos_days = 0;
};
StageRanges compute_ranges(const PipelineConfig& cfg, int panel_days);

// The probabilistic stage in memory: for every out-of-sample day, fit the
// day's reference transform on the longest window of realized prices, move
// the forecast panel and realized targets into that domain, run the requested
// interval methods, and invert the quantile surfaces back to price units.
struct ProbResult {
  Date oos_start;
  int oos_first_day = 0;  // panel day index
  int n_days = 0;
  Eigen::VectorXd point_fc;  // combined point forecast, natural units
  Eigen::VectorXd prices;    // realized prices over the same span
  std::map<Method, QuantileSurface> surfaces;
};
ProbResult prob_stage(const HourlyPanel& panel, const ForecastPanel& forecasts,
                      const PipelineConfig& cfg);

// Rolling point forecasts over the range computed by compute_ranges.
ForecastPanel point_stage(const HourlyPanel& panel, const PipelineConfig& cfg);

// Stage commands. Each one reads its inputs from cfg.out_dir, verifies the
// embedded config fingerprints, and writes its outputs back there.
void run_ingest(const PipelineConfig& cfg);  // input_csv -> panel.csv
void run_synth(const PipelineConfig& cfg);   // generator -> panel.csv
void run_point(const PipelineConfig& cfg);   // panel.csv -> forecasts.csv
void run_prob(const PipelineConfig& cfg);    // -> point, prices, surfaces, intervals
void run_eval(const PipelineConfig& cfg);    // -> coverage_<method>.json
void run_trade(const PipelineConfig& cfg);   // -> ledgers, trade_summary.json
void run_report(const PipelineConfig& cfg);  // -> summary tables

// All stages in dependency order (synth or ingest chosen by input_csv).
void run_pipeline(const PipelineConfig& cfg);

// Artifact file names under cfg.out_dir.
std::string panel_path(const PipelineConfig& cfg);
std::string forecast_path(const PipelineConfig& cfg);
std::string point_path(const PipelineConfig& cfg);
std::string prices_path(const PipelineConfig& cfg);
std::string surface_path(const PipelineConfig& cfg, Method m);
std::string intervals_path(const PipelineConfig& cfg, Method m);
std::string coverage_path(const PipelineConfig& cfg, Method m);
std::string ledger_path(const PipelineConfig& cfg, Method m, int level_pct);
std::string benchmark_ledger_path(const PipelineConfig& cfg);

}  // namespace epf
