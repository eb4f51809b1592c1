#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <vector>

#include "epf/npit.hpp"
#include "epf/series.hpp"

namespace epf {

enum class MarketModel { DA, IDA };

struct ModelSpec {
  MarketModel market = MarketModel::DA;
  bool include_solar = true;
  int solar_first = 9;
  int solar_last = 17;

  bool solar_hour(int h) const {
    return include_solar && h >= solar_first && h <= solar_last;
  }
  SeriesId target_series() const {
    return market == MarketModel::DA ? SeriesId::da_price : SeriesId::id3_price;
  }
  std::vector<SeriesId> required_series() const;
};

// Regressor vectors in a fixed order (weekday one-hot first, then price lags
// and daily summaries, then exogenous forecasts, then commodities). The panel
// must already be in the domain the regression runs in. Throws
// insufficient_history when lag-7 reaches before the panel start.
Eigen::VectorXd build_design_row_da(const HourlyPanel& panel, int d, int h,
                                    const ModelSpec& spec);
Eigen::VectorXd build_design_row_ida(const HourlyPanel& panel, int d, int h,
                                     const ModelSpec& spec);
Eigen::VectorXd build_design_row(const HourlyPanel& panel, int d, int h,
                                 const ModelSpec& spec);

// 24 separate per-hour regressions on the tau days ending at d-1, then a
// forecast of day d, all in the panel's own units.
std::array<double, 24> forecast_day(const HourlyPanel& panel,
                                    const ModelSpec& spec, int d, int tau);

struct NpitSettings {
  bool enabled = true;
  double clamp_eps = -1.0;  // <= 0 selects the per-fit default 1/(2n)
};

// One map per model series, fitted on the pooled hourly values of the tau
// days ending at d-1.
std::map<SeriesId, NpitMap> fit_window_maps(const HourlyPanel& natural,
                                            const ModelSpec& spec, int d,
                                            int tau, const NpitSettings& npit);

// Copy of days [first_day, first_day + n_days) with every mapped series sent
// through its map.
HourlyPanel transform_slice(const HourlyPanel& natural,
                            const std::map<SeriesId, NpitMap>& maps,
                            int first_day, int n_days);

// Point forecasts for a range of days across calibration windows, in natural
// price units (each window's forecast is produced in that window's
// transformed domain and inverted back through the same map).
struct ForecastPanel {
  std::vector<int> tau_index;  // ascending window lengths
  int first_day = 0;           // source-panel day index of row block 0
  int n_days = 0;
  Date start_date;
  MarketModel market = MarketModel::DA;
  Eigen::MatrixXd values;  // (n_days*24) x n_taus

  long rows() const { return 24L * n_days; }
  int tau_col(int tau) const;
};

ForecastPanel rolling_forecast(const HourlyPanel& natural,
                               const ModelSpec& spec,
                               const std::vector<int>& taus,
                               int eval_first_day, int eval_n_days,
                               const NpitSettings& npit, int threads = 1);

// Arithmetic mean over the selected window columns, row by row.
Eigen::VectorXd average_point_forecast(const ForecastPanel& panel,
                                       const std::vector<int>& taus);

// Elementwise actual minus forecast.
Eigen::VectorXd compute_errors(const Eigen::VectorXd& actual,
                               const Eigen::VectorXd& forecast);

}  // namespace epf
