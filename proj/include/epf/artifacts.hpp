#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "epf/arx.hpp"
#include "epf/backtest.hpp"
#include "epf/methods.hpp"
#include "epf/series.hpp"
#include "epf/trading.hpp"

namespace epf {

// Every stage file starts with `# key = value` annotation lines; `config`
// always carries the fingerprint of the producing run so downstream stages
// can refuse mismatched inputs.
using ArtifactMeta = std::map<std::string, std::string>;

ArtifactMeta read_artifact_meta(const std::string& path);

// Checks the embedded fingerprint; throws missing_stage when the file was
// produced by a different configuration.
void require_config(const ArtifactMeta& meta, const std::string& fingerprint,
                    const std::string& path);

// Hourly panel in the ingestion format (timestamp rows, one column per
// series), re-readable with load_market_csv.
void write_panel_csv(const std::string& path, const HourlyPanel& panel,
                     const std::string& fingerprint);

// Point-forecast panel: date, hour, one column per window length.
void write_forecast_csv(const std::string& path, const ForecastPanel& panel,
                        const std::string& fingerprint);
ForecastPanel read_forecast_csv(const std::string& path);

// One value per row: date, hour, value. Used for the combined point forecast
// and for realized prices.
void write_hourly_csv(const std::string& path, const std::string& column,
                      const Eigen::VectorXd& values, Date start_date,
                      const std::string& fingerprint);
Eigen::VectorXd read_hourly_csv(const std::string& path, Date* start_date);

// Quantile surface in natural units: date, hour, q01..q99.
void write_surface_csv(const std::string& path, const QuantileSurface& surface,
                       const std::string& fingerprint);

// Prediction intervals: date, hour, level_pct, lower, upper.
void write_intervals_csv(const std::string& path, const IntervalSet& intervals,
                         const std::string& fingerprint);
IntervalSet read_intervals_csv(const std::string& path, Method method);

// Coverage backtest results for one method across levels.
void write_coverage_json(const std::string& path, Method method,
                         const std::vector<CoverageReport>& reports,
                         const std::string& fingerprint);

// Trading ledger: date, h1, h2, buy_limit, sell_limit, accept_buy,
// accept_sell, cash, volume. Infinite limits round-trip as inf/-inf.
void write_ledger_csv(const std::string& path, const TradeLedger& ledger,
                      const std::string& fingerprint);
TradeLedger read_ledger_csv(const std::string& path);

}  // namespace epf
