#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "epf/common.hpp"

namespace epf {

// Daily one-cycle battery arbitrage. The strategy pushes 1 MWh through the
// battery per day: it buys 1/eta MWh at the forecast-cheap hour and sells
// eta MWh at the forecast-dear hour.
struct BatterySpec {
  double capacity_mw = 2.5;
  double efficiency = 0.9;  // per-leg factor eta
  double min_soc_fraction = 0.2;
  double daily_trade_energy = 1.0;  // MWh through the battery per cycle
};

// Buy hour, sell hour, and the limit prices taken from a prediction interval
// (buy at the upper bound, sell at the lower bound).
struct DayOrders {
  int h1 = 1;
  int h2 = 2;
  double buy_limit = 0.0;
  double sell_limit = 0.0;
};

// Argmax over h1 < h2 of eta*fc[h2] - (1/eta)*fc[h1], ties to the earliest
// h1 and then the earliest h2. Hours are 1-based.
std::pair<int, int> select_hours(const Eigen::VectorXd& fc24, double eta);

struct DayEntry {
  Date date;
  int h1 = 1, h2 = 2;
  double buy_limit = 0.0, sell_limit = 0.0;
  bool accept_buy = false, accept_sell = false;
  double cash = 0.0;
  double volume = 0.0;  // MWh
  bool unresolved = false;  // an unwind was needed but no next-day price exists
};

struct TradeLedger {
  std::vector<DayEntry> days;
  double total_cash = 0.0;
  double total_volume = 0.0;
  bool has_unresolved = false;

  bool profit_defined() const { return total_volume > 0.0; }
  double profit_per_mwh() const;  // throws when no volume was traded
};

// Settles one day. A leg whose limit is not met is replaced by a price-taker
// transaction at hour 1 of the following day; with no following day the entry
// is marked unresolved and its cash contribution is dropped.
DayEntry settle_day(const DayOrders& orders, const Eigen::VectorXd& prices24,
                    std::optional<double> next_day_h1,
                    const BatterySpec& battery);

// Daily cycle over an out-of-sample range: pick hours from the point
// forecast, set limits from the interval bounds at those hours, settle.
// point_fc and prices are day-major with 24 entries per day; lower/upper give
// the interval bounds for one nominal level in the same layout.
TradeLedger run_strategy(const Eigen::VectorXd& point_fc,
                         const Eigen::VectorXd& lower,
                         const Eigen::VectorXd& upper,
                         const Eigen::VectorXd& prices, Date start_date,
                         const BatterySpec& battery);

// Unlimited-bids reference: both legs always execute at the realized prices.
// Identical to run_strategy with infinite limits by construction.
TradeLedger run_benchmark(const Eigen::VectorXd& point_fc,
                          const Eigen::VectorXd& prices, Date start_date,
                          const BatterySpec& battery);

struct Regime {
  std::string name;
  Date first, last;  // inclusive
};

struct RegimeStats {
  std::string name;
  double cash = 0.0;
  double volume = 0.0;
  int n_days = 0;
};

// Per-regime aggregates; throws boundary_out_of_range when a regime window
// does not intersect the ledger.
std::vector<RegimeStats> regime_report(const TradeLedger& ledger,
                                       const std::vector<Regime>& regimes);

// The three EPEX evaluation periods used as presets.
std::vector<Regime> epex_regimes();

}  // namespace epf
