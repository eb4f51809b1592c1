#include "epf/trading.hpp"

#include <cmath>
#include <limits>

namespace epf {

double TradeLedger::profit_per_mwh() const {
  if (!profit_defined())
    throw Error(Errc::degenerate_sample,
                "profit per MWh undefined: no volume traded");
  return total_cash / total_volume;
}

std::pair<int, int> select_hours(const Eigen::VectorXd& fc24, double eta) {
  if (fc24.size() != 24)
    throw Error(Errc::dimension_mismatch, "select_hours: need 24 forecasts");
  if (!fc24.allFinite())
    throw Error(Errc::non_finite_input, "select_hours: non-finite forecast");
  int best_h1 = 1, best_h2 = 2;
  double best = -std::numeric_limits<double>::infinity();
  for (int h1 = 1; h1 <= 23; ++h1) {
    for (int h2 = h1 + 1; h2 <= 24; ++h2) {
      double value = eta * fc24[h2 - 1] - fc24[h1 - 1] / eta;
      if (value > best) {
        best = value;
        best_h1 = h1;
        best_h2 = h2;
      }
    }
  }
  return {best_h1, best_h2};
}

DayEntry settle_day(const DayOrders& orders, const Eigen::VectorXd& prices24,
                    std::optional<double> next_day_h1,
                    const BatterySpec& battery) {
  if (prices24.size() != 24)
    throw Error(Errc::dimension_mismatch, "settle_day: need 24 prices");
  const double eta = battery.efficiency;
  const double buy_mwh = battery.daily_trade_energy / eta;
  const double sell_mwh = battery.daily_trade_energy * eta;

  DayEntry e;
  e.h1 = orders.h1;
  e.h2 = orders.h2;
  e.buy_limit = orders.buy_limit;
  e.sell_limit = orders.sell_limit;

  double p_buy = prices24[orders.h1 - 1];
  double p_sell = prices24[orders.h2 - 1];
  e.accept_buy = p_buy <= orders.buy_limit;
  e.accept_sell = p_sell >= orders.sell_limit;

  if (!e.accept_buy && !e.accept_sell) return e;  // no action, zero volume

  e.volume = buy_mwh + sell_mwh;
  double cash = 0.0;
  if (e.accept_buy)
    cash -= buy_mwh * p_buy;
  else if (next_day_h1)
    cash -= buy_mwh * *next_day_h1;
  else
    e.unresolved = true;
  if (e.accept_sell)
    cash += sell_mwh * p_sell;
  else if (next_day_h1)
    cash += sell_mwh * *next_day_h1;
  else
    e.unresolved = true;
  e.cash = e.unresolved ? 0.0 : cash;
  return e;
}

namespace {

TradeLedger run_days(const Eigen::VectorXd& point_fc,
                     const Eigen::VectorXd& prices, Date start_date,
                     const BatterySpec& battery,
                     const std::function<void(int, int, int, DayOrders*)>& limits) {
  if (point_fc.size() != prices.size() || point_fc.size() % 24 != 0)
    throw Error(Errc::dimension_mismatch,
                "trading inputs must be aligned whole days");
  const int n_days = static_cast<int>(point_fc.size() / 24);
  TradeLedger ledger;
  ledger.days.reserve(static_cast<size_t>(n_days));
  for (int d = 0; d < n_days; ++d) {
    Eigen::VectorXd fc = point_fc.segment(24L * d, 24);
    auto [h1, h2] = select_hours(fc, battery.efficiency);
    DayOrders orders;
    orders.h1 = h1;
    orders.h2 = h2;
    limits(d, h1, h2, &orders);
    std::optional<double> unwind;
    if (d + 1 < n_days) unwind = prices[24L * (d + 1)];
    DayEntry e = settle_day(orders, prices.segment(24L * d, 24), unwind, battery);
    e.date = add_days(start_date, d);
    ledger.total_cash += e.cash;
    ledger.total_volume += e.volume;
    ledger.has_unresolved = ledger.has_unresolved || e.unresolved;
    ledger.days.push_back(e);
  }
  return ledger;
}

}  // namespace

TradeLedger run_strategy(const Eigen::VectorXd& point_fc,
                         const Eigen::VectorXd& lower,
                         const Eigen::VectorXd& upper,
                         const Eigen::VectorXd& prices, Date start_date,
                         const BatterySpec& battery) {
  if (lower.size() != point_fc.size() || upper.size() != point_fc.size())
    throw Error(Errc::dimension_mismatch,
                "interval bounds must align with the point forecast");
  return run_days(point_fc, prices, start_date, battery,
                  [&](int d, int h1, int h2, DayOrders* o) {
                    o->buy_limit = upper[24L * d + h1 - 1];
                    o->sell_limit = lower[24L * d + h2 - 1];
                  });
}

TradeLedger run_benchmark(const Eigen::VectorXd& point_fc,
                          const Eigen::VectorXd& prices, Date start_date,
                          const BatterySpec& battery) {
  const double inf = std::numeric_limits<double>::infinity();
  return run_days(point_fc, prices, start_date, battery,
                  [&](int, int, int, DayOrders* o) {
                    o->buy_limit = inf;
                    o->sell_limit = -inf;
                  });
}

std::vector<RegimeStats> regime_report(const TradeLedger& ledger,
                                       const std::vector<Regime>& regimes) {
  std::vector<RegimeStats> out;
  for (const auto& regime : regimes) {
    long first = days_from_civil(regime.first);
    long last = days_from_civil(regime.last);
    if (last < first)
      throw Error(Errc::boundary_out_of_range,
                  "regime '" + regime.name + "' has reversed bounds");
    RegimeStats st;
    st.name = regime.name;
    for (const auto& day : ledger.days) {
      long serial = days_from_civil(day.date);
      if (serial < first || serial > last) continue;
      st.cash += day.cash;
      st.volume += day.volume;
      ++st.n_days;
    }
    if (st.n_days == 0)
      throw Error(Errc::boundary_out_of_range,
                  "regime '" + regime.name + "' lies outside the ledger");
    out.push_back(st);
  }
  return out;
}

std::vector<Regime> epex_regimes() {
  return {{"pre2021", Date{2017, 6, 29}, Date{2020, 12, 31}},
          {"spike2021", Date{2021, 1, 1}, Date{2022, 12, 31}},
          {"settled2023", Date{2023, 1, 1}, Date{2023, 12, 31}}};
}

}  // namespace epf
