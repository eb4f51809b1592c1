#include "epf/arx.hpp"

#include <algorithm>
#include <cmath>

#include "epf/ols.hpp"

namespace epf {

std::vector<SeriesId> ModelSpec::required_series() const {
  std::vector<SeriesId> ids = {SeriesId::da_price, SeriesId::load_fc,
                               SeriesId::wind_fc, SeriesId::gas_price,
                               SeriesId::eua_price};
  if (include_solar) ids.push_back(SeriesId::solar_fc);
  if (market == MarketModel::IDA) {
    ids.push_back(SeriesId::id3_price);
    ids.push_back(SeriesId::id_partial);
  }
  return ids;
}

namespace {

void check_history(const HourlyPanel& panel, int d) {
  if (d < 7 || d >= panel.n_days)
    throw Error(Errc::insufficient_history,
                "design row needs lag-7 history inside the panel (day " +
                    std::to_string(d) + ")");
}

struct DaySummary {
  double min, max, last;
};

DaySummary price_summary(const HourlyPanel& panel, SeriesId id, int d) {
  DaySummary s{panel.at(id, d, 1), panel.at(id, d, 1), panel.at(id, d, 24)};
  for (int h = 2; h <= 24; ++h) {
    double v = panel.at(id, d, h);
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  return s;
}

}  // namespace

Eigen::VectorXd build_design_row_da(const HourlyPanel& panel, int d, int h,
                                    const ModelSpec& spec) {
  check_history(panel, d);
  const bool solar = spec.solar_hour(h);
  Eigen::VectorXd row(17 + (solar ? 1 : 0));
  int wd = panel.weekday_of_day(d);
  for (int i = 0; i < 7; ++i) row[i] = (wd == i + 1) ? 1.0 : 0.0;
  DaySummary prev = price_summary(panel, SeriesId::da_price, d - 1);
  int k = 7;
  row[k++] = panel.at(SeriesId::da_price, d - 1, h);
  row[k++] = panel.at(SeriesId::da_price, d - 2, h);
  row[k++] = panel.at(SeriesId::da_price, d - 7, h);
  row[k++] = prev.min;
  row[k++] = prev.max;
  row[k++] = prev.last;
  row[k++] = panel.at(SeriesId::load_fc, d, h);
  if (solar) row[k++] = panel.at(SeriesId::solar_fc, d, h);
  row[k++] = panel.at(SeriesId::wind_fc, d, h);
  row[k++] = panel.at(SeriesId::eua_price, d - 1, 1);
  row[k++] = panel.at(SeriesId::gas_price, d - 1, 1);
  return row;
}

Eigen::VectorXd build_design_row_ida(const HourlyPanel& panel, int d, int h,
                                     const ModelSpec& spec) {
  check_history(panel, d);
  const bool solar = spec.solar_hour(h);
  Eigen::VectorXd row(18 + (solar ? 1 : 0));
  int wd = panel.weekday_of_day(d);
  for (int i = 0; i < 7; ++i) row[i] = (wd == i + 1) ? 1.0 : 0.0;
  DaySummary prev = price_summary(panel, SeriesId::da_price, d - 1);
  int k = 7;
  // The lag-1 intraday value is only settled for early hours at forecast
  // time; later hours see the partial index instead.
  row[k++] = h <= 10 ? panel.at(SeriesId::id3_price, d - 1, h)
                     : panel.at(SeriesId::id_partial, d - 1, h);
  row[k++] = panel.at(SeriesId::id3_price, d - 2, h);
  row[k++] = panel.at(SeriesId::id3_price, d - 7, h);
  row[k++] = panel.at(SeriesId::da_price, d - 1, h);
  row[k++] = prev.last;
  row[k++] = prev.min;
  row[k++] = prev.max;
  row[k++] = panel.at(SeriesId::load_fc, d, h);
  if (solar) row[k++] = panel.at(SeriesId::solar_fc, d, h);
  row[k++] = panel.at(SeriesId::wind_fc, d, h);
  row[k++] = panel.at(SeriesId::eua_price, d - 1, 1);
  row[k++] = panel.at(SeriesId::gas_price, d - 1, 1);
  return row;
}

Eigen::VectorXd build_design_row(const HourlyPanel& panel, int d, int h,
                                 const ModelSpec& spec) {
  return spec.market == MarketModel::DA ? build_design_row_da(panel, d, h, spec)
                                        : build_design_row_ida(panel, d, h, spec);
}

std::array<double, 24> forecast_day(const HourlyPanel& panel,
                                    const ModelSpec& spec, int d, int tau) {
  if (d - tau < 7)
    throw Error(Errc::insufficient_history,
                "window of " + std::to_string(tau) + " days ending at day " +
                    std::to_string(d - 1) + " lacks lag history");
  const SeriesId target = spec.target_series();
  std::array<double, 24> out{};
  for (int h = 1; h <= 24; ++h) {
    Eigen::VectorXd probe = build_design_row(panel, d - tau, h, spec);
    Eigen::MatrixXd X(tau, probe.size());
    Eigen::VectorXd y(tau);
    X.row(0) = probe;
    y[0] = panel.at(target, d - tau, h);
    for (int e = 1; e < tau; ++e) {
      X.row(e) = build_design_row(panel, d - tau + e, h, spec);
      y[e] = panel.at(target, d - tau + e, h);
    }
    OlsFit fit = ols_fit(X, y);
    out[static_cast<size_t>(h - 1)] =
        ols_predict(fit, build_design_row(panel, d, h, spec));
  }
  return out;
}

std::map<SeriesId, NpitMap> fit_window_maps(const HourlyPanel& natural,
                                            const ModelSpec& spec, int d,
                                            int tau, const NpitSettings& npit) {
  if (!npit.enabled) return {};
  if (d - tau < 0)
    throw Error(Errc::insufficient_history, "window precedes panel start");
  std::map<SeriesId, NpitMap> maps;
  std::vector<double> window;
  window.reserve(static_cast<size_t>(tau) * 24);
  for (SeriesId id : spec.required_series()) {
    window.clear();
    for (int day = d - tau; day < d; ++day)
      for (int h = 1; h <= 24; ++h) window.push_back(natural.at(id, day, h));
    maps[id] = npit_fit(window, npit.clamp_eps);
  }
  return maps;
}

HourlyPanel transform_slice(const HourlyPanel& natural,
                            const std::map<SeriesId, NpitMap>& maps,
                            int first_day, int n_days) {
  if (first_day < 0 || first_day + n_days > natural.n_days)
    throw Error(Errc::insufficient_history, "slice outside panel");
  HourlyPanel out;
  out.start_date = natural.date_of_day(first_day);
  out.n_days = n_days;
  for (const auto& [id, map] : maps) {
    auto src = natural.series.find(id);
    if (src == natural.series.end())
      throw Error(Errc::unknown_series,
                  std::string("no data for mapped series ") + series_name(id));
    std::vector<double> v(static_cast<size_t>(24L * n_days));
    const auto& raw = src->second;
    for (long t = 0; t < 24L * n_days; ++t)
      v[static_cast<size_t>(t)] =
          npit_transform(map, raw[static_cast<size_t>(24L * first_day + t)]);
    out.series[id] = std::move(v);
  }
  return out;
}

int ForecastPanel::tau_col(int tau) const {
  auto it = std::find(tau_index.begin(), tau_index.end(), tau);
  if (it == tau_index.end())
    throw Error(Errc::unknown_tau,
                "window length " + std::to_string(tau) + " not in panel");
  return static_cast<int>(it - tau_index.begin());
}

ForecastPanel rolling_forecast(const HourlyPanel& natural,
                               const ModelSpec& spec,
                               const std::vector<int>& taus,
                               int eval_first_day, int eval_n_days,
                               const NpitSettings& npit, int threads) {
  if (taus.empty())
    throw Error(Errc::config_invalid, "rolling_forecast: no window lengths");
  std::vector<int> sorted_taus = taus;
  std::sort(sorted_taus.begin(), sorted_taus.end());
  int tau_max = sorted_taus.back();
  if (eval_first_day - tau_max - 7 < 0)
    throw Error(Errc::insufficient_history,
                "panel history before first evaluation day is shorter than "
                "max window plus lags");
  if (eval_first_day + eval_n_days > natural.n_days)
    throw Error(Errc::insufficient_history, "evaluation range exceeds panel");

  ForecastPanel out;
  out.tau_index = sorted_taus;
  out.first_day = eval_first_day;
  out.n_days = eval_n_days;
  out.start_date = natural.date_of_day(eval_first_day);
  out.market = spec.market;
  out.values.resize(out.rows(), static_cast<Eigen::Index>(sorted_taus.size()));

  const SeriesId target = spec.target_series();
  parallel_for(eval_n_days, threads, [&](long i) {
    int d = eval_first_day + static_cast<int>(i);
    for (size_t c = 0; c < sorted_taus.size(); ++c) {
      int tau = sorted_taus[static_cast<size_t>(c)];
      std::array<double, 24> fc{};
      if (npit.enabled) {
        auto maps = fit_window_maps(natural, spec, d, tau, npit);
        // The slice carries the window plus lag history plus day d itself.
        int slice_first = d - tau - 7;
        HourlyPanel local =
            transform_slice(natural, maps, slice_first, tau + 8);
        fc = forecast_day(local, spec, tau + 7, tau);
        const NpitMap& price_map = maps.at(target);
        for (double& v : fc) v = npit_inverse(price_map, v);
      } else {
        fc = forecast_day(natural, spec, d, tau);
      }
      for (int h = 1; h <= 24; ++h)
        out.values(24L * i + (h - 1), static_cast<Eigen::Index>(c)) =
            fc[static_cast<size_t>(h - 1)];
    }
  });
  return out;
}

Eigen::VectorXd average_point_forecast(const ForecastPanel& panel,
                                       const std::vector<int>& taus) {
  if (taus.empty())
    throw Error(Errc::unknown_tau, "average_point_forecast: empty window set");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(panel.values.rows());
  for (int tau : taus) acc += panel.values.col(panel.tau_col(tau));
  return acc / static_cast<double>(taus.size());
}

Eigen::VectorXd compute_errors(const Eigen::VectorXd& actual,
                               const Eigen::VectorXd& forecast) {
  if (actual.size() != forecast.size())
    throw Error(Errc::dimension_mismatch, "compute_errors: length mismatch");
  return actual - forecast;
}

}  // namespace epf
