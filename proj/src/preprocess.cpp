#include "epf/preprocess.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace epf {

namespace {

void fill_hourly_gaps(std::vector<double>& v, SeriesId id) {
  const long n = static_cast<long>(v.size());
  long t = 0;
  while (t < n) {
    if (!std::isnan(v[t])) {
      ++t;
      continue;
    }
    long run_end = t;
    while (run_end + 1 < n && std::isnan(v[run_end + 1])) ++run_end;
    if (t == 0 || run_end == n - 1)
      throw Error(Errc::gap_at_series_boundary,
                  std::string("series ") + series_name(id) +
                      " is missing at a boundary; no neighbours to average");
    double fill = 0.5 * (v[t - 1] + v[run_end + 1]);
    for (long k = t; k <= run_end; ++k) v[k] = fill;
    t = run_end + 1;
  }
}

void fill_daily_series(std::vector<double>& v, int n_days, SeriesId id) {
  // One value per day: average whatever readings the day has, then carry the
  // most recent close forward over empty days (weekends, holidays).
  std::vector<double> daily(static_cast<size_t>(n_days),
                            std::numeric_limits<double>::quiet_NaN());
  for (int d = 0; d < n_days; ++d) {
    double sum = 0.0;
    int cnt = 0;
    for (int h = 1; h <= 24; ++h) {
      double x = v[static_cast<size_t>(HourlyPanel::flat_index(d, h))];
      if (!std::isnan(x)) {
        sum += x;
        ++cnt;
      }
    }
    if (cnt > 0) daily[static_cast<size_t>(d)] = sum / cnt;
  }
  for (int d = 0; d < n_days; ++d) {
    if (std::isnan(daily[static_cast<size_t>(d)])) {
      if (d == 0)
        throw Error(Errc::gap_at_series_boundary,
                    std::string("series ") + series_name(id) +
                        " has no value on the first day");
      daily[static_cast<size_t>(d)] = daily[static_cast<size_t>(d - 1)];
    }
    for (int h = 1; h <= 24; ++h)
      v[static_cast<size_t>(HourlyPanel::flat_index(d, h))] =
          daily[static_cast<size_t>(d)];
  }
}

}  // namespace

HourlyPanel normalize_calendar(const HourlyPanel& raw) {
  raw.validate_shape();
  HourlyPanel out;
  out.start_date = raw.start_date;
  out.n_days = raw.n_days;
  out.series = raw.series;

  // Collapse duplicated hours first so they count as ordinary observations.
  std::map<std::pair<SeriesId, long>, std::pair<double, int>> acc;
  for (const auto& dup : raw.duplicates) {
    auto& slot = acc[{dup.id, dup.t}];
    slot.first += dup.value;
    slot.second += 1;
  }
  for (const auto& [key, sum_cnt] : acc) {
    auto it = out.series.find(key.first);
    if (it == out.series.end())
      throw Error(Errc::unknown_series, "duplicate for absent series");
    double& cell = it->second[static_cast<size_t>(key.second)];
    double total = sum_cnt.first;
    int cnt = sum_cnt.second;
    if (!std::isnan(cell)) {
      total += cell;
      cnt += 1;
    }
    cell = total / cnt;
  }

  // A day with nothing in any hourly series cannot be repaired from within.
  for (int d = 0; d < out.n_days; ++d) {
    bool any = false;
    for (const auto& [id, v] : out.series) {
      if (is_daily_series(id)) continue;
      for (int h = 1; h <= 24 && !any; ++h)
        any = !std::isnan(v[static_cast<size_t>(HourlyPanel::flat_index(d, h))]);
      if (any) break;
    }
    bool has_hourly = false;
    for (const auto& [id, v] : out.series)
      if (!is_daily_series(id)) has_hourly = true;
    if (has_hourly && !any)
      throw Error(Errc::all_missing_day,
                  "day " + format_date(out.date_of_day(d)) +
                      " is empty in every hourly series");
  }

  for (auto& [id, v] : out.series) {
    if (id == SeriesId::id_partial) continue;
    if (is_daily_series(id))
      fill_daily_series(v, out.n_days, id);
    else
      fill_hourly_gaps(v, id);
  }

  // Partial intraday gaps take the day-ahead price for the same delivery hour.
  if (out.has(SeriesId::id_partial)) {
    auto& part = out.series[SeriesId::id_partial];
    if (out.has(SeriesId::da_price)) {
      const auto& da = out.series[SeriesId::da_price];
      for (size_t t = 0; t < part.size(); ++t)
        if (std::isnan(part[t])) part[t] = da[t];
    }
    fill_hourly_gaps(part, SeriesId::id_partial);
  }
  return out;
}

}  // namespace epf
