#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epf/common.hpp"

namespace epf {

// Market data series accepted in input CSV headers.
enum class SeriesId {
  da_price,
  id3_price,
  id_partial,
  load_fc,
  wind_fc,
  solar_fc,
  gas_price,
  eua_price,
};

inline constexpr std::array<SeriesId, 8> kAllSeries = {
    SeriesId::da_price, SeriesId::id3_price, SeriesId::id_partial,
    SeriesId::load_fc,  SeriesId::wind_fc,   SeriesId::solar_fc,
    SeriesId::gas_price, SeriesId::eua_price};

const char* series_name(SeriesId id);
std::optional<SeriesId> parse_series(const std::string& name);

// Daily commodity series are stored hourly but carry one value per day.
bool is_daily_series(SeriesId id);

// Hourly panel over consecutive calendar days. Hours run 1..24 (hour h covers
// the delivery period starting at clock time h-1). Missing values are NaN.
struct HourlyPanel {
  Date start_date;
  int n_days = 0;
  std::map<SeriesId, std::vector<double>> series;

  // Extra readings observed at an already-filled timestamp (the duplicated
  // hour of the autumn clock change). Collapsed by normalize_calendar.
  struct Duplicate {
    SeriesId id;
    long t;
    double value;
  };
  std::vector<Duplicate> duplicates;

  long n_hours() const { return 24L * n_days; }
  bool has(SeriesId id) const { return series.count(id) > 0; }

  static long flat_index(int day, int hour) { return 24L * day + (hour - 1); }

  double at(SeriesId id, int day, int hour) const;
  void set(SeriesId id, int day, int hour, double v);

  Date date_of_day(int day) const { return add_days(start_date, day); }
  int weekday_of_day(int day) const { return weekday_mon1(date_of_day(day)); }

  // Day index of a calendar date, or -1 when outside the panel.
  int day_of_date(const Date& date) const;

  void validate_shape() const;
};

}  // namespace epf
