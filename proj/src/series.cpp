#include "epf/series.hpp"

#include <cmath>
#include <limits>

namespace epf {

const char* series_name(SeriesId id) {
  switch (id) {
    case SeriesId::da_price: return "da_price";
    case SeriesId::id3_price: return "id3_price";
    case SeriesId::id_partial: return "id_partial";
    case SeriesId::load_fc: return "load_fc";
    case SeriesId::wind_fc: return "wind_fc";
    case SeriesId::solar_fc: return "solar_fc";
    case SeriesId::gas_price: return "gas_price";
    case SeriesId::eua_price: return "eua_price";
  }
  return "?";
}

std::optional<SeriesId> parse_series(const std::string& name) {
  for (SeriesId id : kAllSeries)
    if (name == series_name(id)) return id;
  return std::nullopt;
}

bool is_daily_series(SeriesId id) {
  return id == SeriesId::gas_price || id == SeriesId::eua_price;
}

double HourlyPanel::at(SeriesId id, int day, int hour) const {
  auto it = series.find(id);
  if (it == series.end())
    throw Error(Errc::unknown_series,
                std::string("panel has no series ") + series_name(id));
  return it->second[static_cast<size_t>(flat_index(day, hour))];
}

void HourlyPanel::set(SeriesId id, int day, int hour, double v) {
  series[id].resize(static_cast<size_t>(n_hours()),
                    std::numeric_limits<double>::quiet_NaN());
  series[id][static_cast<size_t>(flat_index(day, hour))] = v;
}

int HourlyPanel::day_of_date(const Date& date) const {
  long diff = days_from_civil(date) - days_from_civil(start_date);
  if (diff < 0 || diff >= n_days) return -1;
  return static_cast<int>(diff);
}

void HourlyPanel::validate_shape() const {
  for (const auto& [id, values] : series) {
    if (static_cast<long>(values.size()) != n_hours())
      throw Error(Errc::dimension_mismatch,
                  std::string("series ") + series_name(id) +
                      " has wrong length for panel shape");
  }
}

}  // namespace epf
