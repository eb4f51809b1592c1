#include "epf/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace epf {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  for (const auto& line : lines) out << line << '\n';
  if (!out) throw Error(Errc::io_error, "write failed for " + path);
}

namespace {

// Parses `YYYY-MM-DD HH:00` into a date and an hour index 0..23.
bool parse_timestamp(const std::string& s, Date* date, int* hh) {
  int y, m, d, h, minute;
  char tail;
  int n = std::sscanf(s.c_str(), "%d-%d-%d %d:%d%c", &y, &m, &d, &h, &minute,
                      &tail);
  if (n != 5 || minute != 0 || h < 0 || h > 23) return false;
  if (m < 1 || m > 12 || d < 1 || d > 31) return false;
  *date = Date{y, m, d};
  *hh = h;
  return true;
}

double parse_cell(const std::string& cell, const std::string& context) {
  char* end = nullptr;
  double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0' || !std::isfinite(v))
    throw Error(Errc::io_error, "bad numeric cell '" + cell + "' at " + context);
  return v;
}

}  // namespace

HourlyPanel load_market_csv(const std::string& path) {
  auto lines = read_lines(path);
  // Written panels carry `# key = value` annotation lines; skip any comments.
  std::size_t first = 0;
  while (first < lines.size() &&
         (lines[first].empty() || lines[first][0] == '#'))
    ++first;
  if (first >= lines.size())
    throw Error(Errc::malformed_header, "empty file " + path);

  auto header = split(lines[first], ',');
  if (header.empty() || trim(header[0]) != "timestamp")
    throw Error(Errc::malformed_header,
                "first column must be 'timestamp' in " + path);
  std::vector<SeriesId> columns;
  for (size_t c = 1; c < header.size(); ++c) {
    auto id = parse_series(trim(header[c]));
    if (!id)
      throw Error(Errc::unknown_series,
                  "unknown series '" + trim(header[c]) + "' in " + path);
    columns.push_back(*id);
  }
  if (columns.empty())
    throw Error(Errc::malformed_header, "no data columns in " + path);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  HourlyPanel panel;
  long t_prev = -1;
  long origin_serial = 0;
  std::vector<std::vector<double>> cols(columns.size());

  for (size_t r = first + 1; r < lines.size(); ++r) {
    if (lines[r].empty() || lines[r][0] == '#') continue;
    auto cells = split(lines[r], ',');
    if (cells.size() != columns.size() + 1)
      throw Error(Errc::malformed_header,
                  "row " + std::to_string(r + 1) + " has wrong column count");
    Date date;
    int hh;
    if (!parse_timestamp(trim(cells[0]), &date, &hh))
      throw Error(Errc::io_error,
                  "unparseable timestamp '" + trim(cells[0]) + "' at row " +
                      std::to_string(r + 1));
    if (t_prev < 0) {
      panel.start_date = Date{date.y, date.m, date.d};
      origin_serial = days_from_civil(panel.start_date);
    }
    long t = (days_from_civil(date) - origin_serial) * 24 + hh;
    if (t < t_prev)
      throw Error(Errc::non_monotone_timestamps,
                  "timestamp goes backwards at row " + std::to_string(r + 1));

    if (t == t_prev) {
      // Repeated hour: keep the extra reading aside for later averaging.
      for (size_t c = 0; c < columns.size(); ++c) {
        std::string cell = trim(cells[c + 1]);
        if (cell.empty()) continue;
        panel.duplicates.push_back(
            {columns[c], t, parse_cell(cell, "row " + std::to_string(r + 1))});
      }
      continue;
    }

    for (auto& col : cols) col.resize(static_cast<size_t>(t) + 1, nan);
    for (size_t c = 0; c < columns.size(); ++c) {
      std::string cell = trim(cells[c + 1]);
      if (!cell.empty())
        cols[c][static_cast<size_t>(t)] =
            parse_cell(cell, "row " + std::to_string(r + 1));
    }
    t_prev = t;
  }

  if (t_prev < 0) throw Error(Errc::malformed_header, "no data rows in " + path);

  panel.n_days = static_cast<int>(t_prev / 24 + 1);
  for (size_t c = 0; c < columns.size(); ++c) {
    cols[c].resize(static_cast<size_t>(panel.n_hours()), nan);
    panel.series[columns[c]] = std::move(cols[c]);
  }
  panel.validate_shape();
  return panel;
}

}  // namespace epf
