#include "epf/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "epf/config.hpp"
#include "epf/csv.hpp"
#include "json.hpp"

namespace epf {

namespace {

std::string timestamp_of(Date date, int h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d %02d:00", date.y, date.m,
                date.d, h - 1);
  return buf;
}

double parse_number(const std::string& cell, const std::string& context,
                    bool allow_infinite = false) {
  char* end = nullptr;
  double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0' || std::isnan(v))
    throw Error(Errc::io_error, "bad numeric cell '" + cell + "' in " + context);
  if (!allow_infinite && !std::isfinite(v))
    throw Error(Errc::io_error, "non-finite cell '" + cell + "' in " + context);
  return v;
}

long parse_int(const std::string& cell, const std::string& context) {
  char* end = nullptr;
  long v = std::strtol(cell.c_str(), &end, 10);
  if (end == cell.c_str() || *end != '\0')
    throw Error(Errc::io_error, "bad integer cell '" + cell + "' in " + context);
  return v;
}

// Splits a stage file into annotation lines and data lines.
struct StageFile {
  ArtifactMeta meta;
  std::vector<std::string> data;  // header row first
};

StageFile read_stage_file(const std::string& path) {
  StageFile f;
  for (std::string& line : read_lines(path)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = trim(line.substr(1));
      auto eq = body.find('=');
      if (eq != std::string::npos)
        f.meta[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
      continue;
    }
    f.data.push_back(std::move(line));
  }
  if (f.data.empty())
    throw Error(Errc::malformed_header, "no data rows in " + path);
  return f;
}

void open_out(std::ofstream& out, const std::string& path) {
  out.open(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(Errc::io_error, "write failed for " + path);
}

}  // namespace

ArtifactMeta read_artifact_meta(const std::string& path) {
  ArtifactMeta meta;
  for (const std::string& line : read_lines(path)) {
    if (line.empty() || line[0] != '#') break;
    std::string body = trim(line.substr(1));
    auto eq = body.find('=');
    if (eq != std::string::npos)
      meta[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
  }
  return meta;
}

void require_config(const ArtifactMeta& meta, const std::string& fingerprint,
                    const std::string& path) {
  auto it = meta.find("config");
  if (it == meta.end())
    throw Error(Errc::missing_stage, path + ": no config fingerprint");
  if (it->second != fingerprint)
    throw Error(Errc::missing_stage,
                path + ": produced by config " + it->second +
                    ", current config is " + fingerprint);
}

void write_panel_csv(const std::string& path, const HourlyPanel& panel,
                     const std::string& fingerprint) {
  std::ofstream out;
  open_out(out, path);
  out << "# config = " << fingerprint << '\n';
  out << "timestamp";
  std::vector<SeriesId> cols;
  for (const auto& [id, values] : panel.series) {
    cols.push_back(id);
    out << ',' << series_name(id);
  }
  out << '\n';
  for (int d = 0; d < panel.n_days; ++d) {
    Date date = panel.date_of_day(d);
    for (int h = 1; h <= 24; ++h) {
      out << timestamp_of(date, h);
      auto t = static_cast<std::size_t>(HourlyPanel::flat_index(d, h));
      for (SeriesId id : cols) {
        double v = panel.series.at(id)[t];
        out << ',';
        if (!std::isnan(v)) out << fmt_full(v);
      }
      out << '\n';
    }
  }
  finish_out(out, path);
}

void write_forecast_csv(const std::string& path, const ForecastPanel& panel,
                        const std::string& fingerprint) {
  std::ofstream out;
  open_out(out, path);
  out << "# config = " << fingerprint << '\n';
  out << "# market = " << market_name(panel.market) << '\n';
  out << "# first_day = " << panel.first_day << '\n';
  out << "date,hour";
  for (int tau : panel.tau_index) out << ",tau_" << tau;
  out << '\n';
  for (int d = 0; d < panel.n_days; ++d) {
    std::string date = format_date(add_days(panel.start_date, d));
    for (int h = 1; h <= 24; ++h) {
      out << date << ',' << h;
      long r = 24L * d + h - 1;
      for (int c = 0; c < panel.values.cols(); ++c)
        out << ',' << fmt_full(panel.values(r, c));
      out << '\n';
    }
  }
  finish_out(out, path);
}

ForecastPanel read_forecast_csv(const std::string& path) {
  StageFile f = read_stage_file(path);
  auto header = split(f.data[0], ',');
  if (header.size() < 3 || header[0] != "date" || header[1] != "hour")
    throw Error(Errc::malformed_header, path + ": expected date,hour,tau_*");

  ForecastPanel panel;
  for (std::size_t c = 2; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name.rfind("tau_", 0) != 0)
      throw Error(Errc::malformed_header, path + ": bad column '" + name + "'");
    panel.tau_index.push_back(
        static_cast<int>(parse_int(name.substr(4), path)));
  }

  auto mit = f.meta.find("market");
  if (mit != f.meta.end() && mit->second == "ida")
    panel.market = MarketModel::IDA;
  auto fit = f.meta.find("first_day");
  if (fit != f.meta.end())
    panel.first_day = static_cast<int>(parse_int(fit->second, path));

  std::size_t n_rows = f.data.size() - 1;
  if (n_rows == 0 || n_rows % 24 != 0)
    throw Error(Errc::misaligned_index,
                path + ": row count not a multiple of 24");
  panel.n_days = static_cast<int>(n_rows / 24);
  panel.values.resize(static_cast<long>(n_rows),
                      static_cast<long>(panel.tau_index.size()));
  for (std::size_t r = 0; r < n_rows; ++r) {
    auto cells = split(f.data[r + 1], ',');
    if (cells.size() != header.size())
      throw Error(Errc::malformed_header, path + ": ragged row");
    if (r == 0) panel.start_date = parse_date(cells[0]);
    long hour = parse_int(cells[1], path);
    if (hour != static_cast<long>(r % 24) + 1)
      throw Error(Errc::misaligned_index, path + ": hours out of order");
    for (std::size_t c = 2; c < cells.size(); ++c)
      panel.values(static_cast<long>(r), static_cast<long>(c - 2)) =
          parse_number(cells[c], path);
  }
  return panel;
}

void write_hourly_csv(const std::string& path, const std::string& column,
                      const Eigen::VectorXd& values, Date start_date,
                      const std::string& fingerprint) {
  if (values.size() % 24 != 0)
    throw Error(Errc::dimension_mismatch, "write_hourly_csv: ragged day");
  std::ofstream out;
  open_out(out, path);
  out << "# config = " << fingerprint << '\n';
  out << "date,hour," << column << '\n';
  long n_days = values.size() / 24;
  for (long d = 0; d < n_days; ++d) {
    std::string date = format_date(add_days(start_date, d));
    for (int h = 1; h <= 24; ++h)
      out << date << ',' << h << ',' << fmt_full(values[24 * d + h - 1])
          << '\n';
  }
  finish_out(out, path);
}

Eigen::VectorXd read_hourly_csv(const std::string& path, Date* start_date) {
  StageFile f = read_stage_file(path);
  std::size_t n_rows = f.data.size() - 1;
  if (n_rows == 0 || n_rows % 24 != 0)
    throw Error(Errc::misaligned_index,
                path + ": row count not a multiple of 24");
  Eigen::VectorXd values(static_cast<long>(n_rows));
  for (std::size_t r = 0; r < n_rows; ++r) {
    auto cells = split(f.data[r + 1], ',');
    if (cells.size() != 3)
      throw Error(Errc::malformed_header, path + ": expected 3 columns");
    if (r == 0 && start_date) *start_date = parse_date(cells[0]);
    values[static_cast<long>(r)] = parse_number(cells[2], path);
  }
  return values;
}

void write_surface_csv(const std::string& path, const QuantileSurface& surface,
                       const std::string& fingerprint) {
  std::ofstream out;
  open_out(out, path);
  out << "# config = " << fingerprint << '\n';
  out << "# method = " << method_name(surface.method) << '\n';
  out << "date,hour";
  for (std::size_t j = 1; j <= surface.qs.size(); ++j) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), ",q%02zu", j);
    out << buf;
  }
  out << '\n';
  for (int d = 0; d < surface.n_days; ++d) {
    std::string date = format_date(add_days(surface.start_date, d));
    for (int h = 1; h <= 24; ++h) {
      out << date << ',' << h;
      long r = 24L * d + h - 1;
      for (long c = 0; c < surface.natural.cols(); ++c)
        out << ',' << fmt_full(surface.natural(r, c));
      out << '\n';
    }
  }
  finish_out(out, path);
}

void write_intervals_csv(const std::string& path, const IntervalSet& intervals,
                         const std::string& fingerprint) {
  std::ofstream out;
  open_out(out, path);
  out << "# config = " << fingerprint << '\n';
  out << "# method = " << method_name(intervals.method) << '\n';
  out << "date,hour,level_pct,lower,upper\n";
  for (int d = 0; d < intervals.n_days; ++d) {
    std::string date = format_date(add_days(intervals.start_date, d));
    for (int h = 1; h <= 24; ++h) {
      long r = 24L * d + h - 1;
      for (std::size_t l = 0; l < intervals.levels_pct.size(); ++l)
        out << date << ',' << h << ',' << intervals.levels_pct[l] << ','
            << fmt_full(intervals.lower(r, static_cast<long>(l))) << ','
            << fmt_full(intervals.upper(r, static_cast<long>(l))) << '\n';
    }
  }
  finish_out(out, path);
}

IntervalSet read_intervals_csv(const std::string& path, Method method) {
  StageFile f = read_stage_file(path);
  auto mit = f.meta.find("method");
  if (mit != f.meta.end() && mit->second != method_name(method))
    throw Error(Errc::missing_stage,
                path + ": holds method " + mit->second + ", expected " +
                    method_name(method));

  IntervalSet set;
  set.method = method;
  std::size_t n_rows = f.data.size() - 1;

  // First pass: the level grid is the block of rows sharing the first
  // date/hour pair.
  std::vector<std::array<std::string, 5>> rows(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    auto cells = split(f.data[r + 1], ',');
    if (cells.size() != 5)
      throw Error(Errc::malformed_header, path + ": expected 5 columns");
    for (int c = 0; c < 5; ++c) rows[r][static_cast<std::size_t>(c)] = cells[static_cast<std::size_t>(c)];
  }
  std::size_t n_levels = 0;
  while (n_levels < n_rows && rows[n_levels][0] == rows[0][0] &&
         rows[n_levels][1] == rows[0][1])
    ++n_levels;
  if (n_levels == 0 || n_rows % (24 * n_levels) != 0)
    throw Error(Errc::misaligned_index, path + ": ragged level blocks");
  for (std::size_t l = 0; l < n_levels; ++l)
    set.levels_pct.push_back(static_cast<int>(parse_int(rows[l][2], path)));

  set.n_days = static_cast<int>(n_rows / (24 * n_levels));
  set.start_date = parse_date(rows[0][0]);
  long nh = 24L * set.n_days;
  set.lower.resize(nh, static_cast<long>(n_levels));
  set.upper.resize(nh, static_cast<long>(n_levels));
  for (std::size_t r = 0; r < n_rows; ++r) {
    long row = static_cast<long>(r / n_levels);
    long lev = static_cast<long>(r % n_levels);
    if (parse_int(rows[r][2], path) != set.levels_pct[static_cast<std::size_t>(lev)])
      throw Error(Errc::misaligned_index, path + ": inconsistent level order");
    set.lower(row, lev) = parse_number(rows[r][3], path);
    set.upper(row, lev) = parse_number(rows[r][4], path);
  }
  return set;
}

void write_coverage_json(const std::string& path, Method method,
                         const std::vector<CoverageReport>& reports,
                         const std::string& fingerprint) {
  nlohmann::json doc;
  doc["config"] = fingerprint;
  doc["method"] = method_name(method);
  nlohmann::json levels = nlohmann::json::array();
  for (const CoverageReport& r : reports) {
    nlohmann::json j;
    j["level_pct"] = r.level_pct;
    j["alpha"] = r.alpha;
    j["coverage"] = r.coverage;
    j["ace"] = r.ace;
    j["coverage_by_hour"] = r.coverage_by_hour;
    j["kupiec_p"] = r.kupiec_p;
    j["christoffersen_p"] = r.christoffersen_p;
    j["christoffersen_stat"] = r.christoffersen_stat;
    j["kupiec_pass"] = r.kupiec_pass;
    j["christoffersen_pass"] = r.christoffersen_pass;
    j["significance"] = r.significance;
    levels.push_back(std::move(j));
  }
  doc["levels"] = std::move(levels);
  std::ofstream out;
  open_out(out, path);
  out << doc.dump(2) << '\n';
  finish_out(out, path);
}

void write_ledger_csv(const std::string& path, const TradeLedger& ledger,
                      const std::string& fingerprint) {
  int unresolved = 0;
  for (const DayEntry& e : ledger.days) unresolved += e.unresolved ? 1 : 0;
  std::ofstream out;
  open_out(out, path);
  out << "# config = " << fingerprint << '\n';
  out << "# unresolved_days = " << unresolved << '\n';
  out << "date,h1,h2,buy_limit,sell_limit,accept_buy,accept_sell,cash,volume\n";
  for (const DayEntry& e : ledger.days) {
    out << format_date(e.date) << ',' << e.h1 << ',' << e.h2 << ','
        << fmt_full(e.buy_limit) << ',' << fmt_full(e.sell_limit) << ','
        << (e.accept_buy ? 1 : 0) << ',' << (e.accept_sell ? 1 : 0) << ','
        << fmt_full(e.cash) << ',' << fmt_full(e.volume) << '\n';
  }
  finish_out(out, path);
}

TradeLedger read_ledger_csv(const std::string& path) {
  StageFile f = read_stage_file(path);
  TradeLedger ledger;
  auto uit = f.meta.find("unresolved_days");
  if (uit != f.meta.end())
    ledger.has_unresolved = parse_int(uit->second, path) > 0;
  for (std::size_t r = 1; r < f.data.size(); ++r) {
    auto cells = split(f.data[r], ',');
    if (cells.size() != 9)
      throw Error(Errc::malformed_header, path + ": expected 9 columns");
    DayEntry e;
    e.date = parse_date(cells[0]);
    e.h1 = static_cast<int>(parse_int(cells[1], path));
    e.h2 = static_cast<int>(parse_int(cells[2], path));
    e.buy_limit = parse_number(cells[3], path, true);
    e.sell_limit = parse_number(cells[4], path, true);
    e.accept_buy = parse_int(cells[5], path) != 0;
    e.accept_sell = parse_int(cells[6], path) != 0;
    e.cash = parse_number(cells[7], path);
    e.volume = parse_number(cells[8], path);
    ledger.total_cash += e.cash;
    ledger.total_volume += e.volume;
    ledger.days.push_back(e);
  }
  return ledger;
}

}  // namespace epf
