#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "epf/common.hpp"
#include "epf/csv.hpp"
#include "epf/preprocess.hpp"

using Catch::Matchers::WithinAbs;
using namespace epf;

namespace {

// Writes the given lines to a throwaway file and returns its path.
std::string temp_csv(const std::string& name,
                     const std::vector<std::string>& lines) {
  std::string path = (std::filesystem::temp_directory_path() /
                      ("epf_test_" + name + ".csv"))
                         .string();
  write_lines(path, lines);
  return path;
}

}  // namespace

// ---------------------------------------------------------------------------
// Calendar arithmetic
// ---------------------------------------------------------------------------

TEST_CASE("civil date conversions round trip", "[calendar]") {
  REQUIRE(days_from_civil({1970, 1, 1}) == 0);
  REQUIRE(days_from_civil({1970, 1, 2}) == 1);
  REQUIRE(days_from_civil({1969, 12, 31}) == -1);
}

TEST_CASE("weekday follows the Monday-first convention", "[calendar]") {
  REQUIRE(weekday_mon1(Date{2021, 1, 4}) == 1);   // Monday
  REQUIRE(weekday_mon1(Date{2021, 1, 10}) == 7);  // Sunday
  REQUIRE(weekday_mon1(Date{2017, 6, 29}) == 4);  // Thursday
  REQUIRE(weekday_mon1(Date{1970, 1, 1}) == 4);   // Thursday
}

TEST_CASE("add_days crosses month, year and leap boundaries", "[calendar]") {
  REQUIRE(add_days({2020, 2, 28}, 1) == Date{2020, 2, 29});
  REQUIRE(add_days({2020, 2, 29}, 1) == Date{2020, 3, 1});
  REQUIRE(add_days({2021, 2, 28}, 1) == Date{2021, 3, 1});
  REQUIRE(add_days({2020, 12, 31}, 1) == Date{2021, 1, 1});
  REQUIRE(add_days({2021, 1, 1}, -1) == Date{2020, 12, 31});
  REQUIRE(add_days({2021, 1, 4}, 364) == Date{2022, 1, 3});
}

TEST_CASE("date serials round trip over a long span", "[calendar]") {
  for (long serial = -1000; serial <= 40000; serial += 137) {
    Date d = civil_from_days(serial);
    REQUIRE(days_from_civil(d) == serial);
  }
}

TEST_CASE("date parsing and formatting", "[calendar]") {
  REQUIRE(parse_date("2021-01-04") == Date{2021, 1, 4});
  REQUIRE(format_date(Date{2021, 1, 4}) == "2021-01-04");
  REQUIRE(format_date(parse_date("1999-12-31")) == "1999-12-31");
  REQUIRE_THROWS_AS(parse_date("2021-13-01"), Error);
  REQUIRE_THROWS_AS(parse_date("2021-02-30"), Error);
  REQUIRE_THROWS_AS(parse_date("garbage"), Error);
}

TEST_CASE("fnv1a64 matches the published test vectors", "[calendar]") {
  REQUIRE(fnv1a64("") == 14695981039346656037ULL);
  REQUIRE(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  REQUIRE(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("string helpers", "[calendar]") {
  REQUIRE(split("a,b,,c", ',') ==
          std::vector<std::string>{"a", "b", "", "c"});
  REQUIRE(split("", ',') == std::vector<std::string>{""});
  REQUIRE(trim("  x y\t") == "x y");
  REQUIRE(trim("\r\n") == "");
}

TEST_CASE("fmt_full output parses back to the same double", "[calendar]") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e300, 6.02214076e23, 0.0}) {
    REQUIRE(std::stod(fmt_full(v)) == v);
  }
}

TEST_CASE("parallel_for matches sequential and propagates failures",
          "[calendar]") {
  std::vector<double> seq(1000), par(1000);
  auto fill = [](std::vector<double>& out) {
    return [&out](std::size_t i) {
      out[i] = std::sin(static_cast<double>(i)) * 3.0;
    };
  };
  parallel_for(seq.size(), 1, fill(seq));
  parallel_for(par.size(), 4, fill(par));
  REQUIRE(seq == par);

  auto boom = [](std::size_t i) {
    if (i == 57) throw Error(Errc::non_finite_input, "boom");
  };
  REQUIRE_THROWS_AS(parallel_for(100, 4, boom), Error);
}

// ---------------------------------------------------------------------------
// Market CSV ingestion
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> two_day_header() {
  return {"timestamp,da_price,load_fc"};
}

std::vector<std::string> full_two_days() {
  std::vector<std::string> lines = two_day_header();
  for (int d = 0; d < 2; ++d)
    for (int hh = 0; hh < 24; ++hh) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "2021-03-0%d %02d:00,%d,%d", d + 1, hh,
                    100 + 24 * d + hh, 500 + hh);
      lines.push_back(buf);
    }
  return lines;
}

}  // namespace

TEST_CASE("market CSV loads shape, values and dates", "[csv]") {
  auto path = temp_csv("basic", full_two_days());
  HourlyPanel p = load_market_csv(path);
  REQUIRE(p.n_days == 2);
  REQUIRE(p.start_date == Date{2021, 3, 1});
  REQUIRE(p.series.count(SeriesId::da_price) == 1);
  REQUIRE(p.series.count(SeriesId::load_fc) == 1);
  REQUIRE(p.at(SeriesId::da_price, 0, 1) == 100.0);
  REQUIRE(p.at(SeriesId::da_price, 1, 24) == 147.0);
  REQUIRE(p.at(SeriesId::load_fc, 1, 3) == 502.0);
  std::filesystem::remove(path);
}

TEST_CASE("comment lines and empty cells are tolerated", "[csv]") {
  auto lines = full_two_days();
  lines.insert(lines.begin(), "# config = deadbeefdeadbeef");
  lines[5] = "2021-03-01 03:00,,503";  // drop one price
  auto path = temp_csv("comments", lines);
  HourlyPanel p = load_market_csv(path);
  REQUIRE(std::isnan(p.at(SeriesId::da_price, 0, 4)));
  REQUIRE(p.at(SeriesId::load_fc, 0, 4) == 503.0);
  std::filesystem::remove(path);
}

TEST_CASE("missing rows leave gaps rather than shifting the grid", "[csv]") {
  auto lines = full_two_days();
  lines.erase(lines.begin() + 10, lines.begin() + 12);  // remove two hours
  auto path = temp_csv("gaps", lines);
  HourlyPanel p = load_market_csv(path);
  REQUIRE(p.n_days == 2);
  REQUIRE(std::isnan(p.at(SeriesId::da_price, 0, 10)));
  REQUIRE(std::isnan(p.at(SeriesId::da_price, 0, 11)));
  REQUIRE(p.at(SeriesId::da_price, 0, 12) == 111.0);
  std::filesystem::remove(path);
}

TEST_CASE("repeated clock-change hour is kept aside as duplicates", "[csv]") {
  auto lines = full_two_days();
  lines.insert(lines.begin() + 4, "2021-03-01 02:00,60,600");
  auto path = temp_csv("dup", lines);
  HourlyPanel p = load_market_csv(path);
  REQUIRE(p.duplicates.size() == 2);
  REQUIRE(p.duplicates[0].id == SeriesId::da_price);
  REQUIRE(p.duplicates[0].value == 60.0);
  REQUIRE(p.at(SeriesId::da_price, 0, 3) == 102.0);  // first reading stays
  std::filesystem::remove(path);
}

TEST_CASE("header and ordering problems raise typed errors", "[csv]") {
  auto bad_first = full_two_days();
  bad_first[0] = "time,da_price,load_fc";
  auto p1 = temp_csv("badhdr", bad_first);
  REQUIRE_THROWS_MATCHES(
      load_market_csv(p1), Error,
      Catch::Matchers::Predicate<Error>(
          [](const Error& e) { return e.code == Errc::malformed_header; }));

  auto unknown = full_two_days();
  unknown[0] = "timestamp,da_price,mystery";
  auto p2 = temp_csv("unknown", unknown);
  REQUIRE_THROWS_MATCHES(
      load_market_csv(p2), Error,
      Catch::Matchers::Predicate<Error>(
          [](const Error& e) { return e.code == Errc::unknown_series; }));

  auto backwards = full_two_days();
  std::swap(backwards[3], backwards[4]);
  auto p3 = temp_csv("backwards", backwards);
  REQUIRE_THROWS_MATCHES(
      load_market_csv(p3), Error,
      Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.code == Errc::non_monotone_timestamps;
      }));

  auto bad_cell = full_two_days();
  bad_cell[7] = "2021-03-01 06:00,oops,506";
  auto p4 = temp_csv("badcell", bad_cell);
  REQUIRE_THROWS_MATCHES(
      load_market_csv(p4), Error,
      Catch::Matchers::Predicate<Error>(
          [](const Error& e) { return e.code == Errc::io_error; }));

  for (const auto& path : {p1, p2, p3, p4}) std::filesystem::remove(path);
}

// ---------------------------------------------------------------------------
// Calendar normalization
// ---------------------------------------------------------------------------

namespace {

// Three days of synthetic hourly values plus a daily commodity column.
HourlyPanel raw_panel() {
  HourlyPanel p;
  p.start_date = {2021, 3, 1};
  p.n_days = 3;
  std::vector<double> da(72), load(72), gas(72), partial(72);
  for (int t = 0; t < 72; ++t) {
    da[static_cast<std::size_t>(t)] = 50.0 + t;
    load[static_cast<std::size_t>(t)] = 900.0 + t;
    gas[static_cast<std::size_t>(t)] = 20.0 + t / 24;
    partial[static_cast<std::size_t>(t)] = 49.0 + t;
  }
  p.series[SeriesId::da_price] = da;
  p.series[SeriesId::load_fc] = load;
  p.series[SeriesId::gas_price] = gas;
  p.series[SeriesId::id_partial] = partial;
  return p;
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

TEST_CASE("complete panels pass through normalization unchanged", "[csv]") {
  HourlyPanel p = raw_panel();
  HourlyPanel q = normalize_calendar(p);
  REQUIRE(q.series.at(SeriesId::da_price) == p.series.at(SeriesId::da_price));
  REQUIRE(q.series.at(SeriesId::gas_price) ==
          p.series.at(SeriesId::gas_price));
}

TEST_CASE("duplicate readings collapse to the mean", "[csv]") {
  HourlyPanel p = raw_panel();
  // Second reading for day 0 hour 3 (flat index 2): stored value is 52.
  p.duplicates.push_back({SeriesId::da_price, 2, 58.0});
  HourlyPanel q = normalize_calendar(p);
  REQUIRE_THAT(q.at(SeriesId::da_price, 0, 3), WithinAbs(55.0, 1e-12));
}

TEST_CASE("interior gaps take the neighbour mean, runs share it", "[csv]") {
  HourlyPanel p = raw_panel();
  p.set(SeriesId::da_price, 1, 5, kNan);
  p.set(SeriesId::da_price, 1, 6, kNan);
  HourlyPanel q = normalize_calendar(p);
  // Neighbours are day-1 hours 4 and 7: values 77 and 80.
  REQUIRE_THAT(q.at(SeriesId::da_price, 1, 5), WithinAbs(78.5, 1e-12));
  REQUIRE_THAT(q.at(SeriesId::da_price, 1, 6), WithinAbs(78.5, 1e-12));
}

TEST_CASE("boundary gaps in hourly series are fatal", "[csv]") {
  HourlyPanel p = raw_panel();
  p.set(SeriesId::da_price, 0, 1, kNan);
  REQUIRE_THROWS_MATCHES(
      normalize_calendar(p), Error,
      Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.code == Errc::gap_at_series_boundary;
      }));
}

TEST_CASE("daily commodity series forward-fill missing days", "[csv]") {
  HourlyPanel p = raw_panel();
  for (int h = 1; h <= 24; ++h) p.set(SeriesId::gas_price, 1, h, kNan);
  HourlyPanel q = normalize_calendar(p);
  for (int h = 1; h <= 24; ++h)
    REQUIRE_THAT(q.at(SeriesId::gas_price, 1, h), WithinAbs(20.0, 1e-12));
}

TEST_CASE("partial intraday gaps fall back to the day-ahead price", "[csv]") {
  HourlyPanel p = raw_panel();
  p.set(SeriesId::id_partial, 2, 12, kNan);
  HourlyPanel q = normalize_calendar(p);
  REQUIRE_THAT(q.at(SeriesId::id_partial, 2, 12),
               WithinAbs(q.at(SeriesId::da_price, 2, 12), 1e-12));
}

TEST_CASE("a day missing across every hourly series is fatal", "[csv]") {
  HourlyPanel p = raw_panel();
  for (int h = 1; h <= 24; ++h) {
    p.set(SeriesId::da_price, 1, h, kNan);
    p.set(SeriesId::load_fc, 1, h, kNan);
    p.set(SeriesId::id_partial, 1, h, kNan);
  }
  REQUIRE_THROWS_MATCHES(
      normalize_calendar(p), Error,
      Catch::Matchers::Predicate<Error>(
          [](const Error& e) { return e.code == Errc::all_missing_day; }));
}
