#include <catch2/catch_amalgamated.hpp>
#include <Eigen/Dense>
#include <random>

#include "epf/backtest.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace epf;

namespace {

IntervalSet two_level_set(int n_days) {
  IntervalSet iv;
  iv.method = Method::HS;
  iv.levels_pct = {80, 90};
  iv.n_days = n_days;
  iv.start_date = {2022, 1, 1};
  long rows = 24L * n_days;
  iv.lower.resize(rows, 2);
  iv.upper.resize(rows, 2);
  iv.lower.col(0).setConstant(40.0);
  iv.upper.col(0).setConstant(60.0);
  iv.lower.col(1).setConstant(30.0);
  iv.upper.col(1).setConstant(70.0);
  return iv;
}

std::vector<std::uint8_t> bernoulli_hits(int n, double p, unsigned seed) {
  std::mt19937_64 eng(seed);
  std::bernoulli_distribution dist(p);
  std::vector<std::uint8_t> hits(static_cast<size_t>(n));
  for (auto& h : hits) h = dist(eng) ? 1 : 0;
  return hits;
}

}  // namespace

TEST_CASE("hits are closed-interval membership per level", "[backtest]") {
  IntervalSet iv = two_level_set(1);
  Eigen::VectorXd prices(24);
  prices.setConstant(50.0);
  prices(0) = 40.0;   // on the narrow lower bound: inside
  prices(1) = 39.99;  // just below
  prices(2) = 60.0;   // on the narrow upper bound
  prices(3) = 65.0;   // outside narrow, inside wide
  prices(4) = 75.0;   // outside both

  HitSeries narrow = compute_hits(prices, iv, 80);
  REQUIRE_THAT(narrow.alpha, WithinAbs(0.2, 1e-12));
  REQUIRE(narrow.at(0, 1) == 1);
  REQUIRE(narrow.at(0, 2) == 0);
  REQUIRE(narrow.at(0, 3) == 1);
  REQUIRE(narrow.at(0, 4) == 0);
  REQUIRE(narrow.at(0, 5) == 0);
  REQUIRE(narrow.at(0, 6) == 1);

  HitSeries wide = compute_hits(prices, iv, 90);
  REQUIRE(wide.at(0, 2) == 1);
  REQUIRE(wide.at(0, 4) == 1);
  REQUIRE(wide.at(0, 5) == 0);

  REQUIRE_THROWS_AS(compute_hits(prices, iv, 95), Error);
  Eigen::VectorXd short_prices(23);
  short_prices.setZero();
  REQUIRE_THROWS_AS(compute_hits(short_prices, iv, 80), Error);
}

TEST_CASE("hour slices walk the day-major layout", "[backtest]") {
  HitSeries hs;
  hs.alpha = 0.1;
  hs.n_days = 3;
  hs.hits.assign(72, 0);
  hs.hits[0] = 1;       // day 0, hour 1
  hs.hits[24 + 0] = 1;  // day 1, hour 1
  hs.hits[48 + 5] = 1;  // day 2, hour 6
  REQUIRE(hs.hour_slice(1) == std::vector<std::uint8_t>{1, 1, 0});
  REQUIRE(hs.hour_slice(6) == std::vector<std::uint8_t>{0, 0, 1});
}

TEST_CASE("exactly nominal coverage gives a zero statistic", "[backtest]") {
  std::vector<std::uint8_t> hits(10, 1);
  hits[0] = hits[1] = 0;  // 8 of 10 at nominal 0.8
  TestResult r = kupiec_test(hits, 0.2);
  REQUIRE_THAT(r.stat, WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(r.p_value, WithinAbs(1.0, 1e-12));
}

TEST_CASE("a fully covered short series has a known statistic", "[backtest]") {
  std::vector<std::uint8_t> hits(10, 1);
  TestResult r = kupiec_test(hits, 0.2);
  REQUIRE_THAT(r.stat, WithinRel(4.462871026284, 1e-9));
  REQUIRE(r.p_value < 0.05);
  REQUIRE(r.p_value > 0.01);
}

TEST_CASE("the statistic grows as coverage drifts from nominal",
          "[backtest]") {
  double prev = -1.0;
  for (int n1 : {80, 70, 60, 50}) {
    std::vector<std::uint8_t> hits(100, 0);
    for (int i = 0; i < n1; ++i) hits[static_cast<size_t>(i)] = 1;
    TestResult r = kupiec_test(hits, 0.2);
    REQUIRE(r.stat > prev);
    prev = r.stat;
  }
}

TEST_CASE("alternating hits are flagged as dependent", "[backtest]") {
  std::vector<std::uint8_t> hits(40);
  for (size_t i = 0; i < hits.size(); ++i) hits[i] = i % 2;
  ChristoffersenResult r = christoffersen_test(hits, 0.5);
  REQUIRE_THAT(r.lr_uc, WithinAbs(0.0, 1e-12));  // coverage is exactly 0.5
  REQUIRE_THAT(r.lr_ind, WithinRel(54.039836247628, 1e-9));
  REQUIRE_THAT(r.lr_cc, WithinAbs(r.lr_uc + r.lr_ind, 1e-12));
  REQUIRE(r.p_value < 1e-6);
}

TEST_CASE("independent hits near nominal pass both parts", "[backtest]") {
  auto hits = bernoulli_hits(800, 0.9, 13);
  ChristoffersenResult r = christoffersen_test(hits, 0.1);
  REQUIRE(r.p_value > 0.05);
  TestResult k = kupiec_test(hits, 0.1);
  REQUIRE(k.p_value > 0.05);
}

TEST_CASE("degenerate inputs are handled", "[backtest]") {
  REQUIRE_THROWS_AS(kupiec_test({}, 0.2), Error);
  REQUIRE_THROWS_AS(christoffersen_test({1}, 0.2), Error);
  // All-miss series: the likelihood ratio stays finite through xlogy.
  std::vector<std::uint8_t> none(50, 0);
  TestResult r = kupiec_test(none, 0.1);
  REQUIRE(std::isfinite(r.stat));
  REQUIRE(r.p_value < 1e-10);
}

TEST_CASE("coverage report aggregates per-hour results", "[backtest]") {
  const int n_days = 120;
  HitSeries hs;
  hs.alpha = 0.2;
  hs.n_days = n_days;
  hs.hits.assign(static_cast<size_t>(24L * n_days), 0);
  // Hour 1 always covered, hour 2 never, the rest near-nominal random.
  for (int d = 0; d < n_days; ++d) {
    hs.hits[static_cast<size_t>(24L * d + 0)] = 1;
    for (int h = 3; h <= 24; ++h) {
      auto coin = bernoulli_hits(1, 0.8, static_cast<unsigned>(1000 + d * 31 + h));
      hs.hits[static_cast<size_t>(24L * d + h - 1)] = coin[0];
    }
  }

  CoverageReport rep = coverage_report(hs, 80, 0.05);
  REQUIRE(rep.level_pct == 80);
  REQUIRE_THAT(rep.coverage_by_hour[0], WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(rep.coverage_by_hour[1], WithinAbs(0.0, 1e-12));
  double mean = 0.0;
  for (double c : rep.coverage_by_hour) mean += c;
  mean /= 24.0;
  REQUIRE_THAT(rep.coverage, WithinAbs(mean, 1e-12));
  REQUIRE_THAT(rep.ace, WithinAbs(rep.coverage - 0.8, 1e-12));

  int kp = 0, cp = 0;
  for (int h = 0; h < 24; ++h) {
    if (rep.kupiec_p[static_cast<size_t>(h)] >= 0.05) ++kp;
    if (rep.christoffersen_p[static_cast<size_t>(h)] >= 0.05) ++cp;
  }
  REQUIRE(rep.kupiec_pass == kp);
  REQUIRE(rep.christoffersen_pass == cp);
  // The two rigged hours cannot pass; most other hours should.
  REQUIRE(rep.kupiec_pass <= 22);
  REQUIRE(rep.kupiec_pass >= 15);
  REQUIRE(rep.kupiec_p[0] < 0.05);
  REQUIRE(rep.kupiec_p[1] < 0.05);
}
