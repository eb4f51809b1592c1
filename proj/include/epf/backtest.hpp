#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "epf/common.hpp"
#include "epf/methods.hpp"

namespace epf {

// Binary interval hits for one nominal level, stored day by day per hour.
struct HitSeries {
  double alpha = 0.0;  // 1 - nominal coverage
  int n_days = 0;
  std::vector<std::uint8_t> hits;  // n_days*24, day-major

  std::uint8_t at(int day, int hour) const {
    return hits[static_cast<size_t>(24L * day + hour - 1)];
  }
  std::vector<std::uint8_t> hour_slice(int hour) const;
};

// Closed-interval membership of the realized price, per (day, hour).
HitSeries compute_hits(const Eigen::VectorXd& prices,
                       const IntervalSet& intervals, int level_pct);

struct TestResult {
  double stat = 0.0;
  double p_value = 1.0;
};

// Unconditional-coverage likelihood ratio against the nominal hit rate
// pi0 = 1 - alpha; chi-square with 1 degree of freedom.
TestResult kupiec_test(const std::vector<std::uint8_t>& hits, double alpha);

struct ChristoffersenResult {
  double lr_uc = 0.0;
  double lr_ind = 0.0;
  double lr_cc = 0.0;  // always lr_uc + lr_ind
  double p_value = 1.0;
};

// Conditional coverage: unconditional part plus a first-order Markov
// independence part; chi-square with 2 degrees of freedom.
ChristoffersenResult christoffersen_test(const std::vector<std::uint8_t>& hits,
                                         double alpha);

struct CoverageReport {
  int level_pct = 0;
  double alpha = 0.0;
  std::array<double, 24> coverage_by_hour{};
  double coverage = 0.0;  // 24-hour average
  double ace = 0.0;       // coverage minus nominal
  std::array<double, 24> kupiec_p{};
  std::array<double, 24> christoffersen_p{};
  std::array<double, 24> christoffersen_stat{};
  int kupiec_pass = 0;          // hours with p >= significance
  int christoffersen_pass = 0;  // out of 24
  double significance = 0.05;
};

CoverageReport coverage_report(const HitSeries& hits, int level_pct,
                               double significance = 0.05);

}  // namespace epf
