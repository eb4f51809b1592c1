#pragma once

#include <vector>

#include "epf/common.hpp"

namespace epf {

// Empirical-CDF-to-normal map fitted on one calibration sample. The forward
// direction sends a raw value through the sample ECDF and then the inverse
// standard normal CDF; the inverse direction interpolates the sample quantile
// function. Both directions are monotone and inverse to each other on the
// sample range.
struct NpitMap {
  std::vector<double> knots;  // distinct sample values, ascending
  std::vector<double> probs;  // tie-averaged plotting positions (rank-0.5)/n
  double clamp_eps = 0.0;
  long n = 0;                 // original sample size, ties included
};

// clamp_eps <= 0 selects the default 1/(2n). Throws degenerate_sample when
// every value is identical and non_finite_input on NaN/inf in the sample.
NpitMap npit_fit(const std::vector<double>& sample, double clamp_eps = -1.0);

double npit_transform(const NpitMap& map, double x);
double npit_inverse(const NpitMap& map, double y);

}  // namespace epf
