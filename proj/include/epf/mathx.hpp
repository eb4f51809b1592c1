#pragma once

#include <vector>

namespace epf::mathx {

// Standard normal CDF and its inverse. norm_inv is accurate to well below
// 1e-9 absolute everywhere in [1e-7, 1-1e-7].
double norm_cdf(double x);
double norm_inv(double p);

// Regularised incomplete gamma functions P(s,x) and Q(s,x) = 1 - P(s,x),
// relative error <= 1e-10 for s > 0, x >= 0.
double lower_gamma_reg(double s, double x);
double upper_gamma_reg(double s, double x);

// Upper tail of the chi-square distribution with dof degrees of freedom.
double chi2_tail(double x, int dof);

// x * ln(y) with the 0 * ln(0) := 0 convention.
double xlogy(double x, double y);

// Quantile of a sorted sample at probability p, using plotting positions
// (k - 0.5)/n with linear interpolation between order statistics and constant
// extrapolation beyond them.
double empirical_quantile(const std::vector<double>& sorted, double p);

}  // namespace epf::mathx
