#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "epf/common.hpp"

namespace epf {

// The eight interval-construction schemes. HS and CP work on point-forecast
// errors, QRA/QRM regress price quantiles on window forecasts hour by hour,
// and the F-variants regress on principal-component factors of the whole
// forecast panel jointly across hours (s-prefix adds cross-sectional
// standardization).
enum class Method { HS, CP, QRA, QRM, FQRA, FQRM, SFQRA, SFQRM };

inline constexpr std::array<Method, 8> kAllMethods = {
    Method::HS,   Method::CP,   Method::QRA,   Method::QRM,
    Method::FQRA, Method::FQRM, Method::SFQRA, Method::SFQRM};

const char* method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Error-quantile interval: forecast plus the alpha/2 and 1-alpha/2 empirical
// error quantiles over the lookback.
Interval hs_interval(double avg_fc, const std::vector<double>& errors,
                     double alpha);

// Symmetric band of half-width equal to the (1-alpha) empirical quantile of
// absolute errors.
Interval cp_interval(double avg_fc, const std::vector<double>& errors,
                     double alpha);

// Rows of the 99-quantile surface for the error-based methods; the error
// inputs must already be sorted (plain errors for HS, absolute for CP).
std::vector<double> hs_quantile_row(double avg_fc,
                                    const std::vector<double>& sorted_errors,
                                    const std::vector<double>& qs);
std::vector<double> cp_quantile_row(double avg_fc,
                                    const std::vector<double>& sorted_abs,
                                    const std::vector<double>& qs);

// One hour of QRA/QRM: 99 quantile regressions of y on the given regressor
// columns (no intercept column; it is added internally), evaluated at xnew.
std::vector<double> qr_quantile_row(const Eigen::MatrixXd& Xcal,
                                    const Eigen::VectorXd& ycal,
                                    const Eigen::VectorXd& xnew);

// One forecast day of FQRA/FQRM and their standardized variants. panel holds
// the estimation rows followed by the 24 forecast-day rows; y covers only the
// estimation rows. median_mode=true is the FQRA family (quantile regression
// straight on factors), false is FQRM (OLS on factors, then quantile
// regression on the single fitted value).
struct FqrDay {
  Eigen::MatrixXd pred;  // 24 x 99
  int k = 0;
};
FqrDay fqr_forecast_day(const Eigen::MatrixXd& panel, const Eigen::VectorXd& y,
                        bool median_mode, bool standardize, int k_max);

// Per-quantile total pinball loss attained on the estimation rows; exposed so
// reduction identities between methods can be checked at the fitting level.
std::vector<double> fqr_fit_objectives(const Eigen::MatrixXd& panel,
                                       const Eigen::VectorXd& y,
                                       bool median_mode, bool standardize,
                                       int k_max);

// Ascending sort; repairs quantile crossings.
void rearrange_quantiles(std::vector<double>& row);

struct QuantileSurface {
  Method method = Method::HS;
  std::vector<double> qs;  // 99 orders
  int n_days = 0;
  Date start_date;
  Eigen::MatrixXd transformed;  // (n_days*24) x 99, reference domain
  Eigen::MatrixXd natural;      // same shape, price units
  std::vector<int> k_used;      // per day, factor methods only
  int calib_days = 182;
};

struct IntervalSet {
  Method method = Method::HS;
  std::vector<int> levels_pct;   // nominal coverages in percent
  Eigen::MatrixXd lower, upper;  // (n_days*24) x n_levels, natural units
  int n_days = 0;
  Date start_date;
};

// 50, 52, ..., 98.
std::vector<int> default_levels();

// Bounds at quantile orders alpha/2 and 1-alpha/2 taken from the natural-unit
// surface. Every alpha/2 must land on the 1% grid.
IntervalSet assemble_intervals(const QuantileSurface& surface,
                               const std::vector<int>& levels_pct);

}  // namespace epf
