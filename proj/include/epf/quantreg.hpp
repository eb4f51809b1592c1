#pragma once

#include <Eigen/Dense>
#include <vector>

#include "epf/common.hpp"

namespace epf {

struct QuantileModel {
  double q = 0.5;
  double intercept = 0.0;
  Eigen::VectorXd weights;  // one per non-intercept design column
};

// Asymmetric piecewise-linear loss whose expected minimiser is the
// conditional q-quantile.
double pinball(double q, double forecast, double actual);

// Fits coefficients minimising total pinball loss. X must carry an all-ones
// intercept as its first column and have full column rank with strictly more
// rows than columns. The solve is deterministic; the objective is within
// 1e-6 relative of the global LP optimum.
QuantileModel qr_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     double q);

// x excludes the intercept column.
double qr_predict(const QuantileModel& model, const Eigen::VectorXd& x);

// Total pinball loss of a coefficient vector (intercept first) on (X, y).
double qr_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                    double q, const Eigen::VectorXd& beta);

// Independent fits for q = 0.01 .. 0.99, ascending.
std::vector<QuantileModel> fit_percentile_grid(const Eigen::MatrixXd& X,
                                               const Eigen::VectorXd& y);

// The percentile orders used throughout: 0.01, 0.02, ..., 0.99.
std::vector<double> percentile_orders();

}  // namespace epf
