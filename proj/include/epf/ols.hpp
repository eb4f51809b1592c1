#pragma once

#include <Eigen/Dense>

#include "epf/common.hpp"

namespace epf {

struct OlsFit {
  Eigen::VectorXd coef;
  int rank = 0;
  bool rank_deficient = false;
};

// Least-squares solve of X b ~= y. Rank-deficient designs yield the
// minimum-norm solution with the deficiency flagged rather than an error,
// so short calibration windows always produce a forecast.
OlsFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

double ols_predict(const OlsFit& fit, const Eigen::VectorXd& x);

}  // namespace epf
