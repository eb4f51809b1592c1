#pragma once

#include <Eigen/Dense>
#include <vector>

#include "epf/common.hpp"

namespace epf {

// Row-wise z-scores of a forecast panel: each time index is centred and
// scaled across the window-length dimension. Rows whose spread falls under
// eps_floor keep a floored sigma and are flagged.
struct StandardizedPanel {
  Eigen::MatrixXd values;
  Eigen::VectorXd mu;
  Eigen::VectorXd sigma;      // floored; used by both directions
  Eigen::VectorXd sigma_raw;  // as estimated (n-1 denominator)
  std::vector<bool> degenerate;
  double eps_floor = 1e-8;
};

StandardizedPanel standardize_cross_section(const Eigen::MatrixXd& panel,
                                            double eps_floor = 1e-8);

enum class FactorRoute { automatic, time, cross };

// Principal-component factors normalised so that factors'*factors = T*I.
struct FactorSet {
  Eigen::MatrixXd factors;   // T x K
  Eigen::MatrixXd loadings;  // N x K, least squares given the factors
  Eigen::VectorXd eigenvalues;
  int K = 0;
  FactorRoute route = FactorRoute::time;
};

// The time route diagonalises M M' (T x T); the cross route diagonalises
// M' M (N x N) and rescales. Both yield the same factor span; `automatic`
// picks whichever side is smaller. Requesting more factors than the
// numerical rank throws k_too_large.
FactorSet extract_factors(const Eigen::MatrixXd& M, int K,
                          FactorRoute route = FactorRoute::automatic);

// Largest K with a meaningfully nonzero eigenvalue.
int numerical_rank(const Eigen::MatrixXd& M);

enum class BicMode { linear, median_pinball };

// Picks the factor count in 1..k_max minimising
// BIC(k) = n ln(loss_k / n) + (k+1) ln(n) on the estimation rows, where loss
// is the RSS of a linear fit or n times the mean median-pinball loss. Ties go
// to the smaller k. y must match the leading rows of M (the trailing rows are
// the forecast day, which has no target yet).
int select_k_bic(const Eigen::MatrixXd& M, const Eigen::VectorXd& y, int k_max,
                 BicMode mode);

}  // namespace epf
