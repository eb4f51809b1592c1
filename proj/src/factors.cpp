#include "epf/factors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "epf/ols.hpp"
#include "epf/quantreg.hpp"

namespace epf {

StandardizedPanel standardize_cross_section(const Eigen::MatrixXd& panel,
                                            double eps_floor) {
  const Eigen::Index T = panel.rows();
  const Eigen::Index N = panel.cols();
  if (N < 2)
    throw Error(Errc::dimension_mismatch,
                "standardize_cross_section: need at least 2 columns");
  if (!panel.allFinite())
    throw Error(Errc::non_finite_input, "standardize_cross_section: NaN/inf");

  StandardizedPanel out;
  out.eps_floor = eps_floor;
  out.mu.resize(T);
  out.sigma.resize(T);
  out.sigma_raw.resize(T);
  out.degenerate.assign(static_cast<size_t>(T), false);
  out.values.resize(T, N);

  for (Eigen::Index t = 0; t < T; ++t) {
    double mu = panel.row(t).mean();
    double ss = (panel.row(t).array() - mu).square().sum();
    double sd = std::sqrt(ss / static_cast<double>(N - 1));
    out.mu[t] = mu;
    out.sigma_raw[t] = sd;
    if (sd < eps_floor) {
      sd = eps_floor;
      out.degenerate[static_cast<size_t>(t)] = true;
    }
    out.sigma[t] = sd;
    out.values.row(t) = (panel.row(t).array() - mu) / sd;
  }
  return out;
}

int numerical_rank(const Eigen::MatrixXd& M) {
  Eigen::MatrixXd G = M.cols() <= M.rows() ? Eigen::MatrixXd(M.transpose() * M)
                                           : Eigen::MatrixXd(M * M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  const auto& ev = es.eigenvalues();  // ascending
  double top = std::max(ev[ev.size() - 1], 0.0);
  if (top <= 0.0) return 0;
  double tol = top * 1e-12;
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] > tol) ++rank;
  return rank;
}

FactorSet extract_factors(const Eigen::MatrixXd& M, int K, FactorRoute route) {
  const Eigen::Index T = M.rows();
  const Eigen::Index N = M.cols();
  if (!M.allFinite())
    throw Error(Errc::non_finite_input, "extract_factors: NaN/inf in panel");
  if (K < 1 || K > std::min(T, N))
    throw Error(Errc::k_too_large, "extract_factors: K outside 1..min(T,N)");
  if (route == FactorRoute::automatic)
    route = N < T ? FactorRoute::cross : FactorRoute::time;

  FactorSet out;
  out.K = K;
  out.route = route;
  out.factors.resize(T, K);
  out.eigenvalues.resize(K);

  if (route == FactorRoute::cross) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.transpose() * M);
    const auto& ev = es.eigenvalues();
    double top = std::max(ev[ev.size() - 1], 0.0);
    for (int k = 0; k < K; ++k) {
      double lambda = ev[N - 1 - k];
      if (lambda <= top * 1e-12 || lambda <= 0.0)
        throw Error(Errc::k_too_large,
                    "extract_factors: K exceeds the numerical rank");
      out.eigenvalues[k] = lambda;
      // Left singular vector recovered from the right one.
      out.factors.col(k) =
          std::sqrt(static_cast<double>(T)) / std::sqrt(lambda) *
          (M * es.eigenvectors().col(N - 1 - k));
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M * M.transpose());
    const auto& ev = es.eigenvalues();
    double top = std::max(ev[ev.size() - 1], 0.0);
    for (int k = 0; k < K; ++k) {
      double lambda = ev[T - 1 - k];
      if (lambda <= top * 1e-12 || lambda <= 0.0)
        throw Error(Errc::k_too_large,
                    "extract_factors: K exceeds the numerical rank");
      out.eigenvalues[k] = lambda;
      out.factors.col(k) =
          std::sqrt(static_cast<double>(T)) * es.eigenvectors().col(T - 1 - k);
    }
  }

  out.loadings = M.transpose() * out.factors / static_cast<double>(T);

  // Deterministic orientation: flip each factor so its loading sum is
  // non-negative (factor sum decides when the loading sum is zero).
  for (int k = 0; k < K; ++k) {
    double ls = out.loadings.col(k).sum();
    double fs = out.factors.col(k).sum();
    bool flip = ls < 0.0 || (ls == 0.0 && fs < 0.0);
    if (flip) {
      out.factors.col(k) = -out.factors.col(k);
      out.loadings.col(k) = -out.loadings.col(k);
    }
  }
  return out;
}

int select_k_bic(const Eigen::MatrixXd& M, const Eigen::VectorXd& y, int k_max,
                 BicMode mode) {
  const Eigen::Index T = M.rows();
  const Eigen::Index n = y.size();
  if (n < 2 || n > T)
    throw Error(Errc::dimension_mismatch,
                "select_k_bic: target length must fit inside the panel rows");
  if (k_max < 1 || k_max > std::min(T, M.cols()))
    throw Error(Errc::k_too_large, "select_k_bic: k_max outside 1..min(T,N)");

  int k_eff = std::min(k_max, numerical_rank(M));
  if (k_eff < 1)
    throw Error(Errc::k_too_large, "select_k_bic: panel has rank zero");
  FactorSet fs = extract_factors(M, k_eff);

  int best_k = 1;
  double best_bic = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_eff; ++k) {
    Eigen::MatrixXd X(n, k + 1);
    X.col(0).setOnes();
    X.rightCols(k) = fs.factors.topRows(n).leftCols(k);
    double loss;
    if (mode == BicMode::linear) {
      OlsFit fit = ols_fit(X, y);
      loss = (y - X * fit.coef).squaredNorm();
    } else {
      QuantileModel m = qr_fit(X, y, 0.5);
      Eigen::VectorXd beta(k + 1);
      beta[0] = m.intercept;
      beta.tail(k) = m.weights;
      loss = qr_objective(X, y, 0.5, beta);
    }
    loss = std::max(loss, 1e-300);
    double nn = static_cast<double>(n);
    double bic = nn * std::log(loss / nn) + (k + 1) * std::log(nn);
    if (bic < best_bic) {
      best_bic = bic;
      best_k = k;
    }
  }
  return best_k;
}

}  // namespace epf
