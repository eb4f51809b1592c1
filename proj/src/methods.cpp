#include "epf/methods.hpp"

#include <algorithm>
#include <cmath>

#include "epf/factors.hpp"
#include "epf/mathx.hpp"
#include "epf/ols.hpp"
#include "epf/quantreg.hpp"

namespace epf {

const char* method_name(Method m) {
  switch (m) {
    case Method::HS: return "HS";
    case Method::CP: return "CP";
    case Method::QRA: return "QRA";
    case Method::QRM: return "QRM";
    case Method::FQRA: return "FQRA";
    case Method::FQRM: return "FQRM";
    case Method::SFQRA: return "sFQRA";
    case Method::SFQRM: return "sFQRM";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  for (Method m : kAllMethods)
    if (name == method_name(m)) return m;
  return std::nullopt;
}

namespace {

void require_lookback(const std::vector<double>& errors) {
  if (errors.empty())
    throw Error(Errc::insufficient_errors, "empty error lookback");
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(Errc::config_invalid, "alpha must lie strictly in (0,1)");
}

}  // namespace

Interval hs_interval(double avg_fc, const std::vector<double>& errors,
                     double alpha) {
  require_lookback(errors);
  require_alpha(alpha);
  std::vector<double> sorted = errors;
  std::sort(sorted.begin(), sorted.end());
  return {avg_fc + mathx::empirical_quantile(sorted, alpha / 2.0),
          avg_fc + mathx::empirical_quantile(sorted, 1.0 - alpha / 2.0)};
}

Interval cp_interval(double avg_fc, const std::vector<double>& errors,
                     double alpha) {
  require_lookback(errors);
  require_alpha(alpha);
  std::vector<double> abs_sorted(errors.size());
  for (size_t i = 0; i < errors.size(); ++i) abs_sorted[i] = std::fabs(errors[i]);
  std::sort(abs_sorted.begin(), abs_sorted.end());
  double lambda = mathx::empirical_quantile(abs_sorted, 1.0 - alpha);
  return {avg_fc - lambda, avg_fc + lambda};
}

std::vector<double> hs_quantile_row(double avg_fc,
                                    const std::vector<double>& sorted_errors,
                                    const std::vector<double>& qs) {
  require_lookback(sorted_errors);
  std::vector<double> row(qs.size());
  for (size_t i = 0; i < qs.size(); ++i)
    row[i] = avg_fc + mathx::empirical_quantile(sorted_errors, qs[i]);
  return row;
}

std::vector<double> cp_quantile_row(double avg_fc,
                                    const std::vector<double>& sorted_abs,
                                    const std::vector<double>& qs) {
  require_lookback(sorted_abs);
  std::vector<double> row(qs.size());
  for (size_t i = 0; i < qs.size(); ++i) {
    double q = qs[i];
    double lambda = mathx::empirical_quantile(sorted_abs, std::fabs(2.0 * q - 1.0));
    double sign = q > 0.5 ? 1.0 : (q < 0.5 ? -1.0 : 0.0);
    row[i] = avg_fc + sign * lambda;
  }
  return row;
}

std::vector<double> qr_quantile_row(const Eigen::MatrixXd& Xcal,
                                    const Eigen::VectorXd& ycal,
                                    const Eigen::VectorXd& xnew) {
  if (Xcal.cols() != xnew.size())
    throw Error(Errc::dimension_mismatch, "qr_quantile_row: feature width");
  Eigen::MatrixXd X(Xcal.rows(), Xcal.cols() + 1);
  X.col(0).setOnes();
  X.rightCols(Xcal.cols()) = Xcal;
  std::vector<double> row;
  row.reserve(99);
  for (double q : percentile_orders()) {
    QuantileModel m = qr_fit(X, ycal, q);
    row.push_back(qr_predict(m, xnew));
  }
  return row;
}

namespace {

// Shared body of the factor methods. Returns predictions for the 24
// forecast-day rows and, when wanted, the per-quantile in-sample objectives.
FqrDay fqr_core(const Eigen::MatrixXd& panel, const Eigen::VectorXd& y,
                bool median_mode, bool standardize, int k_max,
                std::vector<double>* objectives) {
  const Eigen::Index T = panel.rows();
  const Eigen::Index n = y.size();
  if (T % 24 != 0 || n != T - 24)
    throw Error(Errc::dimension_mismatch,
                "factor window must be whole days with one unpriced day");

  Eigen::MatrixXd work;
  Eigen::VectorXd target;
  StandardizedPanel std_panel;
  if (standardize) {
    std_panel = standardize_cross_section(panel);
    work = std_panel.values;
    target.resize(n);
    for (Eigen::Index t = 0; t < n; ++t)
      target[t] = (y[t] - std_panel.mu[t]) / std_panel.sigma[t];
  } else {
    work = panel;
    target = y;
  }

  int k = select_k_bic(work, target, k_max,
                       median_mode ? BicMode::median_pinball : BicMode::linear);
  FactorSet fs = extract_factors(work, k);

  Eigen::MatrixXd regressors;  // all T rows, QR inputs per mode
  if (median_mode) {
    regressors = fs.factors;
  } else {
    Eigen::MatrixXd Xols(n, k + 1);
    Xols.col(0).setOnes();
    Xols.rightCols(k) = fs.factors.topRows(n);
    OlsFit fit = ols_fit(Xols, target);
    Eigen::MatrixXd Xall(T, k + 1);
    Xall.col(0).setOnes();
    Xall.rightCols(k) = fs.factors;
    regressors = Xall * fit.coef;  // single fitted-value column
  }

  Eigen::MatrixXd X(n, regressors.cols() + 1);
  X.col(0).setOnes();
  X.rightCols(regressors.cols()) = regressors.topRows(n);

  FqrDay out;
  out.k = k;
  out.pred.resize(24, 99);
  auto qs = percentile_orders();
  if (objectives) objectives->resize(qs.size());
  for (size_t qi = 0; qi < qs.size(); ++qi) {
    QuantileModel m = qr_fit(X, target, qs[qi]);
    for (int r = 0; r < 24; ++r) {
      Eigen::VectorXd xnew = regressors.row(T - 24 + r).transpose();
      out.pred(r, static_cast<Eigen::Index>(qi)) = qr_predict(m, xnew);
    }
    if (objectives) {
      Eigen::VectorXd beta(X.cols());
      beta[0] = m.intercept;
      beta.tail(X.cols() - 1) = m.weights;
      (*objectives)[qi] = qr_objective(X, target, qs[qi], beta);
    }
  }

  if (standardize) {
    for (int r = 0; r < 24; ++r) {
      double mu = std_panel.mu[n + r];
      double sigma = std_panel.sigma[n + r];
      for (int qi = 0; qi < 99; ++qi)
        out.pred(r, qi) = out.pred(r, qi) * sigma + mu;
    }
  }
  return out;
}

}  // namespace

FqrDay fqr_forecast_day(const Eigen::MatrixXd& panel, const Eigen::VectorXd& y,
                        bool median_mode, bool standardize, int k_max) {
  return fqr_core(panel, y, median_mode, standardize, k_max, nullptr);
}

std::vector<double> fqr_fit_objectives(const Eigen::MatrixXd& panel,
                                       const Eigen::VectorXd& y,
                                       bool median_mode, bool standardize,
                                       int k_max) {
  std::vector<double> obj;
  fqr_core(panel, y, median_mode, standardize, k_max, &obj);
  return obj;
}

void rearrange_quantiles(std::vector<double>& row) {
  std::sort(row.begin(), row.end());
}

std::vector<int> default_levels() {
  std::vector<int> levels;
  for (int level = 50; level <= 98; level += 2) levels.push_back(level);
  return levels;
}

IntervalSet assemble_intervals(const QuantileSurface& surface,
                               const std::vector<int>& levels_pct) {
  if (levels_pct.empty())
    throw Error(Errc::level_not_on_grid, "no coverage levels requested");
  IntervalSet out;
  out.method = surface.method;
  out.levels_pct = levels_pct;
  out.n_days = surface.n_days;
  out.start_date = surface.start_date;
  const Eigen::Index rows = surface.natural.rows();
  out.lower.resize(rows, static_cast<Eigen::Index>(levels_pct.size()));
  out.upper.resize(rows, static_cast<Eigen::Index>(levels_pct.size()));

  for (size_t li = 0; li < levels_pct.size(); ++li) {
    int level = levels_pct[li];
    int alpha_pct = 100 - level;
    if (level <= 0 || level >= 100 || alpha_pct % 2 != 0)
      throw Error(Errc::level_not_on_grid,
                  "level " + std::to_string(level) +
                      "%: alpha/2 must land on the percentile grid");
    int lo_idx = alpha_pct / 2;       // percentile index of alpha/2
    int hi_idx = 100 - alpha_pct / 2; // percentile index of 1-alpha/2
    out.lower.col(static_cast<Eigen::Index>(li)) = surface.natural.col(lo_idx - 1);
    out.upper.col(static_cast<Eigen::Index>(li)) = surface.natural.col(hi_idx - 1);
  }
  return out;
}

}  // namespace epf
