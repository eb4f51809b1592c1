#include "epf/ols.hpp"

namespace epf {

OlsFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() != y.size())
    throw Error(Errc::dimension_mismatch, "ols_fit: X rows != y length");
  if (X.rows() < X.cols())
    throw Error(Errc::dimension_mismatch, "ols_fit: fewer rows than columns");
  if (!X.allFinite() || !y.allFinite())
    throw Error(Errc::non_finite_input, "ols_fit: non-finite input");

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(X);
  OlsFit fit;
  fit.coef = cod.solve(y);
  fit.rank = static_cast<int>(cod.rank());
  fit.rank_deficient = fit.rank < X.cols();
  return fit;
}

double ols_predict(const OlsFit& fit, const Eigen::VectorXd& x) {
  if (x.size() != fit.coef.size())
    throw Error(Errc::dimension_mismatch, "ols_predict: feature length");
  return fit.coef.dot(x);
}

}  // namespace epf
