#include "epf/quantreg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace epf {

double pinball(double q, double forecast, double actual) {
  if (actual < forecast) return (1.0 - q) * (forecast - actual);
  return q * (actual - forecast);
}

double qr_predict(const QuantileModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.weights.size())
    throw Error(Errc::dimension_mismatch, "qr_predict: feature length");
  return model.intercept + model.weights.dot(x);
}

double qr_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                    double q, const Eigen::VectorXd& beta) {
  if (X.cols() != beta.size() || X.rows() != y.size())
    throw Error(Errc::dimension_mismatch, "qr_objective: shape mismatch");
  Eigen::VectorXd fitted = X * beta;
  double total = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    total += pinball(q, fitted[i], y[i]);
  return total;
}

namespace {

// Longest step in [0, 1] keeping v + alpha*dv nonnegative.
double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  return alpha;
}

}  // namespace

// Quantile regression reduces to a linear program. We solve the bounded dual
//
//    min  (-y)' a   s.t.  X' a = (1-q) X' 1,   0 <= a <= 1,
//
// whose equality multipliers recover the regression coefficients as -lambda.
// The solver is a Mehrotra predictor-corrector interior-point method on that
// box LP. The p x p normal-equations system makes each iteration cheap even
// for thousands of observations.
QuantileModel qr_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     double q) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (n != y.size())
    throw Error(Errc::dimension_mismatch, "qr_fit: X rows != y length");
  if (!(q > 0.0 && q < 1.0))
    throw Error(Errc::config_invalid, "qr_fit: q must lie strictly in (0,1)");
  if (!X.allFinite() || !y.allFinite())
    throw Error(Errc::non_finite_input, "qr_fit: non-finite input");
  if (n <= p)
    throw Error(Errc::degenerate_design, "qr_fit: need more rows than columns");
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < p)
      throw Error(Errc::degenerate_design,
                  "qr_fit: design matrix is rank deficient");
  }

  const Eigen::MatrixXd A = X.transpose();
  const Eigen::VectorXd c = -y;
  const Eigen::VectorXd b = (1.0 - q) * (A * Eigen::VectorXd::Ones(n));

  // Strictly interior primal start that already satisfies Ax = b, x + w = 1.
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 - q);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, q);

  // Dual start: least-squares multipliers, then split the residual so that
  // A'lambda + z - s = c holds exactly with z, s strictly positive.
  Eigen::VectorXd lambda =
      (A * A.transpose() +
       1e-13 * Eigen::MatrixXd::Identity(p, p))
          .ldlt()
          .solve(A * c);
  Eigen::VectorXd r0 = c - A.transpose() * lambda;
  double delta = 1.0 + 0.5 * r0.lpNorm<Eigen::Infinity>();
  Eigen::VectorXd z = r0.cwiseMax(0.0).array() + delta;
  Eigen::VectorXd s = (-r0).cwiseMax(0.0).array() + delta;

  // The complementarity product is the duality gap up to the (checked)
  // residual terms and, unlike the primal-dual objective difference, does not
  // suffer cancellation once both objectives agree to many digits. At the
  // final vertex the scaling matrix is intrinsically ill-conditioned, so the
  // last iterations tolerate a small feasibility drift; the residual bound
  // keeps the coefficient error orders of magnitude inside the documented
  // 1e-6 relative objective guarantee.
  const double gap_tol = 1e-11;
  const double feas_tol = 1e-8;
  const double step_frac = 0.99995;

  auto to_model = [&](const Eigen::VectorXd& multipliers) {
    QuantileModel model;
    model.q = q;
    Eigen::VectorXd beta = -multipliers;
    model.intercept = beta[0];
    model.weights = beta.tail(p - 1);
    return model;
  };

  Eigen::VectorXd best_lambda = lambda;
  double best_gap = std::numeric_limits<double>::infinity();
  double best_obj = 0.0;

  using VectorLD = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  using MatrixLD = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const MatrixLD A_ld = A.cast<long double>();

  for (int iter = 0; iter < 200; ++iter) {
    Eigen::VectorXd r_p = b - A * x;
    Eigen::VectorXd r_u = Eigen::VectorXd::Ones(n) - x - w;
    Eigen::VectorXd r_d = c - A.transpose() * lambda - z + s;

    const double primal_obj = c.dot(x);
    const double comp_gap = x.dot(z) + w.dot(s);
    const bool feasible = r_p.lpNorm<Eigen::Infinity>() <=
                              feas_tol * (1.0 + b.lpNorm<Eigen::Infinity>()) &&
                          r_d.lpNorm<Eigen::Infinity>() <=
                              feas_tol * (1.0 + c.lpNorm<Eigen::Infinity>());
    if (feasible && comp_gap < best_gap) {
      best_gap = comp_gap;
      best_lambda = lambda;
      best_obj = primal_obj;
    }
    if (feasible && comp_gap <= gap_tol * (1.0 + std::fabs(primal_obj)))
      return to_model(lambda);
    // Complementarity collapsed far below certification level while a
    // residual lingers: the scaling geometry cannot repair it any more.
    if (!feasible && comp_gap <= 1e-3 * gap_tol * (1.0 + std::fabs(primal_obj)))
      break;

    double mu = comp_gap / (2.0 * static_cast<double>(n));

    Eigen::VectorXd d = z.cwiseQuotient(x) + s.cwiseQuotient(w);
    Eigen::VectorXd theta = d.cwiseInverse();
    const Eigen::MatrixXd M0 = A * theta.asDiagonal() * A.transpose();
    const VectorLD r_p_ld = r_p.cast<long double>();
    const VectorLD d_ld = d.cast<long double>();

    Eigen::VectorXd dx, dw, dl, dz, ds;
    bool have_directions = false;
    // Epsilon-scale ridge: just enough for a stable factorisation without
    // biasing the small eigenvalues the refinement below relies on.
    // Strengthened and retried if the solve still degenerates.
    double ridge = 2.3e-16 * (1.0 + M0.diagonal().maxCoeff());
    for (int attempt = 0; attempt < 4 && !have_directions; ++attempt) {
      Eigen::MatrixXd M = M0;
      M.diagonal().array() += ridge;
      ridge *= 1e6;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
      if (ldlt.info() != Eigen::Success) continue;

      auto solve_newton = [&](const Eigen::VectorXd& r_xz,
                              const Eigen::VectorXd& r_ws, Eigen::VectorXd* gx,
                              Eigen::VectorXd* gw, Eigen::VectorXd* gl,
                              Eigen::VectorXd* gz, Eigen::VectorXd* gs) {
        Eigen::VectorXd rhat = r_d - r_xz.cwiseQuotient(x) +
                               r_ws.cwiseQuotient(w) -
                               s.cwiseProduct(r_u).cwiseQuotient(w);
        Eigen::VectorXd gl_v = ldlt.solve(r_p + A * theta.cwiseProduct(rhat));
        Eigen::VectorXd gx_v = theta.cwiseProduct(A.transpose() * gl_v - rhat);
        // The reduced Newton system is
        //     A gx = r_p,   A' gl - d gx = rhat.
        // Near the optimal vertex its conditioning exceeds what one LDLT
        // solve can deliver, so refine the (gx, gl) pair with residuals
        // accumulated in extended precision; otherwise the step injects an
        // equality drift the iteration can never repair.
        if (gl_v.allFinite() && gx_v.allFinite()) {
          const VectorLD rhat_ld = rhat.cast<long double>();
          double rn = std::numeric_limits<double>::infinity();
          for (int round = 0; round < 6; ++round) {
            VectorLD gx_ld = gx_v.cast<long double>();
            VectorLD gl_ld = gl_v.cast<long double>();
            Eigen::VectorXd e2 = (r_p_ld - A_ld * gx_ld).cast<double>();
            Eigen::VectorXd e1 =
                (rhat_ld - A_ld.transpose() * gl_ld + d_ld.cwiseProduct(gx_ld))
                    .cast<double>();
            double rn2 = std::max(e2.lpNorm<Eigen::Infinity>(),
                                  e1.lpNorm<Eigen::Infinity>());
            if (rn2 <= 1e-13 * (1.0 + r_p.lpNorm<Eigen::Infinity>())) break;
            if (!(rn2 < 0.5 * rn)) break;
            rn = rn2;
            Eigen::VectorXd ddl = ldlt.solve(e2 + A * theta.cwiseProduct(e1));
            Eigen::VectorXd gx2 =
                gx_v + theta.cwiseProduct(A.transpose() * ddl - e1);
            Eigen::VectorXd gl2 = gl_v + ddl;
            if (!gx2.allFinite() || !gl2.allFinite()) break;
            gx_v = gx2;
            gl_v = gl2;
          }
        }
        *gl = gl_v;
        *gx = gx_v;
        *gw = r_u - *gx;
        *gz = (r_xz - z.cwiseProduct(*gx)).cwiseQuotient(x);
        *gs = (r_ws - s.cwiseProduct(*gw)).cwiseQuotient(w);
      };

      // Affine-scaling predictor.
      Eigen::VectorXd r_xz = -x.cwiseProduct(z);
      Eigen::VectorXd r_ws = -w.cwiseProduct(s);
      solve_newton(r_xz, r_ws, &dx, &dw, &dl, &dz, &ds);
      if (!dx.allFinite() || !dl.allFinite() || !dz.allFinite() ||
          !ds.allFinite())
        continue;

      double ap_aff = std::min(max_step(x, dx), max_step(w, dw));
      double ad_aff = std::min(max_step(z, dz), max_step(s, ds));
      double mu_aff = ((x + ap_aff * dx).dot(z + ad_aff * dz) +
                       (w + ap_aff * dw).dot(s + ad_aff * ds)) /
                      (2.0 * static_cast<double>(n));
      double sigma = std::pow(std::min(1.0, std::max(0.0, mu_aff / mu)), 3.0);

      // Corrector reuses the factorisation from the predictor.
      r_xz = Eigen::VectorXd::Constant(n, sigma * mu) - x.cwiseProduct(z) -
             dx.cwiseProduct(dz);
      r_ws = Eigen::VectorXd::Constant(n, sigma * mu) - w.cwiseProduct(s) -
             dw.cwiseProduct(ds);
      solve_newton(r_xz, r_ws, &dx, &dw, &dl, &dz, &ds);
      have_directions = dx.allFinite() && dw.allFinite() && dl.allFinite() &&
                        dz.allFinite() && ds.allFinite();
    }
    if (!have_directions) break;  // accept the best feasible iterate instead

    double ap = std::min(1.0, step_frac * std::min(max_step(x, dx), max_step(w, dw)));
    double ad = std::min(1.0, step_frac * std::min(max_step(z, dz), max_step(s, ds)));
    x += ap * dx;
    w += ap * dw;
    lambda += ad * dl;
    z += ad * dz;
    s += ad * ds;
  }

  if (best_gap <= 1e-9 * (1.0 + std::fabs(best_obj))) return to_model(best_lambda);
  throw Error(Errc::non_convergence, "qr_fit: interior point did not converge");
}

std::vector<double> percentile_orders() {
  std::vector<double> qs(99);
  for (int i = 1; i <= 99; ++i) qs[static_cast<size_t>(i - 1)] = i / 100.0;
  return qs;
}

std::vector<QuantileModel> fit_percentile_grid(const Eigen::MatrixXd& X,
                                               const Eigen::VectorXd& y) {
  std::vector<QuantileModel> models;
  models.reserve(99);
  for (double q : percentile_orders()) models.push_back(qr_fit(X, y, q));
  return models;
}

}  // namespace epf
