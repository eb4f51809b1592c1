#include <catch2/catch_amalgamated.hpp>
#include <Eigen/Dense>
#include <algorithm>
#include <random>

#include "epf/factors.hpp"
#include "epf/methods.hpp"
#include "epf/quantreg.hpp"

using Catch::Matchers::WithinAbs;
using namespace epf;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, unsigned seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = dist(eng);
  return M;
}

Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> dist;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = dist(eng);
  return v;
}

}  // namespace

TEST_CASE("method names round trip", "[methods]") {
  for (Method m : kAllMethods) {
    auto back = parse_method(method_name(m));
    REQUIRE(back.has_value());
    REQUIRE(*back == m);
  }
  REQUIRE(std::string(method_name(Method::SFQRA)) == "sFQRA");
  REQUIRE_FALSE(parse_method("qra").has_value());
  REQUIRE_FALSE(parse_method("").has_value());
}

TEST_CASE("error-quantile interval on a worked example", "[methods]") {
  std::vector<double> errors = {2.0, -4.0, 4.0, 0.0, -2.0};
  Interval iv = hs_interval(10.0, errors, 0.5);
  REQUIRE_THAT(iv.lo, WithinAbs(7.5, 1e-12));
  REQUIRE_THAT(iv.hi, WithinAbs(12.5, 1e-12));
  REQUIRE_THROWS_AS(hs_interval(10.0, {}, 0.5), Error);
  REQUIRE_THROWS_AS(hs_interval(10.0, errors, 0.0), Error);
  REQUIRE_THROWS_AS(hs_interval(10.0, errors, 1.0), Error);
}

TEST_CASE("symmetric band uses the absolute-error quantile", "[methods]") {
  std::vector<double> errors = {2.0, -4.0, 4.0, 0.0, -2.0};
  Interval iv = cp_interval(10.0, errors, 0.2);
  REQUIRE_THAT(iv.lo, WithinAbs(6.0, 1e-12));
  REQUIRE_THAT(iv.hi, WithinAbs(14.0, 1e-12));
  // Symmetry holds whatever the error signs are.
  Interval iv2 = cp_interval(-3.0, {1.0, -7.0, 2.5, 0.3}, 0.35);
  REQUIRE_THAT(iv2.hi - (-3.0), WithinAbs((-3.0) - iv2.lo, 1e-12));
}

TEST_CASE("surface rows for the error-based methods", "[methods]") {
  std::vector<double> sorted = {-4.0, -2.0, 0.0, 2.0, 4.0};
  auto qs = percentile_orders();
  auto hs_row = hs_quantile_row(10.0, sorted, qs);
  REQUIRE(hs_row.size() == 99);
  REQUIRE_THAT(hs_row[49], WithinAbs(10.0, 1e-12));  // median error is zero
  REQUIRE(std::is_sorted(hs_row.begin(), hs_row.end()));

  std::vector<double> sorted_abs = {0.0, 2.0, 2.0, 4.0, 4.0};
  auto cp_row = cp_quantile_row(10.0, sorted_abs, qs);
  REQUIRE_THAT(cp_row[49], WithinAbs(10.0, 1e-12));  // q = 0.5 sits on the fc
  for (int i = 0; i < 99; ++i)
    REQUIRE_THAT(cp_row[static_cast<size_t>(i)] +
                     cp_row[static_cast<size_t>(98 - i)],
                 WithinAbs(20.0, 1e-12));
}

TEST_CASE("regression row reproduces exactly linear calibration data",
          "[methods]") {
  Eigen::MatrixXd Xcal = random_matrix(40, 2, 3);
  Eigen::VectorXd ycal =
      (3.0 + 2.0 * Xcal.col(0).array() - 1.5 * Xcal.col(1).array()).matrix();
  Eigen::VectorXd xnew(2);
  xnew << 0.7, -0.4;
  double truth = 3.0 + 2.0 * 0.7 - 1.5 * -0.4;
  auto row = qr_quantile_row(Xcal, ycal, xnew);
  REQUIRE(row.size() == 99);
  for (double v : row) REQUIRE_THAT(v, WithinAbs(truth, 1e-5));
}

TEST_CASE("standardized factor methods equal their plain versions on a"
          " pre-standardized panel",
          "[methods]") {
  const int T = 24 * 8, n = T - 24;
  Eigen::MatrixXd panel = random_matrix(T, 6, 11);
  panel.array() += 40.0;
  Eigen::VectorXd y = random_vector(n, 12);

  StandardizedPanel z = standardize_cross_section(panel);
  Eigen::VectorXd ty(n);
  for (int t = 0; t < n; ++t) ty(t) = (y(t) - z.mu[t]) / z.sigma[t];

  for (bool median_mode : {true, false}) {
    FqrDay via_flag = fqr_forecast_day(panel, y, median_mode, true, 3);
    FqrDay manual = fqr_forecast_day(z.values, ty, median_mode, false, 3);
    REQUIRE(via_flag.k == manual.k);
    for (int r = 0; r < 24; ++r)
      for (int qi = 0; qi < 99; ++qi) {
        double mapped = manual.pred(r, qi) * z.sigma[n + r] + z.mu[n + r];
        REQUIRE_THAT(via_flag.pred(r, qi), WithinAbs(mapped, 1e-10));
      }
  }
}

TEST_CASE("on a rank-1 panel the OLS-collapsed method matches a single"
          " regressor fit",
          "[methods]") {
  const int T = 24 * 6, n = T - 24;
  Eigen::VectorXd u = random_vector(T, 21);
  Eigen::VectorXd v = random_vector(6, 22);
  v.array() += 3.0;  // keep every column a visible copy of u
  Eigen::MatrixXd panel = u * v.transpose();
  Eigen::VectorXd y =
      (2.0 * u.head(n).array() + random_vector(n, 23).array() * 0.3).matrix();

  auto obj = fqr_fit_objectives(panel, y, false, false, 4);
  REQUIRE(obj.size() == 99);

  Eigen::MatrixXd X(n, 2);
  X.col(0).setOnes();
  X.col(1) = panel.col(0).head(n);
  auto qs = percentile_orders();
  for (size_t qi = 0; qi < qs.size(); ++qi) {
    QuantileModel m = qr_fit(X, y, qs[qi]);
    Eigen::VectorXd beta(2);
    beta << m.intercept, m.weights(0);
    double direct = qr_objective(X, y, qs[qi], beta);
    REQUIRE_THAT(obj[qi], WithinAbs(direct, 1e-8));
  }
}

TEST_CASE("factor count tracks the structure of the panel", "[methods]") {
  const int T = 24 * 8, n = T - 24;
  Eigen::MatrixXd A = random_matrix(T, 2, 31);
  Eigen::MatrixXd B = random_matrix(7, 2, 32);
  Eigen::MatrixXd panel = A * B.transpose() + 1e-4 * random_matrix(T, 7, 33);
  Eigen::VectorXd y = A.col(0).head(n) - 0.5 * A.col(1).head(n) +
                      0.01 * random_vector(n, 34);
  FqrDay day = fqr_forecast_day(panel, y, true, false, 5);
  REQUIRE(day.k == 2);
  REQUIRE(day.pred.rows() == 24);
  REQUIRE(day.pred.cols() == 99);
}

TEST_CASE("factor window shape is validated", "[methods]") {
  Eigen::MatrixXd panel = random_matrix(49, 5, 41);
  Eigen::VectorXd y = random_vector(25, 42);
  REQUIRE_THROWS_AS(fqr_forecast_day(panel, y, true, false, 2), Error);
  Eigen::MatrixXd ok_panel = random_matrix(48, 5, 43);
  REQUIRE_THROWS_AS(fqr_forecast_day(ok_panel, y, true, false, 2), Error);
}

TEST_CASE("quantile crossings are repaired by sorting", "[methods]") {
  std::vector<double> row = {3.0, 1.0, 2.0};
  rearrange_quantiles(row);
  REQUIRE(row == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("default coverage grid is 50 to 98 in steps of two", "[methods]") {
  auto levels = default_levels();
  REQUIRE(levels.size() == 25);
  REQUIRE(levels.front() == 50);
  REQUIRE(levels.back() == 98);
  for (size_t i = 1; i < levels.size(); ++i)
    REQUIRE(levels[i] - levels[i - 1] == 2);
}

TEST_CASE("interval bounds select the alpha/2 surface columns", "[methods]") {
  QuantileSurface surface;
  surface.method = Method::QRA;
  surface.qs = percentile_orders();
  surface.n_days = 2;
  surface.start_date = {2022, 5, 1};
  surface.natural.resize(48, 99);
  for (int r = 0; r < 48; ++r)
    for (int c = 0; c < 99; ++c) surface.natural(r, c) = 1000.0 * r + c + 1;
  surface.transformed = surface.natural;

  IntervalSet iv = assemble_intervals(surface, {50, 90, 98});
  REQUIRE(iv.levels_pct == std::vector<int>{50, 90, 98});
  REQUIRE(iv.lower.rows() == 48);
  for (int r = 0; r < 48; ++r) {
    REQUIRE_THAT(iv.lower(r, 0), WithinAbs(1000.0 * r + 25, 1e-12));
    REQUIRE_THAT(iv.upper(r, 0), WithinAbs(1000.0 * r + 75, 1e-12));
    REQUIRE_THAT(iv.lower(r, 1), WithinAbs(1000.0 * r + 5, 1e-12));
    REQUIRE_THAT(iv.upper(r, 1), WithinAbs(1000.0 * r + 95, 1e-12));
    REQUIRE_THAT(iv.lower(r, 2), WithinAbs(1000.0 * r + 1, 1e-12));
    REQUIRE_THAT(iv.upper(r, 2), WithinAbs(1000.0 * r + 99, 1e-12));
  }

  REQUIRE_THROWS_AS(assemble_intervals(surface, {97}), Error);
  REQUIRE_THROWS_AS(assemble_intervals(surface, {0}), Error);
  REQUIRE_THROWS_AS(assemble_intervals(surface, {100}), Error);
  REQUIRE_THROWS_AS(assemble_intervals(surface, {}), Error);
}
