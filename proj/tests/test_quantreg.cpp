#include <catch2/catch_amalgamated.hpp>
#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "epf/quantreg.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace epf;

namespace {

struct Problem {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

// Design with an intercept column and p-1 standard normal regressors; the
// response mixes a linear signal with t-ish heavy noise.
Problem random_problem(int n, int p, unsigned seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> dist;
  Problem pr;
  pr.X.resize(n, p);
  pr.y.resize(n);
  for (int i = 0; i < n; ++i) {
    pr.X(i, 0) = 1.0;
    for (int j = 1; j < p; ++j) pr.X(i, j) = dist(eng);
    double noise = dist(eng) / std::max(0.3, std::abs(dist(eng)));
    pr.y(i) = 1.5 + pr.X.row(i).tail(p - 1).sum() * 0.8 + noise;
  }
  return pr;
}

Eigen::VectorXd stack(const QuantileModel& m) {
  Eigen::VectorXd beta(m.weights.size() + 1);
  beta(0) = m.intercept;
  beta.tail(m.weights.size()) = m.weights;
  return beta;
}

}  // namespace

TEST_CASE("pinball loss elementary values", "[quantreg]") {
  REQUIRE_THAT(pinball(0.9, 1.0, 3.0), WithinAbs(1.8, 1e-15));
  REQUIRE_THAT(pinball(0.9, 3.0, 1.0), WithinAbs(0.2, 1e-15));
  REQUIRE_THAT(pinball(0.5, 0.0, 4.0), WithinAbs(2.0, 1e-15));
  REQUIRE_THAT(pinball(0.25, 2.0, 2.0), WithinAbs(0.0, 1e-15));
}

TEST_CASE("objective matches the vertex-enumeration optimum", "[quantreg]") {
  for (unsigned seed = 1; seed <= 12; ++seed) {
    int n = 15 + static_cast<int>(seed % 4) * 9;
    int p = 2 + static_cast<int>(seed % 2);
    Problem pr = random_problem(n, p, seed);
    for (double q : {0.1, 0.5, 0.9}) {
      QuantileModel m = qr_fit(pr.X, pr.y, q);
      double got = qr_objective(pr.X, pr.y, q, stack(m));
      double best = oracles::qr_vertex_objective(pr.X, pr.y, q);
      REQUIRE(got >= best - 1e-9);
      REQUIRE_THAT(got, WithinRel(best, 1e-6));
    }
  }
}

TEST_CASE("intercept-only fit returns the sample quantile", "[quantreg]") {
  Eigen::MatrixXd X = Eigen::MatrixXd::Ones(9, 1);
  Eigen::VectorXd y(9);
  y << 5, 1, 8, 2, 9, 3, 7, 4, 6;
  QuantileModel m = qr_fit(X, y, 0.5);
  // Any value in the median interval is optimal; the objective pins it down.
  double obj = qr_objective(X, y, 0.5, stack(m));
  double ref = oracles::qr_vertex_objective(X, y, 0.5);
  REQUIRE_THAT(obj, WithinRel(ref, 1e-9));
  REQUIRE(m.intercept >= 1.0);
  REQUIRE(m.intercept <= 9.0);
}

TEST_CASE("about a q share of residuals falls below the fit", "[quantreg]") {
  Problem pr = random_problem(400, 3, 77);
  for (double q : {0.2, 0.5, 0.8}) {
    QuantileModel m = qr_fit(pr.X, pr.y, q);
    int below = 0;
    for (int i = 0; i < pr.y.size(); ++i) {
      double fitv = m.intercept + m.weights.dot(pr.X.row(i).tail(2));
      if (pr.y(i) < fitv) ++below;
    }
    // With p = 3 coefficients the share is pinned within p/n of q.
    double share = static_cast<double>(below) / static_cast<double>(pr.y.size());
    REQUIRE(std::abs(share - q) <= 3.0 / 400.0 + 1e-12);
  }
}

TEST_CASE("fits are equivariant to scaling and shift", "[quantreg]") {
  Problem pr = random_problem(60, 3, 5);
  const double a = 2.5, b = -7.0;
  QuantileModel base = qr_fit(pr.X, pr.y, 0.3);
  QuantileModel scaled = qr_fit(pr.X, (a * pr.y.array() + b).matrix(), 0.3);
  double base_obj = qr_objective(pr.X, pr.y, 0.3, stack(base));
  Eigen::VectorXd mapped = a * stack(base);
  mapped(0) += b;
  double mapped_obj =
      qr_objective(pr.X, (a * pr.y.array() + b).matrix(), 0.3, mapped);
  double scaled_obj =
      qr_objective(pr.X, (a * pr.y.array() + b).matrix(), 0.3, stack(scaled));
  // Objectives scale by a; the mapped coefficients must tie the refit.
  REQUIRE_THAT(mapped_obj, WithinRel(a * base_obj, 1e-9));
  REQUIRE_THAT(scaled_obj, WithinRel(mapped_obj, 1e-6));
}

TEST_CASE("exactly representable data gives zero loss", "[quantreg]") {
  Problem pr = random_problem(40, 3, 63);
  Eigen::VectorXd b_true(3);
  b_true << 4.0, -2.0, 1.25;
  Eigen::VectorXd y = pr.X * b_true;
  QuantileModel m = qr_fit(pr.X, y, 0.7);
  REQUIRE_THAT(qr_objective(pr.X, y, 0.7, stack(m)), WithinAbs(0.0, 1e-7));
  REQUIRE_THAT((stack(m) - b_true).lpNorm<Eigen::Infinity>(),
               WithinAbs(0.0, 1e-5));
}

TEST_CASE("percentile grid is complete and ordered at the centre",
          "[quantreg]") {
  auto orders = percentile_orders();
  REQUIRE(orders.size() == 99);
  REQUIRE_THAT(orders.front(), WithinAbs(0.01, 1e-15));
  REQUIRE_THAT(orders.back(), WithinAbs(0.99, 1e-15));

  Problem pr = random_problem(120, 2, 9);
  auto grid = fit_percentile_grid(pr.X, pr.y);
  REQUIRE(grid.size() == 99);
  // Predictions at the average regressor should rise with the order in the
  // middle of the grid; tails can cross, which rearrangement handles later.
  Eigen::VectorXd x_mean(1);
  x_mean(0) = pr.X.col(1).mean();
  double p40 = qr_predict(grid[39], x_mean);
  double p50 = qr_predict(grid[49], x_mean);
  double p60 = qr_predict(grid[59], x_mean);
  REQUIRE(p40 <= p50 + 1e-9);
  REQUIRE(p50 <= p60 + 1e-9);
}

TEST_CASE("ill-conditioned endgame instance still certifies", "[quantreg]") {
  // Captured from a rolling-window fit where the interior-point scaling
  // matrix becomes numerically singular on the last iterations. The solver
  // must survive the degenerate factorisation and still tie the global
  // optimum.
  static const double rows[40][5] = {
      {1, 0.95488218788716595, 1.0797476535913084, 0.89822524881149868,
       -0.10838477699923452},
      {1, 1.2816299727524043, 0.89185238233074438, 0.89924145286136536,
       0.981413464709887},
      {1, -0.61884440656968642, -0.11646801364346122, 0.15352484069822889,
       0.6117931790506288},
      {1, 0.49468897814624474, 0.60840537690139362, 0.47714075440926657,
       0.66981427812196681},
      {1, 0.84420381748644668, 0.45138310448386071, 0.37063540857902499,
       0.070931364527453578},
      {1, 0.82113937785479074, 0.61834131101165168, 0.64426110760950472,
       1.0786271609355256},
      {1, 1.1045051015247327, 0.98767919146285277, 0.98225518755435759,
       -0.0087036802866150027},
      {1, 0.75310035195350555, 0.85482224961669384, 0.96542386164147032,
       -0.2167887035601368},
      {1, -0.98194183946704028, -0.54745770947261541, -0.24898584446934416,
       -0.51273754813106298},
      {1, -0.38367284965211357, -0.25429441577423911, -0.026123693603193048,
       0.27317041313424872},
      {1, 1.0810329862496273, 0.91048820528801411, 0.89921399286566128,
       0.89268887527184237},
      {1, 0.34824893170405824, 0.37873947192867247, 0.41793514907046592,
       0.81394824065793314},
      {1, 0.77649158876984936, 0.6771878179185894, 0.59767805048668132,
       0.97739625591769863},
      {1, 0.39599310256546189, 0.46302604770999345, 0.57494844864867078,
       0.73343419295020229},
      {1, 1.3750546445424439, 1.5306495278073666, 1.470033460748595,
       1.1431503064737356},
      {1, 1.7486175947720162, 1.0542063388815777, 1.0133495481384744,
       0.47342121325201969},
      {1, 0.10455505283284103, -0.054511521261211365, -0.093122958371983852,
       0.13594459704775813},
      {1, 1.3752535524120515, 1.0970795291748643, 1.1148571037900783,
       0.59686841242210642},
      {1, 1.1300795131888686, 1.0998062705999352, 1.1614110557455106,
       0.5413104036836891},
      {1, -0.032119682744651094, 0.079179718300470131, 0.053663726598163694,
       1.6939342499250736},
      {1, 0.51031112707632964, 0.77881507161335017, 0.66963378709684995,
       1.8627318674216518},
      {1, 0.021190099013766211, 0.67353774170394576, 1.1141834639000026,
       2.3109913382574185},
      {1, 1.6065596030091802, 1.8825498582049427, 1.8806343596279942,
       1.9896728611774761},
      {1, 2.489069368393229, 2.427569804227244, 1.9880242871358635,
       1.0697713921743404},
      {1, 1.235593156588259, 1.3735081729474097, 1.4766139937789327,
       1.5800854383780156},
      {1, 0.77476849219999866, 1.4000702020089666, 1.8781306593863052,
       1.0609987347126084},
      {1, 1.7744208549535181, 1.5927547966859481, 1.5508838205252478,
       1.7964647443224886},
      {1, 1.2288120452291362, 0.78051522302481169, 1.0830352913502308,
       1.8488177945984581},
      {1, 1.7290958811795221, 1.5317695565811602, 1.530197652252052,
       2.6994967002249721},
      {1, 2.1654863513245242, 2.2059674075023548, 2.226341353706669,
       2.0270360097134845},
      {1, 1.3308891837727432, 2.0307724971054717, 1.6473674184989835,
       1.110310896173591},
      {1, 1.1298678099366324, 1.7028540306196285, 1.625621457984189,
       0.93805862000787599},
      {1, 0.45767819723298264, 1.2411648508826041, 1.1762664634232021,
       1.4127199094127505},
      {1, 2.5634488167948879, 2.3631705155219538, 2.3903445605735976,
       1.5463344771685752},
      {1, 1.4342558077559995, 1.5961889516422971, 1.8178051154192598,
       1.6066329014355885},
      {1, 2.3789781936075336, 1.6025675158580801, 1.5214586930370986,
       0.92272450217278879},
      {1, 0.51954162228740774, 1.1290228531297324, 1.4523650058785447,
       0.82438255802032789},
      {1, 0.027428430714594863, 0.72793590434544841, 0.7423728645274198,
       1.3993556836635526},
      {1, 1.7231361286471205, 1.9691516249663772, 1.7530677383019617,
       1.877016204026188},
      {1, 1.4907032076616968, 1.4332003495162902, 1.7449702317805142,
       1.7261223885182697},
  };
  Eigen::MatrixXd X(40, 4);
  Eigen::VectorXd y(40);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 4; ++j) X(i, j) = rows[i][j];
    y(i) = rows[i][4];
  }
  // 0.29 provoked a singular factorisation mid-run; the extreme tails stress
  // the boundary endgame where equality residuals are hardest to hold.
  for (double q : {0.28999999999999998, 0.01, 0.99}) {
    QuantileModel m = qr_fit(X, y, q);
    double got = qr_objective(X, y, q, stack(m));
    double best = oracles::qr_vertex_objective(X, y, q);
    REQUIRE(got >= best - 1e-9);
    REQUIRE_THAT(got, WithinRel(best, 1e-6));
  }
}

TEST_CASE("invalid designs are rejected", "[quantreg]") {
  Eigen::MatrixXd X(3, 3);
  X << 1, 0, 0, 1, 1, 0, 1, 0, 1;
  Eigen::VectorXd y(3);
  y << 1, 2, 3;
  REQUIRE_THROWS_AS(qr_fit(X, y, 0.5), Error);  // n must exceed p

  Eigen::VectorXd y10 = Eigen::VectorXd::Random(10);
  Eigen::MatrixXd dup(10, 3);
  dup.col(0).setOnes();
  dup.col(1) = Eigen::VectorXd::LinSpaced(10, 0, 1);
  dup.col(2) = dup.col(1);
  REQUIRE_THROWS_AS(qr_fit(dup, y10, 0.5), Error);  // collinear

  Eigen::MatrixXd ok = Eigen::MatrixXd::Random(10, 2);
  ok.col(0).setOnes();
  REQUIRE_THROWS_AS(qr_fit(ok, y10, 0.0), Error);
  REQUIRE_THROWS_AS(qr_fit(ok, y10, 1.0), Error);
}
