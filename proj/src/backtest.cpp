#include "epf/backtest.hpp"

#include <algorithm>
#include <cmath>

#include "epf/mathx.hpp"

namespace epf {

std::vector<std::uint8_t> HitSeries::hour_slice(int hour) const {
  std::vector<std::uint8_t> out(static_cast<size_t>(n_days));
  for (int d = 0; d < n_days; ++d) out[static_cast<size_t>(d)] = at(d, hour);
  return out;
}

HitSeries compute_hits(const Eigen::VectorXd& prices,
                       const IntervalSet& intervals, int level_pct) {
  auto it = std::find(intervals.levels_pct.begin(), intervals.levels_pct.end(),
                      level_pct);
  if (it == intervals.levels_pct.end())
    throw Error(Errc::level_not_on_grid,
                "level " + std::to_string(level_pct) + "% not in interval set");
  Eigen::Index col = it - intervals.levels_pct.begin();
  if (prices.size() != intervals.lower.rows())
    throw Error(Errc::misaligned_index, "prices do not align with intervals");

  HitSeries hs;
  hs.alpha = 1.0 - level_pct / 100.0;
  hs.n_days = intervals.n_days;
  hs.hits.resize(static_cast<size_t>(prices.size()));
  for (Eigen::Index t = 0; t < prices.size(); ++t) {
    double p = prices[t];
    hs.hits[static_cast<size_t>(t)] =
        (p >= intervals.lower(t, col) && p <= intervals.upper(t, col)) ? 1 : 0;
  }
  return hs;
}

TestResult kupiec_test(const std::vector<std::uint8_t>& hits, double alpha) {
  const double n = static_cast<double>(hits.size());
  if (hits.empty())
    throw Error(Errc::misaligned_index, "kupiec_test: empty hit series");
  double n1 = 0.0;
  for (auto h : hits) n1 += h;
  double n0 = n - n1;
  double pi0 = 1.0 - alpha;
  double pi_hat = n1 / n;

  // -2 log of the ratio of binomial likelihoods at pi0 and at the MLE.
  double log_null = mathx::xlogy(n0, 1.0 - pi0) + mathx::xlogy(n1, pi0);
  double log_mle = mathx::xlogy(n0, 1.0 - pi_hat) + mathx::xlogy(n1, pi_hat);
  double lr = std::max(0.0, -2.0 * (log_null - log_mle));
  return {lr, mathx::chi2_tail(lr, 1)};
}

ChristoffersenResult christoffersen_test(const std::vector<std::uint8_t>& hits,
                                         double alpha) {
  if (hits.size() < 2)
    throw Error(Errc::misaligned_index, "christoffersen_test: need >= 2 hits");
  TestResult uc = kupiec_test(hits, alpha);

  double n00 = 0, n01 = 0, n10 = 0, n11 = 0;
  for (size_t t = 1; t < hits.size(); ++t) {
    int prev = hits[t - 1], cur = hits[t];
    if (prev == 0 && cur == 0) ++n00;
    else if (prev == 0 && cur == 1) ++n01;
    else if (prev == 1 && cur == 0) ++n10;
    else ++n11;
  }
  double m = n00 + n01 + n10 + n11;
  double pi01 = (n00 + n01) > 0 ? n01 / (n00 + n01) : 0.0;
  double pi11 = (n10 + n11) > 0 ? n11 / (n10 + n11) : 0.0;
  double pi2 = (n01 + n11) / m;  // iid alternative on the transition sample

  double log_markov = mathx::xlogy(n00, 1.0 - pi01) + mathx::xlogy(n01, pi01) +
                      mathx::xlogy(n10, 1.0 - pi11) + mathx::xlogy(n11, pi11);
  double log_iid = mathx::xlogy(n00 + n10, 1.0 - pi2) +
                   mathx::xlogy(n01 + n11, pi2);
  double lr_ind = std::max(0.0, -2.0 * (log_iid - log_markov));

  ChristoffersenResult out;
  out.lr_uc = uc.stat;
  out.lr_ind = lr_ind;
  out.lr_cc = uc.stat + lr_ind;
  out.p_value = mathx::chi2_tail(out.lr_cc, 2);
  return out;
}

CoverageReport coverage_report(const HitSeries& hits, int level_pct,
                               double significance) {
  CoverageReport rep;
  rep.level_pct = level_pct;
  rep.alpha = hits.alpha;
  rep.significance = significance;
  double total = 0.0;
  for (int h = 1; h <= 24; ++h) {
    auto slice = hits.hour_slice(h);
    double cov = 0.0;
    for (auto v : slice) cov += v;
    cov /= static_cast<double>(slice.size());
    rep.coverage_by_hour[static_cast<size_t>(h - 1)] = cov;
    total += cov;

    TestResult kp = kupiec_test(slice, hits.alpha);
    ChristoffersenResult cc = christoffersen_test(slice, hits.alpha);
    rep.kupiec_p[static_cast<size_t>(h - 1)] = kp.p_value;
    rep.christoffersen_p[static_cast<size_t>(h - 1)] = cc.p_value;
    rep.christoffersen_stat[static_cast<size_t>(h - 1)] = cc.lr_cc;
    if (kp.p_value >= significance) ++rep.kupiec_pass;
    if (cc.p_value >= significance) ++rep.christoffersen_pass;
  }
  rep.coverage = total / 24.0;
  rep.ace = rep.coverage - static_cast<double>(level_pct) / 100.0;
  return rep;
}

}  // namespace epf
