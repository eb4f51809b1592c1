#include "epf/npit.hpp"

#include <algorithm>
#include <cmath>

#include "epf/mathx.hpp"

namespace epf {

NpitMap npit_fit(const std::vector<double>& sample, double clamp_eps) {
  const long n = static_cast<long>(sample.size());
  if (n < 2)
    throw Error(Errc::degenerate_sample, "npit_fit needs at least 2 values");
  std::vector<double> sorted = sample;
  for (double v : sorted)
    if (!std::isfinite(v))
      throw Error(Errc::non_finite_input, "npit_fit: non-finite sample value");
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back())
    throw Error(Errc::degenerate_sample, "npit_fit: all sample values identical");

  NpitMap map;
  map.n = n;
  map.clamp_eps = clamp_eps > 0.0 ? clamp_eps : 1.0 / (2.0 * n);
  if (map.clamp_eps >= 0.5)
    throw Error(Errc::non_finite_input, "npit_fit: clamp_eps must be < 0.5");

  // Ties collapse to one knot carrying the average of their plotting
  // positions (rank - 0.5)/n, which keeps the map strictly increasing.
  long i = 0;
  while (i < n) {
    long j = i;
    while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
    double mean_rank = 0.5 * static_cast<double>(i + j) + 0.5;  // 0-based ranks
    map.knots.push_back(sorted[i]);
    map.probs.push_back(mean_rank / static_cast<double>(n));
    i = j + 1;
  }
  return map;
}

double npit_transform(const NpitMap& map, double x) {
  if (std::isnan(x))
    throw Error(Errc::non_finite_input, "npit_transform: NaN input");
  const auto& k = map.knots;
  const auto& p = map.probs;
  double prob;
  if (x < k.front()) {
    prob = map.clamp_eps;
  } else if (x > k.back()) {
    prob = 1.0 - map.clamp_eps;
  } else {
    auto it = std::lower_bound(k.begin(), k.end(), x);
    size_t idx = static_cast<size_t>(it - k.begin());
    if (idx < k.size() && k[idx] == x) {
      prob = p[idx];
    } else {
      // Strictly between two knots: interpolate the ECDF linearly.
      double w = (x - k[idx - 1]) / (k[idx] - k[idx - 1]);
      prob = p[idx - 1] + w * (p[idx] - p[idx - 1]);
    }
  }
  prob = std::min(std::max(prob, map.clamp_eps), 1.0 - map.clamp_eps);
  return mathx::norm_inv(prob);
}

double npit_inverse(const NpitMap& map, double y) {
  if (std::isnan(y))
    throw Error(Errc::non_finite_input, "npit_inverse: NaN input");
  double prob = std::isinf(y) ? (y > 0 ? 1.0 : 0.0) : mathx::norm_cdf(y);
  const auto& k = map.knots;
  const auto& p = map.probs;
  if (prob <= p.front()) return k.front();
  if (prob >= p.back()) return k.back();
  auto it = std::lower_bound(p.begin(), p.end(), prob);
  size_t idx = static_cast<size_t>(it - p.begin());
  if (p[idx] == prob) return k[idx];
  double w = (prob - p[idx - 1]) / (p[idx] - p[idx - 1]);
  return k[idx - 1] + w * (k[idx] - k[idx - 1]);
}

}  // namespace epf
