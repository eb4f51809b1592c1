#pragma once

#include <array>
#include <cstdint>

#include "epf/arx.hpp"
#include "epf/series.hpp"

namespace epf {

struct SynthSpec {
  Date start_date{2021, 1, 4};
  int n_days = 260;
  std::uint64_t seed = 7;
  double noise_sigma = 3.0;  // day-ahead price innovation SD; intraday uses 0.8x
  int burn_in_days = 56;     // discarded warm-up so lags settle before day 0
};

// Coefficients of the generating recursions. Both price equations live in the
// same regressor set the point models use, so with noise_sigma = 0 every
// forecast on the generated panel is exact (in the raw-unit domain).
struct SynthTruth {
  std::array<double, 7> wd_da{};  // Monday-first weekday intercepts
  double lag1_da = 0, lag2_da = 0, lag7_da = 0;
  double min_da = 0, max_da = 0, last_da = 0;
  double load_da = 0, solar_da = 0, wind_da = 0;
  double eua_da = 0, gas_da = 0;

  std::array<double, 7> wd_id{};
  double lag1_id = 0, lag2_id = 0, lag7_id = 0;
  double da1_id = 0, dalast_id = 0, damin_id = 0, damax_id = 0;
  double load_id = 0, solar_id = 0, wind_id = 0;
  double eua_id = 0, gas_id = 0;

  double sigma_da = 0;
  double sigma_id = 0;
};

// Builds a complete eight-series hourly panel: autoregressive day-ahead and
// intraday prices driven by sinusoidal load, stochastic wind, daylight-only
// solar and weekday-quoted gas/EUA random walks (weekend values repeat
// Friday's). Identical spec and seed give byte-identical panels on any
// platform. The partial intraday index is present for every hour and equals
// the full one.
HourlyPanel generate_synthetic(const SynthSpec& spec,
                               SynthTruth* truth_out = nullptr);

// Deterministic part of the price recursion evaluated from panel history;
// the true q-quantile of day d is this plus sigma * norm_inv(q). Needs
// d >= 7.
double synth_conditional_mean(const HourlyPanel& panel, const SynthTruth& truth,
                              MarketModel market, int d, int h);

}  // namespace epf
