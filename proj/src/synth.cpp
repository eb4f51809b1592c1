#include "epf/synth.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "epf/mathx.hpp"

namespace epf {

namespace {

// Uniform draws built from the raw 64-bit stream so the sequence is fixed by
// the standard, then mapped through the normal quantile. std::normal_distribution
// is implementation-defined, which would break cross-platform reproducibility.
struct NormalStream {
  std::mt19937_64 eng;

  explicit NormalStream(std::uint64_t seed) : eng(seed) {}

  double uniform() {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1p-53;
  }
  double normal() { return mathx::norm_inv(uniform()); }
};

SynthTruth default_truth(double noise_sigma) {
  SynthTruth t;
  t.wd_da = {2.2, 2.0, 2.0, 2.0, 2.1, 0.8, 0.2};
  t.lag1_da = 0.55;
  t.lag2_da = 0.12;
  t.lag7_da = 0.10;
  t.min_da = 0.02;
  t.max_da = 0.03;
  t.last_da = 0.03;
  t.load_da = 0.40;
  t.solar_da = -0.25;
  t.wind_da = -0.30;
  t.eua_da = 0.15;
  t.gas_da = 0.25;

  t.wd_id = {1.5, 1.4, 1.4, 1.4, 1.5, 0.6, 0.2};
  t.lag1_id = 0.45;
  t.lag2_id = 0.10;
  t.lag7_id = 0.08;
  t.da1_id = 0.22;
  t.dalast_id = 0.02;
  t.damin_id = 0.02;
  t.damax_id = 0.02;
  t.load_id = 0.35;
  t.solar_id = -0.20;
  t.wind_id = -0.35;
  t.eua_id = 0.12;
  t.gas_id = 0.20;

  t.sigma_da = noise_sigma;
  t.sigma_id = 0.8 * noise_sigma;
  return t;
}

struct DaySummary {
  double min, max, last;
};

DaySummary summarize(const std::vector<double>& v, int d) {
  DaySummary s{v[24 * d], v[24 * d], v[24 * d + 23]};
  for (int h = 1; h < 24; ++h) {
    s.min = std::min(s.min, v[24 * d + h]);
    s.max = std::max(s.max, v[24 * d + h]);
  }
  return s;
}

bool solar_active(int h) { return h >= 9 && h <= 17; }

}  // namespace

HourlyPanel generate_synthetic(const SynthSpec& spec, SynthTruth* truth_out) {
  if (spec.n_days < 1 || spec.burn_in_days < 8)
    throw Error(Errc::config_invalid, "generate_synthetic: bad day counts");
  if (!(spec.noise_sigma >= 0.0))
    throw Error(Errc::config_invalid, "generate_synthetic: bad noise sigma");

  const SynthTruth truth = default_truth(spec.noise_sigma);
  const int total = spec.burn_in_days + spec.n_days;
  const std::size_t nh = static_cast<std::size_t>(total) * 24;
  const Date sim_start = add_days(spec.start_date, -spec.burn_in_days);

  NormalStream rng(spec.seed);

  std::vector<double> load(nh), wind(nh), solar(nh), gas(nh), eua(nh);

  // Exogenous forecasts. Load: daily sinusoid with a weekend dip. Wind: slow
  // AR(1) state kept away from zero. Solar: squared half-sine over hours
  // 7..18 with a seasonal amplitude; zero elsewhere.
  double wind_state = 0.0;
  for (int d = 0; d < total; ++d) {
    int wd = weekday_mon1(add_days(sim_start, d));
    double wd_dip = wd >= 6 ? -2.5 : 0.0;
    double amp = 6.0 + 1.5 * std::sin(2.0 * M_PI * d / 365.0) + 0.5 * rng.normal();
    if (amp < 0.5) amp = 0.5;
    for (int h = 1; h <= 24; ++h) {
      std::size_t t = static_cast<std::size_t>(24 * d + h - 1);
      load[t] = 19.0 + 3.2 * std::sin(2.0 * M_PI * (h - 9) / 24.0) + wd_dip +
                0.4 * rng.normal();
      wind_state = 0.97 * wind_state + 0.8 * rng.normal();
      wind[t] = std::max(0.2, 5.0 + 2.0 * wind_state);
      if (h >= 7 && h <= 18) {
        double u = std::sin(M_PI * (h - 6.5) / 12.0);
        solar[t] = amp * u * u;
      } else {
        solar[t] = 0.0;
      }
    }
  }

  // Commodities: weekday random walks held flat over weekends, reflected away
  // from the floor so they stay positive.
  double g = 20.0, e = 25.0;
  for (int d = 0; d < total; ++d) {
    int wd = weekday_mon1(add_days(sim_start, d));
    if (wd <= 5) {
      g += 0.30 * rng.normal();
      e += 0.25 * rng.normal();
      if (g < 1.0) g = 2.0 - g;
      if (e < 1.0) e = 2.0 - e;
    }
    for (int h = 0; h < 24; ++h) {
      gas[static_cast<std::size_t>(24 * d + h)] = g;
      eua[static_cast<std::size_t>(24 * d + h)] = e;
    }
  }

  // Day-ahead recursion. The first seven days seed the lags with the
  // deterministic level plus noise.
  std::vector<double> da(nh);
  for (int d = 0; d < total; ++d) {
    int wd = weekday_mon1(add_days(sim_start, d));
    if (d < 7) {
      for (int h = 1; h <= 24; ++h)
        da[static_cast<std::size_t>(24 * d + h - 1)] =
            90.0 + truth.wd_da[wd - 1] + truth.sigma_da * rng.normal();
      continue;
    }
    DaySummary prev = summarize(da, d - 1);
    for (int h = 1; h <= 24; ++h) {
      std::size_t t = static_cast<std::size_t>(24 * d + h - 1);
      double mean = truth.wd_da[wd - 1] + truth.lag1_da * da[t - 24] +
                    truth.lag2_da * da[t - 48] + truth.lag7_da * da[t - 168] +
                    truth.min_da * prev.min + truth.max_da * prev.max +
                    truth.last_da * prev.last + truth.load_da * load[t] +
                    truth.wind_da * wind[t] + truth.eua_da * eua[t - 24] +
                    truth.gas_da * gas[t - 24];
      if (solar_active(h)) mean += truth.solar_da * solar[t];
      da[t] = mean + truth.sigma_da * rng.normal();
    }
  }

  // Intraday recursion on top of the realized day-ahead path.
  std::vector<double> id3(nh);
  for (int d = 0; d < total; ++d) {
    int wd = weekday_mon1(add_days(sim_start, d));
    if (d < 7) {
      for (int h = 1; h <= 24; ++h)
        id3[static_cast<std::size_t>(24 * d + h - 1)] =
            88.0 + truth.wd_id[wd - 1] + truth.sigma_id * rng.normal();
      continue;
    }
    DaySummary prev = summarize(da, d - 1);
    for (int h = 1; h <= 24; ++h) {
      std::size_t t = static_cast<std::size_t>(24 * d + h - 1);
      double mean = truth.wd_id[wd - 1] + truth.lag1_id * id3[t - 24] +
                    truth.lag2_id * id3[t - 48] + truth.lag7_id * id3[t - 168] +
                    truth.da1_id * da[t - 24] + truth.dalast_id * prev.last +
                    truth.damin_id * prev.min + truth.damax_id * prev.max +
                    truth.load_id * load[t] + truth.wind_id * wind[t] +
                    truth.eua_id * eua[t - 24] + truth.gas_id * gas[t - 24];
      if (solar_active(h)) mean += truth.solar_id * solar[t];
      id3[t] = mean + truth.sigma_id * rng.normal();
    }
  }

  HourlyPanel panel;
  panel.start_date = spec.start_date;
  panel.n_days = spec.n_days;
  const std::size_t skip = static_cast<std::size_t>(spec.burn_in_days) * 24;
  const std::size_t keep = static_cast<std::size_t>(spec.n_days) * 24;
  auto tail = [&](const std::vector<double>& v) {
    return std::vector<double>(v.begin() + skip, v.begin() + skip + keep);
  };
  panel.series[SeriesId::da_price] = tail(da);
  panel.series[SeriesId::id3_price] = tail(id3);
  panel.series[SeriesId::id_partial] = tail(id3);
  panel.series[SeriesId::load_fc] = tail(load);
  panel.series[SeriesId::wind_fc] = tail(wind);
  panel.series[SeriesId::solar_fc] = tail(solar);
  panel.series[SeriesId::gas_price] = tail(gas);
  panel.series[SeriesId::eua_price] = tail(eua);
  panel.validate_shape();

  if (truth_out) *truth_out = truth;
  return panel;
}

double synth_conditional_mean(const HourlyPanel& panel, const SynthTruth& truth,
                              MarketModel market, int d, int h) {
  if (d < 7 || d >= panel.n_days)
    throw Error(Errc::insufficient_history,
                "synth_conditional_mean: day outside usable range");
  if (h < 1 || h > 24)
    throw Error(Errc::dimension_mismatch, "synth_conditional_mean: bad hour");

  const std::vector<double>& da = panel.series.at(SeriesId::da_price);
  DaySummary prev = summarize(da, d - 1);
  int wd = panel.weekday_of_day(d);
  std::size_t t = static_cast<std::size_t>(HourlyPanel::flat_index(d, h));
  double load = panel.series.at(SeriesId::load_fc)[t];
  double wind = panel.series.at(SeriesId::wind_fc)[t];
  double solar = panel.series.at(SeriesId::solar_fc)[t];
  double gas = panel.series.at(SeriesId::gas_price)[t - 24];
  double eua = panel.series.at(SeriesId::eua_price)[t - 24];

  if (market == MarketModel::DA) {
    double mean = truth.wd_da[wd - 1] + truth.lag1_da * da[t - 24] +
                  truth.lag2_da * da[t - 48] + truth.lag7_da * da[t - 168] +
                  truth.min_da * prev.min + truth.max_da * prev.max +
                  truth.last_da * prev.last + truth.load_da * load +
                  truth.wind_da * wind + truth.eua_da * eua + truth.gas_da * gas;
    if (solar_active(h)) mean += truth.solar_da * solar;
    return mean;
  }
  const std::vector<double>& id3 = panel.series.at(SeriesId::id3_price);
  double mean = truth.wd_id[wd - 1] + truth.lag1_id * id3[t - 24] +
                truth.lag2_id * id3[t - 48] + truth.lag7_id * id3[t - 168] +
                truth.da1_id * da[t - 24] + truth.dalast_id * prev.last +
                truth.damin_id * prev.min + truth.damax_id * prev.max +
                truth.load_id * load + truth.wind_id * wind +
                truth.eua_id * eua + truth.gas_id * gas;
  if (solar_active(h)) mean += truth.solar_id * solar;
  return mean;
}

}  // namespace epf
