#include "epf/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "epf/artifacts.hpp"
#include "epf/backtest.hpp"
#include "epf/csv.hpp"
#include "epf/npit.hpp"
#include "epf/preprocess.hpp"
#include "epf/quantreg.hpp"
#include "epf/synth.hpp"
#include "epf/trading.hpp"
#include "json.hpp"

namespace epf {

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

void ensure_out_dir(const PipelineConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec)
    throw Error(Errc::io_error, "cannot create directory " + cfg.out_dir);
}

void require_stage_file(const std::string& path, const std::string& producer) {
  if (!std::filesystem::exists(path))
    throw Error(Errc::missing_stage,
                "missing " + path + " (run `" + producer + "` first)");
}

bool is_factor_method(Method m) {
  return m == Method::FQRA || m == Method::FQRM || m == Method::SFQRA ||
         m == Method::SFQRM;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::io_error, path + ": " + e.what());
  }
  return doc;
}

}  // namespace

std::string panel_path(const PipelineConfig& cfg) {
  return join_path(cfg.out_dir, "panel.csv");
}
std::string forecast_path(const PipelineConfig& cfg) {
  return join_path(cfg.out_dir, "forecasts.csv");
}
std::string point_path(const PipelineConfig& cfg) {
  return join_path(cfg.out_dir, "point_forecast.csv");
}
std::string prices_path(const PipelineConfig& cfg) {
  return join_path(cfg.out_dir, "prices.csv");
}
std::string surface_path(const PipelineConfig& cfg, Method m) {
  return join_path(cfg.out_dir, std::string("surface_") + method_name(m) + ".csv");
}
std::string intervals_path(const PipelineConfig& cfg, Method m) {
  return join_path(cfg.out_dir, std::string("intervals_") + method_name(m) + ".csv");
}
std::string coverage_path(const PipelineConfig& cfg, Method m) {
  return join_path(cfg.out_dir, std::string("coverage_") + method_name(m) + ".json");
}
std::string ledger_path(const PipelineConfig& cfg, Method m, int level_pct) {
  return join_path(cfg.out_dir, std::string("ledger_") + method_name(m) + "_L" +
                                    std::to_string(level_pct) + ".csv");
}
std::string benchmark_ledger_path(const PipelineConfig& cfg) {
  return join_path(cfg.out_dir, "ledger_benchmark.csv");
}

StageRanges compute_ranges(const PipelineConfig& cfg, int panel_days) {
  const int tau_max = cfg.taus_days.back();
  const int head = tau_max + 7;  // window plus the lag depth of the design row
  StageRanges r;
  r.oos_days = cfg.oos_days > 0
                   ? cfg.oos_days
                   : panel_days - head - cfg.calib_days;
  r.forecast_days = cfg.calib_days + r.oos_days;
  r.forecast_first_day = panel_days - r.forecast_days;
  if (r.oos_days < 1 || r.forecast_first_day < head)
    throw Error(Errc::insufficient_history,
                "panel has " + std::to_string(panel_days) + " days; need " +
                    std::to_string(head + cfg.calib_days + std::max(1, cfg.oos_days)) +
                    " for the configured windows");
  return r;
}

ForecastPanel point_stage(const HourlyPanel& panel, const PipelineConfig& cfg) {
  cfg.validate();
  StageRanges r = compute_ranges(cfg, panel.n_days);
  NpitSettings npit;
  npit.enabled = cfg.transform == "npit";
  npit.clamp_eps = cfg.clamp_eps;
  return rolling_forecast(panel, cfg.model_spec(), cfg.taus_days,
                          r.forecast_first_day, r.forecast_days, npit,
                          cfg.threads);
}

ProbResult prob_stage(const HourlyPanel& panel, const ForecastPanel& forecasts,
                      const PipelineConfig& cfg) {
  cfg.validate();
  const ModelSpec spec = cfg.model_spec();
  if (forecasts.market != spec.market)
    throw Error(Errc::misaligned_index,
                "forecast panel was produced for the other market");
  if (forecasts.first_day + forecasts.n_days != panel.n_days)
    throw Error(Errc::misaligned_index,
                "forecast block must end at the last panel day");
  if (!(add_days(panel.start_date, forecasts.first_day) ==
        forecasts.start_date))
    throw Error(Errc::misaligned_index,
                "forecast dates do not line up with the panel");

  const int calib = cfg.calib_days;
  const int n_oos = forecasts.n_days - calib;
  if (n_oos < 1)
    throw Error(Errc::insufficient_history,
                "forecast block does not extend past the calibration window");
  const int tau_max = cfg.taus_days.back();
  const int oos_first = forecasts.first_day + calib;
  if (oos_first < tau_max)
    throw Error(Errc::insufficient_history,
                "not enough realized history for the reference transform");

  const std::vector<double>& target = panel.series.at(spec.target_series());
  const bool use_npit = cfg.transform == "npit";

  std::vector<long> avg_cols;
  for (int w : cfg.avg_windows_days)
    avg_cols.push_back(forecasts.tau_col(w));

  const std::vector<double> qs = percentile_orders();
  const long n_q = static_cast<long>(qs.size());
  const long N = forecasts.values.cols();
  const long T = 24L * (calib + 1);

  ProbResult out;
  out.oos_first_day = oos_first;
  out.oos_start = add_days(panel.start_date, oos_first);
  out.n_days = n_oos;
  out.point_fc.resize(24L * n_oos);
  out.prices.resize(24L * n_oos);
  for (Method m : cfg.methods) {
    QuantileSurface s;
    s.method = m;
    s.qs = qs;
    s.n_days = n_oos;
    s.start_date = out.oos_start;
    s.calib_days = calib;
    s.transformed.resize(24L * n_oos, n_q);
    s.natural.resize(24L * n_oos, n_q);
    if (is_factor_method(m)) s.k_used.assign(static_cast<std::size_t>(n_oos), 0);
    out.surfaces.emplace(m, std::move(s));
  }

  auto worker = [&](std::size_t i) {
    const int d = oos_first + static_cast<int>(i);

    NpitMap ref;
    if (use_npit) {
      std::vector<double> pool(static_cast<std::size_t>(tau_max) * 24);
      const std::size_t t0 = static_cast<std::size_t>(24L * (d - tau_max));
      for (std::size_t j = 0; j < pool.size(); ++j) pool[j] = target[t0 + j];
      ref = npit_fit(pool, cfg.clamp_eps);
    }
    auto tf = [&](double v) { return use_npit ? npit_transform(ref, v) : v; };
    auto inv = [&](double v) { return use_npit ? npit_inverse(ref, v) : v; };

    // Forecast rows of the estimation days plus the forecast day, and the
    // realized targets of the estimation days, all in the day's domain.
    const long e0 = 24L * (d - calib - forecasts.first_day);
    Eigen::MatrixXd P(T, N);
    for (long r = 0; r < T; ++r)
      for (long c = 0; c < N; ++c) P(r, c) = tf(forecasts.values(e0 + r, c));
    Eigen::VectorXd y(24L * calib);
    const std::size_t y0 = static_cast<std::size_t>(24L * (d - calib));
    for (long r = 0; r < y.size(); ++r)
      y[r] = tf(target[y0 + static_cast<std::size_t>(r)]);

    Eigen::VectorXd avg(T);
    for (long r = 0; r < T; ++r) {
      double s = 0.0;
      for (long c : avg_cols) s += P(r, c);
      avg[r] = s / static_cast<double>(avg_cols.size());
    }

    const long out0 = 24L * static_cast<long>(i);
    for (int h = 1; h <= 24; ++h) {
      const long fc_row = 24L * calib + h - 1;
      out.point_fc[out0 + h - 1] = inv(avg[fc_row]);
      out.prices[out0 + h - 1] =
          target[static_cast<std::size_t>(24L * d + h - 1)];
    }

    auto store_row = [&](QuantileSurface& s, int h, std::vector<double> row) {
      rearrange_quantiles(row);
      for (long c = 0; c < n_q; ++c) {
        s.transformed(out0 + h - 1, c) = row[static_cast<std::size_t>(c)];
        s.natural(out0 + h - 1, c) = inv(row[static_cast<std::size_t>(c)]);
      }
    };

    for (auto& [m, s] : out.surfaces) {
      if (is_factor_method(m)) {
        const bool median_mode = (m == Method::FQRA || m == Method::SFQRA);
        const bool standardized = (m == Method::SFQRA || m == Method::SFQRM);
        FqrDay day = fqr_forecast_day(P, y, median_mode, standardized, cfg.k_max);
        s.k_used[i] = day.k;
        for (int h = 1; h <= 24; ++h) {
          std::vector<double> row(static_cast<std::size_t>(n_q));
          for (long c = 0; c < n_q; ++c)
            row[static_cast<std::size_t>(c)] = day.pred(h - 1, c);
          store_row(s, h, std::move(row));
        }
        continue;
      }
      for (int h = 1; h <= 24; ++h) {
        const long fc_row = 24L * calib + h - 1;
        Eigen::VectorXd ycal(calib);
        for (int j = 0; j < calib; ++j) ycal[j] = y[24L * j + h - 1];
        std::vector<double> row;
        if (m == Method::HS || m == Method::CP) {
          std::vector<double> errors(static_cast<std::size_t>(calib));
          for (int j = 0; j < calib; ++j) {
            double e = ycal[j] - avg[24L * j + h - 1];
            errors[static_cast<std::size_t>(j)] =
                m == Method::CP ? std::abs(e) : e;
          }
          std::sort(errors.begin(), errors.end());
          row = m == Method::HS ? hs_quantile_row(avg[fc_row], errors, qs)
                                : cp_quantile_row(avg[fc_row], errors, qs);
        } else if (m == Method::QRA) {
          Eigen::MatrixXd Xcal(calib, static_cast<long>(avg_cols.size()));
          Eigen::VectorXd xnew(static_cast<long>(avg_cols.size()));
          for (std::size_t c = 0; c < avg_cols.size(); ++c) {
            for (int j = 0; j < calib; ++j)
              Xcal(j, static_cast<long>(c)) = P(24L * j + h - 1, avg_cols[c]);
            xnew[static_cast<long>(c)] = P(fc_row, avg_cols[c]);
          }
          row = qr_quantile_row(Xcal, ycal, xnew);
        } else {  // QRM
          Eigen::MatrixXd Xcal(calib, 1);
          for (int j = 0; j < calib; ++j) Xcal(j, 0) = avg[24L * j + h - 1];
          Eigen::VectorXd xnew(1);
          xnew[0] = avg[fc_row];
          row = qr_quantile_row(Xcal, ycal, xnew);
        }
        store_row(s, h, std::move(row));
      }
    }
  };
  parallel_for(static_cast<std::size_t>(n_oos), cfg.threads, worker);
  return out;
}

void run_ingest(const PipelineConfig& cfg) {
  cfg.validate();
  if (cfg.input_csv.empty())
    throw Error(Errc::config_invalid, "ingest: input_csv is not set");
  ensure_out_dir(cfg);
  HourlyPanel panel = normalize_calendar(load_market_csv(cfg.input_csv));
  for (SeriesId id : cfg.model_spec().required_series())
    if (!panel.series.count(id))
      throw Error(Errc::unknown_series,
                  std::string("ingest: input lacks required series ") +
                      series_name(id));
  write_panel_csv(panel_path(cfg), panel, config_fingerprint(cfg));
}

void run_synth(const PipelineConfig& cfg) {
  cfg.validate();
  ensure_out_dir(cfg);
  SynthSpec spec;
  spec.start_date = cfg.synth_start;
  spec.n_days = cfg.synth_days;
  spec.seed = cfg.seed;
  spec.noise_sigma = cfg.noise_sigma_eur_mwh;
  HourlyPanel panel = normalize_calendar(generate_synthetic(spec));
  write_panel_csv(panel_path(cfg), panel, config_fingerprint(cfg));
}

void run_point(const PipelineConfig& cfg) {
  cfg.validate();
  const std::string fp = config_fingerprint(cfg);
  const std::string ppath = panel_path(cfg);
  require_stage_file(ppath, cfg.input_csv.empty() ? "synth" : "ingest");
  require_config(read_artifact_meta(ppath), fp, ppath);
  HourlyPanel panel = load_market_csv(ppath);
  ForecastPanel fc = point_stage(panel, cfg);
  write_forecast_csv(forecast_path(cfg), fc, fp);
}

void run_prob(const PipelineConfig& cfg) {
  cfg.validate();
  const std::string fp = config_fingerprint(cfg);
  const std::string ppath = panel_path(cfg);
  const std::string fpath = forecast_path(cfg);
  require_stage_file(ppath, cfg.input_csv.empty() ? "synth" : "ingest");
  require_stage_file(fpath, "point");
  require_config(read_artifact_meta(ppath), fp, ppath);
  require_config(read_artifact_meta(fpath), fp, fpath);

  HourlyPanel panel = load_market_csv(ppath);
  ForecastPanel fc = read_forecast_csv(fpath);
  ProbResult res = prob_stage(panel, fc, cfg);

  write_hourly_csv(point_path(cfg), "point_fc", res.point_fc, res.oos_start, fp);
  write_hourly_csv(prices_path(cfg), "price", res.prices, res.oos_start, fp);
  for (const auto& [m, s] : res.surfaces) {
    write_surface_csv(surface_path(cfg, m), s, fp);
    write_intervals_csv(intervals_path(cfg, m), assemble_intervals(s, cfg.levels_pct), fp);
    if (!s.k_used.empty()) {
      std::vector<std::string> lines;
      lines.push_back("# config = " + fp);
      lines.push_back("date,k");
      for (int dd = 0; dd < s.n_days; ++dd)
        lines.push_back(format_date(add_days(s.start_date, dd)) + "," +
                        std::to_string(s.k_used[static_cast<std::size_t>(dd)]));
      write_lines(join_path(cfg.out_dir,
                            std::string("factors_k_") + method_name(m) + ".csv"),
                  lines);
    }
  }
}

void run_eval(const PipelineConfig& cfg) {
  cfg.validate();
  const std::string fp = config_fingerprint(cfg);
  const std::string prpath = prices_path(cfg);
  require_stage_file(prpath, "prob");
  require_config(read_artifact_meta(prpath), fp, prpath);
  Date start;
  Eigen::VectorXd prices = read_hourly_csv(prpath, &start);

  for (Method m : cfg.methods) {
    const std::string ipath = intervals_path(cfg, m);
    require_stage_file(ipath, "prob");
    require_config(read_artifact_meta(ipath), fp, ipath);
    IntervalSet iv = read_intervals_csv(ipath, m);
    if (24L * iv.n_days != prices.size())
      throw Error(Errc::misaligned_index,
                  ipath + ": span differs from realized prices");
    std::vector<CoverageReport> reports;
    for (int level : iv.levels_pct)
      reports.push_back(coverage_report(compute_hits(prices, iv, level), level,
                                        cfg.significance));
    write_coverage_json(coverage_path(cfg, m), m, reports, fp);
  }
}

namespace {

// Regimes applicable to a ledger: a catch-all window plus any configured
// period that overlaps it.
std::vector<Regime> active_regimes(const PipelineConfig& cfg, Date start,
                                   int n_days) {
  Date last = add_days(start, n_days - 1);
  std::vector<Regime> regs;
  regs.push_back({"full", start, last});
  for (const Regime& r : cfg.regimes()) {
    if (days_from_civil(r.last) < days_from_civil(start)) continue;
    if (days_from_civil(r.first) > days_from_civil(last)) continue;
    regs.push_back(r);
  }
  return regs;
}

nlohmann::json ledger_stats_json(const TradeLedger& led,
                                 const TradeLedger& bench,
                                 const std::vector<Regime>& regs) {
  nlohmann::json j;
  j["cash_eur"] = led.total_cash;
  j["volume_mwh"] = led.total_volume;
  if (led.profit_defined())
    j["profit_eur_per_mwh"] = led.profit_per_mwh();
  else
    j["profit_eur_per_mwh"] = nullptr;
  if (bench.total_volume > 0.0)
    j["relative_volume_pct"] = 100.0 * led.total_volume / bench.total_volume;
  int unresolved = 0;
  for (const DayEntry& e : led.days) unresolved += e.unresolved ? 1 : 0;
  j["unresolved_days"] = unresolved;

  auto stats = regime_report(led, regs);
  auto bstats = regime_report(bench, regs);
  nlohmann::json regimes = nlohmann::json::array();
  for (std::size_t r = 0; r < stats.size(); ++r) {
    nlohmann::json rj;
    rj["name"] = stats[r].name;
    rj["n_days"] = stats[r].n_days;
    rj["cash_eur"] = stats[r].cash;
    rj["volume_mwh"] = stats[r].volume;
    if (stats[r].volume > 0.0)
      rj["profit_eur_per_mwh"] = stats[r].cash / stats[r].volume;
    else
      rj["profit_eur_per_mwh"] = nullptr;
    if (bstats[r].volume > 0.0)
      rj["relative_volume_pct"] = 100.0 * stats[r].volume / bstats[r].volume;
    regimes.push_back(std::move(rj));
  }
  j["regimes"] = std::move(regimes);
  return j;
}

}  // namespace

void run_trade(const PipelineConfig& cfg) {
  cfg.validate();
  const std::string fp = config_fingerprint(cfg);
  const std::string popath = point_path(cfg);
  const std::string prpath = prices_path(cfg);
  require_stage_file(popath, "prob");
  require_stage_file(prpath, "prob");
  require_config(read_artifact_meta(popath), fp, popath);
  require_config(read_artifact_meta(prpath), fp, prpath);

  Date start;
  Eigen::VectorXd point_fc = read_hourly_csv(popath, &start);
  Eigen::VectorXd prices = read_hourly_csv(prpath, nullptr);
  if (point_fc.size() != prices.size())
    throw Error(Errc::misaligned_index, "point forecast and prices disagree");

  TradeLedger bench = run_benchmark(point_fc, prices, start, cfg.battery);
  write_ledger_csv(benchmark_ledger_path(cfg), bench, fp);

  auto regs =
      active_regimes(cfg, start, static_cast<int>(point_fc.size() / 24));
  nlohmann::json summary;
  summary["config"] = fp;
  summary["benchmark"] = ledger_stats_json(bench, bench, regs);

  nlohmann::json methods_json;
  for (Method m : cfg.methods) {
    const std::string ipath = intervals_path(cfg, m);
    require_stage_file(ipath, "prob");
    require_config(read_artifact_meta(ipath), fp, ipath);
    IntervalSet iv = read_intervals_csv(ipath, m);
    if (24L * iv.n_days != prices.size())
      throw Error(Errc::misaligned_index,
                  ipath + ": span differs from realized prices");
    nlohmann::json by_level;
    for (std::size_t l = 0; l < iv.levels_pct.size(); ++l) {
      TradeLedger led =
          run_strategy(point_fc, iv.lower.col(static_cast<long>(l)),
                       iv.upper.col(static_cast<long>(l)), prices, start,
                       cfg.battery);
      write_ledger_csv(ledger_path(cfg, m, iv.levels_pct[l]), led, fp);
      by_level[std::to_string(iv.levels_pct[l])] =
          ledger_stats_json(led, bench, regs);
    }
    methods_json[method_name(m)] = std::move(by_level);
  }
  summary["methods"] = std::move(methods_json);

  std::ofstream out(join_path(cfg.out_dir, "trade_summary.json"));
  if (!out) throw Error(Errc::io_error, "cannot write trade_summary.json");
  out << summary.dump(2) << '\n';
}

void run_report(const PipelineConfig& cfg) {
  cfg.validate();
  const std::string fp = config_fingerprint(cfg);

  // Coverage tables.
  std::map<Method, nlohmann::json> coverage;
  for (Method m : cfg.methods) {
    const std::string cpath = coverage_path(cfg, m);
    require_stage_file(cpath, "eval");
    nlohmann::json doc = load_json(cpath);
    if (!doc.contains("config") || doc["config"] != fp)
      throw Error(Errc::missing_stage, cpath + ": config mismatch");
    coverage[m] = std::move(doc);
  }

  auto method_header = [&]() {
    std::string h;
    for (Method m : cfg.methods) h += std::string(",") + method_name(m);
    return h;
  };

  {
    std::vector<std::string> lines;
    lines.push_back("# config = " + fp);
    lines.push_back("level_pct" + method_header());
    for (std::size_t l = 0; l < cfg.levels_pct.size(); ++l) {
      std::string line = std::to_string(cfg.levels_pct[l]);
      for (Method m : cfg.methods) {
        const nlohmann::json& doc = coverage[m]["levels"][l];
        line += "," + fmt_full(doc["ace"].get<double>());
      }
      lines.push_back(line);
    }
    write_lines(join_path(cfg.out_dir, "ace_by_level.csv"), lines);
  }

  {
    // Pass counts at the three headline coverages when present, else at every
    // configured level.
    std::vector<int> table_levels;
    for (int lv : {50, 80, 98})
      if (std::count(cfg.levels_pct.begin(), cfg.levels_pct.end(), lv))
        table_levels.push_back(lv);
    if (table_levels.empty()) table_levels = cfg.levels_pct;

    std::vector<std::string> lines;
    lines.push_back("# config = " + fp);
    std::string header = "method";
    for (int lv : table_levels) header += ",pass_" + std::to_string(lv);
    lines.push_back(header);
    for (Method m : cfg.methods) {
      std::string line = method_name(m);
      for (int lv : table_levels) {
        auto it = std::find(cfg.levels_pct.begin(), cfg.levels_pct.end(), lv);
        std::size_t idx =
            static_cast<std::size_t>(it - cfg.levels_pct.begin());
        line += "," + std::to_string(coverage[m]["levels"][idx]
                                         ["christoffersen_pass"].get<int>());
      }
      lines.push_back(line);
    }
    write_lines(join_path(cfg.out_dir, "christoffersen_counts.csv"), lines);
  }

  // Trading tables.
  const std::string tpath = join_path(cfg.out_dir, "trade_summary.json");
  require_stage_file(tpath, "trade");
  nlohmann::json trade = load_json(tpath);
  if (!trade.contains("config") || trade["config"] != fp)
    throw Error(Errc::missing_stage, tpath + ": config mismatch");

  std::vector<std::string> regime_names;
  for (const auto& rj : trade["benchmark"]["regimes"])
    regime_names.push_back(rj["name"].get<std::string>());

  auto regime_entry = [](const nlohmann::json& stats, const std::string& name)
      -> const nlohmann::json& {
    for (const auto& rj : stats["regimes"])
      if (rj["name"] == name) return rj;
    throw Error(Errc::missing_stage, "trade summary lacks regime " + name);
  };

  {
    std::vector<std::string> lines;
    lines.push_back("# config = " + fp);
    lines.push_back("regime,level_pct" + method_header() + ",benchmark");
    for (const std::string& reg : regime_names) {
      for (int lv : cfg.levels_pct) {
        std::string line = reg + "," + std::to_string(lv);
        for (Method m : cfg.methods) {
          const nlohmann::json& st = regime_entry(
              trade["methods"][method_name(m)][std::to_string(lv)], reg);
          line += ",";
          if (!st["profit_eur_per_mwh"].is_null())
            line += fmt_full(st["profit_eur_per_mwh"].get<double>());
        }
        const nlohmann::json& bs = regime_entry(trade["benchmark"], reg);
        line += ",";
        if (!bs["profit_eur_per_mwh"].is_null())
          line += fmt_full(bs["profit_eur_per_mwh"].get<double>());
        lines.push_back(line);
      }
    }
    write_lines(join_path(cfg.out_dir, "profit_by_level.csv"), lines);
  }

  {
    std::vector<std::string> lines;
    lines.push_back("# config = " + fp);
    lines.push_back("regime,level_pct" + method_header());
    for (const std::string& reg : regime_names) {
      for (int lv : cfg.levels_pct) {
        std::string line = reg + "," + std::to_string(lv);
        for (Method m : cfg.methods) {
          const nlohmann::json& st = regime_entry(
              trade["methods"][method_name(m)][std::to_string(lv)], reg);
          line += ",";
          if (st.contains("relative_volume_pct"))
            line += fmt_full(st["relative_volume_pct"].get<double>());
        }
        lines.push_back(line);
      }
    }
    write_lines(join_path(cfg.out_dir, "volume_by_level.csv"), lines);
  }

  nlohmann::json summary;
  summary["config"] = fp;
  summary["config_text"] = canonical_config_text(cfg);
  summary["market"] = market_name(cfg.market);
  summary["preset"] = preset_name(cfg.preset);
  nlohmann::json method_list = nlohmann::json::array();
  for (Method m : cfg.methods) method_list.push_back(method_name(m));
  summary["methods"] = std::move(method_list);
  summary["levels_pct"] = cfg.levels_pct;
  std::ofstream out(join_path(cfg.out_dir, "run_summary.json"));
  if (!out) throw Error(Errc::io_error, "cannot write run_summary.json");
  out << summary.dump(2) << '\n';
}

void run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  if (cfg.input_csv.empty())
    run_synth(cfg);
  else
    run_ingest(cfg);
  run_point(cfg);
  run_prob(cfg);
  run_eval(cfg);
  run_trade(cfg);
  run_report(cfg);
}

}  // namespace epf
