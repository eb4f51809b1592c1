#include <cstdio>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "epf/config.hpp"
#include "epf/pipeline.hpp"

namespace {

struct CliOverrides {
  std::string config_file;
  std::string preset;
  std::string market;
  std::string methods;
  std::string levels;
  std::string out_dir;
  std::string input_csv;
  long long seed = -1;
  int threads = -1;
};

void add_shared_options(CLI::App* sub, CliOverrides* o) {
  sub->add_option("--config", o->config_file,
                  "configuration file with key = value lines");
  sub->add_option("--preset", o->preset, "scale preset")
      ->check(CLI::IsMember({"desk", "paper"}));
  sub->add_option("--market", o->market, "target market")
      ->check(CLI::IsMember({"da", "ida"}));
  sub->add_option("--methods", o->methods,
                  "comma-separated interval methods (e.g. HS,CP,sFQRA)");
  sub->add_option("--levels", o->levels,
                  "comma-separated coverage levels in percent");
  sub->add_option("--out-dir", o->out_dir, "artifact directory");
  sub->add_option("--input-csv", o->input_csv,
                  "raw market file for the ingest command");
  sub->add_option("--seed", o->seed, "generator seed")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--threads", o->threads,
                  "worker threads (0 = hardware concurrency)")
      ->check(CLI::NonNegativeNumber);
}

epf::PipelineConfig build_config(const CliOverrides& o) {
  epf::PipelineConfig cfg = epf::default_config();
  if (!o.config_file.empty()) epf::apply_config_file(cfg, o.config_file);
  // Flags override file keys. A preset flag resets the scale fields first so
  // the remaining flags land on top of it.
  if (!o.preset.empty()) epf::apply_config_kv(cfg, "preset", o.preset);
  if (!o.market.empty()) epf::apply_config_kv(cfg, "market", o.market);
  if (!o.methods.empty()) epf::apply_config_kv(cfg, "methods", o.methods);
  if (!o.levels.empty()) epf::apply_config_kv(cfg, "levels_pct", o.levels);
  if (!o.out_dir.empty()) epf::apply_config_kv(cfg, "out_dir", o.out_dir);
  if (!o.input_csv.empty()) epf::apply_config_kv(cfg, "input_csv", o.input_csv);
  if (o.seed >= 0)
    epf::apply_config_kv(cfg, "seed", std::to_string(o.seed));
  if (o.threads >= 0)
    epf::apply_config_kv(cfg, "threads", std::to_string(o.threads));
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Probabilistic electricity-price forecasting: rolling-window point "
      "forecasts, factor/quantile-regression prediction intervals, coverage "
      "backtests and a battery trading evaluation."};
  app.require_subcommand(1);

  CliOverrides o;
  const std::map<std::string, void (*)(const epf::PipelineConfig&)> commands = {
      {"ingest", &epf::run_ingest}, {"synth", &epf::run_synth},
      {"point", &epf::run_point},   {"prob", &epf::run_prob},
      {"eval", &epf::run_eval},     {"trade", &epf::run_trade},
      {"report", &epf::run_report}, {"run", &epf::run_pipeline},
  };
  const std::map<std::string, std::string> descriptions = {
      {"ingest", "read a raw market CSV and write the normalized panel"},
      {"synth", "generate a synthetic market panel"},
      {"point", "rolling-window point forecasts across all windows"},
      {"prob", "quantile surfaces and prediction intervals"},
      {"eval", "coverage backtests of the intervals"},
      {"trade", "battery arbitrage ledgers and summary"},
      {"report", "aggregate result tables"},
      {"run", "all stages in order"},
  };
  for (const auto& [name, fn] : commands)
    add_shared_options(app.add_subcommand(name, descriptions.at(name)), &o);

  CLI11_PARSE(app, argc, argv);

  try {
    epf::PipelineConfig cfg = build_config(o);
    std::printf("config %s\n", epf::config_fingerprint(cfg).c_str());
    for (const auto& [name, fn] : commands) {
      if (app.got_subcommand(name)) {
        fn(cfg);
        std::printf("%s done -> %s\n", name.c_str(), cfg.out_dir.c_str());
      }
    }
  } catch (const epf::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
  return 0;
}
