#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epf/arx.hpp"
#include "epf/methods.hpp"
#include "epf/trading.hpp"

namespace epf {

enum class Preset { desk, paper };

// Everything a run needs, in explicit units (days, percent, EUR/MWh, MW,
// MWh). Values are layered: hard defaults, then a preset, then config-file
// keys, then command-line flags.
struct PipelineConfig {
  MarketModel market = MarketModel::DA;
  Preset preset = Preset::desk;
  bool include_solar = true;

  std::string input_csv;       // empty selects the synthetic generator
  std::string out_dir = "out";

  std::vector<int> taus_days;         // rolling-window lengths of the panel
  std::vector<int> avg_windows_days;  // columns averaged into the point forecast
  int calib_days = 182;               // interval-calibration sample length
  int oos_days = 300;                 // 0 means everything after calibration
  int k_max = 6;
  std::vector<int> levels_pct;        // nominal central-interval coverages
  std::vector<Method> methods;
  double significance = 0.05;
  std::string transform = "npit";     // "npit" or "none"
  double clamp_eps = -1.0;            // <= 0 selects the per-fit default
  int threads = 1;                    // 0 means hardware concurrency

  BatterySpec battery;
  std::string regime_preset = "none";  // "none" or "epex"

  int synth_days = 700;
  Date synth_start{2021, 1, 4};
  std::uint64_t seed = 7;
  double noise_sigma_eur_mwh = 3.0;

  ModelSpec model_spec() const;
  std::vector<Regime> regimes() const;
  void validate() const;  // throws config_invalid with the offending key
};

PipelineConfig default_config(Preset p = Preset::desk);

// Replaces the scale-dependent fields (window grid, averaging windows,
// out-of-sample length) while leaving everything else alone.
void apply_preset(PipelineConfig& cfg, Preset p);

// One `key = value` assignment; unknown keys and unparseable values throw
// config_invalid.
void apply_config_kv(PipelineConfig& cfg, const std::string& key,
                     const std::string& value);

// `key = value` lines, '#' comments, blank lines ignored. A `preset` line is
// applied before the other keys so file keys override the preset regardless
// of line order.
void apply_config_text(PipelineConfig& cfg, const std::string& text);
void apply_config_file(PipelineConfig& cfg, const std::string& path);

// Comma-separated atoms, each "n", "lo..hi" or "lo..hi:step".
std::vector<int> parse_int_list(const std::string& text);

// Deterministic full serialization of the effective configuration, and the
// 16-hex-digit FNV-1a fingerprint of that text that artifacts embed.
std::string canonical_config_text(const PipelineConfig& cfg);
std::string config_fingerprint(const PipelineConfig& cfg);

const char* preset_name(Preset p);
const char* market_name(MarketModel m);

}  // namespace epf
