#include "epf/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace epf {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(Errc::config_invalid, "config key '" + key + "': " + why);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

long parse_long(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long out = 0;
  try {
    out = std::stol(v, &pos);
  } catch (const std::exception&) {
    bad(key, "not an integer: '" + v + "'");
  }
  if (pos != v.size()) bad(key, "trailing characters in '" + v + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    bad(key, "not a number: '" + v + "'");
  }
  if (pos != v.size()) bad(key, "trailing characters in '" + v + "'");
  return out;
}

bool parse_flag(const std::string& key, const std::string& v) {
  std::string s = lower(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  bad(key, "not a boolean: '" + v + "'");
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

const char* preset_name(Preset p) {
  return p == Preset::desk ? "desk" : "paper";
}

const char* market_name(MarketModel m) {
  return m == MarketModel::DA ? "da" : "ida";
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& raw : split(text, ',')) {
    std::string atom = trim(raw);
    if (atom.empty())
      throw Error(Errc::config_invalid, "empty entry in integer list");
    auto dots = atom.find("..");
    if (dots == std::string::npos) {
      out.push_back(static_cast<int>(parse_long("list", atom)));
      continue;
    }
    std::string lo_s = atom.substr(0, dots);
    std::string rest = atom.substr(dots + 2);
    int step = 1;
    auto colon = rest.find(':');
    if (colon != std::string::npos) {
      step = static_cast<int>(parse_long("list step", rest.substr(colon + 1)));
      rest = rest.substr(0, colon);
    }
    int lo = static_cast<int>(parse_long("list", trim(lo_s)));
    int hi = static_cast<int>(parse_long("list", trim(rest)));
    if (step < 1 || hi < lo)
      throw Error(Errc::config_invalid, "bad range '" + atom + "'");
    for (int x = lo; x <= hi; x += step) out.push_back(x);
  }
  return out;
}

ModelSpec PipelineConfig::model_spec() const {
  ModelSpec spec;
  spec.market = market;
  spec.include_solar = include_solar;
  return spec;
}

std::vector<Regime> PipelineConfig::regimes() const {
  if (regime_preset == "epex") return epex_regimes();
  return {};
}

void apply_preset(PipelineConfig& cfg, Preset p) {
  cfg.preset = p;
  if (p == Preset::desk) {
    cfg.taus_days = parse_int_list("56..200:8");
    cfg.avg_windows_days = {56, 64, 72, 184, 192, 200};
    cfg.oos_days = 300;
  } else {
    cfg.taus_days = parse_int_list("56..728");
    cfg.avg_windows_days = {56, 84, 112, 714, 721, 728};
    cfg.oos_days = 0;  // run every day after the calibration block
  }
}

PipelineConfig default_config(Preset p) {
  PipelineConfig cfg;
  cfg.levels_pct = default_levels();
  cfg.methods.assign(kAllMethods.begin(), kAllMethods.end());
  apply_preset(cfg, p);
  return cfg;
}

void apply_config_kv(PipelineConfig& cfg, const std::string& key,
                     const std::string& value) {
  const std::string k = lower(trim(key));
  const std::string v = trim(value);
  if (k.empty()) throw Error(Errc::config_invalid, "empty config key");

  if (k == "market") {
    std::string m = lower(v);
    if (m == "da")
      cfg.market = MarketModel::DA;
    else if (m == "ida")
      cfg.market = MarketModel::IDA;
    else
      bad(k, "expected da or ida");
  } else if (k == "preset") {
    std::string p = lower(v);
    if (p == "desk")
      apply_preset(cfg, Preset::desk);
    else if (p == "paper")
      apply_preset(cfg, Preset::paper);
    else
      bad(k, "expected desk or paper");
  } else if (k == "include_solar") {
    cfg.include_solar = parse_flag(k, v);
  } else if (k == "input_csv") {
    cfg.input_csv = v;
  } else if (k == "out_dir") {
    cfg.out_dir = v;
  } else if (k == "taus_days") {
    cfg.taus_days = parse_int_list(v);
  } else if (k == "avg_windows_days") {
    cfg.avg_windows_days = parse_int_list(v);
  } else if (k == "calib_days") {
    cfg.calib_days = static_cast<int>(parse_long(k, v));
  } else if (k == "oos_days") {
    cfg.oos_days = static_cast<int>(parse_long(k, v));
  } else if (k == "k_max") {
    cfg.k_max = static_cast<int>(parse_long(k, v));
  } else if (k == "levels_pct") {
    cfg.levels_pct = parse_int_list(v);
  } else if (k == "methods") {
    std::vector<Method> ms;
    for (const std::string& name : split(v, ',')) {
      auto m = parse_method(trim(name));
      if (!m) bad(k, "unknown method '" + trim(name) + "'");
      ms.push_back(*m);
    }
    cfg.methods = ms;
  } else if (k == "significance") {
    cfg.significance = parse_double(k, v);
  } else if (k == "transform") {
    std::string t = lower(v);
    if (t != "npit" && t != "none") bad(k, "expected npit or none");
    cfg.transform = t;
  } else if (k == "clamp_eps") {
    cfg.clamp_eps = parse_double(k, v);
  } else if (k == "threads") {
    cfg.threads = static_cast<int>(parse_long(k, v));
  } else if (k == "battery_capacity_mw") {
    cfg.battery.capacity_mw = parse_double(k, v);
  } else if (k == "battery_efficiency") {
    cfg.battery.efficiency = parse_double(k, v);
  } else if (k == "battery_min_soc_fraction") {
    cfg.battery.min_soc_fraction = parse_double(k, v);
  } else if (k == "battery_daily_mwh") {
    cfg.battery.daily_trade_energy = parse_double(k, v);
  } else if (k == "regime_preset") {
    std::string r = lower(v);
    if (r != "none" && r != "epex") bad(k, "expected none or epex");
    cfg.regime_preset = r;
  } else if (k == "synth_days") {
    cfg.synth_days = static_cast<int>(parse_long(k, v));
  } else if (k == "synth_start") {
    try {
      cfg.synth_start = parse_date(v);
    } catch (const Error&) {
      bad(k, "expected YYYY-MM-DD");
    }
  } else if (k == "seed") {
    long s = parse_long(k, v);
    if (s < 0) bad(k, "seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (k == "noise_sigma_eur_mwh") {
    cfg.noise_sigma_eur_mwh = parse_double(k, v);
  } else {
    bad(k, "unknown key");
  }
}

void apply_config_text(PipelineConfig& cfg, const std::string& text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::config_invalid,
                  "config line " + std::to_string(lineno) + ": missing '='");
    pairs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  for (const auto& [k, v] : pairs)
    if (lower(k) == "preset") apply_config_kv(cfg, k, v);
  for (const auto& [k, v] : pairs)
    if (lower(k) != "preset") apply_config_kv(cfg, k, v);
}

void apply_config_file(PipelineConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str());
}

void PipelineConfig::validate() const {
  auto fail = [](const std::string& why) {
    throw Error(Errc::config_invalid, why);
  };
  if (taus_days.empty()) fail("taus_days: empty window grid");
  for (std::size_t i = 0; i < taus_days.size(); ++i) {
    if (taus_days[i] < 28) fail("taus_days: windows must be at least 28 days");
    if (i && taus_days[i] <= taus_days[i - 1])
      fail("taus_days: windows must be strictly ascending");
  }
  if (avg_windows_days.empty()) fail("avg_windows_days: empty");
  for (int w : avg_windows_days)
    if (!std::binary_search(taus_days.begin(), taus_days.end(), w))
      fail("avg_windows_days: " + std::to_string(w) + " is not on the window grid");
  if (calib_days < 30) fail("calib_days: need at least 30 days");
  if (oos_days < 0) fail("oos_days: negative");
  if (k_max < 1) fail("k_max: need at least 1");
  if (levels_pct.empty()) fail("levels_pct: empty");
  for (int lv : levels_pct) {
    if (lv < 2 || lv > 98) fail("levels_pct: level outside [2, 98]");
    if ((100 - lv) % 2 != 0)
      fail("levels_pct: " + std::to_string(lv) + " does not sit on the 1% quantile grid");
  }
  if (methods.empty()) fail("methods: empty");
  if (!(significance > 0.0 && significance < 1.0)) fail("significance: outside (0,1)");
  if (transform != "npit" && transform != "none") fail("transform: unknown mode");
  if (clamp_eps >= 0.5) fail("clamp_eps: must be below 0.5");
  if (threads < 0) fail("threads: negative");
  if (!(battery.efficiency > 0.0 && battery.efficiency <= 1.0))
    fail("battery_efficiency: outside (0,1]");
  if (!(battery.daily_trade_energy > 0.0)) fail("battery_daily_mwh: not positive");
  if (!(battery.capacity_mw > 0.0)) fail("battery_capacity_mw: not positive");
  if (battery.min_soc_fraction < 0.0 || battery.min_soc_fraction >= 1.0)
    fail("battery_min_soc_fraction: outside [0,1)");
  if (input_csv.empty() && synth_days < 120)
    fail("synth_days: synthetic runs need at least 120 days");
  if (!(noise_sigma_eur_mwh >= 0.0)) fail("noise_sigma_eur_mwh: negative");
  if (out_dir.empty()) fail("out_dir: empty");
}

std::string canonical_config_text(const PipelineConfig& cfg) {
  std::ostringstream out;
  out << "avg_windows_days = " << join_ints(cfg.avg_windows_days) << '\n'
      << "battery_capacity_mw = " << fmt_full(cfg.battery.capacity_mw) << '\n'
      << "battery_daily_mwh = " << fmt_full(cfg.battery.daily_trade_energy) << '\n'
      << "battery_efficiency = " << fmt_full(cfg.battery.efficiency) << '\n'
      << "battery_min_soc_fraction = " << fmt_full(cfg.battery.min_soc_fraction) << '\n'
      << "calib_days = " << cfg.calib_days << '\n'
      << "clamp_eps = " << fmt_full(cfg.clamp_eps) << '\n'
      << "include_solar = " << (cfg.include_solar ? "true" : "false") << '\n'
      << "input_csv = " << cfg.input_csv << '\n'
      << "k_max = " << cfg.k_max << '\n'
      << "levels_pct = " << join_ints(cfg.levels_pct) << '\n'
      << "market = " << market_name(cfg.market) << '\n';
  out << "methods = ";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    if (i) out << ',';
    out << method_name(cfg.methods[i]);
  }
  out << '\n'
      << "noise_sigma_eur_mwh = " << fmt_full(cfg.noise_sigma_eur_mwh) << '\n'
      << "oos_days = " << cfg.oos_days << '\n'
      << "preset = " << preset_name(cfg.preset) << '\n'
      << "regime_preset = " << cfg.regime_preset << '\n'
      << "seed = " << cfg.seed << '\n'
      << "significance = " << fmt_full(cfg.significance) << '\n'
      << "synth_days = " << cfg.synth_days << '\n'
      << "synth_start = " << format_date(cfg.synth_start) << '\n'
      << "taus_days = " << join_ints(cfg.taus_days) << '\n'
      << "transform = " << cfg.transform << '\n';
  return out.str();
}

std::string config_fingerprint(const PipelineConfig& cfg) {
  std::uint64_t h = fnv1a64(canonical_config_text(cfg));
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace epf
