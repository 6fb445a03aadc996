#include "qwalk/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "qwalk/dynamics.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/kernels.hpp"

#ifndef QWALK_VERSION
#define QWALK_VERSION "0.0.0"
#endif

namespace qwalk {

std::string_view version() { return QWALK_VERSION; }

namespace {

const std::set<std::string>& scenario_keys() {
  static const std::set<std::string> keys{
      "preset", "sites", "noise", "c0",   "delta", "nu",
      "gamma",  "ratio", "env",   "beta", "tmax",  "grid",
      "runs",   "batches", "seed", "dedup_edges", "out"};
  return keys;
}

// written into manifests, ignored when a manifest is read back as config
const std::set<std::string>& bookkeeping_keys() {
  static const std::set<std::string> keys{
      "version", "runtime_seconds", "negativity_sufficient_only", "simd",
      "workers"};
  return keys;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v))
    throw InputError("invalid " + key + ": '" + text + "' is not a number");
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw InputError("invalid " + key + ": '" + text +
                     "' is not a non-negative integer");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw InputError("invalid " + key + ": expected true or false, got '" +
                   text + "'");
}

const Preset* find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list{
      {"fig1-static",
       "static disorder, c0 = 1, delta = 1, N = 2 (use --sites 4/6), T = 20",
       {{"sites", "2"},
        {"noise", "static"},
        {"c0", "1"},
        {"delta", "1"},
        {"tmax", "20"},
        {"grid", "200"},
        {"runs", "2000"},
        {"batches", "20"},
        {"seed", "1"}}},
      {"fig2-markov",
       "tau_e/tau_c = 0.2",
       {{"sites", "2"},
        {"noise", "rtn"},
        {"nu", "1"},
        {"ratio", "0.2"},
        {"tmax", "20"},
        {"grid", "200"},
        {"runs", "2000"},
        {"batches", "20"},
        {"seed", "1"}}},
      {"fig3-nonmarkov",
       "tau_e/tau_c = 10",
       {{"sites", "2"},
        {"noise", "rtn"},
        {"nu", "1"},
        {"ratio", "10"},
        {"tmax", "20"},
        {"grid", "200"},
        {"runs", "2000"},
        {"batches", "20"},
        {"seed", "1"}}},
  };
  return list;
}

std::string list_presets() {
  std::ostringstream os;
  for (const auto& p : presets()) {
    os << p.name << " (" << p.summary << ")";
    std::string sep = ": ";
    for (const auto& [k, v] : p.settings) {
      os << sep << k << '=' << v;
      sep = " ";
    }
    os << '\n';
  }
  return os.str();
}

Settings read_settings_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path.string());
  Settings out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError(path.string() + ":" + std::to_string(lineno) +
                       ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (bookkeeping_keys().count(key)) continue;
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

ScenarioConfig build_config(const std::vector<Settings>& layers,
                            std::string* preset_used) {
  for (const auto& layer : layers)
    for (const auto& [key, value] : layer)
      if (!scenario_keys().count(key))
        throw InputError("unknown setting '" + key + "'");

  // the last layer naming a preset wins; the preset sits below every layer
  std::string preset_name;
  for (const auto& layer : layers)
    if (auto it = layer.find("preset"); it != layer.end())
      preset_name = it->second;
  Settings merged;
  if (!preset_name.empty()) {
    const Preset* p = find_preset(preset_name);
    if (!p) throw InputError("invalid preset: unknown name '" + preset_name + "'");
    merged = p->settings;
  }
  for (const auto& layer : layers) {
    const bool has_gamma = layer.count("gamma") > 0;
    const bool has_ratio = layer.count("ratio") > 0;
    if (has_gamma != has_ratio) {
      merged.erase("gamma");
      merged.erase("ratio");
    }
    for (const auto& [key, value] : layer)
      if (key != "preset") merged[key] = value;
  }
  if (preset_used) *preset_used = preset_name;

  auto get = [&](const std::string& key) -> const std::string* {
    auto it = merged.find(key);
    return it == merged.end() ? nullptr : &it->second;
  };

  ScenarioConfig cfg;
  if (auto* v = get("sites")) cfg.n_sites = parse_uint("sites", *v);
  const std::string noise = get("noise") ? *get("noise") : "static";
  if (noise == "static") {
    for (const auto& layer : layers)
      for (const char* key : {"gamma", "ratio"})
        if (layer.count(key))
          throw InputError(std::string("invalid ") + key +
                           ": only meaningful with rtn noise");
    StaticNoise s;
    if (auto* v = get("c0")) s.c0 = parse_double("c0", *v);
    if (auto* v = get("delta")) s.delta = parse_double("delta", *v);
    cfg.noise = s;
  } else if (noise == "rtn") {
    TelegraphNoise t;
    if (auto* v = get("nu")) t.nu = parse_double("nu", *v);
    const std::string* g = get("gamma");
    const std::string* r = get("ratio");
    if (!g && !r)
      throw InputError("invalid gamma: rtn noise needs gamma or ratio");
    if (r) {
      const double ratio = parse_double("ratio", *r);
      if (!(ratio > 0.0)) throw InputError("invalid ratio: must be > 0");
      cfg.ratio = ratio;
      t.gamma = t.nu / ratio;
      if (g) {
        const double gamma = parse_double("gamma", *g);
        if (std::abs(gamma - t.gamma) > 1e-12 * std::abs(t.gamma))
          throw ConflictError("conflicting gamma = " + *g + " and ratio = " +
                              *r + " (gamma must equal nu/ratio)");
      }
    } else {
      t.gamma = parse_double("gamma", *g);
      if (t.gamma > 0.0) cfg.ratio = t.nu / t.gamma;
    }
    cfg.noise = t;
  } else {
    throw InputError("invalid noise: expected static or rtn, got '" + noise +
                     "'");
  }
  if (auto* v = get("env")) {
    if (*v == "common")
      cfg.topology = EnvironmentTopology::Common;
    else if (*v == "independent")
      cfg.topology = EnvironmentTopology::Independent;
    else
      throw InputError("invalid env: expected common or independent, got '" +
                       *v + "'");
  }
  if (auto* v = get("beta")) cfg.onsite_energy = parse_double("beta", *v);
  if (auto* v = get("tmax")) cfg.t_max = parse_double("tmax", *v);
  if (auto* v = get("grid")) cfg.n_grid = parse_uint("grid", *v);
  if (auto* v = get("runs")) cfg.n_runs = parse_uint("runs", *v);
  if (auto* v = get("batches")) cfg.n_batches = parse_uint("batches", *v);
  if (auto* v = get("seed")) cfg.master_seed = parse_uint("seed", *v);
  if (auto* v = get("dedup_edges"))
    cfg.dedup_edges = parse_bool("dedup_edges", *v);
  if (auto* v = get("out")) cfg.output_path = *v;
  cfg.validate();
  return cfg;
}

Settings to_settings(const ScenarioConfig& config) {
  Settings s;
  s["sites"] = std::to_string(config.n_sites);
  if (const auto* st = std::get_if<StaticNoise>(&config.noise)) {
    s["noise"] = "static";
    s["c0"] = format_double(st->c0);
    s["delta"] = format_double(st->delta);
  } else {
    const auto& t = std::get<TelegraphNoise>(config.noise);
    s["noise"] = "rtn";
    s["nu"] = format_double(t.nu);
    if (config.ratio)
      s["ratio"] = format_double(*config.ratio);
    else
      s["gamma"] = format_double(t.gamma);
  }
  s["env"] = std::string(to_string(config.topology));
  s["beta"] = format_double(config.onsite_energy);
  s["tmax"] = format_double(config.t_max);
  s["grid"] = std::to_string(config.n_grid);
  s["runs"] = std::to_string(config.n_runs);
  s["batches"] = std::to_string(config.n_batches);
  s["seed"] = std::to_string(config.master_seed);
  s["dedup_edges"] = config.dedup_edges ? "true" : "false";
  s["out"] = config.output_path;
  return s;
}

ParsedCommand parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Two-particle quantum walks on a ring under classical noise",
               "qwalk"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "Print the version and exit");

  auto* run = app.add_subcommand("run", "Run an ensemble and write series.csv");
  auto* list = app.add_subcommand("list-presets", "List scenario presets");

  struct FlagSpec {
    const char* key;
    const char* flag;
    const char* help;
  };
  static const FlagSpec flags[] = {
      {"preset", "--preset", "Scenario preset (see list-presets)"},
      {"sites", "--sites", "Ring size N >= 2"},
      {"noise", "--noise", "static | rtn"},
      {"c0", "--c0", "Mean coupling of static disorder"},
      {"delta", "--delta", "Width of the static coupling distribution"},
      {"nu", "--nu", "Telegraph coupling strength"},
      {"gamma", "--gamma", "Telegraph flip rate"},
      {"ratio", "--ratio", "tau_e/tau_c; sets gamma = nu/ratio"},
      {"env", "--env", "common | independent"},
      {"beta", "--beta", "Uniform on-site energy"},
      {"tmax", "--tmax", "Final time"},
      {"grid", "--grid", "Number of output times"},
      {"runs", "--runs", "Number of noise realizations"},
      {"batches", "--batches", "Batches for error bars (must divide runs)"},
      {"seed", "--seed", "Master seed"},
      {"out", "--out", "Output directory"},
  };
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  for (const auto& f : flags)
    options[f.key] = run->add_option(f.flag, values[f.key], f.help);
  bool dedup = false;
  auto* dedup_opt = run->add_flag("--dedup-edges", dedup,
                                  "For N = 2 use a single edge between the sites");
  std::string config_file;
  auto* config_opt =
      run->add_option("--config", config_file, "key=value config or manifest");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  ParsedCommand parsed;
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    parsed.command = Command::Help;
    parsed.help = app.help();
    return parsed;
  } catch (const CLI::ParseError& e) {
    throw InputError(std::string("usage: ") + e.what());
  }

  if (show_version) {
    parsed.command = Command::Version;
    return parsed;
  }
  if (list->parsed()) {
    parsed.command = Command::ListPresets;
    return parsed;
  }
  if (!run->parsed()) {
    parsed.command = Command::Help;
    parsed.help = app.help();
    return parsed;
  }

  std::vector<Settings> layers;
  if (config_opt->count() > 0) layers.push_back(read_settings_file(config_file));
  Settings flag_layer;
  for (const auto& [key, opt] : options)
    if (opt->count() > 0) flag_layer[key] = values[key];
  if (dedup_opt->count() > 0) flag_layer["dedup_edges"] = dedup ? "true" : "false";
  layers.push_back(std::move(flag_layer));

  parsed.command = Command::Run;
  parsed.config = build_config(layers, &parsed.preset);
  return parsed;
}

std::string format_series_csv(const MeasureSeries& series) {
  std::string out(kSeriesHeader);
  out += '\n';
  char buf[64];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.16e", v == 0.0 ? 0.0 : v);
    out += buf;
    out += sep;
  };
  for (std::size_t k = 0; k < series.grid.size(); ++k) {
    put(series.grid[k], ',');
    put(series.entropy[k], ',');
    put(series.entropy_stderr[k], ',');
    put(series.negativity[k], ',');
    put(series.negativity_stderr[k], ',');
    put(series.purity[k], '\n');
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace

RunOutcome run_scenario(const ScenarioConfig& config, std::size_t workers,
                        const std::string& preset) {
  config.validate();
  if (workers == 0) workers = default_worker_count();
  const auto start = std::chrono::steady_clock::now();
  const auto ensemble = ensemble_average(config, workers);
  RunOutcome outcome;
  outcome.series = measure_series(ensemble, config.n_sites, workers);
  outcome.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  const std::filesystem::path dir(config.output_path);
  std::filesystem::create_directories(dir);
  outcome.series_path = dir / "series.csv";
  outcome.manifest_path = dir / "manifest.txt";

  std::ostringstream manifest;
  manifest << "# qwalk run manifest; reusable with: qwalk run --config <this file>\n";
  manifest << "version=" << version() << '\n';
  if (!preset.empty()) manifest << "preset=" << preset << '\n';
  for (const auto& [k, v] : to_settings(config)) manifest << k << '=' << v << '\n';
  manifest << "negativity_sufficient_only="
           << (outcome.series.negativity_sufficient_only ? "true" : "false")
           << '\n';
  manifest << "simd=" << kernels::active().name << '\n';
  manifest << "workers=" << workers << '\n';
  manifest << "runtime_seconds=" << format_double(outcome.runtime_seconds)
           << '\n';

  const auto tmp_series = dir / "series.csv.partial";
  const auto tmp_manifest = dir / "manifest.txt.partial";
  try {
    write_file(tmp_series, format_series_csv(outcome.series));
    write_file(tmp_manifest, manifest.str());
    std::filesystem::rename(tmp_series, outcome.series_path);
    std::filesystem::rename(tmp_manifest, outcome.manifest_path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp_series, ec);
    std::filesystem::remove(tmp_manifest, ec);
    std::filesystem::remove(outcome.series_path, ec);
    throw;
  }
  return outcome;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  try {
    const auto parsed = parse_config(args);
    switch (parsed.command) {
      case Command::Version:
        out << "qwalk " << version() << '\n';
        return 0;
      case Command::ListPresets:
        out << list_presets();
        return 0;
      case Command::Help:
        out << parsed.help;
        return args.empty() ? 2 : 0;
      case Command::Run: {
        const auto outcome = run_scenario(parsed.config, 0, parsed.preset);
        out << "wrote " << outcome.series_path.string() << " and "
            << outcome.manifest_path.string() << " ("
            << outcome.runtime_seconds << " s)\n";
        return 0;
      }
    }
  } catch (const InputError& e) {
    err << "qwalk: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "qwalk: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace qwalk
