#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qwalk/measures.hpp"
#include "qwalk/scenario.hpp"

namespace qwalk {

std::string_view version();

/// Raw key=value settings; the same keys are used by config files, manifests
/// and (as --key) command-line flags.
using Settings = std::map<std::string, std::string>;

struct Preset {
  std::string name;
  std::string summary;
  Settings settings;
};

const std::vector<Preset>& presets();

/// One line per preset: "name (summary)".
std::string list_presets();

enum class Command { Run, ListPresets, Version, Help };

struct ParsedCommand {
  Command command = Command::Help;
  ScenarioConfig config;
  std::string preset;  // empty when none was used
  std::string help;    // usage text for Command::Help
};

/// Parses a key=value file. Blank lines and lines starting with '#' are
/// skipped. Manifest bookkeeping keys are dropped.
Settings read_settings_file(const std::filesystem::path& path);

/// Builds a validated config from layered settings: built-in defaults, then
/// the preset (from --preset or a `preset` key in the file), then the config
/// file, then flags. A layer that sets only one of gamma/ratio replaces both.
/// Throws InputError naming the field; ConflictError when one layer gives
/// inconsistent gamma and ratio; InputError on unknown keys.
ScenarioConfig build_config(const std::vector<Settings>& layers,
                            std::string* preset_used = nullptr);

/// Parses argv-style arguments (without the program name).
ParsedCommand parse_config(const std::vector<std::string>& args);

/// Serializes every config field as key=value lines.
Settings to_settings(const ScenarioConfig& config);

struct RunOutcome {
  std::filesystem::path series_path;
  std::filesystem::path manifest_path;
  MeasureSeries series;
  double runtime_seconds = 0.0;
};

/// Header of series.csv.
inline constexpr std::string_view kSeriesHeader =
    "t,entropy,entropy_stderr,negativity,negativity_stderr,purity";

std::string format_series_csv(const MeasureSeries& series);

/// Runs the ensemble and writes series.csv and manifest.txt into
/// config.output_path (created if missing). Nothing is left behind on
/// failure. `workers` = 0 uses QWALK_THREADS / hardware concurrency.
RunOutcome run_scenario(const ScenarioConfig& config, std::size_t workers = 0,
                        const std::string& preset = {});

/// Entry point shared by the qwalk tool; returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace qwalk
