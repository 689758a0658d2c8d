#ifndef SOPMON_CONFIG_HPP
#define SOPMON_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sopmon/calibration.hpp"
#include "sopmon/charts.hpp"
#include "sopmon/dgp.hpp"

namespace sopmon {

// Config files use a small TOML subset: [section] and [section.sub] headers,
// key = value lines with strings, numbers, booleans, or flat numeric arrays,
// and # comments. Tables are flattened to dotted keys.
using ConfigValue = std::variant<bool, double, std::string, std::vector<double>>;
using ConfigTable = std::map<std::string, ConfigValue>;

ConfigTable parse_config(const std::string& text);
ConfigTable parse_config_file(const std::string& path);

// Applies a command-line override like "chart.lambda=0.2"; the raw value is
// parsed with the same rules as a config-file value.
void apply_override(ConfigTable& table, const std::string& dotted_key,
                    const std::string& raw_value);

// Everything a run needs beyond the subcommand and CLI-level flags.
struct RunConfig {
  ChartConfig chart;
  bool has_chart = false;
  std::optional<DgpSpec> dgp;
  std::optional<std::string> input;      // recorded frame stream
  std::optional<std::string> pool_file;  // recorded statistic pool
  std::uint64_t frames = 0;              // frames per monitored run / simulated stream
  std::uint64_t replications = 10000;
  double target_arl = 0.0;
  bool has_target = false;
  double rel_tol = 0.02;
  std::uint64_t cap = 100000;
  double jitter_scale = 0.0;
  long long noise_runs = 1;
};

// Validates keys strictly: an unrecognised key raises ConfigError. Presence
// requirements that depend on the subcommand are checked by the caller.
RunConfig build_run_config(const ConfigTable& table);

}  // namespace sopmon

#endif
