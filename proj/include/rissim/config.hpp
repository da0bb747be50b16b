#pragma once

#include <map>
#include <string>

#include "rissim/harness.hpp"

namespace rissim {

/// Bundled scenarios: default, fig5, fig6, fig9, fig12, fig13.
ScenarioConfig preset_config(const std::string& name);

/// Scenario family behind `sweep --preset <name>`: the list of scenario
/// variants, the algorithms to compare, and whether the sweep runs the
/// long-term mobility mode (with its speed grid).
struct SweepPlan {
    std::vector<ScenarioConfig> scenarios;
    std::vector<Algorithm> algorithms;
    bool mobility = false;
    std::vector<double> speeds;
};

SweepPlan preset_sweep(const std::string& name);

/// Flat key = value configuration file; '#' starts a comment. Unknown keys
/// raise ConfigError.
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Apply one key (as found in a config file or a --set flag) to a scenario.
void apply_config_key(ScenarioConfig& cfg, const std::string& key, const std::string& value);

void apply_config(ScenarioConfig& cfg, const std::map<std::string, std::string>& kv);

}  // namespace rissim
