#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fbiharm/scenarios/scenario.hpp"

namespace fbiharm {

const std::vector<std::string>& check_names();
bool is_check_name(std::string_view name);

struct RunConfig {
    std::string scenario;
    std::map<std::string, double> params;
    std::optional<CustomSpec> custom;
    std::optional<std::string> f;        // expression text overriding the scenario's f
    std::optional<std::string> lambda2;  // expression text overriding the scenario's lambda^2
    std::vector<std::string> checks;
    std::size_t jet_order = 4;
    std::size_t samples = 50;
    std::uint64_t seed = 42;
    double tolerance = 1e-7;
    std::map<std::string, double> tolerances;
    double nonzero_floor = 1e-3;
    std::map<std::string, Expectation> expect;
    std::optional<std::string> output;
    bool verbose = false;
    unsigned workers = 0;  // 0: one per hardware thread

    double tolerance_for(const std::string& check) const;
};

/// Parses a YAML run description; unknown keys, scenarios or checks raise a
/// Parse error naming the key and its line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// The scenario with the config's f / lambda^2 overrides applied.
Scenario resolve_scenario(const RunConfig& config);

}  // namespace fbiharm
