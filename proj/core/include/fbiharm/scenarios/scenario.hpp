#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fbiharm/hypersurface/frame.hpp"
#include "fbiharm/maps/map.hpp"

namespace fbiharm {

struct Expectation {
    enum class Kind { None, Zero, Nonzero, Value };
    Kind kind = Kind::None;
    double value = 0.0;

    static Expectation none() { return {}; }
    static Expectation zero() { return {Kind::Zero, 0.0}; }
    static Expectation nonzero() { return {Kind::Nonzero, 0.0}; }
    static Expectation equals(double v) { return {Kind::Value, v}; }
};

std::string to_string(const Expectation& e);

/// A named map with the data the runner needs: the scalar field f, the
/// conformal factor lambda^2 for the surface systems, the ambient assumption,
/// where to sample, and what each check should find there.
struct Scenario {
    std::string name;
    std::map<std::string, double> params;
    SmoothMapDef map;
    std::optional<ScalarFieldDef> f;
    std::optional<ScalarFieldDef> lambda2;
    AmbientDescriptor ambient;
    Box box;
    std::map<std::string, Expectation> expected;

    bool is_hypersurface() const noexcept { return map.target_dim() == map.source_dim() + 1; }
    Expectation expectation(const std::string& check) const;
};

struct ScenarioInfo {
    std::string name;
    std::map<std::string, double> defaults;
    std::string description;
};

/// Built-in catalogue in listing order.
const std::vector<ScenarioInfo>& scenario_catalogue();

/// Builds a catalogue scenario. Parameters not given take the catalogue
/// defaults; unknown names or keys and invalid values throw.
Scenario build_scenario(const std::string& name, const std::map<std::string, double>& params = {});

/// Chart description for user-defined scenarios: either a named family
/// (euclidean, sphere, hyperbolic) or explicit metric expressions.
struct ChartSpec {
    std::string kind = "euclidean";
    std::size_t dim = 0;
    double radius = 1.0;
    std::vector<std::vector<std::string>> metric;
    std::vector<Interval> domain;
};

struct CustomSpec {
    ChartSpec source;
    ChartSpec target;
    std::vector<std::string> components;
    bool immersion = false;
    std::vector<Interval> box;
    std::optional<std::string> f;
    std::optional<std::string> lambda2;
    AmbientDescriptor ambient;
};

MetricChart build_chart(const ChartSpec& spec);
Scenario build_custom_scenario(const CustomSpec& spec);

/// count = 1 gives the box centre; otherwise a Halton sequence with a
/// seed-dependent random shift. Points lie strictly inside the box and are a
/// pure function of (box, count, seed).
std::vector<std::vector<double>> sample_points(const Box& box, std::size_t count, std::uint64_t seed);
std::vector<std::vector<double>> sample_points(const Scenario& scenario, std::size_t count, std::uint64_t seed);

}  // namespace fbiharm
