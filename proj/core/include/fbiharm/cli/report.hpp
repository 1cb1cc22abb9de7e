#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fbiharm/cli/config.hpp"

namespace fbiharm {

inline constexpr std::string_view report_version = "fbiharm-report/1";

struct CheckResult {
    std::string name;
    std::string expectation;  // none | zero | nonzero | value(v)
    double tolerance = 0.0;
    std::size_t points = 0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    // zero: residual / scale; value(v): |residual - v| / max(1, |v|); otherwise the raw residual
    double max_scaled_residual = 0.0;
    std::vector<double> worst_point;
    bool pass = false;
    std::string error;
    std::map<std::string, double> quantities;  // cross_validate only
};

struct Report {
    std::string version{report_version};
    std::size_t jet_order = 4;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double tolerance = 0.0;
    double nonzero_floor = 0.0;
    std::string scenario;
    std::map<std::string, double> params;
    std::string f;
    std::string lambda2;
    std::vector<CheckResult> checks;

    bool pass() const;
    const CheckResult* find(std::string_view check) const;
};

/// Evaluates every requested check at every sample point. Points may be
/// processed concurrently; aggregation runs in point order, so the report is
/// a function of the config alone.
Report run_checks(const RunConfig& config);

std::string emit_report(const Report& report);
void write_report(const Report& report, const std::string& path);
Report parse_report(std::string_view text);

}  // namespace fbiharm
