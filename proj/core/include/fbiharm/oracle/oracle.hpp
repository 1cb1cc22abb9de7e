#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fbiharm/geometry/chart.hpp"
#include "fbiharm/jets/multi_index.hpp"
#include "fbiharm/maps/map.hpp"
#include "fbiharm/scenarios/scenario.hpp"

namespace fbiharm {

// Finite-difference oracle. Nothing here touches jets: every quantity is
// rebuilt from point values of the chart and map expressions.

struct FDSpec {
    double step = 1e-3;
    unsigned levels = 2;
    unsigned max_order = 4;
};

using ScalarEvaluator = std::function<double(std::span<const double>)>;

/// Central-difference estimate of d^alpha fn(p): a tensor product of
/// second-order stencils followed by `levels` Richardson steps, so the error
/// is O(h^(2 levels)). A derivative of total order k uses the step
/// spec.step * {1, 1, 3, 6, 12}[k] to keep roundoff below truncation.
double fd_partial(const ScalarEvaluator& fn, std::span<const double> p, const MultiIndex& alpha,
                  const FDSpec& spec = {});

namespace oracle {

Tensor3<double> christoffel(const MetricChart& chart, std::span<const double> p, const FDSpec& spec = {});
Eigen::MatrixXd ricci(const MetricChart& chart, std::span<const double> p, const FDSpec& spec = {});
Eigen::VectorXd tension(const SmoothMapDef& map, std::span<const double> p, const FDSpec& spec = {});
/// Mean curvature from b_ij = h(nabla d phi(d_i, d_j), xi) with the frame's
/// orientation convention.
double mean_curvature(const SmoothMapDef& map, std::span<const double> p, const FDSpec& spec = {});
/// Gradient of the mean curvature field (finite differences of mean_curvature).
Eigen::VectorXd mean_curvature_gradient(const SmoothMapDef& map, std::span<const double> p, const FDSpec& spec = {});

}  // namespace oracle

struct CrossValidation {
    struct Entry {
        double max_deviation = 0.0;
        bool pass = true;
        std::string error;
    };
    double tolerance = 1e-5;
    std::map<std::string, Entry> quantities;

    bool pass() const;
};

/// Quantity names: christoffel, ricci, tension, H (mean curvature and its
/// gradient; hypersurfaces only). Christoffel and Ricci are compared on both
/// charts, the target at phi(p).
CrossValidation cross_validate(const Scenario& scenario, const std::vector<std::string>& quantities,
                               const std::vector<std::vector<double>>& points, double tol = 1e-5,
                               const FDSpec& spec = {});

const std::vector<std::string>& cross_validation_quantities();

}  // namespace fbiharm
