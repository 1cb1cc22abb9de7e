#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fbiharm/geometry/chart.hpp"
#include "fbiharm/jets/expr.hpp"

namespace fbiharm {

/// A scalar function on the source chart. When `positive` is set the value
/// is required to be > 0 wherever it is evaluated.
struct ScalarFieldDef {
    Expr expr;
    bool positive = true;
};

/// phi : (M, g) -> (N, h) given by target-coordinate component expressions
/// over the source coordinates.
struct SmoothMapDef {
    MetricChart source;
    MetricChart target;
    std::vector<Expr> components;
    bool immersion = false;

    std::size_t source_dim() const noexcept { return source.dim(); }
    std::size_t target_dim() const noexcept { return target.dim(); }
};

/// Everything needed to differentiate along phi at one source point: jets of
/// phi, the source connection, and the target connection composed with phi.
///
/// Orders with jet order K: phi is K, d phi and the target Christoffel symbols
/// along phi are K-1. Target curvature is only kept as values at phi(p).
struct MapJetBundle {
    std::vector<double> point;
    std::vector<double> image;
    std::size_t order = 0;
    std::size_t m = 0;  // source dimension
    std::size_t n = 0;  // target dimension

    std::vector<Jet> coordinates;  // seeded source coordinates
    ConnectionJets source;
    Eigen::MatrixXd source_inverse;   // g^{-1}(p)
    Tensor3<double> source_gamma;     // Gamma^M(p)

    std::vector<Jet> phi;
    std::vector<Jet> differential;    // (i, alpha) -> d_i phi^alpha at i*n + alpha
    std::vector<Jet> target_metric;   // h_ab o phi, row-major
    Tensor3<Jet> target_gamma;        // Gamma^N o phi
    std::vector<Jet> connection;      // (i, a, c) -> Gamma^N a_bc d_i phi^b at (i*n + a)*n + c

    Eigen::MatrixXd target_metric_value;  // h(phi(p))
    Tensor4<double> target_riemann;       // R^N at phi(p)
    Eigen::MatrixXd target_ricci;         // Ric^N at phi(p)

    const Jet& dphi(std::size_t i, std::size_t alpha) const { return differential[i * n + alpha]; }
    const Jet& conn(std::size_t i, std::size_t a, std::size_t c) const { return connection[(i * n + a) * n + c]; }

    /// d phi at p as an n x m matrix (columns d phi(d_i)).
    Eigen::MatrixXd differential_value() const;
    /// sqrt(h(v, v)) at phi(p).
    double target_norm(const Eigen::VectorXd& v) const;
    /// |d phi|^2 = g^ij h(d phi(d_i), d phi(d_j)).
    double energy_density() const;
};

MapJetBundle map_jet_bundle(const SmoothMapDef& map, std::span<const double> p, std::size_t order = 4);

/// Tension field components as jets of order K-2.
std::vector<Jet> tension_jets(const MapJetBundle& bundle);

/// (nabla^phi_{d_i} sigma)^a as jets one order below sigma, at i*n + a.
std::vector<Jet> pullback_covariant_derivative(const MapJetBundle& bundle, std::span<const Jet> sigma);

/// (nabla^phi_X sigma)^a = X(sigma^a) + Gamma^N a_bc X(phi^b) sigma^c at p.
Eigen::VectorXd pullback_connection_apply(const MapJetBundle& bundle, const Eigen::VectorXd& direction,
                                          std::span<const Jet> sigma);

/// Bitension field from a bundle of jet order >= 4.
Eigen::VectorXd bitension(const MapJetBundle& bundle);
/// f tau_2 + (Delta f) tau + 2 nabla^phi_{grad f} tau from a bundle of jet order >= 4.
Eigen::VectorXd f_bitension(const MapJetBundle& bundle, const ScalarFieldDef& f);

Eigen::VectorXd tension_field(const SmoothMapDef& map, std::span<const double> p, std::size_t order = 2);
Eigen::VectorXd bitension_field(const SmoothMapDef& map, std::span<const double> p, std::size_t order = 4);
Eigen::VectorXd f_bitension_field(const SmoothMapDef& map, const ScalarFieldDef& f, std::span<const double> p,
                                  std::size_t order = 4);

/// Chart with metric lambda2 * g on the same domain; lambda2 becomes a positivity guard.
MetricChart conformal_rescale(const MetricChart& chart, const ScalarFieldDef& lambda2);

/// Copy of the map with its source chart replaced (same components).
SmoothMapDef with_source(const SmoothMapDef& map, MetricChart source);

}  // namespace fbiharm
