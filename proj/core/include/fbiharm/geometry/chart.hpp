#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fbiharm/geometry/tensor.hpp"
#include "fbiharm/jets/expr.hpp"

namespace fbiharm {

/// Open interval; infinite bounds are allowed.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double v) const noexcept { return v > lo && v < hi; }
    bool empty() const noexcept { return !(lo < hi); }
};

/// Axis-aligned coordinate box.
class Box {
public:
    Box() = default;
    explicit Box(std::vector<Interval> axes) : axes_(std::move(axes)) {}
    static Box unbounded(std::size_t dim) { return Box(std::vector<Interval>(dim)); }
    static Box cube(std::size_t dim, double lo, double hi) { return Box(std::vector<Interval>(dim, {lo, hi})); }

    std::size_t dim() const noexcept { return axes_.size(); }
    const Interval& operator[](std::size_t i) const { return axes_[i]; }
    Interval& operator[](std::size_t i) { return axes_[i]; }
    const std::vector<Interval>& axes() const noexcept { return axes_; }

    bool contains(std::span<const double> p) const;
    /// True when the box has no axes or some axis is empty.
    bool empty() const noexcept;

private:
    std::vector<Interval> axes_;
};

/// Coordinate chart carrying a symbolic metric g_ij.
///
/// The metric must be symmetric as expressions. Positive-definiteness is a
/// pointwise property and is checked wherever the metric is evaluated.
/// Positivity guards are extra scalar expressions (conformal factors) that
/// must be positive wherever the chart is used.
class MetricChart {
public:
    MetricChart(std::string name, Box domain, std::vector<std::vector<Expr>> metric,
                std::vector<Expr> positivity_guards = {});

    const std::string& name() const noexcept { return name_; }
    std::size_t dim() const noexcept { return dim_; }
    const Box& domain() const noexcept { return domain_; }
    const Expr& metric(std::size_t i, std::size_t j) const { return metric_[i * dim_ + j]; }
    const std::vector<Expr>& positivity_guards() const noexcept { return guards_; }
    std::vector<std::vector<Expr>> metric_rows() const;

    /// Throws unless p lies in the domain and every guard is positive there.
    void validate_point(std::span<const double> p) const;

private:
    std::string name_;
    std::size_t dim_;
    Box domain_;
    std::vector<Expr> metric_;
    std::vector<Expr> guards_;
};

namespace charts {

MetricChart euclidean(std::size_t n);
/// Stereographic chart of the round sphere S^n(r): g = 4 r^4 / (r^2 + |u|^2)^2 delta.
MetricChart sphere(std::size_t n, double radius = 1.0);
/// Upper half-space model of H^n: g = delta / x_n^2.
MetricChart hyperbolic(std::size_t n);
/// g = factor * delta on R^n.
MetricChart conformally_flat(std::string name, std::size_t n, const Expr& factor);

}  // namespace charts

struct MetricValue {
    Eigen::MatrixXd metric;
    Eigen::MatrixXd inverse;
    double determinant;
};

/// Numeric metric, inverse (symmetric solve) and determinant at p.
MetricValue metric_at(const MetricChart& chart, std::span<const double> p);

/// Jets of the metric components g_ij (row-major) at the jets' seed point.
std::vector<Jet> metric_jets(const MetricChart& chart, std::span<const Jet> coordinates);

/// Levi-Civita data in jet form. christoffel(k, i, j) is Gamma^k_ij, one order
/// below the metric jets.
struct ConnectionJets {
    std::size_t dim = 0;
    std::vector<Jet> metric;   // row-major n*n
    std::vector<Jet> inverse;  // row-major n*n
    Tensor3<Jet> christoffel;

    const Jet& g(std::size_t i, std::size_t j) const { return metric[i * dim + j]; }
    const Jet& ginv(std::size_t i, std::size_t j) const { return inverse[i * dim + j]; }
};

/// Inverse of a symmetric positive-definite matrix of jets (row-major).
std::vector<Jet> invert_spd(std::span<const Jet> matrix, std::size_t n);

/// Builds the connection from metric jets. The value-level metric is checked
/// for nondegeneracy first; `where` is only used in diagnostics.
ConnectionJets connection_jets(std::vector<Jet> metric, std::size_t n, std::span<const double> where);

/// Pointwise curvature data of a chart.
struct CurvaturePack {
    std::vector<double> point;
    Tensor3<double> christoffel;  // Gamma^k_ij at (k, i, j)
    Tensor4<double> riemann;      // R^l_ijk at (l, i, j, k): R(d_i, d_j) d_k = R^l_ijk d_l
    Eigen::MatrixXd ricci;        // Ric_jk = R^i_ijk
    Eigen::MatrixXd ricci_operator;  // g^{-1} Ric
    double scalar = 0.0;
};

/// Riemann tensor values from Christoffel jets of order >= 1.
Tensor4<double> riemann_values(const Tensor3<Jet>& christoffel);
Eigen::MatrixXd ricci_from_riemann(const Tensor4<double>& riemann);

Tensor3<double> christoffel(const MetricChart& chart, std::span<const double> p);
CurvaturePack curvature_pack(const MetricChart& chart, std::span<const double> p);

/// (grad f)^i = g^ij d_j f.
Eigen::VectorXd grad_field(const MetricChart& chart, const Expr& field, std::span<const double> p);
/// Laplace-Beltrami g^ij (d_i d_j f - Gamma^k_ij d_k f); exp(x/R) has Laplacian exp(x/R)/R^2.
double laplace_beltrami(const MetricChart& chart, const Expr& field, std::span<const double> p);

/// Laplacian of a scalar jet (order >= 2) for given metric inverse and Christoffel values.
double laplacian(const Eigen::MatrixXd& inverse, const Tensor3<double>& christoffel, const Jet& u);
/// Gradient g^ij d_j u of a scalar jet (order >= 1).
Eigen::VectorXd gradient(const Eigen::MatrixXd& inverse, const Jet& u);

/// Order-0 values of a Christoffel jet tensor.
Tensor3<double> values(const Tensor3<Jet>& t);
Eigen::MatrixXd values(std::span<const Jet> row_major, std::size_t n);

}  // namespace fbiharm
