#include "fbiharm/geometry/chart.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fbiharm/error.hpp"

namespace fbiharm {

namespace {

std::string point_text(std::span<const double> p)
{
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + format_number(p[i]);
    return s + ")";
}

Expr squared_norm(std::size_t n)
{
    Expr s = pow(Expr::coordinate(0), 2.0);
    for (std::size_t i = 1; i < n; ++i) s = s + pow(Expr::coordinate(i), 2.0);
    return s;
}

std::vector<std::vector<Expr>> diagonal(std::size_t n, const Expr& entry)
{
    std::vector<std::vector<Expr>> g(n, std::vector<Expr>(n, Expr(0.0)));
    for (std::size_t i = 0; i < n; ++i) g[i][i] = entry;
    return g;
}

}  // namespace

bool Box::contains(std::span<const double> p) const
{
    if (p.size() != axes_.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!axes_[i].contains(p[i])) return false;
    return true;
}

bool Box::empty() const noexcept
{
    if (axes_.empty()) return true;
    for (const Interval& a : axes_)
        if (a.empty()) return true;
    return false;
}

MetricChart::MetricChart(std::string name, Box domain, std::vector<std::vector<Expr>> metric,
                         std::vector<Expr> positivity_guards)
    : name_(std::move(name)), dim_(metric.size()), domain_(std::move(domain)), guards_(std::move(positivity_guards))
{
    if (dim_ == 0) throw Error(ErrorKind::InvalidArgument, "chart '" + name_ + "' has an empty metric");
    if (domain_.dim() != dim_)
        throw Error(ErrorKind::Dimension, "chart '" + name_ + "' domain dimension does not match its metric");
    metric_.reserve(dim_ * dim_);
    for (const auto& row : metric) {
        if (row.size() != dim_) throw Error(ErrorKind::Dimension, "chart '" + name_ + "' metric is not square");
        metric_.insert(metric_.end(), row.begin(), row.end());
    }
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i + 1; j < dim_; ++j)
            if (!structurally_equal(metric_[i * dim_ + j], metric_[j * dim_ + i]))
                throw Error(ErrorKind::InvalidArgument, "chart '" + name_ + "' metric is not symmetric at (" +
                                                            std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
}

std::vector<std::vector<Expr>> MetricChart::metric_rows() const
{
    std::vector<std::vector<Expr>> rows(dim_);
    for (std::size_t i = 0; i < dim_; ++i) rows[i].assign(metric_.begin() + i * dim_, metric_.begin() + (i + 1) * dim_);
    return rows;
}

void MetricChart::validate_point(std::span<const double> p) const
{
    if (p.size() != dim_)
        throw Error(ErrorKind::Dimension, "point " + point_text(p) + " has wrong dimension for chart '" + name_ + "'");
    if (!domain_.contains(p))
        throw Error(ErrorKind::InvalidArgument, "point " + point_text(p) + " lies outside chart '" + name_ + "'");
    for (const Expr& guard : guards_) {
        const double v = guard.evaluate(p);
        if (!(v > 0.0))
            throw Error(ErrorKind::PositivityViolation, "conformal factor " + guard.to_string() + " = " +
                                                            format_number(v) + " at " + point_text(p));
    }
}

namespace charts {

MetricChart euclidean(std::size_t n) { return MetricChart("euclidean(" + std::to_string(n) + ")", Box::unbounded(n), diagonal(n, 1.0)); }

MetricChart sphere(std::size_t n, double radius)
{
    if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "sphere radius must be positive");
    const double r2 = radius * radius;
    const Expr factor = Expr(4.0 * r2 * r2) / pow(Expr(r2) + squared_norm(n), 2.0);
    return MetricChart("sphere(" + std::to_string(n) + ", " + format_number(radius) + ")", Box::unbounded(n),
                       diagonal(n, factor));
}

MetricChart hyperbolic(std::size_t n)
{
    Box domain = Box::unbounded(n);
    domain[n - 1].lo = 0.0;
    return MetricChart("hyperbolic(" + std::to_string(n) + ")", domain, diagonal(n, pow(Expr::coordinate(n - 1), -2.0)));
}

MetricChart conformally_flat(std::string name, std::size_t n, const Expr& factor)
{
    return MetricChart(std::move(name), Box::unbounded(n), diagonal(n, factor));
}

}  // namespace charts

MetricValue metric_at(const MetricChart& chart, std::span<const double> p)
{
    chart.validate_point(p);
    const std::size_t n = chart.dim();
    Eigen::MatrixXd g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) g(i, j) = g(j, i) = chart.metric(i, j).evaluate(p);

    Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    const Eigen::VectorXd d = ldlt.vectorD();
    const double det = d.prod();
    if (ldlt.info() != Eigen::Success || (d.array() <= 0.0).any() || !(det > 1e-12))
        throw Error(ErrorKind::DegenerateMetric, "metric of chart '" + chart.name() + "' is degenerate at " +
                                                     point_text(p) + " (determinant " + format_number(det) + ")");
    Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(n, n));
    inv = 0.5 * (inv + inv.transpose()).eval();
    return {std::move(g), std::move(inv), det};
}

std::vector<Jet> metric_jets(const MetricChart& chart, std::span<const Jet> coordinates)
{
    const std::size_t n = chart.dim();
    if (coordinates.size() != n) throw Error(ErrorKind::Dimension, "coordinate jets do not match chart dimension");
    std::vector<Jet> g(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) g[i * n + j] = g[j * n + i] = eval_expression(chart.metric(i, j), coordinates);
    return g;
}

std::vector<Jet> invert_spd(std::span<const Jet> matrix, std::size_t n)
{
    std::vector<Jet> a(matrix.begin(), matrix.end());
    const Jet& ref = a.front();
    std::vector<Jet> inv(n * n, Jet::constant(0.0, ref.dim(), ref.order()));
    for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = Jet::constant(1.0, ref.dim(), ref.order());

    for (std::size_t col = 0; col < n; ++col) {
        const Jet pivot = a[col * n + col];
        if (pivot.value() == 0.0) throw Error(ErrorKind::DegenerateMetric, "zero pivot while inverting metric jets");
        const Jet scale = 1.0 / pivot;
        for (std::size_t k = 0; k < n; ++k) {
            a[col * n + k] = a[col * n + k] * scale;
            inv[col * n + k] = inv[col * n + k] * scale;
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col) continue;
            const Jet factor = a[row * n + col];
            if (factor.value() == 0.0 && std::all_of(factor.coefficients().begin(), factor.coefficients().end(),
                                                     [](double c) { return c == 0.0; }))
                continue;
            for (std::size_t k = 0; k < n; ++k) {
                a[row * n + k] -= factor * a[col * n + k];
                inv[row * n + k] -= factor * inv[col * n + k];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Jet avg = 0.5 * (inv[i * n + j] + inv[j * n + i]);
            inv[i * n + j] = avg;
            inv[j * n + i] = std::move(avg);
        }
    return inv;
}

ConnectionJets connection_jets(std::vector<Jet> metric, std::size_t n, std::span<const double> where)
{
    const Eigen::MatrixXd g0 = values(metric, n);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g0);
    const Eigen::VectorXd d = ldlt.vectorD();
    if (ldlt.info() != Eigen::Success || (d.array() <= 0.0).any() || !(d.prod() > 1e-12))
        throw Error(ErrorKind::DegenerateMetric, "metric is degenerate at " + point_text(where) + " (determinant " +
                                                     format_number(d.prod()) + ")");

    ConnectionJets c;
    c.dim = n;
    c.inverse = invert_spd(metric, n);
    c.metric = std::move(metric);

    // dg(a, b, c) = d_a g_bc
    Tensor3<Jet> dg(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t cc = b; cc < n; ++cc) dg(a, b, cc) = dg(a, cc, b) = c.g(b, cc).derivative(a);

    c.christoffel = Tensor3<Jet>(n);
    std::vector<Jet> first(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            for (std::size_t l = 0; l < n; ++l) first[l] = 0.5 * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
            for (std::size_t k = 0; k < n; ++k) {
                Jet sum = c.ginv(k, 0) * first[0];
                for (std::size_t l = 1; l < n; ++l) sum += c.ginv(k, l) * first[l];
                c.christoffel(k, j, i) = sum;
                c.christoffel(k, i, j) = std::move(sum);
            }
        }
    return c;
}

Tensor4<double> riemann_values(const Tensor3<Jet>& gamma)
{
    const std::size_t n = gamma.extent();
    const Tensor3<double> g0 = values(gamma);
    Tensor4<double> r(n);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    double v = gamma(l, j, k).partial(i) - gamma(l, i, k).partial(j);
                    for (std::size_t m = 0; m < n; ++m) v += g0(l, i, m) * g0(m, j, k) - g0(l, j, m) * g0(m, i, k);
                    r(l, i, j, k) = v;
                }
    return r;
}

Eigen::MatrixXd ricci_from_riemann(const Tensor4<double>& riemann)
{
    const std::size_t n = riemann.extent();
    Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) ric(j, k) += riemann(i, i, j, k);
    return ric;
}

Tensor3<double> christoffel(const MetricChart& chart, std::span<const double> p)
{
    chart.validate_point(p);
    const auto x = seed_jets(p, 1);
    return values(connection_jets(metric_jets(chart, x), chart.dim(), p).christoffel);
}

CurvaturePack curvature_pack(const MetricChart& chart, std::span<const double> p)
{
    chart.validate_point(p);
    const auto x = seed_jets(p, 2);
    const ConnectionJets conn = connection_jets(metric_jets(chart, x), chart.dim(), p);
    CurvaturePack pack;
    pack.point.assign(p.begin(), p.end());
    pack.christoffel = values(conn.christoffel);
    pack.riemann = riemann_values(conn.christoffel);
    pack.ricci = ricci_from_riemann(pack.riemann);
    pack.ricci_operator = values(conn.inverse, chart.dim()) * pack.ricci;
    pack.scalar = pack.ricci_operator.trace();
    return pack;
}

Eigen::VectorXd grad_field(const MetricChart& chart, const Expr& field, std::span<const double> p)
{
    const MetricValue m = metric_at(chart, p);
    const auto x = seed_jets(p, 1);
    return gradient(m.inverse, eval_expression(field, x));
}

double laplace_beltrami(const MetricChart& chart, const Expr& field, std::span<const double> p)
{
    chart.validate_point(p);
    const auto x = seed_jets(p, 2);
    const ConnectionJets conn = connection_jets(metric_jets(chart, x), chart.dim(), p);
    return laplacian(values(conn.inverse, chart.dim()), values(conn.christoffel), eval_expression(field, x));
}

double laplacian(const Eigen::MatrixXd& inverse, const Tensor3<double>& gamma, const Jet& u)
{
    const std::size_t n = static_cast<std::size_t>(inverse.rows());
    std::vector<double> du(n);
    for (std::size_t k = 0; k < n; ++k) du[k] = u.partial(k);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double hess = u.partial(i, j);
            for (std::size_t k = 0; k < n; ++k) hess -= gamma(k, i, j) * du[k];
            sum += inverse(i, j) * hess;
        }
    return sum;
}

Eigen::VectorXd gradient(const Eigen::MatrixXd& inverse, const Jet& u)
{
    const std::size_t n = static_cast<std::size_t>(inverse.rows());
    Eigen::VectorXd du(n);
    for (std::size_t k = 0; k < n; ++k) du[k] = u.partial(k);
    return inverse * du;
}

Tensor3<double> values(const Tensor3<Jet>& t)
{
    const std::size_t n = t.extent();
    Tensor3<double> v(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) v(a, b, c) = t(a, b, c).value();
    return v;
}

Eigen::MatrixXd values(std::span<const Jet> row_major, std::size_t n)
{
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = row_major[i * n + j].value();
    return m;
}

}  // namespace fbiharm
