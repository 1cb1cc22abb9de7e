#include "fbiharm/oracle/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "fbiharm/error.hpp"
#include "fbiharm/hypersurface/frame.hpp"

namespace fbiharm {

namespace {

using Stencil = std::vector<std::pair<int, double>>;

// Second-order central stencils for d^k/dx^k, offsets in units of h.
const std::array<Stencil, 5> stencils = {{
    {{0, 1.0}},
    {{1, 0.5}, {-1, -0.5}},
    {{1, 1.0}, {0, -2.0}, {-1, 1.0}},
    {{2, 0.5}, {1, -1.0}, {-1, 1.0}, {-2, -0.5}},
    {{2, 1.0}, {1, -4.0}, {0, 6.0}, {-1, -4.0}, {-2, 1.0}},
}};

constexpr std::array<double, 5> step_scale = {1.0, 1.0, 3.0, 6.0, 12.0};

std::string point_text(std::span<const double> p)
{
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + format_number(p[i]);
    return s + ")";
}

double central_difference(const ScalarEvaluator& fn, std::span<const double> p, const MultiIndex& alpha, double h)
{
    const std::size_t d = p.size();
    std::vector<std::size_t> pos(d, 0);
    std::vector<double> q(p.begin(), p.end());
    double sum = 0.0;
    while (true) {
        double w = 1.0;
        for (std::size_t i = 0; i < d; ++i) {
            const auto& [offset, weight] = stencils[alpha[i]][pos[i]];
            q[i] = p[i] + offset * h;
            w *= weight;
        }
        double v;
        try {
            v = fn(q);
        } catch (const Error& e) {
            throw Error(e.kind(), "finite-difference stencil point " + point_text(q) + " for d^" + alpha.to_string() +
                                      " at " + point_text(p) + ": " + e.what());
        }
        sum += w * v;
        std::size_t i = 0;
        for (; i < d; ++i) {
            if (++pos[i] < stencils[alpha[i]].size()) break;
            pos[i] = 0;
        }
        if (i == d) break;
    }
    return sum / std::pow(h, static_cast<double>(alpha.order()));
}

ScalarEvaluator entry(const MetricChart& chart, std::size_t i, std::size_t j)
{
    return [&chart, i, j](std::span<const double> q) { return chart.metric(i, j).evaluate(q); };
}

MultiIndex pair_index(std::size_t dim, std::size_t i, std::size_t j)
{
    return MultiIndex::unit(dim, i) + MultiIndex::unit(dim, j);
}

struct MetricDerivatives {
    Eigen::MatrixXd g, ginv;
    Tensor3<double> d1;     // d_k g_ij at (k, i, j)
    std::vector<double> dd;  // d_a d_b g_ij at (a, b, i, j), row-major

    double second(std::size_t a, std::size_t b, std::size_t i, std::size_t j, std::size_t n) const
    {
        return dd[((a * n + b) * n + i) * n + j];
    }
};

MetricDerivatives metric_derivatives(const MetricChart& chart, std::span<const double> p, const FDSpec& spec,
                                     bool second)
{
    const std::size_t n = chart.dim();
    MetricDerivatives md;
    const MetricValue mv = metric_at(chart, p);
    md.g = mv.metric;
    md.ginv = mv.inverse;
    md.d1 = Tensor3<double>(n);
    if (second) md.dd.assign(n * n * n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const Expr& e = chart.metric(i, j);
            if (e.is_constant()) continue;
            const ScalarEvaluator fn = entry(chart, i, j);
            for (std::size_t k = 0; k < n; ++k)
                md.d1(k, i, j) = md.d1(k, j, i) = fd_partial(fn, p, MultiIndex::unit(n, k), spec);
            if (!second) continue;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a; b < n; ++b) {
                    const double v = fd_partial(fn, p, pair_index(n, a, b), spec);
                    for (const auto& [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
                        md.dd[((x * n + y) * n + i) * n + j] = v;
                        md.dd[((x * n + y) * n + j) * n + i] = v;
                    }
                }
        }
    return md;
}

Tensor3<double> christoffel_from(const MetricDerivatives& md, std::size_t n)
{
    Tensor3<double> gamma(n);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double s = 0.0;
                for (std::size_t m = 0; m < n; ++m)
                    s += md.ginv(l, m) * (md.d1(j, k, m) + md.d1(k, j, m) - md.d1(m, j, k));
                gamma(l, j, k) = 0.5 * s;
            }
    return gamma;
}

struct MapDerivatives {
    std::size_t m, n;
    Eigen::MatrixXd d;              // n x m
    std::vector<Eigen::VectorXd> dd;  // (i, j) -> d_i d_j phi, n-vector
    std::vector<double> image;
};

MapDerivatives map_derivatives(const SmoothMapDef& map, std::span<const double> p, const FDSpec& spec)
{
    MapDerivatives out;
    out.m = map.source_dim();
    out.n = map.target_dim();
    out.d = Eigen::MatrixXd::Zero(out.n, out.m);
    out.dd.assign(out.m * out.m, Eigen::VectorXd::Zero(out.n));
    for (std::size_t a = 0; a < out.n; ++a) {
        const Expr& c = map.components[a];
        out.image.push_back(c.evaluate(p));
        if (c.is_constant()) continue;
        const ScalarEvaluator fn = [&c](std::span<const double> q) { return c.evaluate(q); };
        for (std::size_t i = 0; i < out.m; ++i) {
            out.d(a, i) = fd_partial(fn, p, MultiIndex::unit(out.m, i), spec);
            for (std::size_t j = i; j < out.m; ++j)
                out.dd[i * out.m + j][a] = out.dd[j * out.m + i][a] = fd_partial(fn, p, pair_index(out.m, i, j), spec);
        }
    }
    return out;
}

}  // namespace

double fd_partial(const ScalarEvaluator& fn, std::span<const double> p, const MultiIndex& alpha, const FDSpec& spec)
{
    if (!(spec.step > 0)) throw Error(ErrorKind::InvalidArgument, "finite-difference step must be positive");
    if (spec.levels < 1) throw Error(ErrorKind::InvalidArgument, "Richardson levels must be at least 1");
    if (alpha.dim() != p.size()) throw Error(ErrorKind::Dimension, "multi-index and point differ in dimension");
    const std::size_t k = alpha.order();
    if (k > spec.max_order || k > 4)
        throw Error(ErrorKind::OrderExceeded, "finite differences support total order <= " +
                                                  std::to_string(std::min(spec.max_order, 4u)));
    if (k == 0) return fn(p);

    const double h = spec.step * step_scale[k];
    std::vector<std::vector<double>> table(spec.levels);
    for (unsigned i = 0; i < spec.levels; ++i) {
        table[i].push_back(central_difference(fn, p, alpha, h / std::pow(2.0, i)));
        double factor = 1.0;
        for (unsigned j = 1; j <= i; ++j) {
            factor *= 4.0;
            table[i].push_back((factor * table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0));
        }
    }
    return table.back().back();
}

namespace oracle {

Tensor3<double> christoffel(const MetricChart& chart, std::span<const double> p, const FDSpec& spec)
{
    chart.validate_point(p);
    return christoffel_from(metric_derivatives(chart, p, spec, false), chart.dim());
}

Eigen::MatrixXd ricci(const MetricChart& chart, std::span<const double> p, const FDSpec& spec)
{
    chart.validate_point(p);
    const std::size_t n = chart.dim();
    const MetricDerivatives md = metric_derivatives(chart, p, spec, true);
    const Tensor3<double> gamma = christoffel_from(md, n);

    // d_i Gamma^l_jk = 1/2 (d_i g^lm) S_jkm + 1/2 g^lm d_i S_jkm
    std::vector<double> dgamma(n * n * n * n, 0.0);  // (i, l, j, k)
    std::vector<Eigen::MatrixXd> dginv(n);
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::MatrixXd dg(n, n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) dg(a, b) = md.d1(i, a, b);
        dginv[i] = -md.ginv * dg * md.ginv;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    double s = 0.0;
                    for (std::size_t m = 0; m < n; ++m) {
                        const double sym = md.d1(j, k, m) + md.d1(k, j, m) - md.d1(m, j, k);
                        const double dsym =
                            md.second(i, j, k, m, n) + md.second(i, k, j, m, n) - md.second(i, m, j, k, n);
                        s += dginv[i](l, m) * sym + md.ginv(l, m) * dsym;
                    }
                    dgamma[((i * n + l) * n + j) * n + k] = 0.5 * s;
                }

    Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                // R^i_ijk
                s += dgamma[((i * n + i) * n + j) * n + k] - dgamma[((j * n + i) * n + i) * n + k];
                for (std::size_t m = 0; m < n; ++m)
                    s += gamma(i, i, m) * gamma(m, j, k) - gamma(i, j, m) * gamma(m, i, k);
            }
            ric(j, k) = s;
        }
    return ric;
}

Eigen::VectorXd tension(const SmoothMapDef& map, std::span<const double> p, const FDSpec& spec)
{
    map.source.validate_point(p);
    const MapDerivatives md = map_derivatives(map, p, spec);
    map.target.validate_point(md.image);
    const Tensor3<double> gm = christoffel(map.source, p, spec);
    const Tensor3<double> gn = christoffel(map.target, md.image, spec);
    const Eigen::MatrixXd ginv = metric_at(map.source, p).inverse;
    Eigen::VectorXd tau = Eigen::VectorXd::Zero(md.n);
    for (std::size_t i = 0; i < md.m; ++i)
        for (std::size_t j = 0; j < md.m; ++j)
            for (std::size_t a = 0; a < md.n; ++a) {
                double v = md.dd[i * md.m + j][a];
                for (std::size_t k = 0; k < md.m; ++k) v -= gm(k, i, j) * md.d(a, k);
                for (std::size_t b = 0; b < md.n; ++b)
                    for (std::size_t c = 0; c < md.n; ++c) v += gn(a, b, c) * md.d(b, i) * md.d(c, j);
                tau[a] += ginv(i, j) * v;
            }
    return tau;
}

double mean_curvature(const SmoothMapDef& map, std::span<const double> p, const FDSpec& spec)
{
    map.source.validate_point(p);
    const std::size_t m = map.source_dim();
    const std::size_t n = map.target_dim();
    if (n != m + 1) throw Error(ErrorKind::Dimension, "mean curvature needs a hypersurface");
    const MapDerivatives md = map_derivatives(map, p, spec);
    map.target.validate_point(md.image);
    const MetricValue hv = metric_at(map.target, md.image);
    const Tensor3<double> gn = christoffel(map.target, md.image, spec);

    const Eigen::MatrixXd g = md.d.transpose() * hv.metric * md.d;
    Eigen::VectorXd nu(n);
    for (std::size_t a = 0; a < n; ++a) {
        Eigen::MatrixXd frame(n, n);
        frame.col(0) = Eigen::VectorXd::Unit(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(a));
        frame.rightCols(static_cast<Eigen::Index>(m)) = md.d;
        nu[a] = frame.determinant();
    }
    Eigen::VectorXd xi = hv.inverse * nu;
    xi /= std::sqrt(nu.dot(xi));

    Eigen::MatrixXd b(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Eigen::VectorXd v = md.dd[i * m + j];
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t c = 0; c < n; ++c)
                    for (std::size_t e = 0; e < n; ++e) v[a] += gn(a, c, e) * md.d(c, i) * md.d(e, j);
            b(i, j) = v.dot(hv.metric * xi);
        }
    return (g.inverse() * b).trace() / static_cast<double>(m);
}

Eigen::VectorXd mean_curvature_gradient(const SmoothMapDef& map, std::span<const double> p, const FDSpec& spec)
{
    const std::size_t m = map.source_dim();
    const ScalarEvaluator fn = [&map, &spec](std::span<const double> q) { return mean_curvature(map, q, spec); };
    Eigen::VectorXd dh(m);
    for (std::size_t k = 0; k < m; ++k) dh[k] = fd_partial(fn, p, MultiIndex::unit(m, k), spec);
    return metric_at(map.source, p).inverse * dh;
}

}  // namespace oracle

bool CrossValidation::pass() const
{
    return std::all_of(quantities.begin(), quantities.end(), [](const auto& q) { return q.second.pass; });
}

const std::vector<std::string>& cross_validation_quantities()
{
    static const std::vector<std::string> names = {"christoffel", "ricci", "tension", "H"};
    return names;
}

namespace {

double max_abs_diff(const Tensor3<double>& a, const Tensor3<double>& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
    return d;
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

double deviation(const Scenario& s, const std::string& q, std::span<const double> p, const FDSpec& spec)
{
    const SmoothMapDef& map = s.map;
    if (q == "christoffel") {
        std::vector<double> image;
        for (const Expr& c : map.components) image.push_back(c.evaluate(p));
        return std::max(max_abs_diff(christoffel(map.source, p), oracle::christoffel(map.source, p, spec)),
                        max_abs_diff(christoffel(map.target, image), oracle::christoffel(map.target, image, spec)));
    }
    if (q == "ricci") {
        std::vector<double> image;
        for (const Expr& c : map.components) image.push_back(c.evaluate(p));
        return std::max(max_abs_diff(curvature_pack(map.source, p).ricci, oracle::ricci(map.source, p, spec)),
                        max_abs_diff(curvature_pack(map.target, image).ricci, oracle::ricci(map.target, image, spec)));
    }
    if (q == "tension") return max_abs_diff(tension_field(map, p), oracle::tension(map, p, spec));
    const HypersurfaceFrame fr = frame_at(map, p, 3);
    const Eigen::VectorXd grad_h = gradient(fr.inverse, fr.mean_curvature_jet);
    return std::max(std::abs(fr.mean_curvature - oracle::mean_curvature(map, p, spec)),
                    max_abs_diff(grad_h, oracle::mean_curvature_gradient(map, p, spec)));
}

}  // namespace

CrossValidation cross_validate(const Scenario& scenario, const std::vector<std::string>& quantities,
                               const std::vector<std::vector<double>>& points, double tol, const FDSpec& spec)
{
    const auto& known = cross_validation_quantities();
    CrossValidation out;
    out.tolerance = tol;
    for (const std::string& q : quantities) {
        if (std::find(known.begin(), known.end(), q) == known.end())
            throw Error(ErrorKind::UnknownName, "unknown cross-validation quantity '" + q + "'");
        if (q == "H" && !scenario.is_hypersurface()) continue;
        CrossValidation::Entry e;
        try {
            for (const auto& p : points) e.max_deviation = std::max(e.max_deviation, deviation(scenario, q, p, spec));
            e.pass = e.max_deviation <= tol;
        } catch (const Error& err) {
            e.pass = false;
            e.error = err.what();
        }
        out.quantities[q] = e;
    }
    return out;
}

}  // namespace fbiharm
