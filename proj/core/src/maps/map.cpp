#include "fbiharm/maps/map.hpp"

#include <cmath>

#include "fbiharm/error.hpp"

namespace fbiharm {

namespace {

std::string point_text(std::span<const double> p)
{
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + format_number(p[i]);
    return s + ")";
}

}  // namespace

Eigen::MatrixXd MapJetBundle::differential_value() const
{
    Eigen::MatrixXd d(n, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t a = 0; a < n; ++a) d(a, i) = dphi(i, a).value();
    return d;
}

double MapJetBundle::target_norm(const Eigen::VectorXd& v) const
{
    return std::sqrt(std::max(0.0, v.dot(target_metric_value * v)));
}

double MapJetBundle::energy_density() const
{
    const Eigen::MatrixXd d = differential_value();
    return (source_inverse * (d.transpose() * target_metric_value * d)).trace();
}

MapJetBundle map_jet_bundle(const SmoothMapDef& map, std::span<const double> p, std::size_t order)
{
    const std::size_t m = map.source_dim();
    const std::size_t n = map.target_dim();
    if (map.components.size() != n)
        throw Error(ErrorKind::Dimension, "map has " + std::to_string(map.components.size()) +
                                              " components but the target has dimension " + std::to_string(n));
    if (order < 2) throw Error(ErrorKind::InvalidArgument, "jet order must be at least 2 (curvature needs second derivatives of the metric)");
    map.source.validate_point(p);

    MapJetBundle b;
    b.point.assign(p.begin(), p.end());
    b.order = order;
    b.m = m;
    b.n = n;
    b.coordinates = seed_jets(p, order);
    b.source = connection_jets(metric_jets(map.source, b.coordinates), m, p);
    b.source_inverse = values(b.source.inverse, m);
    b.source_gamma = values(b.source.christoffel);

    b.phi.reserve(n);
    for (const Expr& c : map.components) b.phi.push_back(eval_expression(c, b.coordinates));
    for (const Jet& j : b.phi) b.image.push_back(j.value());
    if (!map.target.domain().contains(b.image))
        throw Error(ErrorKind::TargetDomainEscape, "phi" + point_text(p) + " = " + point_text(b.image) +
                                                       " lies outside target chart '" + map.target.name() + "'");
    map.target.validate_point(b.image);

    b.differential.reserve(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t a = 0; a < n; ++a) b.differential.push_back(b.phi[a].derivative(i));

    // target geometry: expand in target coordinates around phi(p), then compose with phi
    const auto y = seed_jets(b.image, order);
    const ConnectionJets target = connection_jets(metric_jets(map.target, y), n, b.image);
    b.target_metric_value = values(target.metric, n);
    b.target_riemann = riemann_values(target.christoffel);
    b.target_ricci = ricci_from_riemann(b.target_riemann);

    b.target_metric.resize(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = a; c < n; ++c)
            b.target_metric[a * n + c] = b.target_metric[c * n + a] = eval_expression(map.target.metric(a, c), b.phi);

    if (map.immersion) {
        const Eigen::MatrixXd d = b.differential_value();
        const double gram = (d.transpose() * b.target_metric_value * d).determinant();
        if (!(gram > 1e-12))
            throw Error(ErrorKind::ImmersionDegenerate, "differential is rank deficient at " + point_text(p) +
                                                            " (Gram determinant " + format_number(gram) + ")");
    }

    const JetComposer compose(b.phi, order - 1);
    b.target_gamma = Tensor3<Jet>(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t d = c; d < n; ++d)
                b.target_gamma(a, c, d) = b.target_gamma(a, d, c) = compose.apply(target.christoffel(a, c, d));

    b.connection.resize(m * n * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t c = 0; c < n; ++c) {
                Jet sum = b.target_gamma(a, 0, c) * b.dphi(i, 0);
                for (std::size_t e = 1; e < n; ++e) sum += b.target_gamma(a, e, c) * b.dphi(i, e);
                b.connection[(i * n + a) * n + c] = std::move(sum);
            }
    return b;
}

std::vector<Jet> tension_jets(const MapJetBundle& b)
{
    const std::size_t m = b.m;
    const std::size_t n = b.n;
    if (b.order < 2) throw Error(ErrorKind::OrderExceeded, "tension field needs jet order >= 2");
    const auto& gamma = b.source.christoffel;
    std::vector<Jet> tau;
    tau.reserve(n);
    for (std::size_t a = 0; a < n; ++a) {
        Jet sum;
        bool first = true;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j) {
                // second fundamental form of the map, (nabla d phi)(d_i, d_j)^a
                Jet hess = b.dphi(j, a).derivative(i);
                for (std::size_t k = 0; k < m; ++k) hess -= gamma(k, i, j) * b.dphi(k, a);
                for (std::size_t c = 0; c < n; ++c) hess += b.conn(i, a, c) * b.dphi(j, c);
                Jet term = (i == j ? 1.0 : 2.0) * (b.source.ginv(i, j) * hess);
                if (first) {
                    sum = std::move(term);
                    first = false;
                } else {
                    sum += term;
                }
            }
        tau.push_back(std::move(sum));
    }
    return tau;
}

std::vector<Jet> pullback_covariant_derivative(const MapJetBundle& b, std::span<const Jet> sigma)
{
    if (sigma.size() != b.n) throw Error(ErrorKind::Dimension, "vector field along phi has wrong dimension");
    std::vector<Jet> out;
    out.reserve(b.m * b.n);
    for (std::size_t i = 0; i < b.m; ++i)
        for (std::size_t a = 0; a < b.n; ++a) {
            Jet v = sigma[a].derivative(i);
            for (std::size_t c = 0; c < b.n; ++c) v += b.conn(i, a, c) * sigma[c];
            out.push_back(std::move(v));
        }
    return out;
}

Eigen::VectorXd pullback_connection_apply(const MapJetBundle& b, const Eigen::VectorXd& direction,
                                          std::span<const Jet> sigma)
{
    if (static_cast<std::size_t>(direction.size()) != b.m)
        throw Error(ErrorKind::Dimension, "direction has wrong dimension");
    if (sigma.size() != b.n) throw Error(ErrorKind::Dimension, "vector field along phi has wrong dimension");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(b.n);
    for (std::size_t i = 0; i < b.m; ++i) {
        if (direction[i] == 0.0) continue;
        for (std::size_t a = 0; a < b.n; ++a) {
            double v = sigma[a].partial(i);
            for (std::size_t c = 0; c < b.n; ++c) v += b.conn(i, a, c).value() * sigma[c].value();
            out[a] += direction[i] * v;
        }
    }
    return out;
}

namespace {

struct BitensionParts {
    std::vector<Jet> tau;
    std::vector<Jet> nabla_tau;  // (i, a) at i*n + a
    Eigen::VectorXd tau2;
};

BitensionParts bitension_parts(const MapJetBundle& b)
{
    if (b.order < 4) throw Error(ErrorKind::OrderExceeded, "bitension field needs jet order >= 4");
    const std::size_t m = b.m;
    const std::size_t n = b.n;
    BitensionParts parts;
    parts.tau = tension_jets(b);
    parts.nabla_tau = pullback_covariant_derivative(b, parts.tau);

    Eigen::VectorXd tau0(n);
    for (std::size_t a = 0; a < n; ++a) tau0[a] = parts.tau[a].value();

    // rough Laplacian g^ij (nabla_i nabla_j - nabla_{nabla_i d_j}) tau, evaluated at p
    Eigen::VectorXd rough = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double gij = b.source_inverse(i, j);
            if (gij == 0.0) continue;
            for (std::size_t a = 0; a < n; ++a) {
                double v = parts.nabla_tau[j * n + a].partial(i);
                for (std::size_t c = 0; c < n; ++c) v += b.conn(i, a, c).value() * parts.nabla_tau[j * n + c].value();
                for (std::size_t k = 0; k < m; ++k) v -= b.source_gamma(k, i, j) * parts.nabla_tau[k * n + a].value();
                rough[a] += gij * v;
            }
        }

    // g^ij R^N(d phi(d_i), tau) d phi(d_j), with R(X,Y)Z^l = R^l_abc X^a Y^b Z^c
    const Eigen::MatrixXd d = b.differential_value();
    Eigen::VectorXd curvature = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double gij = b.source_inverse(i, j);
            if (gij == 0.0) continue;
            for (std::size_t l = 0; l < n; ++l) {
                double v = 0.0;
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t bb = 0; bb < n; ++bb)
                        for (std::size_t c = 0; c < n; ++c)
                            v += b.target_riemann(l, a, bb, c) * d(a, i) * tau0[bb] * d(c, j);
                curvature[l] += gij * v;
            }
        }
    parts.tau2 = rough - curvature;
    return parts;
}

}  // namespace

Eigen::VectorXd bitension(const MapJetBundle& b) { return bitension_parts(b).tau2; }

Eigen::VectorXd f_bitension(const MapJetBundle& b, const ScalarFieldDef& f)
{
    const Jet fj = eval_expression(f.expr, b.coordinates);
    if (!(fj.value() > 0.0))
        throw Error(ErrorKind::PositivityViolation, "f = " + format_number(fj.value()) + " is not positive at " +
                                                        point_text(b.point));
    const BitensionParts parts = bitension_parts(b);
    const double lap_f = laplacian(b.source_inverse, b.source_gamma, fj);
    const Eigen::VectorXd grad_f = gradient(b.source_inverse, fj);

    Eigen::VectorXd nabla_grad_f_tau = Eigen::VectorXd::Zero(b.n);
    for (std::size_t i = 0; i < b.m; ++i)
        for (std::size_t a = 0; a < b.n; ++a) nabla_grad_f_tau[a] += grad_f[i] * parts.nabla_tau[i * b.n + a].value();

    Eigen::VectorXd tau0(b.n);
    for (std::size_t a = 0; a < b.n; ++a) tau0[a] = parts.tau[a].value();
    return fj.value() * parts.tau2 + lap_f * tau0 + 2.0 * nabla_grad_f_tau;
}

Eigen::VectorXd tension_field(const SmoothMapDef& map, std::span<const double> p, std::size_t order)
{
    const MapJetBundle b = map_jet_bundle(map, p, order);
    const std::vector<Jet> tau = tension_jets(b);
    Eigen::VectorXd v(b.n);
    for (std::size_t a = 0; a < b.n; ++a) v[a] = tau[a].value();
    return v;
}

Eigen::VectorXd bitension_field(const SmoothMapDef& map, std::span<const double> p, std::size_t order)
{
    return bitension(map_jet_bundle(map, p, order));
}

Eigen::VectorXd f_bitension_field(const SmoothMapDef& map, const ScalarFieldDef& f, std::span<const double> p,
                                  std::size_t order)
{
    return f_bitension(map_jet_bundle(map, p, order), f);
}

MetricChart conformal_rescale(const MetricChart& chart, const ScalarFieldDef& lambda2)
{
    const std::size_t n = chart.dim();
    if (lambda2.expr.is_constant()) {
        const double c = lambda2.expr.constant_value();
        if (!(c > 0.0))
            throw Error(ErrorKind::PositivityViolation, "conformal factor " + format_number(c) + " is not positive");
        if (c == 1.0) return chart;
    }
    std::vector<std::vector<Expr>> g(n, std::vector<Expr>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const Expr& gij = chart.metric(i, j);
            // zero entries stay literal zeros so sparsity survives the rescale
            const bool zero = gij.is_constant() && gij.constant_value() == 0.0;
            g[i][j] = g[j][i] = zero ? gij : lambda2.expr * gij;
        }
    std::vector<Expr> guards = chart.positivity_guards();
    if (!lambda2.expr.is_constant()) guards.push_back(lambda2.expr);
    return MetricChart("(" + lambda2.expr.to_string() + ")*" + chart.name(), chart.domain(), std::move(g),
                       std::move(guards));
}

SmoothMapDef with_source(const SmoothMapDef& map, MetricChart source)
{
    return SmoothMapDef{std::move(source), map.target, map.components, map.immersion};
}

}  // namespace fbiharm
