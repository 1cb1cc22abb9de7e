#include "fbiharm/hypersurface/frame.hpp"

#include <cmath>
#include <string>

#include "fbiharm/error.hpp"

namespace fbiharm {

namespace {

// Determinant of the k x k submatrix of `cols` (n rows, columns of jets) that
// keeps rows `rows`; Laplace expansion along the first column.
Jet minor_det(const std::vector<std::vector<Jet>>& cols, std::vector<std::size_t>& rows, std::size_t col)
{
    if (rows.size() == 1) return cols[col][rows[0]];
    Jet sum;
    bool first = true;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::size_t row = rows[r];
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(r));
        Jet term = cols[col][row] * minor_det(cols, rows, col + 1);
        rows.insert(rows.begin() + static_cast<std::ptrdiff_t>(r), row);
        if (r % 2 == 1) term = -term;
        if (first) {
            sum = std::move(term);
            first = false;
        } else {
            sum += term;
        }
    }
    return sum;
}

std::string point_text(std::span<const double> p)
{
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + format_number(p[i]);
    return s + ")";
}

}  // namespace

double HypersurfaceFrame::norm(const Eigen::VectorXd& v) const
{
    return std::sqrt(std::max(0.0, v.dot(metric * v)));
}

HypersurfaceFrame frame_from_bundle(const MapJetBundle& b, int orientation)
{
    const std::size_t m = b.m;
    const std::size_t n = b.n;
    if (n != m + 1)
        throw Error(ErrorKind::Dimension, "hypersurface needs target dimension " + std::to_string(m + 1) + ", got " +
                                              std::to_string(n));
    if (orientation != 1 && orientation != -1)
        throw Error(ErrorKind::InvalidArgument, "orientation must be +1 or -1");
    if (b.order < 2) throw Error(ErrorKind::OrderExceeded, "hypersurface frame needs jet order >= 2");

    HypersurfaceFrame fr;
    fr.point = b.point;
    fr.m = m;
    fr.order = b.order;
    fr.orientation = orientation;
    fr.coordinates = b.coordinates;
    fr.differential = b.differential_value();
    fr.target_metric = b.target_metric_value;
    fr.target_ricci = b.target_ricci;
    fr.target_riemann = b.target_riemann;

    // induced metric g_ij = h_ab dphi_i^a dphi_j^b
    std::vector<Jet> g(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            Jet sum;
            bool first = true;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t c = 0; c < n; ++c) {
                    Jet t = b.target_metric[a * n + c] * b.dphi(i, a) * b.dphi(j, c);
                    if (first) {
                        sum = std::move(t);
                        first = false;
                    } else {
                        sum += t;
                    }
                }
            g[i * m + j] = g[j * m + i] = std::move(sum);
        }
    const double gram = values(g, m).determinant();
    if (!(gram > 1e-12))
        throw Error(ErrorKind::ImmersionDegenerate, "differential is rank deficient at " + point_text(b.point) +
                                                        " (Gram determinant " + format_number(gram) + ")");
    const ConnectionJets induced = connection_jets(std::move(g), m, b.point);
    fr.metric = values(induced.metric, m);
    fr.inverse = values(induced.inverse, m);
    fr.christoffel = values(induced.christoffel);

    // normal covector nu_a = det[e_a, dphi_1, ..., dphi_m]
    std::vector<std::vector<Jet>> cols(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t a = 0; a < n; ++a) cols[i].push_back(b.dphi(i, a));
    std::vector<Jet> nu;
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < n; ++r)
            if (r != a) rows.push_back(r);
        Jet c = minor_det(cols, rows, 0);
        if (a % 2 == 1) c = -c;
        if (orientation < 0) c = -c;
        nu.push_back(std::move(c));
    }
    const std::vector<Jet> hinv = invert_spd(b.target_metric, n);
    std::vector<Jet> raised;
    for (std::size_t a = 0; a < n; ++a) {
        Jet s = hinv[a * n] * nu[0];
        for (std::size_t c = 1; c < n; ++c) s += hinv[a * n + c] * nu[c];
        raised.push_back(std::move(s));
    }
    Jet len2 = raised[0] * nu[0];
    for (std::size_t a = 1; a < n; ++a) len2 += raised[a] * nu[a];
    const Jet inv_len = pow(len2, -0.5);
    std::vector<Jet> xi;
    for (std::size_t a = 0; a < n; ++a) xi.push_back(raised[a] * inv_len);
    fr.normal.resize(static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a) fr.normal[a] = xi[a].value();

    // b_ij = -h(nabla_i xi, dphi_j), A^k_i = g^kj b_ji
    const std::vector<Jet> dxi = pullback_covariant_derivative(b, xi);
    std::vector<Jet> second(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Jet sum;
            bool first = true;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t c = 0; c < n; ++c) {
                    Jet t = b.target_metric[a * n + c] * dxi[i * n + a] * b.dphi(j, c);
                    if (first) {
                        sum = std::move(t);
                        first = false;
                    } else {
                        sum += t;
                    }
                }
            second[i * m + j] = -sum;
        }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            Jet s = 0.5 * (second[i * m + j] + second[j * m + i]);
            second[i * m + j] = s;
            second[j * m + i] = std::move(s);
        }
    fr.second_form = values(second, m);

    Jet trace;
    bool first = true;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Jet t = induced.ginv(i, j) * second[j * m + i];
            if (first) {
                trace = std::move(t);
                first = false;
            } else {
                trace += t;
            }
        }
    fr.mean_curvature_jet = trace / static_cast<double>(m);
    fr.mean_curvature = fr.mean_curvature_jet.value();
    fr.shape = fr.inverse * fr.second_form;
    fr.norm_A2 = (fr.shape * fr.shape).trace();

    const Eigen::VectorXd ric_xi = fr.target_ricci * fr.normal;
    fr.ricci_normal = fr.normal.dot(ric_xi);
    fr.ricci_tangent = fr.inverse * (fr.differential.transpose() * ric_xi);
    return fr;
}

HypersurfaceFrame frame_at(const SmoothMapDef& map, std::span<const double> p, std::size_t order, int orientation)
{
    return frame_from_bundle(map_jet_bundle(map, p, order), orientation);
}

void validate_ambient(const HypersurfaceFrame& fr, const AmbientDescriptor& ambient, double tol)
{
    const std::size_t n = static_cast<std::size_t>(fr.target_metric.rows());
    const Eigen::MatrixXd& h = fr.target_metric;
    double dev = 0.0;
    switch (ambient.kind) {
    case AmbientDescriptor::Kind::General: return;
    case AmbientDescriptor::Kind::Einstein:
        dev = (fr.target_ricci - ambient.value * h).cwiseAbs().maxCoeff();
        break;
    case AmbientDescriptor::Kind::SpaceForm:
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k) {
                        const double expect =
                            ambient.value * ((l == i ? h(j, k) : 0.0) - (l == j ? h(i, k) : 0.0));
                        dev = std::max(dev, std::abs(fr.target_riemann(l, i, j, k) - expect));
                    }
        break;
    }
    if (!(dev <= tol))
        throw Error(ErrorKind::DescriptorMismatch,
                    std::string(ambient.kind == AmbientDescriptor::Kind::Einstein ? "Einstein constant "
                                                                                  : "sectional curvature ") +
                        format_number(ambient.value) + " does not match the target at " + point_text(fr.point) +
                        " (deviation " + format_number(dev) + ")");
}

}  // namespace fbiharm
