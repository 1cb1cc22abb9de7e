#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fbiharm/error.hpp"
#include "fbiharm/geometry/chart.hpp"
#include "support.hpp"

using namespace fbiharm;
using fbiharm::testutil::max_abs;

namespace {

struct NamedChart {
    MetricChart chart;
    double lo, hi;
};

std::vector<NamedChart> builtin_charts()
{
    return {
        {charts::euclidean(3), -2, 2},
        {charts::sphere(2), -1.5, 1.5},
        {charts::sphere(3, 2.0), -1.5, 1.5},
        {charts::sphere(4, 0.7), -0.8, 0.8},
        {charts::hyperbolic(2), 0.5, 2},
        {charts::hyperbolic(4), 0.5, 2},
        {charts::conformally_flat("warped", 2, 2.0 + sin(x(1)) * cos(x(2))), -2, 2},
    };
}

}  // namespace

TEST(MetricAt, Examples)
{
    const std::vector<double> p{0.3, -1.0, 7.0};
    const MetricValue e = metric_at(charts::euclidean(3), p);
    EXPECT_EQ(max_abs(e.metric - Eigen::Matrix3d::Identity()), 0.0);
    EXPECT_EQ(max_abs(e.inverse - Eigen::Matrix3d::Identity()), 0.0);
    EXPECT_EQ(e.determinant, 1.0);

    const std::vector<double> q{0.0, 2.0};
    const MetricValue h = metric_at(charts::hyperbolic(2), q);
    EXPECT_NEAR(max_abs(h.metric - 0.25 * Eigen::Matrix2d::Identity()), 0.0, 1e-15);
    EXPECT_NEAR(max_abs(h.inverse - 4.0 * Eigen::Matrix2d::Identity()), 0.0, 1e-14);
    EXPECT_NEAR(h.determinant, 1.0 / 16.0, 1e-15);

    const std::vector<double> o{0.0, 0.0, 0.0};
    const MetricValue s = metric_at(charts::sphere(3), o);
    EXPECT_NEAR(max_abs(s.metric - 4.0 * Eigen::Matrix3d::Identity()), 0.0, 1e-15);
}

TEST(MetricAt, DegenerateAndOutsideDomain)
{
    const MetricChart flat_degenerate("degenerate", Box::unbounded(2), {{1.0, 1.0}, {1.0, 1.0}});
    const std::vector<double> p{0.1, 0.2};
    try {
        (void)metric_at(flat_degenerate, p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateMetric);
    }
    const std::vector<double> below{0.0, -1.0};
    EXPECT_THROW((void)metric_at(charts::hyperbolic(2), below), Error);
}

TEST(MetricChart, RejectsAsymmetricMetric)
{
    EXPECT_THROW(MetricChart("bad", Box::unbounded(2), {{1.0, x(1)}, {0.0, 1.0}}), Error);
}

TEST(Christoffel, Examples)
{
    const std::vector<double> p{0.4, 1.3, -0.2};
    const Tensor3<double> e = christoffel(charts::euclidean(3), p);
    for (double v : e.data()) EXPECT_EQ(v, 0.0);

    const double y = 1.7;
    const std::vector<double> q{0.3, y};
    const Tensor3<double> h = christoffel(charts::hyperbolic(2), q);
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                double want = 0.0;
                if (k == 0 && i + j == 1) want = -1 / y;
                if (k == 1 && i == 0 && j == 0) want = 1 / y;
                if (k == 1 && i == 1 && j == 1) want = -1 / y;
                EXPECT_NEAR(h(k, i, j), want, 1e-14) << k << i << j;
            }

    const std::vector<double> o{0.0, 0.0};
    const Tensor3<double> s = christoffel(charts::sphere(2), o);
    for (double v : s.data()) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(CurvaturePack, EuclideanIsFlat)
{
    const std::vector<double> p{0.5, -0.5, 1.0};
    const CurvaturePack c = curvature_pack(charts::euclidean(3), p);
    for (double v : c.riemann.data()) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(max_abs(c.ricci), 0.0);
    EXPECT_EQ(c.scalar, 0.0);
}

TEST(CurvaturePack, SpaceFormsAreEinstein)
{
    std::mt19937_64 rng(1);
    for (std::size_t n : {2u, 3u, 4u}) {
        for (double r : {1.0, 2.0}) {
            const MetricChart s = charts::sphere(n, r);
            for (int t = 0; t < 5; ++t) {
                const auto p = testutil::uniform_point(rng, n, -1, 1);
                const CurvaturePack c = curvature_pack(s, p);
                const Eigen::MatrixXd g = metric_at(s, p).metric;
                EXPECT_LE(max_abs(c.ricci - (n - 1.0) / (r * r) * g), 1e-8);
                EXPECT_NEAR(c.scalar, n * (n - 1.0) / (r * r), 1e-8);
            }
        }
        const MetricChart h = charts::hyperbolic(n);
        for (int t = 0; t < 5; ++t) {
            auto p = testutil::uniform_point(rng, n, -1, 1);
            p.back() = 0.5 + std::abs(p.back());
            const CurvaturePack c = curvature_pack(h, p);
            EXPECT_LE(max_abs(c.ricci + (n - 1.0) * metric_at(h, p).metric), 1e-8);
        }
    }
}

TEST(CurvaturePack, SymmetriesAndFirstBianchi)
{
    std::mt19937_64 rng(2);
    for (const NamedChart& nc : builtin_charts()) {
        const std::size_t n = nc.chart.dim();
        for (int t = 0; t < 4; ++t) {
            const auto p = testutil::uniform_point(rng, n, nc.lo, nc.hi);
            const CurvaturePack c = curvature_pack(nc.chart, p);
            for (std::size_t l = 0; l < n; ++l)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) {
                        EXPECT_NEAR(c.christoffel(l, i, j), c.christoffel(l, j, i), 1e-12);
                        for (std::size_t k = 0; k < n; ++k) {
                            EXPECT_NEAR(c.riemann(l, i, j, k), -c.riemann(l, j, i, k), 1e-10) << nc.chart.name();
                            EXPECT_NEAR(c.riemann(l, i, j, k) + c.riemann(l, j, k, i) + c.riemann(l, k, i, j), 0.0, 1e-10)
                                << nc.chart.name();
                        }
                    }
            EXPECT_LE(max_abs(c.ricci - c.ricci.transpose()), 1e-10) << nc.chart.name();
        }
    }
}

// d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il = 0
TEST(CurvaturePack, MetricCompatibility)
{
    std::mt19937_64 rng(4);
    for (const NamedChart& nc : builtin_charts()) {
        const std::size_t n = nc.chart.dim();
        for (int t = 0; t < 4; ++t) {
            const auto p = testutil::uniform_point(rng, n, nc.lo, nc.hi);
            const auto jets = metric_jets(nc.chart, seed_jets(p, 1));
            const Tensor3<double> gamma = christoffel(nc.chart, p);
            const Eigen::MatrixXd g = metric_at(nc.chart, p).metric;
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) {
                        double v = jets[i * n + j].partial(k);
                        for (std::size_t l = 0; l < n; ++l) v -= gamma(l, k, i) * g(l, j) + gamma(l, k, j) * g(i, l);
                        EXPECT_NEAR(v, 0.0, 1e-10) << nc.chart.name();
                    }
        }
    }
}

TEST(GradField, Examples)
{
    const std::vector<double> p{3.0, 0.0};
    const Eigen::VectorXd g1 = grad_field(charts::euclidean(2), pow(x(1), 2.0), p);
    EXPECT_NEAR(g1[0], 6.0, 1e-15);
    EXPECT_NEAR(g1[1], 0.0, 1e-15);

    const std::vector<double> q{0.0, 2.0};
    const Eigen::VectorXd g2 = grad_field(charts::hyperbolic(2), x(2), q);
    EXPECT_NEAR(g2[0], 0.0, 1e-15);
    EXPECT_NEAR(g2[1], 4.0, 1e-14);

    EXPECT_EQ(max_abs(grad_field(charts::sphere(2), Expr(5.0), p)), 0.0);
}

TEST(LaplaceBeltrami, Examples)
{
    std::mt19937_64 rng(6);
    for (int t = 0; t < 10; ++t) {
        const auto p = testutil::uniform_point(rng, 2, -2, 2);
        EXPECT_NEAR(laplace_beltrami(charts::euclidean(2), pow(x(1), 2.0), p), 2.0, 1e-13);
        const double f = std::exp(p[0] / 2.0);
        EXPECT_NEAR(laplace_beltrami(charts::euclidean(2), exp(x(1) / 2.0), p), f / 4.0, 1e-13);
        auto q = p;
        q[1] = 0.3 + std::abs(q[1]);
        EXPECT_NEAR(laplace_beltrami(charts::hyperbolic(2), log(x(2)), q), -1.0, 1e-12);
    }
}

TEST(LaplaceBeltrami, TwoDimensionalConformalCovariance)
{
    std::mt19937_64 rng(7);
    const Expr lambda2 = 1.5 + sin(x(1) * x(2));
    const MetricChart base = charts::hyperbolic(2);
    std::vector<std::vector<Expr>> rows = base.metric_rows();
    for (auto& row : rows)
        for (Expr& e : row) e = lambda2 * e;
    const MetricChart scaled("scaled", base.domain(), rows);
    const Expr u = exp(x(1)) * x(2) + cos(x(2));
    for (int t = 0; t < 10; ++t) {
        auto p = testutil::uniform_point(rng, 2, -1, 1);
        p[1] = 0.5 + std::abs(p[1]);
        const double l2 = lambda2.evaluate(p);
        EXPECT_NEAR(laplace_beltrami(scaled, u, p), laplace_beltrami(base, u, p) / l2, 1e-9);
    }
}
