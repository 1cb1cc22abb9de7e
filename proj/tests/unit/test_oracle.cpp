#include <cmath>

#include <gtest/gtest.h>

#include "fbiharm/error.hpp"
#include "fbiharm/hypersurface/frame.hpp"
#include "fbiharm/oracle/oracle.hpp"
#include "support.hpp"

using namespace fbiharm;

TEST(FdPartial, Examples)
{
    const ScalarEvaluator e = [](std::span<const double> p) { return std::exp(p[0]); };
    const std::vector<double> zero{0.0}, one{1.0};
    EXPECT_NEAR(fd_partial(e, zero, MultiIndex{4}), 1.0, 1e-5);
    const ScalarEvaluator cube = [](std::span<const double> p) { return p[0] * p[0] * p[0]; };
    EXPECT_NEAR(fd_partial(cube, one, MultiIndex{2}), 6.0, 1e-8);
    EXPECT_DOUBLE_EQ(fd_partial(cube, one, MultiIndex{0}), 1.0);
}

TEST(FdPartial, InversionComponentsAgreeWithJets)
{
    const Scenario s = build_scenario("inversion");
    for (const auto& p : sample_points(s, 5, 1)) {
        const auto jets = seed_jets(p, 4);
        for (std::size_t a = 0; a < 4; ++a) {
            const Expr& comp = s.map.components[a];
            const Jet j = eval_expression(comp, jets);
            const ScalarEvaluator fn = [&](std::span<const double> q) { return comp.evaluate(q); };
            for (std::size_t i = 0; i < j.layout().size(); ++i) {
                const MultiIndex& alpha = j.layout().monomial(i);
                const double want = extract_partial(j, alpha);
                EXPECT_NEAR(fd_partial(fn, p, alpha), want, 1e-5 * std::max(1.0, std::abs(want))) << alpha.to_string();
            }
        }
    }
}

TEST(FdPartial, Errors)
{
    const ScalarEvaluator e = [](std::span<const double> p) { return p[0]; };
    const std::vector<double> p{0.0};
    EXPECT_THROW(fd_partial(e, p, MultiIndex{5}), Error);
    EXPECT_THROW(fd_partial(e, p, MultiIndex{1, 0}), Error);
    const ScalarEvaluator singular = [](std::span<const double> q) { return log(x(1)).evaluate(q); };
    const std::vector<double> near_zero{1e-4};
    try {
        (void)fd_partial(singular, near_zero, MultiIndex{2});
        FAIL();
    } catch (const Error& err) {
        EXPECT_NE(std::string(err.what()).find("stencil"), std::string::npos) << err.what();
    }
}

TEST(Oracle, EuclideanChristoffelIsExactlyZero)
{
    const std::vector<double> p{0.1, 0.2, 0.3};
    const Tensor3<double> g = oracle::christoffel(charts::euclidean(3), p);
    for (double v : g.data()) EXPECT_EQ(v, 0.0);
    const Scenario s = build_scenario("cylinder");
    const CrossValidation cv = cross_validate(s, {"christoffel"}, sample_points(s, 5, 1));
    EXPECT_EQ(cv.quantities.at("christoffel").max_deviation, 0.0);
}

TEST(Oracle, SphereRicci)
{
    for (std::size_t n : {2u, 3u, 4u}) {
        const MetricChart c = charts::sphere(n);
        for (const auto& p : sample_points(Box::cube(n, -0.8, 0.8), 5, n)) {
            EXPECT_LE(testutil::max_abs(oracle::ricci(c, p) - curvature_pack(c, p).ricci), 1e-5);
            EXPECT_LE(testutil::max_abs_diff(oracle::christoffel(c, p), christoffel(c, p)), 1e-5);
        }
    }
}

TEST(Oracle, CylinderTension)
{
    const Scenario s = build_scenario("cylinder", {{"m", 3}, {"R", 2}});
    for (const auto& p : sample_points(s, 10, 2)) {
        const Eigen::VectorXd t = oracle::tension(s.map, p);
        EXPECT_NEAR(t.norm(), 0.5, 1e-5);
        EXPECT_LE(testutil::max_abs(t - tension_field(s.map, p)), 1e-5);
    }
}

TEST(Oracle, MeanCurvatureField)
{
    // graph of u = 0.3 sin(x1) cos(x2) with its induced metric, so H varies
    const Expr u = 0.3 * sin(x(1)) * cos(x(2));
    const Expr ux = 0.3 * cos(x(1)) * cos(x(2)), uy = -0.3 * sin(x(1)) * sin(x(2));
    const MetricChart graph("graph", Box::unbounded(2), {{1.0 + ux * ux, ux * uy}, {ux * uy, 1.0 + uy * uy}});
    const SmoothMapDef map{graph, charts::euclidean(3), {x(1), x(2), u}, true};
    for (const auto& p : sample_points(Box::cube(2, -1.5, 1.5), 10, 3)) {
        const HypersurfaceFrame fr = frame_at(map, p);
        EXPECT_LE(testutil::max_abs(fr.metric - metric_at(graph, p).metric), 1e-14);
        EXPECT_NEAR(oracle::mean_curvature(map, p), fr.mean_curvature, 1e-5);
        const Eigen::VectorXd grad_h = gradient(fr.inverse, fr.mean_curvature_jet);
        EXPECT_GE(grad_h.norm(), 1e-3);
        EXPECT_LE(testutil::max_abs(oracle::mean_curvature_gradient(map, p) - grad_h), 1e-5);
    }
}

TEST(CrossValidate, AllScenariosAllQuantities)
{
    for (const ScenarioInfo& info : scenario_catalogue()) {
        const Scenario s = build_scenario(info.name);
        const CrossValidation cv = cross_validate(s, cross_validation_quantities(), sample_points(s, 10, 4));
        EXPECT_TRUE(cv.pass()) << info.name;
        for (const auto& [q, entry] : cv.quantities) {
            EXPECT_TRUE(entry.error.empty()) << info.name << " " << q << ": " << entry.error;
            EXPECT_LE(entry.max_deviation, 1e-5) << info.name << " " << q;
        }
        EXPECT_EQ(cv.quantities.count("H"), s.is_hypersurface() ? 1u : 0u) << info.name;
    }
}

TEST(CrossValidate, UnknownQuantity)
{
    const Scenario s = build_scenario("cylinder");
    EXPECT_THROW(cross_validate(s, {"torsion"}, sample_points(s, 2, 1)), Error);
}
