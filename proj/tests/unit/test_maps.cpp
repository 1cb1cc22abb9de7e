#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fbiharm/error.hpp"
#include "fbiharm/maps/map.hpp"
#include "fbiharm/scenarios/scenario.hpp"
#include "support.hpp"

using namespace fbiharm;
using fbiharm::testutil::max_abs;

namespace {

SmoothMapDef identity_map(std::size_t n)
{
    std::vector<Expr> comps;
    for (std::size_t i = 1; i <= n; ++i) comps.push_back(x(i));
    return {charts::euclidean(n), charts::euclidean(n), comps, true};
}

Eigen::VectorXd inversion_tension(const std::vector<double>& p)
{
    const Eigen::Map<const Eigen::VectorXd> v(p.data(), static_cast<Eigen::Index>(p.size()));
    return -4.0 * v / std::pow(v.squaredNorm(), 2);
}

ScalarFieldDef field(const Expr& e) { return {e, true}; }

ErrorKind kind_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::Io;
}

}  // namespace

TEST(TensionField, IdentityIsHarmonic)
{
    const std::vector<double> p{0.3, -1.2, 2.0};
    EXPECT_EQ(max_abs(tension_field(identity_map(3), p)), 0.0);
    EXPECT_EQ(max_abs(bitension_field(identity_map(3), p)), 0.0);
}

TEST(TensionField, InversionHasClosedFormTension)
{
    const Scenario s = build_scenario("inversion");
    for (const auto& p : sample_points(s, 20, 3)) EXPECT_LE(max_abs(tension_field(s.map, p) - inversion_tension(p)), 1e-12);
}

TEST(TensionField, CylinderTensionHasNormOneOverR)
{
    for (double r : {1.0, 2.0}) {
        const Scenario s = build_scenario("cylinder", {{"m", 3}, {"R", r}});
        for (const auto& p : sample_points(s, 10, 1)) {
            const MapJetBundle b = map_jet_bundle(s.map, p, 2);
            EXPECT_NEAR(b.target_norm(tension_field(s.map, p)), 1.0 / r, 1e-13);
        }
    }
}

TEST(PullbackConnection, TrivialCases)
{
    const Scenario s = build_scenario("inversion");
    const std::vector<double> p{0.7, 0.5, 0.9, 0.6};
    const MapJetBundle b = map_jet_bundle(s.map, p);
    const std::vector<Jet> constant(4, Jet::constant(1.5, 4, 3));
    EXPECT_EQ(max_abs(pullback_connection_apply(b, Eigen::Vector4d(1, -2, 0.5, 3), constant)), 0.0);
    EXPECT_EQ(max_abs(pullback_connection_apply(b, Eigen::Vector4d::Zero(), tension_jets(b))), 0.0);
}

TEST(PullbackConnection, InversionTensionAlongE1)
{
    const Scenario s = build_scenario("inversion");
    const std::vector<double> p{1.0, 0.0, 0.0, 0.0};
    const MapJetBundle b = map_jet_bundle(s.map, p);
    const Eigen::VectorXd got = pullback_connection_apply(b, Eigen::Vector4d(1, 0, 0, 0), tension_jets(b));
    // d_1 (-4 x_a |x|^-4) at e_1: -4 (delta_a1 - 4 delta_a1) = 12 delta_a1
    EXPECT_LE(max_abs(got - Eigen::Vector4d(12, 0, 0, 0)), 1e-12);
}

TEST(Bitension, ZeroForKnownBiharmonicMaps)
{
    for (const char* name : {"inversion", "small_hypersphere", "great_hypersphere", "clifford_torus"}) {
        const Scenario s = build_scenario(name);
        for (const auto& p : sample_points(s, 10, 2)) EXPECT_LE(max_abs(bitension_field(s.map, p)), 1e-10) << name;
    }
    const Scenario s3 = build_scenario("small_hypersphere", {{"m", 3}});
    for (const auto& p : sample_points(s3, 5, 2)) EXPECT_LE(max_abs(bitension_field(s3.map, p)), 1e-10);
}

TEST(Bitension, CylinderIsNotBiharmonic)
{
    const Scenario s = build_scenario("cylinder");
    for (const auto& p : sample_points(s, 5, 2)) EXPECT_GE(max_abs(bitension_field(s.map, p)), 1e-3);
}

TEST(FBitension, ConstantOneIsBitwiseTheBitension)
{
    for (const char* name : {"cylinder", "inversion", "clifford_torus"}) {
        const Scenario s = build_scenario(name);
        for (const auto& p : sample_points(s, 5, 9)) {
            const MapJetBundle b = map_jet_bundle(s.map, p);
            const Eigen::VectorXd a = f_bitension(b, field(Expr(1.0)));
            const Eigen::VectorXd t = bitension(b);
            for (Eigen::Index i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], t[i]) << name;
        }
    }
}

TEST(FBitension, ConstantFieldScalesLinearly)
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> c(0.1, 10.0);
    for (const char* name : {"cylinder", "inversion", "small_hypersphere", "clifford_torus"}) {
        const Scenario s = build_scenario(name);
        for (const auto& p : sample_points(s, 5, 4)) {
            const double k = c(rng);
            const MapJetBundle b = map_jet_bundle(s.map, p);
            const Eigen::VectorXd t2 = bitension(b);
            EXPECT_LE(max_abs(f_bitension(b, field(Expr(k))) - k * t2), 1e-12 * std::max(1.0, k * max_abs(t2)))
                << name;
        }
    }
}

TEST(FBitension, InversionWithFourthPowerOfRadius)
{
    const Scenario s = build_scenario("inversion");
    ASSERT_TRUE(s.f);
    for (const auto& p : sample_points(s, 20, 5)) EXPECT_LE(max_abs(f_bitension_field(s.map, *s.f, p)), 1e-10);
}

TEST(FBitension, HarmonicMapsAreFBiharmonicForEveryF)
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1, 1);
    for (const char* name : {"great_hypersphere", "clifford_torus"}) {
        const Scenario s = build_scenario(name);
        for (int k = 0; k < 5; ++k) {
            const Expr fe = 2.0 + u(rng) * sin(u(rng) * x(1) + u(rng) * x(2)) + 0.5 * u(rng) * cos(x(1) * x(2));
            for (const auto& p : sample_points(s, 8, 7)) {
                EXPECT_LE(max_abs(tension_field(s.map, p)), 1e-12);
                EXPECT_LE(max_abs(f_bitension_field(s.map, field(fe), p)), 1e-9) << name << " f=" << fe.to_string();
            }
        }
    }
}

TEST(FBitension, Errors)
{
    const Scenario s = build_scenario("inversion");
    const std::vector<double> p{0.7, 0.5, 0.9, 0.6};
    EXPECT_EQ(kind_of([&] { (void)f_bitension_field(s.map, field(x(1) - 1.0), p); }), ErrorKind::PositivityViolation);

    const SmoothMapDef into_half_plane{charts::euclidean(2), charts::hyperbolic(2), {x(1), x(2)}};
    const std::vector<double> below{0.1, -0.5};
    EXPECT_EQ(kind_of([&] { (void)map_jet_bundle(into_half_plane, below); }), ErrorKind::TargetDomainEscape);

    const SmoothMapDef collapsed{charts::euclidean(2), charts::euclidean(3), {x(1), x(1), 0.0 * x(2)}, true};
    EXPECT_EQ(kind_of([&] { (void)map_jet_bundle(collapsed, std::vector<double>{0.7, 0.5}); }), ErrorKind::ImmersionDegenerate);
}

TEST(ConformalRescale, ConstantOneKeepsTheChart)
{
    const MetricChart s = charts::sphere(3);
    const MetricChart r = conformal_rescale(s, field(Expr(1.0)));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_TRUE(structurally_equal(r.metric(i, j), s.metric(i, j)));
}

TEST(ConformalRescale, FlatPlaneToRoundSphere)
{
    const Expr r2 = pow(x(1), 2.0) + pow(x(2), 2.0);
    const MetricChart r = conformal_rescale(charts::euclidean(2), field(4.0 / pow(1.0 + r2, 2.0)));
    const MetricChart s = charts::sphere(2);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) {
        const auto p = testutil::uniform_point(rng, 2, -2, 2);
        EXPECT_LE(max_abs(metric_at(r, p).metric - metric_at(s, p).metric), 1e-14);
        EXPECT_LE(max_abs(curvature_pack(r, p).ricci - curvature_pack(s, p).ricci), 1e-10);
    }
}

// phi is f-biharmonic on (M^2, g) exactly when it is biharmonic on (M^2, g / f).
TEST(ConformalRescale, SurfaceFBiharmonicityBecomesBiharmonicity)
{
    const Scenario s = build_scenario("cylinder", {{"m", 2}});
    ASSERT_TRUE(s.f);
    const Expr bent = s.f->expr * (1.0 + 0.1 * sin(x(1)));
    for (const bool solution : {true, false}) {
        const Expr fe = solution ? s.f->expr : bent;
        const SmoothMapDef rescaled = with_source(s.map, conformal_rescale(s.map.source, field(1.0 / fe)));
        for (const auto& p : sample_points(s, 10, 3)) {
            const double fb = max_abs(f_bitension_field(s.map, field(fe), p));
            const double b = max_abs(bitension_field(rescaled, p));
            if (solution) {
                EXPECT_LE(fb, 1e-10);
                EXPECT_LE(b, 1e-10);
            } else {
                EXPECT_GE(std::max(fb, b), 1e-6);
                EXPECT_EQ(fb <= 1e-8, b <= 1e-8);
            }
        }
    }
}

TEST(ConformalRescale, SolutionsTransportUnderConformalChange)
{
    const Scenario s = build_scenario("cylinder", {{"m", 2}});
    const Expr r2 = pow(x(1), 2.0) + pow(x(2), 2.0);
    for (const Expr& l2 : {4.0 / pow(1.0 + r2, 2.0), exp(x(1))}) {
        const SmoothMapDef m = with_source(s.map, conformal_rescale(s.map.source, field(l2)));
        for (const auto& p : sample_points(s, 10, 8))
            EXPECT_LE(max_abs(f_bitension_field(m, field(s.f->expr * l2), p)), 1e-9) << l2.to_string();
    }
}

TEST(MapJetBundle, DeterministicAndConsistent)
{
    const Scenario s = build_scenario("clifford_torus");
    const std::vector<double> p{1.0, 2.0};
    const MapJetBundle a = map_jet_bundle(s.map, p), b = map_jet_bundle(s.map, p);
    EXPECT_EQ(a.image, b.image);
    EXPECT_EQ(a.order, 4u);
    EXPECT_EQ(a.dphi(0, 0).order(), 3u);
    EXPECT_EQ(max_abs(bitension(a) - bitension(b)), 0.0);
    // |d phi|^2 of an isometric immersion is m
    EXPECT_NEAR(a.energy_density(), 2.0, 1e-13);
}
