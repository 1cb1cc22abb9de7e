#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <yaml-cpp/yaml.h>

#include "fbiharm/cli/config.hpp"
#include "fbiharm/cli/report.hpp"
#include "fbiharm/error.hpp"

using namespace fbiharm;

namespace {

std::string parse_error(const std::string& text)
{
    try {
        (void)parse_config(text);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        return e.what();
    }
    ADD_FAILURE() << "accepted:\n" << text;
    return {};
}

}  // namespace

TEST(ParseConfig, MinimalConfigGetsDefaults)
{
    const RunConfig c = parse_config("{scenario: cylinder, params: {m: 3, R: 1}, checks: [fbh2]}");
    EXPECT_EQ(c.scenario, "cylinder");
    EXPECT_EQ(c.params.at("m"), 3.0);
    EXPECT_EQ(c.params.at("R"), 1.0);
    EXPECT_EQ(c.checks, std::vector<std::string>{"fbh2"});
    EXPECT_EQ(c.jet_order, 4u);
    EXPECT_EQ(c.samples, 50u);
    EXPECT_EQ(c.seed, 42u);
    EXPECT_EQ(c.tolerance, 1e-7);
    EXPECT_EQ(c.nonzero_floor, 1e-3);
    EXPECT_FALSE(c.f);
    EXPECT_FALSE(c.output);
}

TEST(ParseConfig, UnknownCheckIsNamed)
{
    const std::string msg = parse_error("scenario: cylinder\nchecks: [fbh2, fbh9]\n");
    EXPECT_NE(msg.find("fbh9"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(ParseConfig, ErrorsNameTheKey)
{
    EXPECT_NE(parse_error("scenario: torus\n").find("torus"), std::string::npos);
    EXPECT_NE(parse_error("scenario: cylinder\nsampels: {count: 3}\n").find("sampels"), std::string::npos);
    EXPECT_NE(parse_error("scenario: cylinder\nsamples: {count: -3}\n").find("samples.count"), std::string::npos);
    EXPECT_NE(parse_error("scenario: cylinder\nf: \"exp(x2\"\n").find("'f'"), std::string::npos);
    EXPECT_NE(parse_error("scenario: cylinder\nchecks: [fbh2, fbh2]\n").find("duplicate"), std::string::npos);
    EXPECT_NE(parse_error("scenario: inversion\nf: {C1: 1, C2: 0}\n").find("cylinder"), std::string::npos);
    EXPECT_NE(parse_error("scenario: cylinder\nexpect: {fbh2: maybe}\n").find("expect.fbh2"), std::string::npos);
    EXPECT_NE(parse_error("checks: [fbh2]\n").find("scenario"), std::string::npos);
    EXPECT_NE(parse_error("scenario: [").find("line"), std::string::npos);
    EXPECT_NE(parse_error("scenario: cylinder\njet_order: 1\n").find("jet_order"), std::string::npos);
}

TEST(ParseConfig, ExpressionOverrideIsUsed)
{
    const RunConfig c = parse_config("scenario: cylinder\nparams: {m: 3, R: 1}\nf: \"exp(x2/1)\"\nchecks: [fbh2]\n");
    ASSERT_TRUE(c.f);
    const Scenario s = resolve_scenario(c);
    ASSERT_TRUE(s.f);
    const std::vector<double> p{1.0, 0.5, -0.2};
    EXPECT_DOUBLE_EQ(s.f->expr.evaluate(p), std::exp(0.5));
}

TEST(ParseConfig, CylinderFamilyConstants)
{
    const RunConfig c = parse_config("scenario: cylinder\nparams: {m: 2, R: 2}\nf: {C1: 0.5, C2: 2}\n");
    EXPECT_EQ(c.params.at("C1"), 0.5);
    EXPECT_EQ(c.params.at("C2"), 2.0);
    const Scenario s = resolve_scenario(c);
    const std::vector<double> p{1.0, 0.4};
    EXPECT_NEAR(s.f->expr.evaluate(p), 0.5 * std::exp(0.2) + 2.0 * std::exp(-0.2), 1e-15);
}

TEST(RunChecks, CylinderSolutionPasses)
{
    RunConfig c = parse_config("scenario: cylinder\nparams: {m: 3, R: 1}\nf: \"exp(x2)\"\nchecks: [fbh2]\n");
    const Report r = run_checks(c);
    ASSERT_EQ(r.checks.size(), 1u);
    EXPECT_TRUE(r.pass());
    EXPECT_LE(r.checks[0].max_residual, 1e-8);
    EXPECT_EQ(r.checks[0].points, 50u);
    EXPECT_EQ(r.checks[0].worst_point.size(), 3u);
}

TEST(RunChecks, CylinderIsNotBiharmonic)
{
    const Report r = run_checks(parse_config("scenario: cylinder\nparams: {m: 3, R: 1}\nchecks: [bhs]\n"));
    const CheckResult* bhs = r.find("bhs");
    ASSERT_NE(bhs, nullptr);
    EXPECT_NEAR(bhs->max_residual, 1.0 / 3.0, 1e-8);
    EXPECT_TRUE(bhs->pass);
    EXPECT_EQ(bhs->expectation.rfind("value", 0), 0u);

    // the same run asserting biharmonicity fails
    const Report z = run_checks(parse_config("scenario: cylinder\nchecks: [bhs]\nexpect: {bhs: zero}\n"));
    EXPECT_FALSE(z.pass());
}

TEST(RunChecks, InversionMap)
{
    const Report r = run_checks(parse_config("scenario: inversion\nchecks: [bitension, f_bitension]\n"));
    EXPECT_TRUE(r.pass());
    for (const CheckResult& c : r.checks) EXPECT_LE(c.max_residual, 1e-8) << c.name;
}

TEST(RunChecks, ErrorsStayInTheirCheck)
{
    const Report r =
        run_checks(parse_config("scenario: cylinder\nparams: {m: 3}\nchecks: [conformal_immersion, fbh2]\n"));
    const CheckResult* ci = r.find("conformal_immersion");
    ASSERT_NE(ci, nullptr);
    EXPECT_FALSE(ci->pass);
    EXPECT_NE(ci->error.find("dimension"), std::string::npos) << ci->error;
    EXPECT_TRUE(r.find("fbh2")->pass);
    EXPECT_FALSE(r.pass());
}

TEST(RunChecks, EveryScenarioMeetsItsExpectations)
{
    for (const ScenarioInfo& info : scenario_catalogue()) {
        const Scenario s = build_scenario(info.name);
        RunConfig c;
        c.scenario = info.name;
        c.samples = 20;
        for (const std::string& check : check_names())
            if (s.expectation(check).kind != Expectation::Kind::None) c.checks.push_back(check);
        ASSERT_FALSE(c.checks.empty());
        const Report r = run_checks(c);
        for (const CheckResult& cr : r.checks)
            EXPECT_TRUE(cr.pass) << info.name << "." << cr.name << " expect " << cr.expectation << " max "
                                 << cr.max_residual << " " << cr.error;
    }
}

TEST(Report, EmptyCheckListGivesMetadataOnly)
{
    const Report r = run_checks(parse_config("scenario: cylinder\nchecks: []\n"));
    EXPECT_TRUE(r.checks.empty());
    EXPECT_TRUE(r.pass());
    const YAML::Node doc = YAML::Load(emit_report(r));
    EXPECT_EQ(doc["version"].as<std::string>(), "fbiharm-report/1");
    EXPECT_EQ(doc["engine"]["jet_order"].as<int>(), 4);
    EXPECT_EQ(doc["scenario"]["name"].as<std::string>(), "cylinder");
    EXPECT_EQ(doc["checks"].size(), 0u);
}

TEST(Report, HasTheDocumentedKeys)
{
    const Report r = run_checks(parse_config("scenario: cylinder\nchecks: [fbh2]\nsamples: {count: 5}\n"));
    const YAML::Node doc = YAML::Load(emit_report(r));
    ASSERT_TRUE(doc["checks"]["fbh2"]["max_residual"]);
    EXPECT_EQ(doc["checks"]["fbh2"]["max_residual"].as<double>(), r.checks[0].max_residual);
    for (const char* key : {"expectation", "tolerance", "points", "mean_residual", "max_scaled_residual", "worst_point",
                            "pass", "error"})
        EXPECT_TRUE(doc["checks"]["fbh2"][key]) << key;
    EXPECT_TRUE(doc["pass"].as<bool>());
}

TEST(Report, RoundTrip)
{
    const Report r = run_checks(parse_config(
        "scenario: clifford_torus\nchecks: [tension, fbh2, cross_validate]\nsamples: {count: 7, seed: 3}\n"));
    const std::string text = emit_report(r);
    const Report back = parse_report(text);
    EXPECT_EQ(emit_report(back), text);
    ASSERT_EQ(back.checks.size(), r.checks.size());
    for (std::size_t i = 0; i < r.checks.size(); ++i) {
        EXPECT_EQ(back.checks[i].max_residual, r.checks[i].max_residual);
        EXPECT_EQ(back.checks[i].mean_residual, r.checks[i].mean_residual);
        EXPECT_EQ(back.checks[i].worst_point, r.checks[i].worst_point);
        EXPECT_EQ(back.checks[i].quantities, r.checks[i].quantities);
    }
    EXPECT_EQ(back.params, r.params);
    EXPECT_EQ(back.f, r.f);
    EXPECT_EQ(back.seed, r.seed);
}

TEST(Report, ByteIdenticalAcrossRunsAndWorkerCounts)
{
    const std::string text = "scenario: small_hypersphere\nparams: {m: 3}\n"
                             "checks: [tension, bitension, fbh2, spaceform]\nsamples: {count: 16, seed: 9}\n";
    RunConfig c = parse_config(text);
    c.workers = 1;
    const std::string serial = emit_report(run_checks(c));
    for (unsigned w : {2u, 3u, 8u}) {
        c.workers = w;
        EXPECT_EQ(emit_report(run_checks(c)), serial) << w << " workers";
    }
    c.seed = 10;
    EXPECT_NE(emit_report(run_checks(c)), serial);
}

TEST(Report, WriteAndLoadFiles)
{
    const auto dir = std::filesystem::temp_directory_path() / "fbiharm_cli_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "run.yaml");
        out << "scenario: inversion\nchecks: [tension]\nsamples: {count: 3}\n";
    }
    const RunConfig c = load_config((dir / "run.yaml").string());
    const Report r = run_checks(c);
    write_report(r, (dir / "report.yaml").string());
    std::ifstream in(dir / "report.yaml");
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), emit_report(r));
    std::filesystem::remove_all(dir);

    try {
        (void)load_config("/nonexistent/run.yaml");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Io);
    }
    EXPECT_THROW(write_report(r, "/nonexistent/dir/report.yaml"), Error);
}
