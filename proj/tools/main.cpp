#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fbiharm/cli/report.hpp"
#include "fbiharm/error.hpp"
#include "fbiharm/hypersurface/residuals.hpp"

using namespace fbiharm;

namespace {

std::string num(double v) { return format_number(v); }

std::string vec(const Eigen::VectorXd& v)
{
    std::string s = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
    return s + "]";
}

void print_matrix(const char* key, const Eigen::MatrixXd& a)
{
    std::printf("%s:\n", key);
    for (Eigen::Index i = 0; i < a.rows(); ++i) std::printf("  - %s\n", vec(a.row(i).transpose()).c_str());
}

int run(const std::string& config_path, const std::string& out, int jet_order, long long seed, bool verbose,
        bool cross)
{
    RunConfig cfg = load_config(config_path);
    if (jet_order > 0) cfg.jet_order = static_cast<std::size_t>(jet_order);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (verbose) cfg.verbose = true;
    if (cross && !std::count(cfg.checks.begin(), cfg.checks.end(), "cross_validate"))
        cfg.checks.push_back("cross_validate");

    const Report rep = run_checks(cfg);
    const std::string path = !out.empty() ? out : cfg.output.value_or("");
    if (path.empty())
        std::cout << emit_report(rep);
    else
        write_report(rep, path);

    if (cfg.verbose || !path.empty()) {
        for (const CheckResult& c : rep.checks)
            std::fprintf(stderr, "%-20s %-4s expect=%-14s max=%-24s scaled=%s%s%s\n", c.name.c_str(),
                         c.pass ? "ok" : "FAIL", c.expectation.c_str(), num(c.max_residual).c_str(),
                         num(c.max_scaled_residual).c_str(), c.error.empty() ? "" : "  error: ", c.error.c_str());
    }
    return rep.pass() ? 0 : 1;
}

int list_scenarios()
{
    for (const ScenarioInfo& info : scenario_catalogue()) {
        std::string params;
        for (const auto& [k, v] : info.defaults) params += (params.empty() ? "" : ", ") + k + "=" + num(v);
        std::printf("%-18s %-28s %s\n", info.name.c_str(), params.empty() ? "-" : params.c_str(),
                    info.description.c_str());
    }
    std::printf("%-18s %-28s %s\n", "custom", "-", "charts, components and f from the config 'custom' block");
    return 0;
}

int geom(const std::string& name, const std::string& point_text, const std::vector<std::string>& param_text)
{
    std::map<std::string, double> params;
    for (const std::string& kv : param_text) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "--param expects key=value, got '" + kv + "'");
        params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    const Scenario s = build_scenario(name, params);
    std::vector<double> p;
    std::stringstream ss(point_text);
    for (std::string item; std::getline(ss, item, ',');) p.push_back(std::stod(item));
    if (p.size() != s.map.source_dim())
        throw Error(ErrorKind::Dimension, "point needs " + std::to_string(s.map.source_dim()) + " coordinates");

    const MapJetBundle b = map_jet_bundle(s.map, p);
    std::printf("scenario: %s\n", s.name.c_str());
    std::printf("point: %s\n", vec(Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()))).c_str());
    std::printf("image: %s\n",
                vec(Eigen::Map<const Eigen::VectorXd>(b.image.data(), static_cast<Eigen::Index>(b.image.size()))).c_str());
    const CurvaturePack src = curvature_pack(s.map.source, p);
    print_matrix("source_metric", metric_at(s.map.source, p).metric);
    print_matrix("source_ricci", src.ricci);
    std::printf("source_scalar_curvature: %s\n", num(src.scalar).c_str());
    print_matrix("target_ricci", b.target_ricci);
    const Eigen::VectorXd tau = tension_field(s.map, p);
    std::printf("tension: %s\n", vec(tau).c_str());
    std::printf("tension_norm: %s\n", num(b.target_norm(tau)).c_str());
    std::printf("bitension: %s\n", vec(bitension(b)).c_str());
    if (s.f) std::printf("f_bitension: %s\n", vec(f_bitension(b, *s.f)).c_str());
    if (s.is_hypersurface()) {
        const HypersurfaceFrame fr = frame_from_bundle(b);
        print_matrix("induced_metric", fr.metric);
        std::printf("normal: %s\n", vec(fr.normal).c_str());
        print_matrix("shape_operator", fr.shape);
        std::printf("mean_curvature: %s\n", num(fr.mean_curvature).c_str());
        std::printf("norm_A2: %s\n", num(fr.norm_A2).c_str());
        std::printf("ricci_normal: %s\n", num(fr.ricci_normal).c_str());
        std::printf("ricci_tangent: %s\n", vec(fr.ricci_tangent).c_str());
        std::printf("ricci_gap: %s\n", num(ricci_gap(fr)).c_str());
        std::printf("pseudo_umbilical_defect: %s\n", num(pseudo_umbilical_defect(fr)).c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"fbiharm: tension, bitension and f-biharmonic residuals of maps between Riemannian charts"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "evaluate the checks of a config file and write a report");
    std::string config_path, out;
    int jet_order = 0;
    long long seed = -1;
    bool verbose = false, cross = false;
    run_cmd->add_option("--config", config_path, "config file (YAML)")->required();
    run_cmd->add_option("--out", out, "report path (default: config 'output' or stdout)");
    run_cmd->add_option("--jet-order", jet_order, "jet order override")->check(CLI::Range(2, 8));
    run_cmd->add_option("--seed", seed, "sample seed override")->check(CLI::NonNegativeNumber);
    run_cmd->add_flag("--verbose", verbose, "print a line per check to stderr");
    run_cmd->add_flag("--cross-validate", cross, "add the finite-difference cross-validation check");

    auto* scen_cmd = app.add_subcommand("scenarios", "list built-in scenarios and their parameters");

    auto* geom_cmd = app.add_subcommand("geom", "dump curvature and hypersurface data at one point");
    std::string name, point;
    std::vector<std::string> params;
    geom_cmd->add_option("--scenario", name, "scenario name")->required();
    geom_cmd->add_option("--point", point, "comma-separated source coordinates")->required();
    geom_cmd->add_option("--param", params, "scenario parameter key=value (repeatable)");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run_cmd) return run(config_path, out, jet_order, seed, verbose, cross);
        if (*scen_cmd) return list_scenarios();
        if (*geom_cmd) return geom(name, point, params);
    } catch (const Error& e) {
        std::fprintf(stderr, "fbiharm: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fbiharm: %s\n", e.what());
        return 2;
    }
    return 0;
}
