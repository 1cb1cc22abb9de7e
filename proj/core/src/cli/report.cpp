#include "fbiharm/cli/report.hpp"

#include <algorithm>
#include <exception>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <thread>

#include <yaml-cpp/yaml.h>

#include "fbiharm/error.hpp"
#include "fbiharm/hypersurface/residuals.hpp"
#include "fbiharm/oracle/oracle.hpp"

namespace fbiharm {

bool Report::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* Report::find(std::string_view check) const
{
    for (const CheckResult& c : checks)
        if (c.name == check) return &c;
    return nullptr;
}

namespace {

struct PointValue {
    double raw = std::numeric_limits<double>::quiet_NaN();
    double scale = 1.0;
    std::string error;
    std::map<std::string, double> quantities;
};

const ScalarFieldDef& need_f(const Scenario& s)
{
    if (!s.f) throw Error(ErrorKind::InvalidArgument, "scenario '" + s.name + "' defines no f");
    return *s.f;
}

const ScalarFieldDef& need_lambda2(const Scenario& s)
{
    if (!s.lambda2) throw Error(ErrorKind::InvalidArgument, "scenario '" + s.name + "' defines no lambda2");
    return *s.lambda2;
}

double einstein_constant(const Scenario& s)
{
    switch (s.ambient.kind) {
    case AmbientDescriptor::Kind::Einstein: return s.ambient.value;
    case AmbientDescriptor::Kind::SpaceForm: return static_cast<double>(s.map.target_dim() - 1) * s.ambient.value;
    case AmbientDescriptor::Kind::General: break;
    }
    throw Error(ErrorKind::DescriptorMismatch, "scenario '" + s.name + "' has no Einstein ambient");
}

double space_form_curvature(const Scenario& s)
{
    if (s.ambient.kind != AmbientDescriptor::Kind::SpaceForm)
        throw Error(ErrorKind::DescriptorMismatch, "scenario '" + s.name + "' has no space-form ambient");
    return s.ambient.value;
}

std::vector<PointValue> evaluate_point(const Scenario& s, const RunConfig& cfg, std::span<const double> p)
{
    std::vector<PointValue> out(cfg.checks.size());
    std::optional<MapJetBundle> bundle;
    std::exception_ptr bundle_error;
    try {
        bundle = map_jet_bundle(s.map, p, cfg.jet_order);
    } catch (...) {
        bundle_error = std::current_exception();
    }
    std::optional<HypersurfaceFrame> frame;
    std::optional<double> map_scale;

    auto need_bundle = [&]() -> const MapJetBundle& {
        if (!bundle) std::rethrow_exception(bundle_error);
        return *bundle;
    };
    auto need_frame = [&]() -> const HypersurfaceFrame& {
        if (!frame) frame = frame_from_bundle(need_bundle());
        return *frame;
    };
    auto scale_map = [&]() {
        if (!map_scale) {
            const MapJetBundle& b = need_bundle();
            const std::vector<Jet> tau = tension_jets(b);
            Eigen::VectorXd t(static_cast<Eigen::Index>(b.n));
            for (std::size_t a = 0; a < b.n; ++a) t[a] = tau[a].value();
            map_scale = std::max({1.0, b.target_norm(t), b.energy_density()});
        }
        return *map_scale;
    };
    auto scale_frame = [&]() {
        const HypersurfaceFrame& fr = need_frame();
        return std::max(1.0, std::abs(fr.mean_curvature) * fr.norm_A2);
    };

    for (std::size_t c = 0; c < cfg.checks.size(); ++c) {
        const std::string& check = cfg.checks[c];
        PointValue& v = out[c];
        try {
            if (check == "cross_validate") {
                const CrossValidation cv = cross_validate(s, cross_validation_quantities(), {std::vector<double>(p.begin(), p.end())},
                                                          cfg.tolerance_for(check));
                v.raw = 0.0;
                for (const auto& [q, e] : cv.quantities) {
                    if (!e.error.empty()) throw Error(ErrorKind::InvalidArgument, q + ": " + e.error);
                    v.quantities[q] = e.max_deviation;
                    v.raw = std::max(v.raw, e.max_deviation);
                }
            } else if (check == "tension") {
                const MapJetBundle& b = need_bundle();
                const std::vector<Jet> tau = tension_jets(b);
                Eigen::VectorXd t(static_cast<Eigen::Index>(b.n));
                for (std::size_t a = 0; a < b.n; ++a) t[a] = tau[a].value();
                v.raw = b.target_norm(t);
                v.scale = scale_map();
            } else if (check == "bitension") {
                v.raw = need_bundle().target_norm(bitension(need_bundle()));
                v.scale = scale_map();
            } else if (check == "f_bitension") {
                v.raw = need_bundle().target_norm(f_bitension(need_bundle(), need_f(s)));
                v.scale = scale_map();
            } else {
                const HypersurfaceFrame& fr = need_frame();
                if (check == "fbh2")
                    v.raw = residual_fbh2(fr, need_f(s)).norm();
                else if (check == "fbh")
                    v.raw = residual_fbh_unscaled(fr, need_f(s)).norm();
                else if (check == "einstein")
                    v.raw = residual_einstein(fr, need_f(s), einstein_constant(s)).norm();
                else if (check == "spaceform")
                    v.raw = residual_spaceform(fr, need_f(s), space_form_curvature(s)).norm();
                else if (check == "bhs")
                    v.raw = residual_biharmonic(fr).norm();
                else if (check == "conformal_immersion")
                    v.raw = residual_conformal_immersion(fr, need_lambda2(s)).norm();
                else
                    v.raw = pseudo_umbilical_defect(fr);
                v.scale = scale_frame();
            }
        } catch (const std::exception& e) {
            v.error = e.what();
        }
    }
    return out;
}

std::string point_text(std::span<const double> p)
{
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + format_number(p[i]);
    return s + ")";
}

CheckResult reduce(const std::string& check, const Expectation& expect, double tol, double floor,
                   const std::vector<std::vector<double>>& points, const std::vector<std::vector<PointValue>>& values,
                   std::size_t column)
{
    CheckResult r;
    r.name = check;
    r.expectation = to_string(expect);
    r.tolerance = tol;
    double sum = 0.0;
    std::size_t ok = 0;
    double worst = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const PointValue& v = values[i][column];
        if (!v.error.empty()) {
            if (r.error.empty()) r.error = "at " + point_text(points[i]) + ": " + v.error;
            continue;
        }
        double score = v.raw;
        if (expect.kind == Expectation::Kind::Zero)
            score = v.raw / v.scale;
        else if (expect.kind == Expectation::Kind::Value)
            score = std::abs(v.raw - expect.value) / std::max(1.0, std::abs(expect.value));
        ++ok;
        sum += v.raw;
        r.max_residual = ok == 1 ? v.raw : std::max(r.max_residual, v.raw);
        if (!(score <= worst)) {
            worst = score;
            r.worst_point = points[i];
        }
        for (const auto& [q, d] : v.quantities) r.quantities[q] = std::max(r.quantities[q], d);
    }
    r.points = ok;
    r.mean_residual = ok ? sum / static_cast<double>(ok) : 0.0;
    r.max_scaled_residual = ok ? worst : 0.0;
    if (!r.error.empty() || ok == 0) {
        r.pass = false;
        return r;
    }
    switch (expect.kind) {
    case Expectation::Kind::None: r.pass = true; break;
    case Expectation::Kind::Zero:
    case Expectation::Kind::Value: r.pass = r.max_scaled_residual <= tol; break;
    case Expectation::Kind::Nonzero: r.pass = r.max_residual >= floor; break;
    }
    return r;
}

}  // namespace

Report run_checks(const RunConfig& cfg)
{
    const Scenario s = resolve_scenario(cfg);
    Report rep;
    rep.jet_order = cfg.jet_order;
    rep.samples = cfg.samples;
    rep.seed = cfg.seed;
    rep.tolerance = cfg.tolerance;
    rep.nonzero_floor = cfg.nonzero_floor;
    rep.scenario = s.name;
    rep.params = s.params;
    if (s.f) rep.f = s.f->expr.to_string();
    if (s.lambda2) rep.lambda2 = s.lambda2->expr.to_string();
    if (cfg.checks.empty()) return rep;

    const auto points = sample_points(s, cfg.samples, cfg.seed);
    std::vector<std::vector<PointValue>> values(points.size());
    unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, points.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < points.size();) values[i] = evaluate_point(s, cfg, points[i]);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    for (std::size_t c = 0; c < cfg.checks.size(); ++c) {
        const std::string& check = cfg.checks[c];
        rep.checks.push_back(reduce(check, s.expectation(check), cfg.tolerance_for(check), cfg.nonzero_floor, points,
                                    values, c));
    }
    return rep;
}

std::string emit_report(const Report& r)
{
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "version" << YAML::Value << r.version;
    out << YAML::Key << "engine" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "jet_order" << YAML::Value << r.jet_order;
    out << YAML::Key << "samples" << YAML::Value << r.samples;
    out << YAML::Key << "seed" << YAML::Value << r.seed;
    out << YAML::Key << "tolerance" << YAML::Value << r.tolerance;
    out << YAML::Key << "nonzero_floor" << YAML::Value << r.nonzero_floor;
    out << YAML::EndMap;
    out << YAML::Key << "scenario" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << r.scenario;
    out << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : r.params) out << YAML::Key << k << YAML::Value << v;
    out << YAML::EndMap;
    out << YAML::Key << "f" << YAML::Value << YAML::DoubleQuoted << r.f;
    out << YAML::Key << "lambda2" << YAML::Value << YAML::DoubleQuoted << r.lambda2;
    out << YAML::EndMap;
    out << YAML::Key << "checks" << YAML::Value << YAML::BeginMap;
    for (const CheckResult& c : r.checks) {
        out << YAML::Key << c.name << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "expectation" << YAML::Value << c.expectation;
        out << YAML::Key << "tolerance" << YAML::Value << c.tolerance;
        out << YAML::Key << "points" << YAML::Value << c.points;
        out << YAML::Key << "max_residual" << YAML::Value << c.max_residual;
        out << YAML::Key << "mean_residual" << YAML::Value << c.mean_residual;
        out << YAML::Key << "max_scaled_residual" << YAML::Value << c.max_scaled_residual;
        out << YAML::Key << "worst_point" << YAML::Value << YAML::Flow << c.worst_point;
        out << YAML::Key << "pass" << YAML::Value << c.pass;
        out << YAML::Key << "error" << YAML::Value << YAML::DoubleQuoted << c.error;
        if (!c.quantities.empty()) {
            out << YAML::Key << "quantities" << YAML::Value << YAML::BeginMap;
            for (const auto& [k, v] : c.quantities) out << YAML::Key << k << YAML::Value << v;
            out << YAML::EndMap;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndMap;
    out << YAML::Key << "pass" << YAML::Value << r.pass();
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

void write_report(const Report& report, const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot write report '" + path + "'");
    f << emit_report(report);
    if (!f) throw Error(ErrorKind::Io, "failed writing report '" + path + "'");
}

Report parse_report(std::string_view text)
{
    try {
        const YAML::Node root = YAML::Load(std::string(text));
        Report r;
        r.version = root["version"].as<std::string>();
        if (r.version != report_version) throw Error(ErrorKind::Parse, "unsupported report version '" + r.version + "'");
        const YAML::Node engine = root["engine"];
        r.jet_order = engine["jet_order"].as<std::size_t>();
        r.samples = engine["samples"].as<std::size_t>();
        r.seed = engine["seed"].as<std::uint64_t>();
        r.tolerance = engine["tolerance"].as<double>();
        r.nonzero_floor = engine["nonzero_floor"].as<double>();
        const YAML::Node sc = root["scenario"];
        r.scenario = sc["name"].as<std::string>();
        for (const auto& kv : sc["params"]) r.params[kv.first.as<std::string>()] = kv.second.as<double>();
        r.f = sc["f"].as<std::string>();
        r.lambda2 = sc["lambda2"].as<std::string>();
        for (const auto& kv : root["checks"]) {
            const YAML::Node& n = kv.second;
            CheckResult c;
            c.name = kv.first.as<std::string>();
            c.expectation = n["expectation"].as<std::string>();
            c.tolerance = n["tolerance"].as<double>();
            c.points = n["points"].as<std::size_t>();
            c.max_residual = n["max_residual"].as<double>();
            c.mean_residual = n["mean_residual"].as<double>();
            c.max_scaled_residual = n["max_scaled_residual"].as<double>();
            c.worst_point = n["worst_point"].as<std::vector<double>>();
            c.pass = n["pass"].as<bool>();
            c.error = n["error"].as<std::string>();
            if (n["quantities"])
                for (const auto& q : n["quantities"]) c.quantities[q.first.as<std::string>()] = q.second.as<double>();
            r.checks.push_back(std::move(c));
        }
        return r;
    } catch (const YAML::Exception& e) {
        throw Error(ErrorKind::Parse, std::string("malformed report: ") + e.what());
    }
}

}  // namespace fbiharm
