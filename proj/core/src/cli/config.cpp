#include "fbiharm/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "fbiharm/error.hpp"

namespace fbiharm {

const std::vector<std::string>& check_names()
{
    static const std::vector<std::string> names = {
        "tension", "bitension", "f_bitension",         "fbh2",           "fbh",           "einstein",
        "spaceform", "bhs",    "conformal_immersion", "pseudo_umbilical", "cross_validate",
    };
    return names;
}

bool is_check_name(std::string_view name)
{
    const auto& names = check_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

double RunConfig::tolerance_for(const std::string& check) const
{
    if (const auto it = tolerances.find(check); it != tolerances.end()) return it->second;
    return check == "cross_validate" ? 1e-5 : tolerance;
}

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& key, const std::string& what)
{
    const YAML::Mark mark = node.Mark();
    std::string where = mark.is_null() ? "" : " (line " + std::to_string(mark.line + 1) + ", column " +
                                                  std::to_string(mark.column + 1) + ")";
    throw Error(ErrorKind::Parse, "config key '" + key + "'" + where + ": " + what);
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key)
{
    if (!node.IsScalar()) fail(node, key, "expected a scalar");
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        fail(node, key, "cannot read '" + node.Scalar() + "'");
    }
}

double number(const YAML::Node& node, const std::string& key)
{
    const double v = scalar<double>(node, key);
    if (!std::isfinite(v)) fail(node, key, "must be finite");
    return v;
}

double positive(const YAML::Node& node, const std::string& key)
{
    const double v = number(node, key);
    if (!(v > 0)) fail(node, key, "must be positive");
    return v;
}

void require_map(const YAML::Node& node, const std::string& key)
{
    if (!node.IsMap()) fail(node, key, "expected a mapping");
}

void only_keys(const YAML::Node& node, const std::string& prefix, std::initializer_list<std::string_view> allowed)
{
    for (const auto& kv : node) {
        const std::string k = kv.first.as<std::string>();
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            fail(kv.first, prefix.empty() ? k : prefix + "." + k, "unknown key");
    }
}

Expectation expectation(const YAML::Node& node, const std::string& key)
{
    if (node.IsScalar()) {
        const std::string s = node.Scalar();
        if (s == "zero") return Expectation::zero();
        if (s == "nonzero") return Expectation::nonzero();
        if (s == "none") return Expectation::none();
        fail(node, key, "expectation must be zero, nonzero, none or {value: v}");
    }
    require_map(node, key);
    only_keys(node, key, {"value"});
    if (!node["value"]) fail(node, key, "missing 'value'");
    return Expectation::equals(number(node["value"], key + ".value"));
}

std::vector<Interval> intervals(const YAML::Node& node, const std::string& key)
{
    if (!node.IsSequence()) fail(node, key, "expected a list of [lo, hi] pairs");
    std::vector<Interval> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        const YAML::Node& pair = node[i];
        const std::string k = key + "[" + std::to_string(i) + "]";
        if (!pair.IsSequence() || pair.size() != 2) fail(pair, k, "expected [lo, hi]");
        const Interval iv{scalar<double>(pair[0], k), scalar<double>(pair[1], k)};
        if (iv.empty()) fail(pair, k, "empty interval");
        out.push_back(iv);
    }
    return out;
}

ChartSpec chart_spec(const YAML::Node& node, const std::string& key)
{
    require_map(node, key);
    only_keys(node, key, {"chart", "dim", "radius", "metric", "domain"});
    ChartSpec spec;
    if (node["chart"]) spec.kind = scalar<std::string>(node["chart"], key + ".chart");
    if (node["dim"]) {
        const double d = number(node["dim"], key + ".dim");
        if (d < 1 || d != std::floor(d)) fail(node["dim"], key + ".dim", "must be a positive integer");
        spec.dim = static_cast<std::size_t>(d);
    }
    if (node["radius"]) spec.radius = positive(node["radius"], key + ".radius");
    if (node["metric"]) {
        const YAML::Node& rows = node["metric"];
        if (!rows.IsSequence()) fail(rows, key + ".metric", "expected a list of rows");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!rows[i].IsSequence()) fail(rows[i], key + ".metric", "expected a list of rows");
            std::vector<std::string> row;
            for (const auto& e : rows[i]) row.push_back(scalar<std::string>(e, key + ".metric"));
            spec.metric.push_back(std::move(row));
        }
        if (!node["chart"]) spec.kind = "custom";
    }
    if (node["domain"]) spec.domain = intervals(node["domain"], key + ".domain");
    return spec;
}

CustomSpec custom_spec(const YAML::Node& node)
{
    require_map(node, "custom");
    only_keys(node, "custom", {"source", "target", "components", "immersion", "box", "ambient"});
    for (const char* k : {"source", "target", "components", "box"})
        if (!node[k]) fail(node, std::string("custom.") + k, "missing");
    CustomSpec spec;
    spec.source = chart_spec(node["source"], "custom.source");
    spec.target = chart_spec(node["target"], "custom.target");
    const YAML::Node& comps = node["components"];
    if (!comps.IsSequence()) fail(comps, "custom.components", "expected a list of expressions");
    for (const auto& c : comps) spec.components.push_back(scalar<std::string>(c, "custom.components"));
    if (node["immersion"]) spec.immersion = scalar<bool>(node["immersion"], "custom.immersion");
    spec.box = intervals(node["box"], "custom.box");
    if (const YAML::Node& amb = node["ambient"]) {
        require_map(amb, "custom.ambient");
        only_keys(amb, "custom.ambient", {"kind", "value"});
        const std::string kind = amb["kind"] ? scalar<std::string>(amb["kind"], "custom.ambient.kind") : "general";
        const double value = amb["value"] ? number(amb["value"], "custom.ambient.value") : 0.0;
        if (kind == "general")
            spec.ambient = AmbientDescriptor::general();
        else if (kind == "einstein")
            spec.ambient = AmbientDescriptor::einstein(value);
        else if (kind == "space_form")
            spec.ambient = AmbientDescriptor::space_form(value);
        else
            fail(amb["kind"], "custom.ambient.kind", "must be general, einstein or space_form");
    }
    return spec;
}

std::string expression_text(const YAML::Node& node, const std::string& key)
{
    const std::string text = scalar<std::string>(node, key);
    try {
        (void)parse_expression(text);
    } catch (const Error& e) {
        fail(node, key, e.what());
    }
    return text;
}

}  // namespace

RunConfig parse_config(std::string_view text)
{
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw Error(ErrorKind::Parse, std::string("malformed config: ") + e.what());
    }
    if (!root.IsMap()) throw Error(ErrorKind::Parse, "config must be a mapping");
    only_keys(root, "", {"scenario", "params", "custom", "f", "lambda2", "checks", "jet_order", "samples", "tolerance",
                         "tolerances", "nonzero_floor", "expect", "output", "verbose", "workers"});

    RunConfig cfg;
    if (!root["scenario"]) throw Error(ErrorKind::Parse, "config key 'scenario': missing");
    cfg.scenario = scalar<std::string>(root["scenario"], "scenario");
    const auto& cat = scenario_catalogue();
    const bool known = cfg.scenario == "custom" ||
                       std::any_of(cat.begin(), cat.end(), [&](const ScenarioInfo& i) { return i.name == cfg.scenario; });
    if (!known) fail(root["scenario"], "scenario", "unknown scenario '" + cfg.scenario + "'");

    if (const YAML::Node& params = root["params"]) {
        require_map(params, "params");
        for (const auto& kv : params) {
            const std::string k = kv.first.as<std::string>();
            cfg.params[k] = number(kv.second, "params." + k);
        }
    }
    if (cfg.scenario == "custom") {
        if (!root["custom"]) fail(root, "custom", "the custom scenario needs a 'custom' description");
        if (!cfg.params.empty()) fail(root["params"], "params", "the custom scenario takes no params");
        cfg.custom = custom_spec(root["custom"]);
    } else if (root["custom"]) {
        fail(root["custom"], "custom", "only valid with scenario: custom");
    }

    if (const YAML::Node& f = root["f"]) {
        if (f.IsMap()) {
            if (cfg.scenario != "cylinder") fail(f, "f", "the {C1, C2} family is only defined for the cylinder");
            only_keys(f, "f", {"C1", "C2"});
            cfg.params["C1"] = f["C1"] ? number(f["C1"], "f.C1") : 0.0;
            cfg.params["C2"] = f["C2"] ? number(f["C2"], "f.C2") : 0.0;
        } else {
            cfg.f = expression_text(f, "f");
        }
    }
    if (const YAML::Node& l = root["lambda2"]) cfg.lambda2 = expression_text(l, "lambda2");

    if (const YAML::Node& checks = root["checks"]) {
        if (!checks.IsSequence()) fail(checks, "checks", "expected a list");
        std::set<std::string> seen;
        for (const auto& c : checks) {
            const std::string name = scalar<std::string>(c, "checks");
            if (!is_check_name(name)) fail(c, "checks", "unknown check '" + name + "'");
            if (!seen.insert(name).second) fail(c, "checks", "duplicate check '" + name + "'");
            cfg.checks.push_back(name);
        }
    }
    if (const YAML::Node& k = root["jet_order"]) {
        const double v = number(k, "jet_order");
        if (v < 2 || v > 8 || v != std::floor(v)) fail(k, "jet_order", "must be an integer in [2, 8]");
        cfg.jet_order = static_cast<std::size_t>(v);
    }
    if (const YAML::Node& s = root["samples"]) {
        require_map(s, "samples");
        only_keys(s, "samples", {"count", "seed"});
        if (s["count"]) {
            const double v = number(s["count"], "samples.count");
            if (v < 1 || v != std::floor(v)) fail(s["count"], "samples.count", "must be a positive integer");
            cfg.samples = static_cast<std::size_t>(v);
        }
        if (s["seed"]) cfg.seed = scalar<std::uint64_t>(s["seed"], "samples.seed");
    }
    if (const YAML::Node& t = root["tolerance"]) cfg.tolerance = positive(t, "tolerance");
    if (const YAML::Node& ts = root["tolerances"]) {
        require_map(ts, "tolerances");
        for (const auto& kv : ts) {
            const std::string k = kv.first.as<std::string>();
            if (!is_check_name(k)) fail(kv.first, "tolerances." + k, "unknown check '" + k + "'");
            cfg.tolerances[k] = positive(kv.second, "tolerances." + k);
        }
    }
    if (const YAML::Node& nf = root["nonzero_floor"]) cfg.nonzero_floor = positive(nf, "nonzero_floor");
    if (const YAML::Node& ex = root["expect"]) {
        require_map(ex, "expect");
        for (const auto& kv : ex) {
            const std::string k = kv.first.as<std::string>();
            if (!is_check_name(k)) fail(kv.first, "expect." + k, "unknown check '" + k + "'");
            cfg.expect[k] = expectation(kv.second, "expect." + k);
        }
    }
    if (const YAML::Node& o = root["output"]) cfg.output = scalar<std::string>(o, "output");
    if (const YAML::Node& v = root["verbose"]) cfg.verbose = scalar<bool>(v, "verbose");
    if (const YAML::Node& w = root["workers"]) {
        const double v = number(w, "workers");
        if (v < 0 || v > 256 || v != std::floor(v)) fail(w, "workers", "must be an integer in [0, 256]");
        cfg.workers = static_cast<unsigned>(v);
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

Scenario resolve_scenario(const RunConfig& cfg)
{
    Scenario s = cfg.custom ? build_custom_scenario(*cfg.custom) : build_scenario(cfg.scenario, cfg.params);
    const std::size_t m = s.map.source_dim();
    auto over_source = [m](const std::string& text, const char* what) {
        Expr e = parse_expression(text);
        if (e.arity() > m)
            throw Error(ErrorKind::Dimension, std::string(what) + " '" + text + "' uses a coordinate beyond x" +
                                                  std::to_string(m));
        return ScalarFieldDef{e};
    };
    if (cfg.f) s.f = over_source(*cfg.f, "f");
    if (cfg.lambda2) s.lambda2 = over_source(*cfg.lambda2, "lambda2");
    for (const auto& [check, e] : cfg.expect) s.expected[check] = e;
    return s;
}

}  // namespace fbiharm
