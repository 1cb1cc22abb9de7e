#include "fbiharm/scenarios/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fbiharm/error.hpp"

namespace fbiharm {

std::string to_string(const Expectation& e)
{
    switch (e.kind) {
    case Expectation::Kind::None: return "none";
    case Expectation::Kind::Zero: return "zero";
    case Expectation::Kind::Nonzero: return "nonzero";
    case Expectation::Kind::Value: return "value(" + format_number(e.value) + ")";
    }
    return "none";
}

Expectation Scenario::expectation(const std::string& check) const
{
    const auto it = expected.find(check);
    return it == expected.end() ? Expectation::none() : it->second;
}

namespace {

const std::vector<ScenarioInfo> catalogue = {
    {"cylinder",
     {{"m", 3}, {"R", 1}, {"C1", 1}, {"C2", 0}},
     "S^1(R) x R^(m-1) in R^(m+1); f = C1 exp(x2/R) + C2 exp(-x2/R)"},
    {"small_hypersphere", {{"m", 2}}, "S^m(1/sqrt 2) in S^(m+1), stereographic charts; f = 1, lambda^2 = 2 + x1"},
    {"great_hypersphere", {{"m", 2}}, "equator S^m in S^(m+1); f = 2 + sin(x1)"},
    {"inversion", {}, "x / |x|^2 on an annulus of R^4; f = |x|^4"},
    {"clifford_torus", {}, "S^1(1/sqrt 2) x S^1(1/sqrt 2) in S^3, stereographic target; f = 2 + cos(x1) sin(x2)"},
};

std::map<std::string, double> merge_params(const ScenarioInfo& info, const std::map<std::string, double>& given)
{
    std::map<std::string, double> out = info.defaults;
    for (const auto& [key, value] : given) {
        if (!info.defaults.contains(key))
            throw Error(ErrorKind::InvalidArgument, "scenario '" + info.name + "' has no parameter '" + key + "'");
        if (!std::isfinite(value))
            throw Error(ErrorKind::InvalidArgument, "parameter '" + key + "' must be finite");
        out[key] = value;
    }
    return out;
}

std::size_t dimension_param(const std::map<std::string, double>& params)
{
    const double m = params.at("m");
    if (m < 2 || m > 8 || m != std::floor(m))
        throw Error(ErrorKind::InvalidArgument, "parameter m must be an integer in [2, 8], got " + format_number(m));
    return static_cast<std::size_t>(m);
}

Expr squared_norm(std::size_t n)
{
    Expr s = x(1) * x(1);
    for (std::size_t i = 2; i <= n; ++i) s = s + x(i) * x(i);
    return s;
}

Scenario make_scenario(std::string name, std::map<std::string, double> params, SmoothMapDef map)
{
    return Scenario{std::move(name), std::move(params), std::move(map), {}, {}, {}, {}, {}};
}

void set_common_hypersurface(Scenario& s)
{
    s.expected["cross_validate"] = Expectation::zero();
}

Scenario cylinder(const std::map<std::string, double>& params)
{
    const std::size_t m = dimension_param(params);
    const double r = params.at("R");
    const double c1 = params.at("C1");
    const double c2 = params.at("C2");
    if (!(r > 0)) throw Error(ErrorKind::InvalidArgument, "cylinder radius R must be positive");

    Box box(std::vector<Interval>(m, {-1.0, 1.0}));
    // theta in (0.1, 5.9), shrunk with R below 1 so it stays inside (0, 2 pi R)
    const double shrink = std::min(1.0, r);
    box[0] = {0.1 * shrink, 5.9 * shrink};
    // C1 e^t + C2 e^-t is monotone or single-signed in t, so the box ends decide positivity
    for (const double t : {-1.0 / r, 1.0 / r})
        if (!(c1 * std::exp(t) + c2 * std::exp(-t) > 0))
            throw Error(ErrorKind::InvalidArgument, "f = C1 exp(x2/R) + C2 exp(-x2/R) is not positive on the box");

    std::vector<Expr> comps{r * cos(x(1) / r), r * sin(x(1) / r)};
    for (std::size_t i = 2; i <= m; ++i) comps.push_back(x(i));

    Box source_domain = Box::unbounded(m);
    source_domain[0] = {0.0, 2.0 * std::numbers::pi * r};
    std::vector<std::vector<Expr>> flat(m, std::vector<Expr>(m, Expr(0.0)));
    for (std::size_t i = 0; i < m; ++i) flat[i][i] = 1.0;
    MetricChart source("flat", source_domain, flat);

    Expr f;
    if (c1 != 0 && c2 != 0)
        f = c1 * exp(x(2) / r) + c2 * exp(-x(2) / r);
    else if (c1 != 0)
        f = c1 * exp(x(2) / r);
    else
        f = c2 * exp(-x(2) / r);

    Scenario s = make_scenario("cylinder", params,
                                 SmoothMapDef{source, charts::euclidean(m + 1), comps, true});
    s.f = ScalarFieldDef{f};
    s.lambda2 = s.f;
    s.ambient = AmbientDescriptor::space_form(0.0);
    s.box = box;

    const double md = static_cast<double>(m);
    s.expected["tension"] = Expectation::equals(1.0 / r);
    s.expected["bitension"] = Expectation::nonzero();
    s.expected["f_bitension"] = Expectation::zero();
    s.expected["fbh2"] = Expectation::zero();
    s.expected["fbh"] = Expectation::zero();
    s.expected["einstein"] = Expectation::zero();
    s.expected["spaceform"] = Expectation::zero();
    s.expected["bhs"] = Expectation::equals(1.0 / (md * r * r * r));
    if (m == 2) s.expected["conformal_immersion"] = Expectation::zero();
    // |H| max|kappa_i - H| over the coordinate directions; kappa = (-1/R, 0, ...)
    s.expected["pseudo_umbilical"] = Expectation::equals((md - 1.0) / (md * md * r * r));
    set_common_hypersurface(s);
    return s;
}

Scenario small_hypersphere(const std::map<std::string, double>& params)
{
    const std::size_t m = dimension_param(params);
    const double r = 1.0 / std::numbers::sqrt2;
    // stereographic chart of S^m(r) -> inclusion x -> (r, x) in S^(m+1) -> stereographic
    // projection from the pole on the second ambient axis
    const Expr s2 = squared_norm(m);
    const Expr d = s2 * (1.0 - r) + (r * r + r * r * r);
    std::vector<Expr> comps{r * (s2 + r * r) / d};
    for (std::size_t i = 1; i <= m; ++i) comps.push_back(x(i) / d);

    Scenario s = make_scenario("small_hypersphere", params,
                                 SmoothMapDef{charts::sphere(m, r), charts::sphere(m + 1, 1.0), comps, true});
    s.f = ScalarFieldDef{Expr(1.0)};
    s.lambda2 = ScalarFieldDef{2.0 + x(1)};
    s.ambient = AmbientDescriptor::space_form(1.0);
    s.box = Box::cube(m, -0.8, 0.8);

    const double md = static_cast<double>(m);
    s.expected["tension"] = Expectation::equals(md);
    for (const char* c : {"bitension", "f_bitension", "fbh2", "fbh", "einstein", "spaceform", "bhs", "pseudo_umbilical"})
        s.expected[c] = Expectation::zero();
    if (m == 2) s.expected["conformal_immersion"] = Expectation::nonzero();
    set_common_hypersurface(s);
    return s;
}

Scenario great_hypersphere(const std::map<std::string, double>& params)
{
    const std::size_t m = dimension_param(params);
    std::vector<Expr> comps{Expr(0.0)};
    for (std::size_t i = 1; i <= m; ++i) comps.push_back(x(i));

    Scenario s = make_scenario("great_hypersphere", params,
                                 SmoothMapDef{charts::sphere(m, 1.0), charts::sphere(m + 1, 1.0), comps, true});
    s.f = ScalarFieldDef{2.0 + sin(x(1))};
    s.lambda2 = s.f;
    s.ambient = AmbientDescriptor::space_form(1.0);
    s.box = Box::cube(m, -0.8, 0.8);
    for (const char* c : {"tension", "bitension", "f_bitension", "fbh2", "fbh", "einstein", "spaceform", "bhs",
                          "pseudo_umbilical"})
        s.expected[c] = Expectation::zero();
    if (m == 2) s.expected["conformal_immersion"] = Expectation::zero();
    set_common_hypersurface(s);
    return s;
}

Scenario inversion(const std::map<std::string, double>& params)
{
    const Expr s2 = squared_norm(4);
    std::vector<Expr> comps;
    for (std::size_t i = 1; i <= 4; ++i) comps.push_back(x(i) / s2);

    MetricChart punctured("euclidean_punctured", Box::unbounded(4), charts::euclidean(4).metric_rows(), {s2});
    Scenario s = make_scenario("inversion", params, SmoothMapDef{punctured, charts::euclidean(4), comps, false});
    s.f = ScalarFieldDef{s2 * s2};
    s.ambient = AmbientDescriptor::general();
    s.box = Box::cube(4, 0.4, 1.2);
    s.expected["tension"] = Expectation::nonzero();
    s.expected["bitension"] = Expectation::zero();
    s.expected["f_bitension"] = Expectation::zero();
    s.expected["cross_validate"] = Expectation::zero();
    return s;
}

Scenario clifford_torus(const std::map<std::string, double>& params)
{
    const Expr d = std::numbers::sqrt2 - sin(x(2));
    std::vector<Expr> comps{cos(x(1)) / d, sin(x(1)) / d, cos(x(2)) / d};
    std::vector<std::vector<Expr>> half{{Expr(0.5), Expr(0.0)}, {Expr(0.0), Expr(0.5)}};
    const double two_pi = 2.0 * std::numbers::pi;
    MetricChart source("flat_half", Box(std::vector<Interval>(2, {0.0, two_pi})), half);

    Scenario s = make_scenario("clifford_torus", params,
                                 SmoothMapDef{source, charts::sphere(3, 1.0), comps, true});
    s.f = ScalarFieldDef{2.0 + cos(x(1)) * sin(x(2))};
    s.lambda2 = s.f;
    s.ambient = AmbientDescriptor::space_form(1.0);
    s.box = Box::cube(2, 0.1, 5.9);
    for (const char* c : {"tension", "bitension", "f_bitension", "fbh2", "fbh", "einstein", "spaceform", "bhs",
                          "conformal_immersion", "pseudo_umbilical"})
        s.expected[c] = Expectation::zero();
    set_common_hypersurface(s);
    return s;
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_catalogue() { return catalogue; }

Scenario build_scenario(const std::string& name, const std::map<std::string, double>& params)
{
    for (const ScenarioInfo& info : catalogue) {
        if (info.name != name) continue;
        const auto merged = merge_params(info, params);
        if (name == "cylinder") return cylinder(merged);
        if (name == "small_hypersphere") return small_hypersphere(merged);
        if (name == "great_hypersphere") return great_hypersphere(merged);
        if (name == "inversion") return inversion(merged);
        return clifford_torus(merged);
    }
    if (name == "custom")
        throw Error(ErrorKind::InvalidArgument, "the custom scenario is built from a chart/map description");
    throw Error(ErrorKind::UnknownName, "unknown scenario '" + name + "'");
}

MetricChart build_chart(const ChartSpec& spec)
{
    if (spec.metric.empty()) {
        if (spec.dim == 0) throw Error(ErrorKind::InvalidArgument, "chart '" + spec.kind + "' needs a dimension");
        if (spec.kind == "euclidean") return charts::euclidean(spec.dim);
        if (spec.kind == "sphere") {
            if (!(spec.radius > 0)) throw Error(ErrorKind::InvalidArgument, "sphere radius must be positive");
            return charts::sphere(spec.dim, spec.radius);
        }
        if (spec.kind == "hyperbolic") return charts::hyperbolic(spec.dim);
        throw Error(ErrorKind::UnknownName, "unknown chart '" + spec.kind + "'");
    }
    const std::size_t n = spec.metric.size();
    std::vector<std::vector<Expr>> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (spec.metric[i].size() != n) throw Error(ErrorKind::Dimension, "metric matrix must be square");
        for (const std::string& text : spec.metric[i]) {
            Expr e = parse_expression(text);
            if (e.arity() > n)
                throw Error(ErrorKind::Dimension, "metric entry '" + text + "' uses a coordinate beyond x" +
                                                      std::to_string(n));
            g[i].push_back(std::move(e));
        }
    }
    Box domain = Box::unbounded(n);
    if (!spec.domain.empty()) {
        if (spec.domain.size() != n) throw Error(ErrorKind::Dimension, "chart domain has the wrong dimension");
        domain = Box(spec.domain);
    }
    return MetricChart(spec.kind.empty() ? "custom" : spec.kind, domain, std::move(g));
}

Scenario build_custom_scenario(const CustomSpec& spec)
{
    MetricChart source = build_chart(spec.source);
    MetricChart target = build_chart(spec.target);
    const std::size_t m = source.dim();
    if (spec.components.size() != target.dim())
        throw Error(ErrorKind::Dimension, "custom map needs " + std::to_string(target.dim()) + " components");
    auto parse_over_source = [m](const std::string& text) {
        Expr e = parse_expression(text);
        if (e.arity() > m)
            throw Error(ErrorKind::Dimension,
                        "expression '" + text + "' uses a coordinate beyond x" + std::to_string(m));
        return e;
    };
    std::vector<Expr> comps;
    for (const std::string& c : spec.components) comps.push_back(parse_over_source(c));

    Scenario s = make_scenario("custom", {}, SmoothMapDef{source, target, std::move(comps), spec.immersion});
    if (spec.f) s.f = ScalarFieldDef{parse_over_source(*spec.f)};
    if (spec.lambda2) s.lambda2 = ScalarFieldDef{parse_over_source(*spec.lambda2)};
    s.ambient = spec.ambient;
    if (spec.box.size() != m) throw Error(ErrorKind::Dimension, "custom sample box needs " + std::to_string(m) + " axes");
    s.box = Box(spec.box);
    for (std::size_t i = 0; i < m; ++i) {
        const Interval& b = s.box[i];
        const Interval& d = source.domain()[i];
        if (b.empty() || !std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo < d.lo || b.hi > d.hi)
            throw Error(ErrorKind::InvalidArgument, "sample box axis " + std::to_string(i + 1) +
                                                        " must be finite and inside the source domain");
    }
    return s;
}

std::vector<std::vector<double>> sample_points(const Box& box, std::size_t count, std::uint64_t seed)
{
    if (count < 1) throw Error(ErrorKind::InvalidArgument, "sample count must be at least 1");
    if (box.empty()) throw Error(ErrorKind::InvalidArgument, "sample box is empty");
    const std::size_t d = box.dim();
    for (std::size_t k = 0; k < d; ++k)
        if (!std::isfinite(box[k].lo) || !std::isfinite(box[k].hi))
            throw Error(ErrorKind::InvalidArgument, "sample box must be bounded");

    std::vector<std::vector<double>> pts;
    if (count == 1) {
        std::vector<double> c(d);
        for (std::size_t k = 0; k < d; ++k) c[k] = 0.5 * (box[k].lo + box[k].hi);
        pts.push_back(std::move(c));
        return pts;
    }

    static constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    if (d > std::size(primes)) throw Error(ErrorKind::Dimension, "sampling supports at most 16 dimensions");
    std::mt19937_64 rng(seed);
    std::vector<double> shift(d);
    for (double& s : shift) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;

    constexpr double margin = 1e-6;
    pts.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) {
        std::vector<double> p(d);
        for (std::size_t k = 0; k < d; ++k) {
            double h = 0.0;
            double scale = 1.0 / primes[k];
            for (std::size_t j = i; j > 0; j /= primes[k], scale /= primes[k]) h += static_cast<double>(j % primes[k]) * scale;
            double t = h + shift[k];
            t -= std::floor(t);
            t = margin + (1.0 - 2.0 * margin) * t;
            p[k] = box[k].lo + (box[k].hi - box[k].lo) * t;
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

std::vector<std::vector<double>> sample_points(const Scenario& scenario, std::size_t count, std::uint64_t seed)
{
    return sample_points(scenario.box, count, seed);
}

}  // namespace fbiharm
