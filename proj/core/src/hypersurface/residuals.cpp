#include "fbiharm/hypersurface/residuals.hpp"

#include <cmath>
#include <string>

#include "fbiharm/error.hpp"

namespace fbiharm {

namespace {

Jet positive_field(const HypersurfaceFrame& fr, const ScalarFieldDef& f, const char* what)
{
    Jet j = eval_expression(f.expr, fr.coordinates);
    if (f.positive && !(j.value() > 0.0))
        throw Error(ErrorKind::PositivityViolation,
                    std::string(what) + " = " + format_number(j.value()) + " is not positive at the sample point");
    return j;
}

double lap(const HypersurfaceFrame& fr, const Jet& u) { return laplacian(fr.inverse, fr.christoffel, u); }
Eigen::VectorXd grad(const HypersurfaceFrame& fr, const Jet& u) { return gradient(fr.inverse, u); }

ResidualPair make_pair(const HypersurfaceFrame& fr, double r1, Eigen::VectorXd r2)
{
    ResidualPair out;
    out.normal = r1;
    out.tangent_norm = fr.norm(r2);
    out.tangent = std::move(r2);
    return out;
}

// Delta(uH) - uH k, A grad(uH) + uH ((m/2) grad H - t): the shape shared by the
// scaled systems, with k the curvature bracket and t the tangential term.
ResidualPair scaled_system(const HypersurfaceFrame& fr, const Jet& u, double k, const Eigen::VectorXd& t)
{
    const Jet uh = u * fr.mean_curvature_jet;
    const double m = static_cast<double>(fr.m);
    const Eigen::VectorXd grad_h = grad(fr, fr.mean_curvature_jet);
    return make_pair(fr, lap(fr, uh) - uh.value() * k,
                     fr.shape * grad(fr, uh) + uh.value() * (0.5 * m * grad_h - t));
}

}  // namespace

double ResidualPair::norm() const { return std::hypot(normal, tangent_norm); }

ResidualPair residual_fbh2(const HypersurfaceFrame& fr, const ScalarFieldDef& f)
{
    const Jet fj = positive_field(fr, f, "f");
    return scaled_system(fr, fj, fr.norm_A2 - fr.ricci_normal, fr.ricci_tangent);
}

ResidualPair residual_fbh_unscaled(const HypersurfaceFrame& fr, const ScalarFieldDef& f)
{
    const Jet fj = positive_field(fr, f, "f");
    const Jet& hj = fr.mean_curvature_jet;
    const double h = hj.value();
    const double m = static_cast<double>(fr.m);
    const Eigen::VectorXd grad_h = grad(fr, hj);
    const Eigen::VectorXd grad_ln_f = grad(fr, fj) / fj.value();
    const double r1 = lap(fr, hj) - h * fr.norm_A2 + h * fr.ricci_normal + h * lap(fr, fj) / fj.value() +
                      2.0 * grad_ln_f.dot(fr.metric * grad_h);
    Eigen::VectorXd r2 =
        fr.shape * grad_h + 0.5 * m * h * grad_h - h * fr.ricci_tangent + h * (fr.shape * grad_ln_f);
    return make_pair(fr, r1, std::move(r2));
}

ResidualPair residual_spaceform(const HypersurfaceFrame& fr, const ScalarFieldDef& f, double c)
{
    validate_ambient(fr, AmbientDescriptor::space_form(c));
    const Jet fj = positive_field(fr, f, "f");
    return scaled_system(fr, fj, fr.norm_A2 - static_cast<double>(fr.m) * c, Eigen::VectorXd::Zero(fr.m));
}

ResidualPair residual_einstein(const HypersurfaceFrame& fr, const ScalarFieldDef& f, double lambda)
{
    validate_ambient(fr, AmbientDescriptor::einstein(lambda));
    const Jet fj = positive_field(fr, f, "f");
    return scaled_system(fr, fj, fr.norm_A2 - lambda, Eigen::VectorXd::Zero(fr.m));
}

ResidualPair residual_biharmonic(const HypersurfaceFrame& fr)
{
    const Jet& hj = fr.mean_curvature_jet;
    const double h = hj.value();
    const double m = static_cast<double>(fr.m);
    const Eigen::VectorXd grad_h = grad(fr, hj);
    const Eigen::VectorXd grad_h2 = grad(fr, hj * hj);
    return make_pair(fr, lap(fr, hj) - h * fr.norm_A2 + h * fr.ricci_normal,
                     2.0 * (fr.shape * grad_h) + 0.5 * m * grad_h2 - 2.0 * h * fr.ricci_tangent);
}

ResidualPair residual_conformal_immersion(const HypersurfaceFrame& fr, const ScalarFieldDef& lambda2)
{
    if (fr.m != 2)
        throw Error(ErrorKind::Dimension,
                    "conformal immersion system needs a surface, got dimension " + std::to_string(fr.m));
    const Jet l2 = positive_field(fr, lambda2, "lambda^2");
    const Jet l2h = l2 * fr.mean_curvature_jet;
    const Eigen::VectorXd grad_h = grad(fr, fr.mean_curvature_jet);
    return make_pair(fr, lap(fr, l2h) - l2h.value() * (fr.norm_A2 - fr.ricci_normal),
                     fr.shape * grad(fr, l2h) + l2h.value() * (grad_h - fr.ricci_tangent));
}

ResidualPair residual_conformal_immersion_log(const HypersurfaceFrame& fr, const ScalarFieldDef& lambda2)
{
    if (fr.m != 2)
        throw Error(ErrorKind::Dimension,
                    "conformal immersion system needs a surface, got dimension " + std::to_string(fr.m));
    const Jet l2 = positive_field(fr, lambda2, "lambda^2");
    const Jet& hj = fr.mean_curvature_jet;
    const double h = hj.value();
    const Eigen::VectorXd grad_h = grad(fr, hj);
    // grad ln lambda = grad(lambda^2) / (2 lambda^2)
    const Eigen::VectorXd grad_ln_l = grad(fr, l2) / (2.0 * l2.value());
    const double r1 = lap(fr, hj) - h * (fr.norm_A2 - fr.ricci_normal - lap(fr, l2) / l2.value()) +
                      4.0 * grad_ln_l.dot(fr.metric * grad_h);
    Eigen::VectorXd r2 = fr.shape * grad_h + h * (grad_h - fr.ricci_tangent + 2.0 * (fr.shape * grad_ln_l));
    return make_pair(fr, r1, std::move(r2));
}

ResidualPair residual_conformal_spaceform(const HypersurfaceFrame& fr, const ScalarFieldDef& lambda2, double c)
{
    if (fr.m != 2)
        throw Error(ErrorKind::Dimension,
                    "conformal immersion system needs a surface, got dimension " + std::to_string(fr.m));
    validate_ambient(fr, AmbientDescriptor::space_form(c));
    const Jet l2 = positive_field(fr, lambda2, "lambda^2");
    const Jet l2h = l2 * fr.mean_curvature_jet;
    return make_pair(fr, lap(fr, l2h) - l2h.value() * (fr.norm_A2 - 2.0 * c),
                     fr.shape * grad(fr, l2h) + l2h.value() * grad(fr, fr.mean_curvature_jet));
}

double pseudo_umbilical_defect(const HypersurfaceFrame& fr)
{
    const double h = fr.mean_curvature;
    double worst = 0.0;
    for (std::size_t k = 0; k < fr.m; ++k) {
        Eigen::VectorXd v = h * fr.shape.col(static_cast<Eigen::Index>(k));
        v[static_cast<Eigen::Index>(k)] -= h * h;
        worst = std::max(worst, fr.norm(v));
    }
    return worst;
}

double ricci_gap(const HypersurfaceFrame& fr) { return fr.norm_A2 - fr.ricci_normal; }

}  // namespace fbiharm
