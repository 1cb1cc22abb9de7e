#pragma once

#include <Eigen/Dense>

#include "fbiharm/hypersurface/frame.hpp"

namespace fbiharm {

/// Normal (scalar) and tangential (source vector) lines of a residual system.
struct ResidualPair {
    double normal = 0.0;
    Eigen::VectorXd tangent;
    double tangent_norm = 0.0;  // measured with the induced metric

    double norm() const;
};

ResidualPair residual_fbh2(const HypersurfaceFrame& frame, const ScalarFieldDef& f);
/// The unscaled system; "(grad ln f) H" is g(grad ln f, grad H).
ResidualPair residual_fbh_unscaled(const HypersurfaceFrame& frame, const ScalarFieldDef& f);
/// Requires a space form of curvature C (validated).
ResidualPair residual_spaceform(const HypersurfaceFrame& frame, const ScalarFieldDef& f, double c);
/// Requires an Einstein ambient Ric = lambda h (validated).
ResidualPair residual_einstein(const HypersurfaceFrame& frame, const ScalarFieldDef& f, double lambda);
ResidualPair residual_biharmonic(const HypersurfaceFrame& frame);

/// Biharmonic conformal immersion of a surface, phi* h = lambda2 * gbar. Only m = 2.
ResidualPair residual_conformal_immersion(const HypersurfaceFrame& frame, const ScalarFieldDef& lambda2);
/// The older form of the same system written with grad ln lambda; equals the
/// above divided by lambda2.
ResidualPair residual_conformal_immersion_log(const HypersurfaceFrame& frame, const ScalarFieldDef& lambda2);
/// Conformal immersion system into a 3-dimensional space form of curvature C.
ResidualPair residual_conformal_spaceform(const HypersurfaceFrame& frame, const ScalarFieldDef& lambda2, double c);

/// max_k |H A(d_k) - H^2 d_k|_g; zero exactly at pseudo-umbilical points.
double pseudo_umbilical_defect(const HypersurfaceFrame& frame);
/// |A|^2 - Ric^N(xi, xi).
double ricci_gap(const HypersurfaceFrame& frame);

}  // namespace fbiharm
