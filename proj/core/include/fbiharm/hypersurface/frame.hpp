#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fbiharm/geometry/tensor.hpp"
#include "fbiharm/maps/map.hpp"

namespace fbiharm {

/// Codimension-one data of an immersion at one point.
///
/// Everything below is computed in jet arithmetic from the map jets, so the
/// mean curvature is kept as a jet (`mean_curvature_jet`, order K-2) and can be
/// differentiated twice more at K = 4.
///
/// The unit normal is oriented so that (xi, d phi(d_1), ..., d phi(d_m)) is a
/// positive frame in target coordinates; `orientation = -1` flips it. For the
/// round cylinder this is the outward normal in every dimension.
struct HypersurfaceFrame {
    std::vector<double> point;
    std::size_t m = 0;
    std::size_t order = 0;
    int orientation = 1;

    Eigen::MatrixXd metric;        // induced g at p
    Eigen::MatrixXd inverse;
    Tensor3<double> christoffel;   // of g at p
    Eigen::MatrixXd differential;  // n x m
    Eigen::VectorXd normal;        // xi in target coordinates
    Eigen::MatrixXd second_form;   // b_ij = h(B(d_i, d_j), xi)
    Eigen::MatrixXd shape;         // A^k_i at (k, i)
    double mean_curvature = 0.0;
    double norm_A2 = 0.0;          // |A|^2 = tr(A A)
    double ricci_normal = 0.0;     // Ric^N(xi, xi)
    Eigen::VectorXd ricci_tangent; // (Ric^N(xi))^T in source coordinates

    Eigen::MatrixXd target_metric;  // h at phi(p)
    Eigen::MatrixXd target_ricci;   // Ric^N at phi(p)
    Tensor4<double> target_riemann; // R^N at phi(p)

    std::vector<Jet> coordinates;  // seeded source coordinates, order K
    Jet mean_curvature_jet;

    /// sqrt(g(v, v)) for a source vector.
    double norm(const Eigen::VectorXd& v) const;
};

HypersurfaceFrame frame_from_bundle(const MapJetBundle& bundle, int orientation = 1);
HypersurfaceFrame frame_at(const SmoothMapDef& map, std::span<const double> p, std::size_t order = 4,
                           int orientation = 1);

/// Ambient assumption a residual system relies on.
struct AmbientDescriptor {
    enum class Kind { General, Einstein, SpaceForm };
    Kind kind = Kind::General;
    double value = 0.0;  // lambda for Einstein, C for space forms

    static AmbientDescriptor general() { return {}; }
    static AmbientDescriptor einstein(double lambda) { return {Kind::Einstein, lambda}; }
    static AmbientDescriptor space_form(double c) { return {Kind::SpaceForm, c}; }
};

/// Checks the descriptor against the ambient curvature stored in the frame:
/// Ric = lambda h, or R(X,Y)Z = C(h(Y,Z)X - h(X,Z)Y), within `tol` (max norm).
/// Throws DescriptorMismatch otherwise.
void validate_ambient(const HypersurfaceFrame& frame, const AmbientDescriptor& ambient, double tol = 1e-8);

}  // namespace fbiharm
