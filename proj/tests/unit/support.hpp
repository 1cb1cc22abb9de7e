#pragma once

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fbiharm/geometry/tensor.hpp"

namespace fbiharm::testutil {

inline double max_abs(const Eigen::MatrixXd& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

template <class T>
double max_abs_diff(const T& a, const T& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

inline std::vector<double> uniform_point(std::mt19937_64& rng, std::size_t n, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> p(n);
    for (double& v : p) v = u(rng);
    return p;
}

}  // namespace fbiharm::testutil
