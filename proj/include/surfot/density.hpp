#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "surfot/hyperbolic.hpp"

namespace surfot {

// psi(r) = r^2 log(r^2), psi(0) = 0. Takes the squared radius to spare the
// square root in the hot evaluation path.
inline double tps_kernel_sq(double r_sq) {
    return r_sq > 0.0 ? r_sq * std::log(r_sq) : 0.0;
}

inline double tps_kernel(double r) { return tps_kernel_sq(r * r); }

// Thin-plate-spline model of a conformal density over the disk:
//   gamma(z) = p1[0] + p1[1] x + p1[2] y + sum_i b[i] psi(|z - centers[i]|),
// clamped from below at floor_epsilon (densities are strictly positive,
// splines may undershoot near the rim).
struct ConformalDensity {
    std::vector<cplx> centers;
    Eigen::VectorXd b;
    Eigen::Vector3d p1{0.0, 0.0, 0.0};
    double lambda = 1.0;
    double floor_epsilon = 0.0;

    double eval(cplx z) const {
        double acc = p1[0] + p1[1] * z.real() + p1[2] * z.imag();
        for (size_t i = 0; i < centers.size(); ++i) acc += b[i] * tps_kernel_sq(std::norm(z - centers[i]));
        return acc > floor_epsilon ? acc : floor_epsilon;
    }
};

// Penalized least squares in the TPS span over `centers`:
//   lambda * sum_r |values[r] - gamma(points[r])|^2 + (1 - lambda) * b^T K b,
// subject to the usual moment conditions sum b = sum b x = sum b y = 0.
// lambda = 1 with points == centers reproduces exact interpolation.
ConformalDensity fit_density(const std::vector<cplx>& centers, const std::vector<cplx>& points,
                             const std::vector<double>& values, double lambda);

} // namespace surfot
