#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace surfot {

using cplx = std::complex<double>;

// Biholomorphic self-map of the unit disk, m(z) = tau * (z - a) / (1 - conj(a) z),
// with |a| < 1 and |tau| = 1. These are exactly the isometries of the
// hyperbolic metric (1 - |z|^2)^(-2) * delta.
struct DiskMobius {
    cplx a{0.0, 0.0};
    cplx tau{1.0, 0.0};
};

cplx mobius_apply(const DiskMobius& m, cplx z);
DiskMobius mobius_compose(const DiskMobius& m1, const DiskMobius& m2);
DiskMobius mobius_inverse(const DiskMobius& m);

// The one-parameter family of disk maps sending z0 to w0, indexed by a unit
// complex sigma:
//   a = (z0 - w0 conj(sigma)) / (1 - conj(z0) w0 conj(sigma))
//   tau = sigma (1 - conj(z0) w0 conj(sigma)) / (1 - z0 conj(w0) sigma).
DiskMobius mobius_family(cplx z0, cplx w0, cplx sigma);

// The fixed representative taking 0 to z_i: u -> (u + z_i) / (1 + conj(z_i) u).
DiskMobius base_mobius(cplx z_i);

// dist(z, w) = arctanh |(z - w) / (1 - conj(w) z)|.
double hyperbolic_distance(cplx z, cplx w);

// Hyperbolic area of a geodesic ball of radius R: pi * sinh(R)^2.
inline double hyperbolic_disk_area(double R) {
    double s = std::sinh(R);
    return M_PI * s * s;
}

// Quadrature rule for integrals over the ball Omega_{0,R} against the
// hyperbolic volume (1 - |z|^2)^(-2) dA. Centers are spread by farthest-point
// sampling; each weight is the hyperbolic area of the center's Voronoi cell,
// accumulated from a dense polar grid so that sum(weights) is the ball area
// up to rounding.
struct QuadratureGrid {
    double radius_R = 0.0;
    double r_R = 0.0;  // Euclidean radius tanh(R)
    std::vector<cplx> centers;
    std::vector<double> weights;

    int size() const { return static_cast<int>(centers.size()); }
    double total_weight() const;

    // sum_k alpha_k * f(p_k)
    template <class F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (int k = 0; k < size(); ++k) acc += weights[k] * f(centers[k]);
        return acc;
    }
};

QuadratureGrid build_quadrature(double R, int K, std::uint64_t seed);

} // namespace surfot
