#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "surfot/density.hpp"
#include "surfot/errors.hpp"
#include "surfot/hyperbolic.hpp"

namespace surfot {

struct LocalDistanceConfig {
    double radius_R = 1.0;
    QuadratureGrid grid;
    int sigma_steps = 32;  // L, >= 4; sigma_l = exp(2 pi i l / L), l = 0..L-1
};

struct LocalDistanceResult {
    double value = 0.0;
    int sigma_index = 0;
    DiskMobius mobius;  // the minimizing map, sends z to w
};

namespace detail {

inline cplx sigma_value(int l, int L) {
    return std::polar(1.0, 2.0 * M_PI * static_cast<double>(l) / L);
}

// Core sigma scan over precomputed integrand values: mu_vals[k] at the z-side
// pullback nodes base_z(p_k), nu_vals[l*K + k] at the w-side nodes
// base_w(sigma_l p_k). The family m_{z,w,sigma} factors through the base maps
// as base_w ∘ (sigma ·) ∘ base_z^{-1}, so
//   nu(m_{z,w,sigma_l}(base_z(p_k))) = nu(base_w(sigma_l p_k))
// and the w-side values are shared by every z. The summation order (l outer,
// k inner) is part of the contract so that single evaluations and matrix rows
// agree bit for bit.
inline LocalDistanceResult sigma_scan(const std::vector<double>& mu_vals,
                                      const double* nu_vals, cplx z, cplx w,
                                      const QuadratureGrid& grid, int L) {
    LocalDistanceResult best;
    best.value = -1.0;
    const size_t K = mu_vals.size();
    for (int l = 0; l < L; ++l) {
        const double* nv = nu_vals + static_cast<size_t>(l) * K;
        double acc = 0.0;
        for (size_t k = 0; k < K; ++k)
            acc += grid.weights[k] * std::abs(mu_vals[k] - nv[k]);
        if (best.value < 0.0 || acc < best.value) {
            best.value = acc;
            best.sigma_index = l;
        }
    }
    best.mobius = mobius_family(z, w, sigma_value(best.sigma_index, L));
    return best;
}

} // namespace detail

// min over l of sum_k alpha_k |mu(m~(p_k)) - nu(m_{z,w,sigma_l}(m~(p_k)))|
// with m~ = base_mobius(z); ties go to the lowest l.
template <class MuF, class NuF>
LocalDistanceResult local_distance_fn(MuF&& mu, NuF&& nu, cplx z, cplx w,
                                      const LocalDistanceConfig& cfg) {
    if (cfg.sigma_steps < 4) throw ValidationError("sigma_steps must be at least 4");
    const int K = cfg.grid.size();
    const int L = cfg.sigma_steps;
    DiskMobius bz = base_mobius(z);
    std::vector<double> mu_vals(K);
    for (int k = 0; k < K; ++k) mu_vals[k] = mu(mobius_apply(bz, cfg.grid.centers[k]));
    DiskMobius bw = base_mobius(w);
    std::vector<double> nu_vals(static_cast<size_t>(L) * K);
    for (int l = 0; l < L; ++l) {
        cplx sigma = detail::sigma_value(l, L);
        for (int k = 0; k < K; ++k)
            nu_vals[static_cast<size_t>(l) * K + k] =
                nu(mobius_apply(bw, sigma * cfg.grid.centers[k]));
    }
    return detail::sigma_scan(mu_vals, nu_vals.data(), z, w, cfg.grid, L);
}

LocalDistanceResult local_distance(const ConformalDensity& mu, const ConformalDensity& nu,
                                   cplx z, cplx w, const LocalDistanceConfig& cfg);

struct CostMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;        // row-major
    std::vector<int> argmin_sigma;     // row-major
    std::vector<DiskMobius> argmin_mobius;

    double at(int i, int j) const { return values[static_cast<size_t>(i) * cols + j]; }
};

// All-pairs local distances, parallel over rows, deterministic regardless of
// thread count.
CostMatrix cost_matrix(const ConformalDensity& mu, const ConformalDensity& nu,
                       const std::vector<cplx>& Z, const std::vector<cplx>& W,
                       const LocalDistanceConfig& cfg, int threads = 0);

} // namespace surfot
