#include "surfot/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "surfot/errors.hpp"
#include "surfot/rng.hpp"

namespace surfot {

// Distance comparisons below use sinh^2 of the hyperbolic distance,
// |z - w|^2 / ((1 - |z|^2)(1 - |w|^2)): monotone in the distance and free of
// arctanh, which matters in the dense nearest-center scans.

cplx mobius_apply(const DiskMobius& m, cplx z) {
    return m.tau * (z - m.a) / (1.0 - std::conj(m.a) * z);
}

DiskMobius mobius_compose(const DiskMobius& m1, const DiskMobius& m2) {
    // Matrix product of [[tau, -tau a], [-conj(a), 1]] factors, read back
    // into the (a, tau) form.
    cplx p11 = m1.tau * (m2.tau + m1.a * std::conj(m2.a));
    cplx p12 = -m1.tau * (m2.tau * m2.a + m1.a);
    cplx p22 = 1.0 + std::conj(m1.a) * m2.tau * m2.a;
    DiskMobius out;
    out.a = -p12 / p11;
    cplx t = p11 / p22;
    out.tau = t / std::abs(t);
    return out;
}

DiskMobius mobius_inverse(const DiskMobius& m) {
    DiskMobius out;
    out.a = -m.tau * m.a;
    out.tau = std::conj(m.tau);
    return out;
}

DiskMobius mobius_family(cplx z0, cplx w0, cplx sigma) {
    cplx d = 1.0 - std::conj(z0) * w0 * std::conj(sigma);
    DiskMobius out;
    out.a = (z0 - w0 * std::conj(sigma)) / d;
    out.tau = sigma * d / (1.0 - z0 * std::conj(w0) * sigma);
    return out;
}

DiskMobius base_mobius(cplx z_i) {
    // u -> (u + z_i) / (1 + conj(z_i) u), i.e. a = -z_i, tau = 1.
    return DiskMobius{-z_i, cplx{1.0, 0.0}};
}

double hyperbolic_distance(cplx z, cplx w) {
    // ratio of moduli rather than modulus of the quotient: |z-w| and
    // |1 - conj(w) z| are exactly swap-symmetric, so d(z, w) == d(w, z)
    return std::atanh(std::abs(z - w) / std::abs(1.0 - std::conj(w) * z));
}

double QuadratureGrid::total_weight() const {
    double acc = 0.0;
    for (double w : weights) acc += w;
    return acc;
}

QuadratureGrid build_quadrature(double R, int K, std::uint64_t seed) {
    if (!(R > 0.0)) throw ValidationError("quadrature radius must be positive");
    if (K < 1) throw ValidationError("quadrature needs at least one center");

    QuadratureGrid grid;
    grid.radius_R = R;
    grid.r_R = std::tanh(R);

    // Candidate cloud: a golden-angle spiral made uniform in hyperbolic area
    // (rho_j = asinh(sqrt(t_j) sinh R) puts equal area between consecutive
    // radii), dense enough that FPS is not candidate-limited.
    const int M = std::max(16 * K, 4096);
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    const double sinh_R = std::sinh(R);
    std::vector<cplx> cand(M);
    for (int j = 0; j < M; ++j) {
        double t = (j + 0.5) / M;
        double rho = std::asinh(std::sqrt(t) * sinh_R);
        cand[j] = std::polar(std::tanh(rho), golden * j);
    }

    // FPS under hyperbolic distance: the seeded start is not itself taken,
    // the first center is the candidate farthest from it.
    std::vector<double> inv_cand(M);
    for (int j = 0; j < M; ++j) inv_cand[j] = 1.0 / (1.0 - std::norm(cand[j]));
    std::vector<double> dist(M, std::numeric_limits<double>::infinity());
    auto relax = [&](cplx c) {
        double inv_c = 1.0 / (1.0 - std::norm(c));
        for (int j = 0; j < M; ++j)
            dist[j] = std::min(dist[j], std::norm(cand[j] - c) * inv_cand[j] * inv_c);
    };
    auto farthest = [&]() {
        int best = 0;
        for (int j = 1; j < M; ++j)
            if (dist[j] > dist[best]) best = j;
        return best;
    };
    int start = static_cast<int>(bounded(splitmix64(seed), static_cast<std::uint64_t>(M)));
    relax(cand[start]);
    grid.centers.reserve(K);
    grid.centers.push_back(cand[farthest()]);
    dist.assign(M, std::numeric_limits<double>::infinity());
    relax(grid.centers[0]);
    while (static_cast<int>(grid.centers.size()) < K) {
        grid.centers.push_back(cand[farthest()]);
        relax(grid.centers.back());
    }

    // Weights: hyperbolic Voronoi-cell areas accumulated over a dense polar
    // grid, hyperbolically uniform in radius. Each annular sector carries its
    // exact hyperbolic area pi (sinh^2 rho_1 - sinh^2 rho_0) / n_theta, so
    // the weights add up to the ball area pi sinh^2 R to rounding.
    const int n_rho = 512, n_theta = 512;
    std::vector<double> ring_area(n_rho), ring_mid_r(n_rho);
    for (int i = 0; i < n_rho; ++i) {
        double s0 = std::sinh(R * i / n_rho), s1 = std::sinh(R * (i + 1) / n_rho);
        ring_area[i] = M_PI * (s1 * s1 - s0 * s0) / n_theta;
        ring_mid_r[i] = std::tanh(R * (i + 0.5) / n_rho);
    }
    // The (1 - |q|^2) factor of the distance proxy is shared by all centers
    // and drops out of the argmin.
    std::vector<double> inv_center(K);
    for (int k = 0; k < K; ++k) inv_center[k] = 1.0 / (1.0 - std::norm(grid.centers[k]));
    grid.weights.assign(K, 0.0);
    for (int i = 0; i < n_rho; ++i) {
        for (int j = 0; j < n_theta; ++j) {
            cplx q = std::polar(ring_mid_r[i], 2.0 * M_PI * (j + 0.5) / n_theta);
            int best = 0;
            double best_d = std::norm(q - grid.centers[0]) * inv_center[0];
            for (int k = 1; k < K; ++k) {
                double d = std::norm(q - grid.centers[k]) * inv_center[k];
                if (d < best_d) {
                    best_d = d;
                    best = k;
                }
            }
            grid.weights[best] += ring_area[i];
        }
    }
    for (double w : grid.weights)
        if (!(w > 0.0))
            throw NumericalError("quadrature center owns no grid cell (K too large for R)");
    return grid;
}

} // namespace surfot
