#include "surfot/local_distance.hpp"

#include "surfot/parallel.hpp"

namespace surfot {

LocalDistanceResult local_distance(const ConformalDensity& mu, const ConformalDensity& nu,
                                   cplx z, cplx w, const LocalDistanceConfig& cfg) {
    return local_distance_fn([&mu](cplx q) { return mu.eval(q); },
                             [&nu](cplx q) { return nu.eval(q); }, z, w, cfg);
}

CostMatrix cost_matrix(const ConformalDensity& mu, const ConformalDensity& nu,
                       const std::vector<cplx>& Z, const std::vector<cplx>& W,
                       const LocalDistanceConfig& cfg, int threads) {
    if (cfg.sigma_steps < 4) throw ValidationError("sigma_steps must be at least 4");
    if (Z.empty() || W.empty()) throw ValidationError("cost matrix needs nonempty point sets");

    CostMatrix out;
    out.rows = static_cast<int>(Z.size());
    out.cols = static_cast<int>(W.size());
    size_t total = Z.size() * W.size();
    out.values.resize(total);
    out.argmin_sigma.resize(total);
    out.argmin_mobius.resize(total);

    const int K = cfg.grid.size();
    const int L = cfg.sigma_steps;

    // The w-side integrand values depend on (j, l, k) only, so they are
    // tabulated once and shared across all rows (cols * L * K doubles).
    std::vector<double> nu_tab(static_cast<size_t>(out.cols) * L * K);
    parallel_for(out.cols, threads, [&](int j) {
        DiskMobius bw = base_mobius(W[j]);
        double* dst = nu_tab.data() + static_cast<size_t>(j) * L * K;
        for (int l = 0; l < L; ++l) {
            cplx sigma = detail::sigma_value(l, L);
            for (int k = 0; k < K; ++k)
                dst[static_cast<size_t>(l) * K + k] =
                    nu.eval(mobius_apply(bw, sigma * cfg.grid.centers[k]));
        }
    });

    parallel_for(out.rows, threads, [&](int i) {
        // The z-side pullback values depend on z only.
        DiskMobius bz = base_mobius(Z[i]);
        std::vector<double> mu_vals(K);
        for (int k = 0; k < K; ++k) mu_vals[k] = mu.eval(mobius_apply(bz, cfg.grid.centers[k]));
        for (int j = 0; j < out.cols; ++j) {
            LocalDistanceResult r =
                detail::sigma_scan(mu_vals, nu_tab.data() + static_cast<size_t>(j) * L * K,
                                   Z[i], W[j], cfg.grid, L);
            size_t idx = static_cast<size_t>(i) * out.cols + j;
            out.values[idx] = r.value;
            out.argmin_sigma[idx] = r.sigma_index;
            out.argmin_mobius[idx] = r.mobius;
        }
    });
    return out;
}

} // namespace surfot
