#include "surfot/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <tuple>

#include "surfot/errors.hpp"
#include "surfot/parallel.hpp"

namespace surfot {

Eigen::Matrix2cd mobius_to_sl2(const DiskMobius& m) {
    Eigen::Matrix2cd M;
    M << m.tau, -m.tau * m.a, -std::conj(m.a), cplx(1.0, 0.0);
    cplx det = m.tau * (1.0 - std::norm(m.a));
    M /= std::sqrt(det);

    cplx tr = M(0, 0) + M(1, 1);
    bool flip = false;
    if (tr.real() != 0.0) {
        flip = tr.real() < 0.0;
    } else if (tr.imag() != 0.0) {
        flip = tr.imag() < 0.0;
    } else {
        for (int idx = 0; idx < 4; ++idx) {
            cplx e = M(idx / 2, idx % 2);
            if (e == cplx(0.0, 0.0)) continue;
            flip = e.real() < 0.0 || (e.real() == 0.0 && e.imag() < 0.0);
            break;
        }
    }
    if (flip) M = -M;
    return M;
}

std::vector<double> variance_scores(const std::vector<ScoredCorrespondence>& pairs) {
    const int n = static_cast<int>(pairs.size());
    if (n < 2) throw ValidationError("variance scoring needs at least 2 pairs");

    std::vector<Eigen::Matrix2cd> reps(n);
    for (int i = 0; i < n; ++i) reps[i] = mobius_to_sl2(pairs[i].mobius);

    std::vector<double> scores(n, 0.0);
    parallel_for(n, 0, [&](int i) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            if (k == i) continue;
            double plus = (reps[i] - reps[k]).norm();
            double minus = (reps[i] + reps[k]).norm();
            acc += std::min(plus, minus);
        }
        scores[i] = acc;
    });
    return scores;
}

std::vector<ScoredCorrespondence> filter_top(std::vector<ScoredCorrespondence> pairs, int k) {
    if (k < 0 || k > static_cast<int>(pairs.size()))
        throw ValidationError("filter size exceeds pair count");
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const ScoredCorrespondence& a, const ScoredCorrespondence& b) {
                         return std::tie(a.variance_score, a.i, a.j) <
                                std::tie(b.variance_score, b.i, b.j);
                     });
    pairs.resize(k);
    return pairs;
}

} // namespace surfot
