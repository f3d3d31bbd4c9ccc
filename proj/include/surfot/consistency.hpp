#pragma once

#include <vector>

#include <Eigen/Core>

#include "surfot/hyperbolic.hpp"

namespace surfot {

struct ScoredCorrespondence {
    int i = 0;
    int j = 0;
    DiskMobius mobius;
    double local_cost = 0.0;
    double variance_score = 0.0;  // E_V, filled by variance_scores
};

// Matrix form [[tau, -tau a], [-conj(a), 1]] scaled to determinant 1. The
// two-fold sign ambiguity is resolved canonically: Re(trace) > 0, then
// Im(trace) > 0, then first nonzero entry with positive real part.
Eigen::Matrix2cd mobius_to_sl2(const DiskMobius& m);

// E_V(i,j) = sum over the other pairs of min over the matrix sign of the
// Frobenius distance between det-1 representatives. Requires >= 2 pairs.
std::vector<double> variance_scores(const std::vector<ScoredCorrespondence>& pairs);

// The k pairs with smallest E_V, stable-sorted by (E_V, i, j).
std::vector<ScoredCorrespondence> filter_top(std::vector<ScoredCorrespondence> pairs, int k);

} // namespace surfot
