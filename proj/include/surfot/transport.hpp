#pragma once

#include <utility>
#include <vector>

namespace surfot {

enum class TransportMode { full, partial };

struct TransportProblem {
    int n = 0;
    int p = 0;
    std::vector<double> cost;       // row-major n x p, nonnegative
    std::vector<double> mu_masses;  // length n, sum 1
    std::vector<double> nu_masses;  // length p, sum 1
    TransportMode mode = TransportMode::full;
    double Q = 1.0;  // shipped mass fraction in partial mode, (0, 1]
};

struct TransportPlan {
    int n = 0;
    int p = 0;
    std::vector<double> pi;  // row-major n x p
    double objective = 0.0;
    std::vector<double> u;  // row duals
    std::vector<double> v;  // column duals

    double at(int i, int j) const { return pi[static_cast<size_t>(i) * p + j]; }
};

// Exact optimum of the balanced transportation LP by the transportation
// simplex (northwest-corner start, Bland's entering rule, lowest-index
// leaving arc). Returns a vertex plan; with masses that are integer
// multiples of 1/N the flows are exact multiples of 1/N.
TransportPlan solve_full(const TransportProblem& p);

// Partial transport: ship total mass Q with row/column sums bounded by the
// marginals. Reduced to a balanced problem via a dummy supply row and dummy
// demand column of mass 1 - Q each (zero cost to real nodes, big-M between
// the dummies), then solved as full.
TransportPlan solve_partial(const TransportProblem& p);

// Support of a vertex plan with uniform masses 1/N: the (i, j) with
// pi_ij > 1/(2N). Throws NumericalError when an entry is fractional
// (not within 1e-9 of 0 or 1/N) — a vertex solver must not produce one.
std::vector<std::pair<int, int>> extract_correspondence(const TransportPlan& plan, int N);

// <plan, cost> inner product.
double transport_cost(const TransportPlan& plan, const std::vector<double>& cost);

} // namespace surfot
