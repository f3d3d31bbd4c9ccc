#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "surfot/errors.hpp"
#include "surfot/rng.hpp"
#include "surfot/transport.hpp"

using namespace surfot;

namespace {

TransportProblem uniform_problem(int n, int p, std::vector<double> cost) {
    TransportProblem tp;
    tp.n = n;
    tp.p = p;
    tp.cost = std::move(cost);
    tp.mu_masses.assign(n, 1.0 / n);
    tp.nu_masses.assign(p, 1.0 / p);
    return tp;
}

// Exhaustive oracle for square uniform problems: the optimum is attained at a
// permutation, so minimize the assignment cost over all of them.
double brute_force_objective(int n, const std::vector<double>& cost) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += cost[static_cast<size_t>(i) * n + perm[i]];
        best = std::min(best, acc / n);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<double> random_cost(int n, int p, std::uint64_t& state) {
    std::vector<double> c(static_cast<size_t>(n) * p);
    for (double& x : c) {
        state = splitmix64(state);
        x = static_cast<double>(bounded(state, 1000)) / 100.0;
    }
    return c;
}

void check_marginals(const TransportPlan& plan, const TransportProblem& tp, double shipped) {
    for (int i = 0; i < plan.n; ++i) {
        double row = 0.0;
        for (int j = 0; j < plan.p; ++j) row += plan.at(i, j);
        if (tp.mode == TransportMode::full)
            CHECK(row == doctest::Approx(tp.mu_masses[i]).epsilon(1e-9));
        else
            CHECK(row <= tp.mu_masses[i] + 1e-9);
    }
    for (int j = 0; j < plan.p; ++j) {
        double col = 0.0;
        for (int i = 0; i < plan.n; ++i) col += plan.at(i, j);
        if (tp.mode == TransportMode::full)
            CHECK(col == doctest::Approx(tp.nu_masses[j]).epsilon(1e-9));
        else
            CHECK(col <= tp.nu_masses[j] + 1e-9);
    }
    double total = std::accumulate(plan.pi.begin(), plan.pi.end(), 0.0);
    CHECK(total == doctest::Approx(shipped).epsilon(1e-9));
}

} // namespace

TEST_CASE("one-by-one problem ships everything") {
    TransportProblem tp = uniform_problem(1, 1, {0.7});
    TransportPlan plan = solve_full(tp);
    CHECK(plan.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(plan.objective == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("two-point swap picks the identity") {
    TransportProblem tp = uniform_problem(2, 2, {0.0, 1.0, 1.0, 0.0});
    TransportPlan plan = solve_full(tp);
    CHECK(plan.at(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(plan.at(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(plan.at(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(plan.at(1, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(plan.objective == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("objective matches brute force on small square problems") {
    std::uint64_t state = 101;
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(bounded(state = splitmix64(state), 6));  // 2..7
        std::vector<double> cost = random_cost(n, n, state);
        TransportProblem tp = uniform_problem(n, n, cost);
        TransportPlan plan = solve_full(tp);
        CHECK(plan.objective == doctest::Approx(brute_force_objective(n, cost)).epsilon(1e-9));
        CHECK(plan.objective ==
              doctest::Approx(transport_cost(plan, cost)).epsilon(1e-12));
        check_marginals(plan, tp, 1.0);
    }
}

TEST_CASE("rectangular problems satisfy both marginals") {
    std::uint64_t state = 103;
    for (auto [n, p] : {std::pair{3, 5}, std::pair{6, 2}, std::pair{4, 4}}) {
        std::vector<double> cost = random_cost(n, p, state);
        TransportProblem tp = uniform_problem(n, p, cost);
        TransportPlan plan = solve_full(tp);
        check_marginals(plan, tp, 1.0);

        // dual feasibility certifies optimality: u_i + v_j <= c_ij, tight on
        // the support
        double cmax = *std::max_element(cost.begin(), cost.end());
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < p; ++j) {
                double slack = cost[static_cast<size_t>(i) * p + j] - plan.u[i] - plan.v[j];
                CHECK(slack >= -1e-8 * (1.0 + cmax));
                if (plan.at(i, j) > 1e-9)
                    CHECK(std::abs(slack) <= 1e-8 * (1.0 + cmax));
            }
        }
    }
}

TEST_CASE("uniform square plans are vertex plans on the 1/N lattice") {
    std::uint64_t state = 107;
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + static_cast<int>(bounded(state = splitmix64(state), 11));  // 2..12
        TransportProblem tp = uniform_problem(n, n, random_cost(n, n, state));
        TransportPlan plan = solve_full(tp);
        double unit = 1.0 / n;
        for (double x : plan.pi) {
            double nearest = std::round(x / unit) * unit;
            CHECK(std::abs(x - nearest) <= 1e-9);
            CHECK(x >= -1e-12);
            CHECK(x <= unit + 1e-9);
        }
    }
}

TEST_CASE("partial mode ships exactly Q") {
    TransportProblem tp = uniform_problem(2, 2, {0.0, 5.0, 5.0, 5.0});
    tp.mode = TransportMode::partial;
    tp.Q = 0.5;
    TransportPlan plan = solve_partial(tp);
    CHECK(plan.at(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(plan.at(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(plan.at(1, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(plan.at(1, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(plan.objective == doctest::Approx(0.0).epsilon(1e-12));
    check_marginals(plan, tp, 0.5);
}

TEST_CASE("partial with Q = 1 equals the full solve") {
    std::uint64_t state = 109;
    for (int trial = 0; trial < 10; ++trial) {
        int n = 3 + static_cast<int>(bounded(state = splitmix64(state), 4));
        TransportProblem tp = uniform_problem(n, n, random_cost(n, n, state));
        TransportPlan full = solve_full(tp);
        tp.mode = TransportMode::partial;
        tp.Q = 1.0;
        TransportPlan part = solve_partial(tp);
        CHECK(part.objective == doctest::Approx(full.objective).epsilon(1e-12));
        REQUIRE(part.pi.size() == full.pi.size());
        for (size_t k = 0; k < full.pi.size(); ++k)
            CHECK(part.pi[k] == doctest::Approx(full.pi[k]).epsilon(1e-12));
    }
}

TEST_CASE("partial plans stay on the 1/N lattice when QN is integral") {
    std::uint64_t state = 113;
    for (int trial = 0; trial < 100; ++trial) {
        int n = 3 + static_cast<int>(bounded(state = splitmix64(state), 10));  // 3..12
        int m = 1 + static_cast<int>(bounded(state = splitmix64(state), n - 1));
        TransportProblem tp = uniform_problem(n, n, random_cost(n, n, state));
        tp.mode = TransportMode::partial;
        tp.Q = static_cast<double>(m) / n;
        TransportPlan plan = solve_partial(tp);
        double unit = 1.0 / n;
        double shipped = 0.0;
        for (double x : plan.pi) {
            double nearest = std::round(x / unit) * unit;
            CHECK(std::abs(x - nearest) <= 1e-9);
            shipped += x;
        }
        CHECK(shipped == doctest::Approx(tp.Q).epsilon(1e-9));
        check_marginals(plan, tp, tp.Q);
    }
}

TEST_CASE("partial mode prefers the cheap cells") {
    // one expensive row: with Q = 2/3 the solver must leave that row unused
    TransportProblem tp = uniform_problem(3, 3,
                                          {0.0, 1.0, 2.0,
                                           1.0, 0.0, 2.0,
                                           9.0, 9.0, 9.0});
    tp.mode = TransportMode::partial;
    tp.Q = 2.0 / 3.0;
    TransportPlan plan = solve_partial(tp);
    for (int j = 0; j < 3; ++j) CHECK(plan.at(2, j) <= 1e-12);
    CHECK(plan.objective == doctest::Approx(0.0).epsilon(1e-12));
    check_marginals(plan, tp, tp.Q);
}

TEST_CASE("correspondence extraction reads the permutation off the plan") {
    TransportProblem ident = uniform_problem(3, 3, {0.0, 1.0, 1.0,
                                                    1.0, 0.0, 1.0,
                                                    1.0, 1.0, 0.0});
    auto pairs = extract_correspondence(solve_full(ident), 3);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0] == std::pair{0, 0});
    CHECK(pairs[1] == std::pair{1, 1});
    CHECK(pairs[2] == std::pair{2, 2});

    TransportProblem anti = uniform_problem(3, 3, {1.0, 1.0, 0.0,
                                                   1.0, 0.0, 1.0,
                                                   0.0, 1.0, 1.0});
    pairs = extract_correspondence(solve_full(anti), 3);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0] == std::pair{0, 2});
    CHECK(pairs[1] == std::pair{1, 1});
    CHECK(pairs[2] == std::pair{2, 0});
}

TEST_CASE("partial extraction yields distinct rows and columns") {
    TransportProblem tp = uniform_problem(3, 3, {0.0, 4.0, 4.0,
                                                 4.0, 0.0, 4.0,
                                                 4.0, 4.0, 1.0});
    tp.mode = TransportMode::partial;
    tp.Q = 2.0 / 3.0;
    auto pairs = extract_correspondence(solve_partial(tp), 3);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].first != pairs[1].first);
    CHECK(pairs[0].second != pairs[1].second);
    // the expensive third diagonal cell is the one dropped
    for (auto& pr : pairs) CHECK(pr.first == pr.second);
    for (auto& pr : pairs) CHECK(pr.first != 2);
}

TEST_CASE("fractional plans are rejected at extraction") {
    TransportPlan plan;
    plan.n = 2;
    plan.p = 2;
    plan.pi = {0.3, 0.2, 0.2, 0.3};  // marginals fine, entries off-lattice
    CHECK_THROWS_AS(extract_correspondence(plan, 2), NumericalError);
}

TEST_CASE("transport cost is the plain inner product") {
    TransportPlan plan;
    plan.n = 2;
    plan.p = 2;
    plan.pi = {0.5, 0.0, 0.25, 0.25};
    std::vector<double> cost{1.0, 2.0, 3.0, 4.0};
    CHECK(transport_cost(plan, cost) == doctest::Approx(0.5 + 0.75 + 1.0).epsilon(1e-14));
    std::vector<double> zero(4, 0.0);
    CHECK(transport_cost(plan, zero) == 0.0);
}

TEST_CASE("bad problems are rejected") {
    TransportProblem tp = uniform_problem(2, 2, {0.0, 1.0, 1.0, 0.0});
    tp.cost.pop_back();
    CHECK_THROWS_AS(solve_full(tp), ValidationError);

    tp = uniform_problem(2, 2, {0.0, 1.0, 1.0, 0.0});
    tp.mu_masses[0] = -0.5;
    tp.mu_masses[1] = 1.5;
    CHECK_THROWS_AS(solve_full(tp), ValidationError);

    tp = uniform_problem(2, 2, {0.0, 1.0, 1.0, 0.0});
    tp.nu_masses[0] = 0.9;  // sum != 1
    CHECK_THROWS_AS(solve_full(tp), ValidationError);

    tp = uniform_problem(2, 2, {0.0, 1.0, 1.0, 0.0});
    tp.mode = TransportMode::partial;
    tp.Q = 0.0;
    CHECK_THROWS_AS(solve_partial(tp), ValidationError);
    tp.Q = 1.5;
    CHECK_THROWS_AS(solve_partial(tp), ValidationError);

    tp = uniform_problem(0, 0, {});
    CHECK_THROWS_AS(solve_full(tp), ValidationError);
}
