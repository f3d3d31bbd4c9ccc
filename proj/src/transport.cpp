#include "surfot/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "surfot/errors.hpp"

namespace surfot {

namespace {

// Dense transportation simplex. Flows are kept at an integer scale when the
// masses allow it (all masses integral after multiplying by the row count),
// so vertex plans come out exactly integral; otherwise raw doubles are used
// and optimality rests on the dual certificate.
struct Simplex {
    int n, p;
    const std::vector<double>& cost;
    std::vector<double> flow;   // row-major, basic arcs only are meaningful
    std::vector<char> basic;    // row-major flags
    std::vector<double> u, v;   // duals

    Simplex(int n_, int p_, const std::vector<double>& c)
        : n(n_), p(p_), cost(c), flow(static_cast<size_t>(n_) * p_, 0.0),
          basic(static_cast<size_t>(n_) * p_, 0), u(n_), v(p_) {}

    size_t idx(int i, int j) const { return static_cast<size_t>(i) * p + j; }

    void northwest_init(std::vector<double> s, std::vector<double> d) {
        int i = 0, j = 0;
        while (true) {
            double t = std::min(s[i], d[j]);
            basic[idx(i, j)] = 1;
            flow[idx(i, j)] = t;
            s[i] -= t;
            d[j] -= t;
            if (i == n - 1 && j == p - 1) break;
            if (i == n - 1)
                ++j;
            else if (j == p - 1)
                ++i;
            else if (s[i] <= d[j])
                ++i;
            else
                ++j;
        }
    }

    void compute_duals() {
        std::vector<std::vector<int>> row_adj(n), col_adj(p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p; ++j)
                if (basic[idx(i, j)]) {
                    row_adj[i].push_back(j);
                    col_adj[j].push_back(i);
                }
        std::vector<char> row_set(n, 0), col_set(p, 0);
        u[0] = 0.0;
        row_set[0] = 1;
        std::queue<std::pair<char, int>> q;  // ('r', i) or ('c', j)
        q.emplace('r', 0);
        while (!q.empty()) {
            auto [kind, node] = q.front();
            q.pop();
            if (kind == 'r') {
                for (int j : row_adj[node])
                    if (!col_set[j]) {
                        v[j] = cost[idx(node, j)] - u[node];
                        col_set[j] = 1;
                        q.emplace('c', j);
                    }
            } else {
                for (int i : col_adj[node])
                    if (!row_set[i]) {
                        u[i] = cost[idx(i, node)] - v[node];
                        row_set[i] = 1;
                        q.emplace('r', i);
                    }
            }
        }
        for (int i = 0; i < n; ++i)
            if (!row_set[i]) throw NumericalError("transport basis is not a spanning tree");
        for (int j = 0; j < p; ++j)
            if (!col_set[j]) throw NumericalError("transport basis is not a spanning tree");
    }

    // Tree path from row `si` to column `sj` through basic arcs, returned as
    // alternating node sequence starting at row si and ending at column sj.
    std::vector<int> tree_path(int si, int sj) const {
        // Nodes 0..n-1 are rows, n..n+p-1 are columns.
        std::vector<int> parent(n + p, -2);
        std::queue<int> q;
        parent[si] = -1;
        q.push(si);
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            if (x == n + sj) break;
            if (x < n) {
                for (int j = 0; j < p; ++j)
                    if (basic[idx(x, j)] && parent[n + j] == -2) {
                        parent[n + j] = x;
                        q.push(n + j);
                    }
            } else {
                int j = x - n;
                for (int i = 0; i < n; ++i)
                    if (basic[idx(i, j)] && parent[i] == -2) {
                        parent[i] = x;
                        q.push(i);
                    }
            }
        }
        if (parent[n + sj] == -2) throw NumericalError("transport basis lost connectivity");
        std::vector<int> path;
        for (int x = n + sj; x != -1; x = parent[x]) path.push_back(x);
        std::reverse(path.begin(), path.end());
        return path;
    }

    void solve() {
        const double tol = 1e-12 * (1.0 + *std::max_element(cost.begin(), cost.end(),
                                                            [](double a, double b) {
                                                                return std::abs(a) < std::abs(b);
                                                            }));
        const long long max_pivots = 2000LL * (n + p) * (n + p) + 10000;
        for (long long pivot = 0;; ++pivot) {
            if (pivot > max_pivots)
                throw NumericalError("transportation simplex exceeded its pivot budget");
            compute_duals();
            // Bland: first improving arc in row-major order.
            int ei = -1, ej = -1;
            for (int i = 0; i < n && ei < 0; ++i)
                for (int j = 0; j < p; ++j)
                    if (!basic[idx(i, j)] && cost[idx(i, j)] - u[i] - v[j] < -tol) {
                        ei = i;
                        ej = j;
                        break;
                    }
            if (ei < 0) return;  // optimal

            std::vector<int> path = tree_path(ei, ej);
            // Cycle: entering arc (+), then alternating along the path back.
            // path[0] = row ei, path.back() = col ej. Arc between path[k] and
            // path[k+1] receives - for even k, + for odd k.
            double theta = std::numeric_limits<double>::infinity();
            int li = -1, lj = -1;
            auto arc_of = [&](int k, int& ai, int& aj) {
                int a = path[k], b = path[k + 1];
                ai = a < n ? a : b;
                aj = a < n ? b - n : a - n;
            };
            for (size_t k = 0; k + 1 < path.size(); k += 2) {
                int ai, aj;
                arc_of(static_cast<int>(k), ai, aj);
                double fl = flow[idx(ai, aj)];
                if (fl < theta - 1e-15 ||
                    (std::abs(fl - theta) <= 1e-15 && (ai < li || (ai == li && aj < lj)))) {
                    theta = fl;
                    li = ai;
                    lj = aj;
                }
            }
            for (size_t k = 0; k + 1 < path.size(); ++k) {
                int ai, aj;
                arc_of(static_cast<int>(k), ai, aj);
                flow[idx(ai, aj)] += (k % 2 == 0) ? -theta : theta;
            }
            flow[idx(ei, ej)] += theta;
            basic[idx(ei, ej)] = 1;
            basic[idx(li, lj)] = 0;
            flow[idx(li, lj)] = 0.0;
        }
    }
};

void validate_masses(const TransportProblem& p) {
    if (p.n < 1 || p.p < 1) throw ValidationError("transport problem needs nonempty marginals");
    if (p.cost.size() != static_cast<size_t>(p.n) * p.p)
        throw ValidationError("cost matrix shape mismatch");
    if (p.mu_masses.size() != static_cast<size_t>(p.n) ||
        p.nu_masses.size() != static_cast<size_t>(p.p))
        throw ValidationError("marginal length mismatch");
    double sm = 0.0, sn = 0.0;
    for (double m : p.mu_masses) {
        if (m < 0.0) throw ValidationError("negative mass");
        sm += m;
    }
    for (double m : p.nu_masses) {
        if (m < 0.0) throw ValidationError("negative mass");
        sn += m;
    }
    if (std::abs(sm - sn) > 1e-10)
        throw ValidationError("infeasible transport problem: mass mismatch " +
                              std::to_string(sm - sn));
}

// Integer scale for the masses, or 0 when they are not (near-)integral
// multiples of 1/scale. Makes equal-mass plans exactly integral.
double mass_scale(const std::vector<double>& s, const std::vector<double>& d, int N) {
    auto ok = [N](const std::vector<double>& m) {
        for (double x : m)
            if (std::abs(x * N - std::round(x * N)) > 1e-9) return false;
        return true;
    };
    return ok(s) && ok(d) ? static_cast<double>(N) : 0.0;
}

TransportPlan run(int n, int p, const std::vector<double>& cost, std::vector<double> s,
                  std::vector<double> d, int scale_hint) {
    double scale = mass_scale(s, d, scale_hint);
    if (scale > 0.0) {
        for (double& x : s) x = std::round(x * scale);
        for (double& x : d) x = std::round(x * scale);
    } else {
        scale = 1.0;
    }
    Simplex sx(n, p, cost);
    sx.northwest_init(std::move(s), std::move(d));
    sx.solve();
    sx.compute_duals();

    TransportPlan plan;
    plan.n = n;
    plan.p = p;
    plan.pi.assign(static_cast<size_t>(n) * p, 0.0);
    double obj = 0.0;
    for (size_t k = 0; k < plan.pi.size(); ++k) {
        plan.pi[k] = sx.flow[k] / scale;
        obj += cost[k] * sx.flow[k];
    }
    plan.objective = obj / scale;
    plan.u = sx.u;
    plan.v = sx.v;
    return plan;
}

} // namespace

TransportPlan solve_full(const TransportProblem& p) {
    validate_masses(p);
    return run(p.n, p.p, p.cost, p.mu_masses, p.nu_masses, p.n);
}

TransportPlan solve_partial(const TransportProblem& p) {
    validate_masses(p);
    if (!(p.Q > 0.0) || p.Q > 1.0) throw ValidationError("Q must lie in (0, 1]");
    if (p.Q == 1.0) return solve_full(p);

    // Balanced augmentation: dummy supply row and demand column absorb the
    // unshipped mass at zero cost; the dummy-dummy arc is priced out.
    int n1 = p.n + 1, p1 = p.p + 1;
    double maxd = 0.0;
    for (double c : p.cost) maxd = std::max(maxd, c);
    double big = 1.0 + p.n * maxd;
    std::vector<double> cost(static_cast<size_t>(n1) * p1, 0.0);
    for (int i = 0; i < p.n; ++i)
        for (int j = 0; j < p.p; ++j) cost[static_cast<size_t>(i) * p1 + j] = p.cost[static_cast<size_t>(i) * p.p + j];
    cost[static_cast<size_t>(p.n) * p1 + p.p] = big;
    std::vector<double> s = p.mu_masses, d = p.nu_masses;
    s.push_back(1.0 - p.Q);
    d.push_back(1.0 - p.Q);

    TransportPlan aug = run(n1, p1, cost, std::move(s), std::move(d), p.n);

    TransportPlan plan;
    plan.n = p.n;
    plan.p = p.p;
    plan.pi.assign(static_cast<size_t>(p.n) * p.p, 0.0);
    double obj = 0.0;
    for (int i = 0; i < p.n; ++i)
        for (int j = 0; j < p.p; ++j) {
            double f = aug.pi[static_cast<size_t>(i) * p1 + j];
            plan.pi[static_cast<size_t>(i) * p.p + j] = f;
            obj += f * p.cost[static_cast<size_t>(i) * p.p + j];
        }
    plan.objective = obj;
    plan.u.assign(aug.u.begin(), aug.u.begin() + p.n);
    plan.v.assign(aug.v.begin(), aug.v.begin() + p.p);
    return plan;
}

std::vector<std::pair<int, int>> extract_correspondence(const TransportPlan& plan, int N) {
    if (N < 1) throw ValidationError("extract_correspondence needs N >= 1");
    const double unit = 1.0 / N;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < plan.n; ++i)
        for (int j = 0; j < plan.p; ++j) {
            double x = plan.at(i, j);
            if (x > 1e-9 && x < unit - 1e-9)
                throw NumericalError("transport plan entry " + std::to_string(x) +
                                     " is fractional; expected a vertex plan");
            if (x > 0.5 * unit) pairs.emplace_back(i, j);
        }
    return pairs;
}

double transport_cost(const TransportPlan& plan, const std::vector<double>& cost) {
    if (cost.size() != plan.pi.size()) throw ValidationError("plan/cost shape mismatch");
    double acc = 0.0;
    for (size_t k = 0; k < plan.pi.size(); ++k) acc += plan.pi[k] * cost[k];
    return acc;
}

} // namespace surfot
