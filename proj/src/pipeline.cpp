#include "surfot/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "surfot/errors.hpp"

namespace surfot {

namespace {

template <class F>
auto stage_guard(const char* stage, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(stage) + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(std::string(stage) + ": " + e.what());
    }
}

bool uniform_masses(const std::vector<double>& masses) {
    double target = 1.0 / static_cast<double>(masses.size());
    for (double m : masses)
        if (std::abs(m - target) > 1e-12) return false;
    return true;
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

} // namespace

SurfaceData prepare_surface(const TriMesh& mesh, const PipelineConfig& cfg, RngStage sample_stage,
                            const std::string& label) {
    SurfaceData s;
    s.label = label;
    NormalizeResult norm = stage_guard("normalize", [&] { return normalize_area(mesh); });
    s.mesh = std::move(norm.mesh);
    s.scale = norm.scale;

    s.uni = stage_guard("uniformize", [&] { return uniformize(s.mesh, cfg.excised_face); });

    stage_guard("sample", [&] {
        SamplingContext ctx = build_sampling_context(s.mesh, s.uni.midedge);
        std::uint64_t seed = stage_seed(cfg.seed, sample_stage);
        std::vector<int> samples =
            cfg.equal_mass ? equal_mass_select(s.mesh, s.uni.midedge, ctx, cfg.samples, seed)
                           : fps_sample(ctx, cfg.samples, seed);
        s.measure = measure_from_samples(s.mesh, s.uni.midedge, ctx, s.uni.disk, samples);
        return 0;
    });

    s.density = stage_guard("density", [&] {
        return fit_density(s.measure.disk_points, s.uni.disk.phi, s.uni.factors.mu_H_vertex,
                           cfg.lambda);
    });
    return s;
}

CompareResult compare_prepared(const SurfaceData& a, const SurfaceData& b,
                               const PipelineConfig& cfg) {
    double t0 = now_seconds();
    CompareResult out;
    out.label_a = a.label;
    out.label_b = b.label;

    LocalDistanceConfig ldc;
    ldc.radius_R = cfg.radius;
    ldc.sigma_steps = cfg.sigma_steps;
    ldc.grid = stage_guard("quadrature", [&] {
        return build_quadrature(cfg.radius, cfg.quadrature, stage_seed(cfg.seed, RngStage::quadrature));
    });

    out.costs = stage_guard("cost_matrix", [&] {
        return cost_matrix(a.density, b.density, a.measure.disk_points, b.measure.disk_points,
                           ldc, cfg.threads);
    });

    const int n = out.costs.rows;
    const int p = out.costs.cols;
    TransportProblem problem;
    problem.n = n;
    problem.p = p;
    problem.cost = out.costs.values;
    problem.Q = cfg.mass_fraction;
    problem.mode = cfg.mass_fraction < 1.0 ? TransportMode::partial : TransportMode::full;
    if (cfg.equal_mass) {
        // The equal-mass marginals are fed to the LP as exact 1/N so the
        // integer rescaling (and the integrality guarantee behind
        // correspondence extraction) applies.
        problem.mu_masses.assign(n, 1.0 / n);
        problem.nu_masses.assign(p, 1.0 / p);
    } else {
        problem.mu_masses = a.measure.masses;
        problem.nu_masses = b.measure.masses;
    }

    out.plan = stage_guard("transport", [&] {
        return problem.mode == TransportMode::partial ? solve_partial(problem)
                                                      : solve_full(problem);
    });
    out.transport_value = out.plan.objective;

    bool extractable = n == p && uniform_masses(problem.mu_masses) &&
                       uniform_masses(problem.nu_masses);
    if (extractable && cfg.mass_fraction < 1.0) {
        double scaled = cfg.mass_fraction * n;
        extractable = std::abs(scaled - std::round(scaled)) <= 1e-9;
    }
    if (extractable) {
        stage_guard("consistency", [&] {
            std::vector<std::pair<int, int>> pairs = extract_correspondence(out.plan, n);
            out.pairs.reserve(pairs.size());
            for (auto [i, j] : pairs) {
                ScoredCorrespondence sc;
                sc.i = i;
                sc.j = j;
                size_t idx = static_cast<size_t>(i) * p + j;
                sc.mobius = out.costs.argmin_mobius[idx];
                sc.local_cost = out.costs.values[idx];
                out.pairs.push_back(sc);
            }
            if (out.pairs.size() >= 2) {
                std::vector<double> scores = variance_scores(out.pairs);
                for (size_t k = 0; k < scores.size(); ++k)
                    out.pairs[k].variance_score = scores[k];
            }
            return 0;
        });
    }

    out.elapsed_seconds = now_seconds() - t0;
    return out;
}

CompareResult compare(const TriMesh& a, const TriMesh& b, const PipelineConfig& cfg,
                      const std::string& label_a, const std::string& label_b) {
    double t0 = now_seconds();
    SurfaceData da = prepare_surface(a, cfg, RngStage::sample_a, label_a);
    SurfaceData db = prepare_surface(b, cfg, RngStage::sample_b, label_b);
    CompareResult out = compare_prepared(da, db, cfg);
    out.elapsed_seconds = now_seconds() - t0;
    return out;
}

DistanceTable distance_table(const std::vector<TriMesh>& meshes,
                             const std::vector<std::string>& labels, const PipelineConfig& cfg) {
    const int n = static_cast<int>(meshes.size());
    if (n < 2) throw ValidationError("distance table needs at least 2 surfaces");
    if (labels.size() != meshes.size())
        throw ValidationError("distance table needs one label per surface");

    // Each surface is prepared once per role so that entry (i, j) is
    // byte-identical to a standalone compare(meshes[i], meshes[j], cfg).
    std::vector<SurfaceData> as_a(n), as_b(n);
    for (int i = 0; i < n; ++i) {
        as_a[i] = prepare_surface(meshes[i], cfg, RngStage::sample_a, labels[i]);
        as_b[i] = prepare_surface(meshes[i], cfg, RngStage::sample_b, labels[i]);
    }

    DistanceTable table;
    table.labels = labels;
    table.values.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            CompareResult r = compare_prepared(as_a[i], as_b[j], cfg);
            table.values[static_cast<size_t>(i) * n + j] = r.transport_value;
            table.values[static_cast<size_t>(j) * n + i] = r.transport_value;
        }
    }
    return table;
}

MdsResult mds_embed(const DistanceTable& table, int dim) {
    const int n = static_cast<int>(table.labels.size());
    if (n < 1) throw ValidationError("embedding needs at least 1 surface");
    if (dim < 1) throw ValidationError("embedding dimension must be positive");
    if (table.values.size() != static_cast<size_t>(n) * n)
        throw ValidationError("distance table shape mismatch");
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (table.at(i, j) < 0.0) throw ValidationError("distance table must be nonnegative");
            if (std::abs(table.at(i, j) - table.at(j, i)) > 1e-9)
                throw ValidationError("distance table must be symmetric");
        }
    }

    Eigen::MatrixXd D2(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) D2(i, j) = table.at(i, j) * table.at(i, j);
    Eigen::MatrixXd J = Eigen::MatrixXd::Identity(n, n) -
                        Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    Eigen::MatrixXd B = -0.5 * J * D2 * J;
    B = 0.5 * (B + B.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(B);
    if (eig.info() != Eigen::Success) throw NumericalError("MDS eigendecomposition failed");

    MdsResult out;
    out.coords = Eigen::MatrixXd::Zero(n, dim);
    for (int i = 0; i < n; ++i)
        if (eig.eigenvalues()(i) > 0.0) ++out.positive_eigenvalues;

    int usable = std::min(dim, out.positive_eigenvalues);
    for (int c = 0; c < usable; ++c) {
        int src = n - 1 - c;  // eigenvalues come back ascending
        double lambda = eig.eigenvalues()(src);
        Eigen::VectorXd col = eig.eigenvectors().col(src) * std::sqrt(lambda);
        for (int i = 0; i < n; ++i) {
            if (col(i) == 0.0) continue;
            if (col(i) < 0.0) col = -col;
            break;
        }
        out.coords.col(c) = col;
    }
    if (usable < dim) {
        out.padded = true;
        std::fprintf(stderr,
                     "warning: only %d positive eigenvalues for a %d-dimensional embedding; "
                     "remaining coordinates set to zero\n",
                     out.positive_eigenvalues, dim);
    }
    return out;
}

} // namespace surfot
