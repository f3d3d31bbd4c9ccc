#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "surfot/errors.hpp"
#include "surfot/json_io.hpp"
#include "surfot/pipeline.hpp"
#include "surfot/synth.hpp"

namespace {

using namespace surfot;

void add_common_flags(CLI::App* cmd, PipelineConfig& cfg, bool* equal_mass = nullptr) {
    cmd->add_option("--n", cfg.samples, "Sample count per surface")->check(CLI::PositiveNumber);
    cmd->add_option("--r", cfg.radius, "Hyperbolic integration radius R")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--k", cfg.quadrature, "Quadrature node count K")->check(CLI::PositiveNumber);
    cmd->add_option("--l", cfg.sigma_steps, "Rotation steps L of the Mobius search");
    cmd->add_option("--lambda", cfg.lambda, "Thin-plate smoothing factor in (0,1]");
    cmd->add_option("--q", cfg.mass_fraction, "Mass fraction Q of the partial transport");
    cmd->add_option("--seed", cfg.seed, "Master random seed");
    cmd->add_option("--threads", cfg.threads, "Worker threads (0 = SURFOT_THREADS or all cores)");
    cmd->add_option("--excised", cfg.excised_face,
                    "Interior face to excise (-1 = farthest from the boundary)");
    if (equal_mass)
        cmd->add_flag("--equal-mass", *equal_mass, "Target equal Voronoi masses (1/N each)");
}

std::string stem_of(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

SurfaceData prepare_from_file(const std::string& path, const PipelineConfig& cfg,
                              RngStage stage) {
    TriMesh mesh = load_mesh_file(path);
    return prepare_surface(mesh, cfg, stage, stem_of(path));
}

TransportPlan run_transport(const CostMatrix& m, double Q,
                            std::vector<std::pair<int, int>>* pairs) {
    TransportProblem problem;
    problem.n = m.rows;
    problem.p = m.cols;
    problem.cost = m.values;
    problem.mu_masses.assign(m.rows, 1.0 / m.rows);
    problem.nu_masses.assign(m.cols, 1.0 / m.cols);
    problem.Q = Q;
    problem.mode = Q < 1.0 ? TransportMode::partial : TransportMode::full;

    if (m.rows != m.cols)
        std::fprintf(stderr,
                     "warning: %d x %d problem; correspondence extraction needs equal sample "
                     "counts\n",
                     m.rows, m.cols);

    TransportPlan plan =
        problem.mode == TransportMode::partial ? solve_partial(problem) : solve_full(problem);
    if (pairs && m.rows == m.cols) {
        double scaled = Q * m.rows;
        if (Q >= 1.0 || std::abs(scaled - std::round(scaled)) <= 1e-9)
            *pairs = extract_correspondence(plan, m.rows);
    }
    return plan;
}

int run(int argc, char** argv) {
    CLI::App app{"Mobius-invariant optimal-transport distances between disk-type surfaces"};
    app.require_subcommand(1);

    PipelineConfig cfg;
    bool equal_mass = false;
    std::string out;
    std::vector<std::string> inputs;

    auto* c_uniformize = app.add_subcommand(
        "uniformize", "Flatten a mesh to the unit disk and report conformal factors");
    c_uniformize->add_option("mesh", inputs, "Input mesh (.off/.obj)")->required();
    add_common_flags(c_uniformize, cfg);
    c_uniformize->add_option("--out", out, "Output JSON path")->required();

    auto* c_sample = app.add_subcommand("sample", "Farthest-point sample with Voronoi masses");
    c_sample->add_option("mesh", inputs)->required();
    add_common_flags(c_sample, cfg, &equal_mass);
    c_sample->add_option("--out", out)->required();

    auto* c_density = app.add_subcommand("density", "Fit the thin-plate conformal density");
    c_density->add_option("mesh", inputs)->required();
    add_common_flags(c_density, cfg, &equal_mass);
    c_density->add_option("--out", out)->required();

    auto* c_distmat = app.add_subcommand("distmat", "Local-distance cost matrix of two densities");
    c_distmat->add_option("densities", inputs, "Two density JSON files")->expected(2);
    add_common_flags(c_distmat, cfg);
    c_distmat->add_option("--out", out)->required();

    auto* c_transport = app.add_subcommand("transport", "Solve the transport problem");
    c_transport->add_option("matrix", inputs, "Cost matrix JSON")->required();
    add_common_flags(c_transport, cfg);
    c_transport->add_option("--out", out)->required();

    int top_k = 0;
    auto* c_filter = app.add_subcommand("filter", "Keep the most consistent correspondences");
    c_filter->add_option("files", inputs, "Plan JSON then matrix JSON")->expected(2);
    c_filter->add_option("--top", top_k, "Number of pairs to keep")->required();
    c_filter->add_option("--out", out)->required();

    auto* c_compare = app.add_subcommand("compare", "Distance between two surfaces");
    c_compare->add_option("meshes", inputs, "Two input meshes")->expected(2);
    add_common_flags(c_compare, cfg, &equal_mass);
    c_compare->add_option("--out", out, "Output JSON path (optional)");

    auto* c_matrix = app.add_subcommand("matrix", "Pairwise distance table of many surfaces");
    c_matrix->add_option("meshes", inputs, "Input meshes")->expected(-2);
    add_common_flags(c_matrix, cfg, &equal_mass);
    c_matrix->add_option("--out", out, "Output prefix (writes .csv and .json)")->required();

    int dim = 2;
    auto* c_embed = app.add_subcommand("embed", "Classical MDS embedding of a distance table");
    c_embed->add_option("table", inputs, "Distance table JSON")->required();
    c_embed->add_option("--dim", dim, "Embedding dimension");
    c_embed->add_option("--out", out)->required();

    std::string kind = "flat-disk";
    int resolution = 24;
    SynthParams params;
    auto* c_synth = app.add_subcommand("synth", "Generate a synthetic test surface");
    c_synth
        ->add_option("kind", kind, "flat-disk | gaussian-bump | two-bumps | bent-sheet")
        ->required();
    c_synth->add_option("--res", resolution, "Rings in the triangulated fan");
    c_synth->add_option("--height", params.height, "Bump height");
    c_synth->add_option("--sigma-b", params.sigma_b, "Bump width");
    c_synth->add_option("--angle", params.angle_deg, "Fold angle in degrees");
    c_synth->add_option("--out", out, "Output mesh path (.off/.obj)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    cfg.equal_mass = equal_mass;

    if (c_uniformize->parsed()) {
        TriMesh mesh = load_mesh_file(inputs[0]);
        SurfaceData s = prepare_surface(mesh, cfg, RngStage::sample_a, stem_of(inputs[0]));
        write_text_file(out, uniformization_to_json(s.uni));
    } else if (c_sample->parsed()) {
        SurfaceData s = prepare_from_file(inputs[0], cfg, RngStage::sample_a);
        write_text_file(out, measure_to_json(s.measure));
    } else if (c_density->parsed()) {
        SurfaceData s = prepare_from_file(inputs[0], cfg, RngStage::sample_a);
        write_text_file(out, density_to_json(s.density));
    } else if (c_distmat->parsed()) {
        ConformalDensity mu = density_from_json(read_text_file(inputs[0]));
        ConformalDensity nu = density_from_json(read_text_file(inputs[1]));
        LocalDistanceConfig ldc;
        ldc.radius_R = cfg.radius;
        ldc.sigma_steps = cfg.sigma_steps;
        ldc.grid = build_quadrature(cfg.radius, cfg.quadrature,
                                    stage_seed(cfg.seed, RngStage::quadrature));
        CostMatrix m = cost_matrix(mu, nu, mu.centers, nu.centers, ldc, cfg.threads);
        write_text_file(out, cost_matrix_to_json(m, cfg.radius, cfg.sigma_steps));
    } else if (c_transport->parsed()) {
        CostMatrix m = cost_matrix_from_json(read_text_file(inputs[0]));
        std::vector<std::pair<int, int>> pairs;
        TransportPlan plan = run_transport(m, cfg.mass_fraction, &pairs);
        write_text_file(out, plan_to_json(plan, pairs, cfg.mass_fraction));
    } else if (c_filter->parsed()) {
        std::vector<std::pair<int, int>> pairs = pairs_from_plan_json(read_text_file(inputs[0]));
        CostMatrix m = cost_matrix_from_json(read_text_file(inputs[1]));
        std::vector<ScoredCorrespondence> scored;
        scored.reserve(pairs.size());
        for (auto [i, j] : pairs) {
            if (i < 0 || i >= m.rows || j < 0 || j >= m.cols)
                throw ValidationError("pair index outside the cost matrix");
            ScoredCorrespondence sc;
            sc.i = i;
            sc.j = j;
            size_t idx = static_cast<size_t>(i) * m.cols + j;
            sc.mobius = m.argmin_mobius[idx];
            sc.local_cost = m.values[idx];
            scored.push_back(sc);
        }
        if (scored.size() >= 2) {
            std::vector<double> scores = variance_scores(scored);
            for (size_t s = 0; s < scores.size(); ++s) scored[s].variance_score = scores[s];
        }
        write_text_file(out, scored_pairs_to_json(filter_top(scored, top_k)));
    } else if (c_compare->parsed()) {
        TriMesh a = load_mesh_file(inputs[0]);
        TriMesh b = load_mesh_file(inputs[1]);
        CompareResult r = compare(a, b, cfg, stem_of(inputs[0]), stem_of(inputs[1]));
        std::printf("T(%s, %s) = %.12g\n", r.label_a.c_str(), r.label_b.c_str(),
                    r.transport_value);
        if (!out.empty()) write_text_file(out, compare_to_json(r, cfg));
    } else if (c_matrix->parsed()) {
        std::vector<TriMesh> meshes;
        std::vector<std::string> labels;
        for (const std::string& path : inputs) {
            meshes.push_back(load_mesh_file(path));
            labels.push_back(stem_of(path));
        }
        DistanceTable table = distance_table(meshes, labels, cfg);
        write_text_file(out + ".csv", table_to_csv(table));
        write_text_file(out + ".json", table_to_json(table, cfg));
    } else if (c_embed->parsed()) {
        DistanceTable table = table_from_json(read_text_file(inputs[0]));
        MdsResult r = mds_embed(table, dim);
        write_text_file(out, mds_to_json(r, table.labels));
    } else if (c_synth->parsed()) {
        SynthKind k;
        if (kind == "flat-disk")
            k = SynthKind::flat_disk;
        else if (kind == "gaussian-bump")
            k = SynthKind::gaussian_bump;
        else if (kind == "two-bumps")
            k = SynthKind::two_bumps;
        else if (kind == "bent-sheet")
            k = SynthKind::bent_sheet;
        else
            throw ValidationError("unknown surface kind: " + kind);
        save_mesh_file(synth_surface(k, resolution, params), out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
