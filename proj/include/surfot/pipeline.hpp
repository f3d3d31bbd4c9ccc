#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "surfot/consistency.hpp"
#include "surfot/density.hpp"
#include "surfot/local_distance.hpp"
#include "surfot/mesh.hpp"
#include "surfot/rng.hpp"
#include "surfot/sampling.hpp"
#include "surfot/transport.hpp"
#include "surfot/uniformize.hpp"

namespace surfot {

struct PipelineConfig {
    int samples = 150;         // N
    double radius = 1.0;       // R
    int quadrature = 300;      // K
    int sigma_steps = 32;      // L
    double lambda = 0.99;      // TPS smoothing
    double mass_fraction = 1.0;  // Q
    std::uint64_t seed = 1;
    bool equal_mass = false;
    int threads = 0;  // 0 = SURFOT_THREADS env or hardware concurrency
    int excised_face = -1;  // -1 = automatic
};

// Per-surface preprocessing shared by every comparison: normalize area,
// uniformize, sample, fit the density.
struct SurfaceData {
    std::string label;
    TriMesh mesh;  // area-normalized
    double scale = 1.0;
    Uniformization uni;
    DiscreteMeasure measure;
    ConformalDensity density;
};

SurfaceData prepare_surface(const TriMesh& mesh, const PipelineConfig& cfg, RngStage sample_stage,
                            const std::string& label);

struct CompareResult {
    std::string label_a;
    std::string label_b;
    double transport_value = 0.0;  // T, the surface distance
    CostMatrix costs;
    TransportPlan plan;
    std::vector<ScoredCorrespondence> pairs;  // scored; empty unless masses are uniform
    double elapsed_seconds = 0.0;
};

// Full chain: uniformize -> factors -> sample -> density -> cost matrix ->
// transport -> consistency. Deterministic given cfg.seed; the two surfaces
// draw sampling randomness from independent seed stages. Stage failures are
// rethrown with the stage name prefixed.
CompareResult compare(const TriMesh& a, const TriMesh& b, const PipelineConfig& cfg,
                      const std::string& label_a = "A", const std::string& label_b = "B");

CompareResult compare_prepared(const SurfaceData& a, const SurfaceData& b,
                               const PipelineConfig& cfg);

struct DistanceTable {
    std::vector<std::string> labels;
    std::vector<double> values;  // row-major, symmetric, zero diagonal

    double at(int i, int j) const {
        return values[static_cast<size_t>(i) * labels.size() + j];
    }
};

DistanceTable distance_table(const std::vector<TriMesh>& meshes,
                             const std::vector<std::string>& labels, const PipelineConfig& cfg);

struct MdsResult {
    Eigen::MatrixXd coords;  // one row per surface
    int positive_eigenvalues = 0;
    bool padded = false;  // true when fewer positive eigenvalues than dim
};

// Classical MDS of a symmetric distance table: double-center -D^2/2, take
// the top-`dim` eigenpairs (descending), scale eigenvectors by sqrt(lambda).
// Column signs fixed so each column's first nonzero entry is positive.
MdsResult mds_embed(const DistanceTable& table, int dim = 2);

} // namespace surfot
