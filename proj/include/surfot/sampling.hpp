#pragma once

#include <cstdint>
#include <vector>

#include "surfot/geodesic.hpp"
#include "surfot/hyperbolic.hpp"
#include "surfot/mesh.hpp"
#include "surfot/uniformize.hpp"

namespace surfot {

// Shared sampling state: the mid-edge shortest-path graph and the interior
// flags (boundary mid-edge vertices sit on the unit circle after flattening
// and are never eligible as sample points).
struct SamplingContext {
    SurfaceGraph graph;
    std::vector<char> interior;
    int interior_count = 0;
};

SamplingContext build_sampling_context(const TriMesh& mesh, const MidEdgeMesh& mid);

// Marginal of the transport problem: sample points with their geodesic
// Voronoi masses.
struct DiscreteMeasure {
    std::vector<int> surface_points;  // mid-edge vertex indices
    std::vector<cplx> disk_points;    // Phi images, |z| < 1
    std::vector<double> masses;       // nonnegative, sum 1
    double fill_distance = 0.0;       // surface length units
};

// Farthest-point sampling over interior mid-edge vertices. The seeded start
// is drawn uniformly from the interior vertices and is not itself included;
// see farthest_point_samples for the selection rule.
std::vector<int> fps_sample(const SamplingContext& ctx, int N, std::uint64_t seed);

// Geodesic Voronoi masses: each face goes to the sample minimizing
// (graph distance at the face's mid-edge vertices) + (centroid offset),
// ties to the lower sample index; masses are assigned face areas,
// renormalized to sum 1.
std::vector<double> voronoi_masses(const TriMesh& mesh, const MidEdgeMesh& mid,
                                   const SamplingContext& ctx, const std::vector<int>& samples);

// Largest graph distance from any mid-edge vertex to the sample set.
double fill_distance(const SamplingContext& ctx, const std::vector<int>& samples);

// FPS with 4N candidates, then greedy removal of the smallest-mass sample
// (recomputing masses each round) until N remain. Targets near-uniform
// Voronoi masses.
std::vector<int> equal_mass_select(const TriMesh& mesh, const MidEdgeMesh& mid,
                                   const SamplingContext& ctx, int N, std::uint64_t seed);

DiscreteMeasure measure_from_samples(const TriMesh& mesh, const MidEdgeMesh& mid,
                                     const SamplingContext& ctx, const FlatMap& disk_map,
                                     const std::vector<int>& samples);

} // namespace surfot
