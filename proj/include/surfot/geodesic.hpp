#pragma once

#include <span>
#include <vector>

#include "surfot/mesh.hpp"

namespace surfot {

// Weighted graph on the mid-edge vertices: two mid-edge vertices are
// adjacent when their parent edges share a face, with Euclidean edge
// lengths. Used as the geodesic proxy for sampling and Voronoi assignment.
struct SurfaceGraph {
    int node_count = 0;
    std::vector<std::vector<std::pair<int, double>>> adj;
};

SurfaceGraph midedge_graph(const TriMesh& mesh, const MidEdgeMesh& midedge);

// Distance to the nearest source and which source attained it (as an index
// into `sources`; ties go to the lower index).
struct GeodesicField {
    std::vector<double> dist;
    std::vector<int> source;
};

GeodesicField shortest_paths(const SurfaceGraph& graph, std::span<const int> sources);

// Farthest-point sampling. The start node seeds the process but is not
// itself selected: the first sample is the node farthest from `start`, and
// each following sample maximizes the distance to the already-selected set.
// Ties resolve to the lowest node index. When `eligible` is non-empty only
// flagged nodes may be selected (all nodes still carry distances).
std::vector<int> farthest_point_samples(const SurfaceGraph& graph, int count, int start,
                                        std::span<const char> eligible = {});

} // namespace surfot
