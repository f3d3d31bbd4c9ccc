#include "surfot/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "surfot/errors.hpp"
#include "surfot/rng.hpp"

namespace surfot {

SamplingContext build_sampling_context(const TriMesh& mesh, const MidEdgeMesh& mid) {
    SamplingContext ctx;
    ctx.graph = midedge_graph(mesh, mid);
    ctx.interior.assign(mid.num_vertices(), 0);
    for (int r = 0; r < mesh.num_edges(); ++r) {
        if (!mesh.edges[r].is_boundary()) {
            ctx.interior[r] = 1;
            ++ctx.interior_count;
        }
    }
    return ctx;
}

std::vector<int> fps_sample(const SamplingContext& ctx, int N, std::uint64_t seed) {
    if (N < 1) throw ValidationError("sample count must be positive");
    if (N > ctx.interior_count)
        throw ValidationError("sample count " + std::to_string(N) + " exceeds the " +
                              std::to_string(ctx.interior_count) +
                              " interior mid-edge vertices");
    std::uint64_t pick = bounded(splitmix64(seed), static_cast<std::uint64_t>(ctx.interior_count));
    int start = -1;
    for (int r = 0; r < ctx.graph.node_count; ++r) {
        if (!ctx.interior[r]) continue;
        if (pick-- == 0) {
            start = r;
            break;
        }
    }
    return farthest_point_samples(ctx.graph, N, start, ctx.interior);
}

std::vector<double> voronoi_masses(const TriMesh& mesh, const MidEdgeMesh& mid,
                                   const SamplingContext& ctx, const std::vector<int>& samples) {
    if (samples.empty()) throw ValidationError("no samples for Voronoi masses");
    GeodesicField field = shortest_paths(ctx.graph, samples);
    std::vector<double> masses(samples.size(), 0.0);
    for (int f = 0; f < mesh.num_faces(); ++f) {
        Eigen::Vector3d c = mesh.face_centroid(f);
        double best_d = 0.0;
        int best_rank = -1;
        for (int r : mid.faces[f]) {
            double d = field.dist[r] + (c - mid.vertices[r]).norm();
            int rank = field.source[r];
            if (best_rank < 0 || d < best_d || (d == best_d && rank < best_rank)) {
                best_d = d;
                best_rank = rank;
            }
        }
        masses[best_rank] += mesh.face_area(f);
    }
    double total = 0.0;
    for (double m : masses) total += m;
    if (!(total > 0.0)) throw NumericalError("zero total Voronoi mass");
    for (double& m : masses) m /= total;
    return masses;
}

double fill_distance(const SamplingContext& ctx, const std::vector<int>& samples) {
    if (samples.empty()) throw ValidationError("no samples for fill distance");
    GeodesicField field = shortest_paths(ctx.graph, samples);
    double worst = 0.0;
    for (double d : field.dist) worst = std::max(worst, d);
    return worst;
}

std::vector<int> equal_mass_select(const TriMesh& mesh, const MidEdgeMesh& mid,
                                   const SamplingContext& ctx, int N, std::uint64_t seed) {
    int candidates = std::min(4 * N, ctx.interior_count);
    if (candidates < N) throw ValidationError("not enough interior vertices for sample count");
    std::vector<int> cur = fps_sample(ctx, candidates, seed);

    while (static_cast<int>(cur.size()) > N) {
        std::vector<double> masses = voronoi_masses(mesh, mid, ctx, cur);
        // Candidate drops: the lightest cells. Removing one merges its mass
        // into the neighbors, so evaluate each removal exactly and keep the
        // one that leaves the smallest maximum cell.
        std::vector<int> order(cur.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return masses[a] < masses[b] || (masses[a] == masses[b] && a < b);
        });
        int trials = std::min<int>(4, static_cast<int>(cur.size()) - N + 1);

        int best_drop = -1;
        double best_max = 0.0;
        for (int t = 0; t < trials; ++t) {
            int cand = order[t];
            std::vector<int> reduced;
            reduced.reserve(cur.size() - 1);
            for (size_t i = 0; i < cur.size(); ++i)
                if (static_cast<int>(i) != cand) reduced.push_back(cur[i]);
            std::vector<double> after = voronoi_masses(mesh, mid, ctx, reduced);
            double mx = *std::max_element(after.begin(), after.end());
            if (best_drop < 0 || mx < best_max ||
                (mx == best_max && masses[cand] < masses[best_drop]) ||
                (mx == best_max && masses[cand] == masses[best_drop] && cand < best_drop)) {
                best_drop = cand;
                best_max = mx;
            }
        }
        cur.erase(cur.begin() + best_drop);
    }

    std::vector<double> finals = voronoi_masses(mesh, mid, ctx, cur);
    double target = 1.0 / N;
    double dev = 0.0;
    for (double m : finals) dev = std::max(dev, std::abs(m - target));
    if (dev > 0.5 * target)
        std::fprintf(stderr,
                     "warning: equal-mass sampling reached max |mass - 1/N| = %.3g (target %.3g)\n",
                     dev, 0.5 * target);
    return cur;
}

DiscreteMeasure measure_from_samples(const TriMesh& mesh, const MidEdgeMesh& mid,
                                     const SamplingContext& ctx, const FlatMap& disk_map,
                                     const std::vector<int>& samples) {
    if (disk_map.stage != FlatStage::disk)
        throw ValidationError("sample coordinates need a disk-stage map");
    DiscreteMeasure m;
    m.surface_points = samples;
    m.disk_points.reserve(samples.size());
    for (int r : samples) {
        cplx z = disk_map.phi[r];
        if (!(std::abs(z) < 1.0))
            throw NumericalError("sample point landed outside the open disk");
        m.disk_points.push_back(z);
    }
    m.masses = voronoi_masses(mesh, mid, ctx, samples);
    m.fill_distance = fill_distance(ctx, samples);
    return m;
}

} // namespace surfot
