#include "surfot/geodesic.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <tuple>

#include "surfot/errors.hpp"

namespace surfot {

SurfaceGraph midedge_graph(const TriMesh& mesh, const MidEdgeMesh& mid) {
    SurfaceGraph g;
    g.node_count = mid.num_vertices();
    g.adj.assign(g.node_count, {});
    // Each segment appears in exactly one mid-edge face: two parent faces
    // share at most one parent edge, hence at most one mid-edge vertex.
    for (const auto& f : mid.faces) {
        for (int c = 0; c < 3; ++c) {
            int a = f[c], b = f[(c + 1) % 3];
            double w = (mid.vertices[a] - mid.vertices[b]).norm();
            g.adj[a].emplace_back(b, w);
            g.adj[b].emplace_back(a, w);
        }
    }
    for (auto& nbrs : g.adj) std::sort(nbrs.begin(), nbrs.end());
    (void)mesh;
    return g;
}

GeodesicField shortest_paths(const SurfaceGraph& g, std::span<const int> sources) {
    GeodesicField field;
    field.dist.assign(g.node_count, std::numeric_limits<double>::infinity());
    field.source.assign(g.node_count, -1);
    // Labels minimize (distance, source rank) lexicographically, so equidistant
    // nodes deterministically belong to the earlier source.
    using Item = std::tuple<double, int, int>;  // (dist, rank, node)
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (int r = 0; r < static_cast<int>(sources.size()); ++r) {
        int s = sources[r];
        if (s < 0 || s >= g.node_count) throw ValidationError("source index out of range");
        if (field.source[s] < 0) {
            field.dist[s] = 0.0;
            field.source[s] = r;
            pq.emplace(0.0, r, s);
        }
    }
    auto better = [](double d, int r, double cur_d, int cur_r) {
        return d < cur_d || (d == cur_d && r < cur_r);
    };
    while (!pq.empty()) {
        auto [d, r, v] = pq.top();
        pq.pop();
        if (d != field.dist[v] || r != field.source[v]) continue;
        for (const auto& [u, w] : g.adj[v]) {
            double nd = d + w;
            if (better(nd, r, field.dist[u], field.source[u])) {
                field.dist[u] = nd;
                field.source[u] = r;
                pq.emplace(nd, r, u);
            }
        }
    }
    return field;
}

std::vector<int> farthest_point_samples(const SurfaceGraph& g, int count, int start,
                                        std::span<const char> eligible) {
    if (count < 1) throw ValidationError("sample count must be positive");
    if (start < 0 || start >= g.node_count) throw ValidationError("start index out of range");
    auto ok = [&](int v) { return eligible.empty() || eligible[v] != 0; };

    // Multi-source relaxation from the current sample set, reused incrementally.
    std::vector<double> dist(g.node_count, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    auto relax_from = [&](int s) {
        dist[s] = 0.0;
        pq.emplace(0.0, s);
        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (d > dist[v]) continue;
            for (const auto& [u, w] : g.adj[v]) {
                if (d + w < dist[u]) {
                    dist[u] = d + w;
                    pq.emplace(d + w, u);
                }
            }
        }
    };
    auto farthest = [&]() {
        int best = -1;
        double best_d = -1.0;
        for (int v = 0; v < g.node_count; ++v)
            if (ok(v) && dist[v] > best_d) {
                best_d = dist[v];
                best = v;
            }
        return best;
    };

    std::vector<int> samples;
    samples.reserve(count);
    relax_from(start);
    int first = farthest();
    if (first < 0) throw ValidationError("no eligible sample nodes");
    samples.push_back(first);
    // Distances restart from the first sample; the seed only picks where it lands.
    dist.assign(g.node_count, std::numeric_limits<double>::infinity());
    relax_from(first);
    while (static_cast<int>(samples.size()) < count) {
        int next = farthest();
        if (next < 0 || dist[next] == 0.0)
            throw ValidationError("not enough distinct eligible nodes for requested sample count");
        samples.push_back(next);
        relax_from(next);
    }
    return samples;
}

} // namespace surfot
