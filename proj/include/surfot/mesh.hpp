#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace surfot {

enum class MeshFormat { off, obj };

// Undirected mesh edge together with the faces it borders.
struct MeshEdge {
    int v0 = -1;          // endpoints, v0 < v1
    int v1 = -1;
    int f0 = -1;          // first incident face
    int f1 = -1;          // second incident face, -1 on the boundary
    int extra_faces = 0;  // incidences beyond two (non-manifold)

    bool is_boundary() const { return f0 >= 0 && f1 < 0 && extra_faces == 0; }
};

// Embedded triangle mesh with derived edge connectivity. Faces are oriented
// i -> j -> k; `edges`, `face_edges` and `boundary_loop` are filled by the
// loaders (or by derive_connectivity for programmatically built meshes).
// Vertex coordinates are kept exactly as parsed.
struct TriMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> faces;

    std::vector<MeshEdge> edges;
    // face_edges[f][c] is the edge between corner c and corner c+1 of face f.
    std::vector<std::array<int, 3>> face_edges;
    // Ordered boundary vertices; empty unless the boundary is a single
    // simple cycle.
    std::vector<int> boundary_loop;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_faces() const { return static_cast<int>(faces.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    double face_area(int f) const;
    double total_area() const;
    Eigen::Vector3d face_centroid(int f) const;
    // Index of the edge joining vertices a and b, or -1.
    int edge_between(int a, int b) const;

    std::unordered_map<std::int64_t, int> edge_lookup;
};

// Rebuild edges, face_edges and boundary_loop from vertices/faces.
// Throws ValidationError on out-of-range or repeated face indices.
void derive_connectivity(TriMesh& mesh);

// Topology summary; validate() never throws.
struct TopologyReport {
    int euler_characteristic = 0;
    // Number of simple boundary cycles; 0 when the boundary edges do not
    // decompose into simple cycles (or there is no boundary at all).
    int boundary_loop_count = 0;
    std::vector<int> nonmanifold_edges;
    std::vector<int> degenerate_faces;  // area < 1e-14 * total area
    bool is_disk_type = false;
};

TopologyReport validate(const TriMesh& mesh);

// Mid-edge mesh: one vertex per parent edge (at the edge midpoint, same
// index) and one face per parent face (the medial triangle, same index and
// orientation). The structure is deliberately non-manifold: each mid-edge
// vertex belongs to at most two mid-edge faces, which touch only at shared
// mid-edge vertices.
struct MidEdgeMesh {
    std::vector<Eigen::Vector3d> vertices;       // midpoint of parent edge r
    std::vector<std::array<int, 3>> faces;       // medial triangle of parent face t
    std::vector<std::array<int, 2>> vertex_faces; // incident mid-edge faces, -1 pad

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_faces() const { return static_cast<int>(faces.size()); }
};

// Requires a disk-type mesh (throws ValidationError otherwise).
MidEdgeMesh build_midedge(const TriMesh& mesh);

struct NormalizeResult {
    TriMesh mesh;
    double scale = 1.0;  // factor applied to coordinates, 1/sqrt(total area)
};

// Uniform rescale to unit total area.
NormalizeResult normalize_area(const TriMesh& mesh);

TriMesh load_mesh(std::istream& in, MeshFormat format);
TriMesh load_mesh_file(const std::string& path);  // format from extension
void save_mesh(const TriMesh& mesh, std::ostream& out, MeshFormat format);
void save_mesh_file(const TriMesh& mesh, const std::string& path);

} // namespace surfot
