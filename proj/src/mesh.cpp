#include "surfot/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <Eigen/Geometry>

#include "surfot/errors.hpp"

namespace surfot {

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
    throw ValidationError("parse error at line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& tok, int line_no) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || tok.empty())
        parse_fail(line_no, "bad number '" + tok + "'");
    return v;
}

long parse_long(const std::string& tok, int line_no) {
    char* end = nullptr;
    long v = std::strtol(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size() || tok.empty())
        parse_fail(line_no, "bad integer '" + tok + "'");
    return v;
}

// Next non-empty line with comments ('#' to end of line) stripped.
bool next_content_line(std::istream& in, std::string& line, int& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
}

TriMesh parse_off(std::istream& in) {
    TriMesh m;
    std::string line;
    int line_no = 0;
    if (!next_content_line(in, line, line_no)) parse_fail(line_no, "empty OFF stream");
    auto head = split_tokens(line);
    if (head.size() != 1 || head[0] != "OFF") parse_fail(line_no, "expected OFF header");
    if (!next_content_line(in, line, line_no)) parse_fail(line_no, "missing count line");
    auto counts = split_tokens(line);
    if (counts.size() != 3) parse_fail(line_no, "expected 'nv nf ne'");
    long nv = parse_long(counts[0], line_no);
    long nf = parse_long(counts[1], line_no);
    if (nv < 3 || nf < 1) parse_fail(line_no, "need at least 3 vertices and 1 face");
    m.vertices.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        if (!next_content_line(in, line, line_no)) parse_fail(line_no, "missing vertex line");
        auto t = split_tokens(line);
        if (t.size() != 3) parse_fail(line_no, "expected 3 vertex coordinates");
        m.vertices.emplace_back(parse_double(t[0], line_no), parse_double(t[1], line_no),
                                parse_double(t[2], line_no));
    }
    m.faces.reserve(nf);
    for (long i = 0; i < nf; ++i) {
        if (!next_content_line(in, line, line_no)) parse_fail(line_no, "missing face line");
        auto t = split_tokens(line);
        if (t.size() != 4 || parse_long(t[0], line_no) != 3)
            parse_fail(line_no, "only triangle faces ('3 i j k') are supported");
        m.faces.push_back({static_cast<int>(parse_long(t[1], line_no)),
                           static_cast<int>(parse_long(t[2], line_no)),
                           static_cast<int>(parse_long(t[3], line_no))});
    }
    return m;
}

TriMesh parse_obj(std::istream& in) {
    TriMesh m;
    std::string line;
    int line_no = 0;
    while (next_content_line(in, line, line_no)) {
        auto t = split_tokens(line);
        if (t.empty()) continue;
        if (t[0] == "v") {
            if (t.size() != 4) parse_fail(line_no, "expected 'v x y z'");
            m.vertices.emplace_back(parse_double(t[1], line_no), parse_double(t[2], line_no),
                                    parse_double(t[3], line_no));
        } else if (t[0] == "f") {
            if (t.size() != 4) parse_fail(line_no, "only triangle faces are supported");
            std::array<int, 3> f;
            for (int c = 0; c < 3; ++c) {
                std::string ref = t[c + 1];
                if (auto slash = ref.find('/'); slash != std::string::npos) ref.erase(slash);
                long idx = parse_long(ref, line_no);
                if (idx < 1) parse_fail(line_no, "face indices must be positive (1-based)");
                f[c] = static_cast<int>(idx - 1);
            }
            m.faces.push_back(f);
        }
        // other directives (vt, vn, o, g, s, mtllib, usemtl, ...) are ignored
    }
    if (m.faces.empty()) parse_fail(line_no, "no faces found");
    return m;
}

std::int64_t edge_key(int a, int b, int nv) {
    int lo = std::min(a, b), hi = std::max(a, b);
    return static_cast<std::int64_t>(lo) * nv + hi;
}

// Chain the directed boundary sides into a loop; empty unless the boundary
// is one simple cycle.
std::vector<int> trace_boundary(const TriMesh& m) {
    std::unordered_map<int, int> next;
    for (int f = 0; f < m.num_faces(); ++f) {
        for (int c = 0; c < 3; ++c) {
            const MeshEdge& e = m.edges[m.face_edges[f][c]];
            if (!e.is_boundary()) continue;
            int a = m.faces[f][c], b = m.faces[f][(c + 1) % 3];
            if (!next.emplace(a, b).second) return {};
        }
    }
    if (next.empty()) return {};
    int start = next.begin()->first;
    for (const auto& [k, v] : next) start = std::min(start, k);
    std::vector<int> loop;
    int v = start;
    do {
        loop.push_back(v);
        auto it = next.find(v);
        if (it == next.end()) return {};
        v = it->second;
    } while (v != start && loop.size() <= next.size());
    if (v != start || loop.size() != next.size()) return {};
    return loop;
}

} // namespace

double TriMesh::face_area(int f) const {
    const auto& fc = faces[f];
    Eigen::Vector3d e1 = vertices[fc[1]] - vertices[fc[0]];
    Eigen::Vector3d e2 = vertices[fc[2]] - vertices[fc[0]];
    return 0.5 * e1.cross(e2).norm();
}

double TriMesh::total_area() const {
    double a = 0.0;
    for (int f = 0; f < num_faces(); ++f) a += face_area(f);
    return a;
}

Eigen::Vector3d TriMesh::face_centroid(int f) const {
    const auto& fc = faces[f];
    return (vertices[fc[0]] + vertices[fc[1]] + vertices[fc[2]]) / 3.0;
}

int TriMesh::edge_between(int a, int b) const {
    auto it = edge_lookup.find(edge_key(a, b, num_vertices()));
    return it == edge_lookup.end() ? -1 : it->second;
}

void derive_connectivity(TriMesh& m) {
    const int nv = m.num_vertices();
    const int nf = m.num_faces();
    if (nf < 1) throw ValidationError("mesh has no faces");
    for (int f = 0; f < nf; ++f) {
        const auto& fc = m.faces[f];
        for (int c = 0; c < 3; ++c) {
            if (fc[c] < 0 || fc[c] >= nv)
                throw ValidationError("face " + std::to_string(f) + " references vertex " +
                                      std::to_string(fc[c]) + " outside [0, " +
                                      std::to_string(nv) + ")");
        }
        if (fc[0] == fc[1] || fc[1] == fc[2] || fc[0] == fc[2])
            throw ValidationError("face " + std::to_string(f) + " repeats a vertex");
    }
    m.edges.clear();
    m.edge_lookup.clear();
    m.face_edges.assign(nf, {-1, -1, -1});
    for (int f = 0; f < nf; ++f) {
        for (int c = 0; c < 3; ++c) {
            int a = m.faces[f][c], b = m.faces[f][(c + 1) % 3];
            auto [it, inserted] =
                m.edge_lookup.try_emplace(edge_key(a, b, nv), static_cast<int>(m.edges.size()));
            if (inserted) {
                MeshEdge e;
                e.v0 = std::min(a, b);
                e.v1 = std::max(a, b);
                m.edges.push_back(e);
            }
            MeshEdge& e = m.edges[it->second];
            if (e.f0 < 0)
                e.f0 = f;
            else if (e.f1 < 0)
                e.f1 = f;
            else
                ++e.extra_faces;
            m.face_edges[f][c] = it->second;
        }
    }
    m.boundary_loop = trace_boundary(m);
}

TopologyReport validate(const TriMesh& m) {
    TopologyReport r;
    r.euler_characteristic = m.num_vertices() - m.num_edges() + m.num_faces();
    for (int e = 0; e < m.num_edges(); ++e)
        if (m.edges[e].extra_faces > 0) r.nonmanifold_edges.push_back(e);
    const double total = m.total_area();
    for (int f = 0; f < m.num_faces(); ++f)
        if (m.face_area(f) < 1e-14 * total) r.degenerate_faces.push_back(f);

    // Boundary cycles: count connected components of the boundary edge
    // graph, but only when every touched vertex has exactly two incident
    // boundary edges (i.e. the components are simple cycles).
    std::unordered_map<int, int> degree;
    std::vector<int> parent(m.num_vertices());
    for (int v = 0; v < m.num_vertices(); ++v) parent[v] = v;
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    int boundary_edges = 0;
    for (const MeshEdge& e : m.edges) {
        if (!e.is_boundary()) continue;
        ++boundary_edges;
        ++degree[e.v0];
        ++degree[e.v1];
        parent[find(e.v0)] = find(e.v1);
    }
    bool simple = true;
    for (const auto& [v, d] : degree)
        if (d != 2) simple = false;
    if (boundary_edges > 0 && simple) {
        std::vector<int> roots;
        for (const auto& [v, d] : degree) roots.push_back(find(v));
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        r.boundary_loop_count = static_cast<int>(roots.size());
    }
    r.is_disk_type = r.euler_characteristic == 1 && r.boundary_loop_count == 1 &&
                     r.nonmanifold_edges.empty() && r.degenerate_faces.empty();
    return r;
}

MidEdgeMesh build_midedge(const TriMesh& m) {
    TopologyReport rep = validate(m);
    if (!rep.is_disk_type)
        throw ValidationError("mesh is not disk-type (euler=" +
                              std::to_string(rep.euler_characteristic) +
                              ", boundary loops=" + std::to_string(rep.boundary_loop_count) + ")");
    MidEdgeMesh mid;
    mid.vertices.reserve(m.num_edges());
    mid.vertex_faces.reserve(m.num_edges());
    for (const MeshEdge& e : m.edges) {
        mid.vertices.emplace_back(0.5 * (m.vertices[e.v0] + m.vertices[e.v1]));
        mid.vertex_faces.push_back({e.f0, e.f1});
    }
    mid.faces = m.face_edges;  // same index and orientation as the parent face
    return mid;
}

NormalizeResult normalize_area(const TriMesh& m) {
    double area = m.total_area();
    if (!(area > 0.0) || !std::isfinite(area))
        throw ValidationError("mesh has zero or non-finite total area");
    NormalizeResult out{m, 1.0 / std::sqrt(area)};
    for (auto& v : out.mesh.vertices) v *= out.scale;
    return out;
}

TriMesh load_mesh(std::istream& in, MeshFormat format) {
    TriMesh m = format == MeshFormat::off ? parse_off(in) : parse_obj(in);
    derive_connectivity(m);
    return m;
}

TriMesh load_mesh_file(const std::string& path) {
    MeshFormat fmt;
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".off")
        fmt = MeshFormat::off;
    else if (path.size() >= 4 && path.substr(path.size() - 4) == ".obj")
        fmt = MeshFormat::obj;
    else
        throw ValidationError("unrecognized mesh extension (want .off or .obj): " + path);
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open mesh file: " + path);
    return load_mesh(in, fmt);
}

void save_mesh(const TriMesh& m, std::ostream& out, MeshFormat format) {
    out << std::setprecision(17);
    if (format == MeshFormat::off) {
        out << "OFF\n" << m.num_vertices() << ' ' << m.num_faces() << ' ' << m.num_edges() << '\n';
        for (const auto& v : m.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
        for (const auto& f : m.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    } else {
        for (const auto& v : m.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
        for (const auto& f : m.faces)
            out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    }
}

void save_mesh_file(const TriMesh& m, const std::string& path) {
    MeshFormat fmt;
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".off")
        fmt = MeshFormat::off;
    else if (path.size() >= 4 && path.substr(path.size() - 4) == ".obj")
        fmt = MeshFormat::obj;
    else
        throw ValidationError("unrecognized mesh extension (want .off or .obj): " + path);
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write mesh file: " + path);
    save_mesh(m, out, fmt);
}

} // namespace surfot
