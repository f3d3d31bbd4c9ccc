#include "surfot/uniformize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <Eigen/Geometry>
#include <Eigen/SparseCholesky>

#include "surfot/errors.hpp"
#include "surfot/geodesic.hpp"

namespace surfot {

namespace {

Eigen::Vector3d face_normal_area(const TriMesh& mesh, int f, double& twice_area) {
    const auto& fc = mesh.faces[f];
    Eigen::Vector3d n = (mesh.vertices[fc[1]] - mesh.vertices[fc[0]])
                            .cross(mesh.vertices[fc[2]] - mesh.vertices[fc[0]]);
    twice_area = n.norm();
    return n;
}

} // namespace

Eigen::SparseMatrix<double> assemble_dirichlet(const TriMesh& mesh, int excised_face) {
    const int nv = mesh.num_vertices();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(mesh.num_faces()) * 9);
    for (int f = 0; f < mesh.num_faces(); ++f) {
        if (f == excised_face) continue;
        double twice_area;
        face_normal_area(mesh, f, twice_area);
        if (twice_area <= 2e-14 * mesh.total_area())
            throw ValidationError("degenerate face " + std::to_string(f) +
                                  " in Dirichlet assembly");
        const auto& fc = mesh.faces[f];
        for (int c = 0; c < 3; ++c) {
            int i = fc[c], j = fc[(c + 1) % 3], k = fc[(c + 2) % 3];
            Eigen::Vector3d e1 = mesh.vertices[j] - mesh.vertices[i];
            Eigen::Vector3d e2 = mesh.vertices[k] - mesh.vertices[i];
            // cot of the angle at corner i is dot/|cross|; the face integral
            // of <grad phi_j, grad phi_k> is -cot/2.
            double w = 0.5 * e1.dot(e2) / twice_area;
            trip.emplace_back(j, k, -w);
            trip.emplace_back(k, j, -w);
            trip.emplace_back(j, j, w);
            trip.emplace_back(k, k, w);
        }
    }
    Eigen::SparseMatrix<double> A(nv, nv);
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

Eigen::Vector3d face_gradient(const TriMesh& mesh, int f, const double* vertex_values) {
    double twice_area;
    Eigen::Vector3d n = face_normal_area(mesh, f, twice_area);
    n /= twice_area;
    const auto& fc = mesh.faces[f];
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    for (int c = 0; c < 3; ++c) {
        Eigen::Vector3d opposite =
            mesh.vertices[fc[(c + 2) % 3]] - mesh.vertices[fc[(c + 1) % 3]];
        g += vertex_values[fc[c]] * n.cross(opposite);
    }
    return g / twice_area;
}

HarmonicField solve_harmonic(const TriMesh& mesh, int excised_face, std::array<int, 2> pins) {
    const int nv = mesh.num_vertices();
    if (excised_face < 0 || excised_face >= mesh.num_faces())
        throw ValidationError("excised face index out of range");
    const auto& ef = mesh.faces[excised_face];
    for (int p : pins)
        if (p != ef[0] && p != ef[1] && p != ef[2])
            throw ValidationError("pinned vertices must belong to the excised face");
    if (pins[0] == pins[1]) throw ValidationError("pinned vertices must be distinct");

    Eigen::SparseMatrix<double> A = assemble_dirichlet(mesh, excised_face);

    std::vector<int> to_free(nv, -1);
    std::vector<int> free_verts;
    free_verts.reserve(nv - 2);
    for (int v = 0; v < nv; ++v) {
        if (v == pins[0] || v == pins[1]) continue;
        to_free[v] = static_cast<int>(free_verts.size());
        free_verts.push_back(v);
    }
    const int nf = static_cast<int>(free_verts.size());

    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
    for (int col = 0; col < A.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
            int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
            if (to_free[r] < 0) continue;
            if (to_free[c] >= 0)
                trip.emplace_back(to_free[r], to_free[c], it.value());
            else if (c == pins[1])  // pin value 1; pin 0 contributes nothing
                rhs[to_free[r]] -= it.value();
        }
    }
    Eigen::SparseMatrix<double> Aff(nf, nf);
    Aff.setFromTriplets(trip.begin(), trip.end());

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(Aff);
    if (solver.info() != Eigen::Success)
        throw NumericalError("harmonic system is singular (mesh disconnected after excision?)");
    Eigen::VectorXd x = solver.solve(rhs);
    // Two refinement steps push the stationarity residual to rounding level;
    // the conformality bound downstream is residual-limited.
    for (int pass = 0; pass < 2; ++pass) {
        Eigen::VectorXd r = rhs - Aff * x;
        x += solver.solve(r);
    }

    HarmonicField field;
    field.u = Eigen::VectorXd::Zero(nv);
    field.u[pins[1]] = 1.0;
    for (int i = 0; i < nf; ++i) field.u[free_verts[i]] = x[i];
    field.excised_face = excised_face;
    field.pinned = pins;
    return field;
}

std::vector<double> conjugate_harmonic(const TriMesh& mesh, const MidEdgeMesh& mid,
                                       const HarmonicField& field) {
    const int nfaces = mesh.num_faces();
    const int excised = field.excised_face;

    std::vector<Eigen::Vector3d> gstar(nfaces, Eigen::Vector3d::Zero());
    for (int f = 0; f < nfaces; ++f) {
        if (f == excised) continue;
        double twice_area;
        Eigen::Vector3d n = face_normal_area(mesh, f, twice_area) / twice_area;
        gstar[f] = n.cross(face_gradient(mesh, f, field.u.data()));
    }

    std::vector<char> face_done(nfaces, 0);

    int first = excised == 0 ? 1 : 0;
    if (first >= nfaces) throw ValidationError("no face left after excision");

    std::queue<int> bfs;
    face_done[first] = 1;
    bfs.push(first);
    while (!bfs.empty()) {
        int f = bfs.front();
        bfs.pop();
        for (int r : mid.faces[f]) {
            for (int g : mid.vertex_faces[r]) {
                if (g < 0 || g == excised || face_done[g]) continue;
                face_done[g] = 1;
                bfs.push(g);
            }
        }
    }
    for (int f = 0; f < nfaces; ++f)
        if (f != excised && !face_done[f])
            throw NumericalError("mesh disconnected after excision");

    // Integrate the rotated gradient in the least-squares sense over all
    // in-face differences instead of along a spanning tree: tree paths
    // accumulate rounding drift that tiny, strongly compressed faces near
    // the boundary amplify, while the global solve spreads it evenly and
    // keeps every face self-consistent to storage rounding.
    const int nmv = mid.num_vertices();
    const int root = mid.faces[first][0];
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nmv - 1);
    auto col_of = [&](int r) { return r < root ? r : r - 1; };
    for (int f = 0; f < nfaces; ++f) {
        if (f == excised) continue;
        const auto& mf = mid.faces[f];
        for (int c = 0; c < 3; ++c) {
            int r = mf[c], s = mf[(c + 1) % 3];
            double b = gstar[f].dot(mid.vertices[s] - mid.vertices[r]);
            if (r != root) {
                trip.emplace_back(col_of(r), col_of(r), 1.0);
                rhs[col_of(r)] -= b;
            }
            if (s != root) {
                trip.emplace_back(col_of(s), col_of(s), 1.0);
                rhs[col_of(s)] += b;
            }
            if (r != root && s != root) {
                trip.emplace_back(col_of(r), col_of(s), -1.0);
                trip.emplace_back(col_of(s), col_of(r), -1.0);
            }
        }
    }
    Eigen::SparseMatrix<double> L(nmv - 1, nmv - 1);
    L.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(L);
    if (solver.info() != Eigen::Success)
        throw NumericalError("conjugate system is singular (mesh disconnected after excision?)");
    Eigen::VectorXd x = solver.solve(rhs);
    for (int pass = 0; pass < 2; ++pass) {
        Eigen::VectorXd r = rhs - L * x;
        x += solver.solve(r);
    }

    std::vector<double> ustar(nmv);
    ustar[root] = 0.0;
    for (int r = 0; r < nmv; ++r)
        if (r != root) ustar[r] = x[col_of(r)];

    // Path independence: re-derive every in-face difference from the rotated
    // gradient and compare with the values the BFS committed to.
    double lo = ustar[mid.faces[first][0]], hi = lo;
    for (int f = 0; f < nfaces; ++f) {
        if (f == excised) continue;
        for (int c = 0; c < 3; ++c) {
            double v = ustar[mid.faces[f][c]];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    double spread = hi - lo;
    double worst = 0.0;
    for (int f = 0; f < nfaces; ++f) {
        if (f == excised) continue;
        const auto& mf = mid.faces[f];
        for (int c = 0; c < 3; ++c) {
            int r = mf[c], s = mf[(c + 1) % 3];
            Eigen::Vector3d d = mid.vertices[s] - mid.vertices[r];
            worst = std::max(worst, std::abs(ustar[s] - ustar[r] - gstar[f].dot(d)));
        }
    }
    // The absolute term keeps rounding noise from tripping the check when
    // the conjugate is (numerically) constant.
    double umax = field.u.lpNorm<Eigen::Infinity>();
    if (worst > 1e-6 * spread + 1e-12 * (1.0 + umax))
        throw NumericalError("conjugate integration mismatch " + std::to_string(worst) +
                             " over spread " + std::to_string(spread) +
                             " (input not harmonic?)");
    return ustar;
}

FlatMap flatten(const TriMesh& mesh, const MidEdgeMesh& mid, const HarmonicField& field) {
    if (field.u_star.size() != static_cast<size_t>(mid.num_vertices()))
        throw ValidationError("harmonic field is missing its conjugate part");
    FlatMap flat;
    flat.stage = FlatStage::slit_plane;
    flat.excised_face = field.excised_face;
    flat.phi.resize(mid.num_vertices());
    for (int r = 0; r < mid.num_vertices(); ++r) {
        const MeshEdge& e = mesh.edges[r];
        flat.phi[r] = cplx(0.5 * (field.u[e.v0] + field.u[e.v1]), field.u_star[r]);
    }
    const auto& loop = mesh.boundary_loop;
    const int nb = static_cast<int>(loop.size());
    flat.boundary.reserve(nb);
    double re_lo = 0.0, re_hi = 0.0;
    for (int i = 0; i < nb; ++i) {
        int r = mesh.edge_between(loop[i], loop[(i + 1) % nb]);
        if (r < 0) throw NumericalError("boundary loop edge missing");
        flat.boundary.push_back(r);
        double x = flat.phi[r].real();
        if (i == 0) re_lo = re_hi = x;
        re_lo = std::min(re_lo, x);
        re_hi = std::max(re_hi, x);
    }
    flat.slit_interval = {re_lo, re_hi};
    return flat;
}

cplx inverse_joukowski(cplx z) {
    // w = 2 / (z + s) with s = sqrt(z - 2) sqrt(z + 2): this root lies inside
    // the unit circle for every z off the slit, and the form avoids the z - s
    // cancellation far from the origin.
    cplx s = std::sqrt(z - 2.0) * std::sqrt(z + 2.0);
    return 2.0 / (z + s);
}

FlatMap slit_to_disk(const TriMesh& mesh, const MidEdgeMesh& mid, const FlatMap& flat) {
    (void)mesh;
    if (flat.stage != FlatStage::slit_plane)
        throw ValidationError("slit_to_disk expects a slit-plane map");
    const int nb = static_cast<int>(flat.boundary.size());
    if (nb < 3) throw ValidationError("boundary too short for slit inversion");

    std::vector<double> ims(nb);
    for (int i = 0; i < nb; ++i) ims[i] = flat.phi[flat.boundary[i]].imag();
    std::vector<double> sorted = ims;
    std::sort(sorted.begin(), sorted.end());
    double median = nb % 2 ? sorted[nb / 2] : 0.5 * (sorted[nb / 2 - 1] + sorted[nb / 2]);

    double slit_len = flat.slit_interval[1] - flat.slit_interval[0];
    if (!(slit_len > 0.0)) throw NumericalError("boundary image has zero length");
    for (double im : ims)
        if (std::abs(im - median) > 1e-6 * slit_len)
            throw ValidationError("boundary image is not collinear-horizontal");

    double mid_re = 0.5 * (flat.slit_interval[0] + flat.slit_interval[1]);
    double scale = 4.0 / slit_len;

    FlatMap out;
    out.stage = FlatStage::disk;
    out.excised_face = flat.excised_face;
    out.boundary = flat.boundary;
    out.slit_interval = flat.slit_interval;
    out.slit_side.resize(nb);
    out.phi.resize(flat.phi.size());

    std::vector<char> is_boundary(flat.phi.size(), 0);
    for (int r : flat.boundary) is_boundary[r] = 1;

    // Boundary vertices: the walk keeps the surface on its left, so a bank
    // walked with increasing Re is approached from above the slit and lands
    // on the lower semicircle.
    for (int i = 0; i < nb; ++i) {
        double x_prev = (flat.phi[flat.boundary[(i + nb - 1) % nb]].real() - mid_re) * scale;
        double x_next = (flat.phi[flat.boundary[(i + 1) % nb]].real() - mid_re) * scale;
        int side = x_next - x_prev >= 0.0 ? 1 : -1;
        out.slit_side[i] = side;
        double x = (flat.phi[flat.boundary[i]].real() - mid_re) * scale;
        x = std::clamp(x, -2.0, 2.0);
        out.phi[flat.boundary[i]] = 0.5 * cplx(x, -side * std::sqrt(4.0 - x * x));
    }

    for (size_t r = 0; r < flat.phi.size(); ++r) {
        if (is_boundary[r]) continue;
        cplx z = (flat.phi[r] - cplx(mid_re, median)) * scale;
        cplx w = inverse_joukowski(z);
        double mag = std::abs(w);
        if (mag >= 1.0 + 1e-9)
            throw NumericalError("slit inversion produced |w| = " + std::to_string(mag) +
                                 " for an interior vertex");
        if (mag >= 1.0) w *= (1.0 - 1e-12) / mag;
        out.phi[r] = w;
    }
    return out;
}

DiskMobius center_disk(const MidEdgeMesh& mid, FlatMap& disk) {
    if (disk.stage != FlatStage::disk)
        throw ValidationError("center_disk expects a disk-stage map");
    const int nv = mid.num_vertices();

    std::vector<double> w(nv, 0.0);
    double wsum = 0.0;
    for (int f = 0; f < mid.num_faces(); ++f) {
        if (f == disk.excised_face) continue;
        const auto& mf = mid.faces[f];
        Eigen::Vector3d e1 = mid.vertices[mf[1]] - mid.vertices[mf[0]];
        Eigen::Vector3d e2 = mid.vertices[mf[2]] - mid.vertices[mf[0]];
        double third = e1.cross(e2).norm() / 6.0;
        for (int r : mf) w[r] += third;
        wsum += 3.0 * third;
    }
    if (!(wsum > 0.0)) throw NumericalError("empty measure in disk centering");

    // Fixed point: move the Euclidean barycenter of the mapped measure to 0,
    // recompute, repeat. Contracts for any measure with interior support.
    DiskMobius total;
    bool settled = false;
    for (int iter = 0; iter < 500 && !settled; ++iter) {
        cplx c(0.0, 0.0);
        for (int r = 0; r < nv; ++r) c += w[r] * mobius_apply(total, disk.phi[r]);
        c /= wsum;
        if (std::abs(c) < 1e-13) {
            settled = true;
            break;
        }
        DiskMobius shift;
        shift.a = c;
        total = mobius_compose(shift, total);
    }
    if (!settled) throw NumericalError("disk centering did not converge");

    std::vector<char> is_boundary(nv, 0);
    for (int r : disk.boundary) is_boundary[r] = 1;
    for (int r = 0; r < nv; ++r) {
        cplx q = mobius_apply(total, disk.phi[r]);
        if (!is_boundary[r]) {
            double mag = std::abs(q);
            if (mag >= 1.0 + 1e-9)
                throw NumericalError("disk centering pushed |w| = " + std::to_string(mag) +
                                     " for an interior vertex");
            if (mag >= 1.0) q *= (1.0 - 1e-12) / mag;
        }
        disk.phi[r] = q;
    }
    return total;
}

DiscreteConformalFactors conformal_factors(const MidEdgeMesh& mid, const FlatMap& disk_map) {
    if (disk_map.stage != FlatStage::disk)
        throw ValidationError("conformal factors need a disk-stage map");
    const int nf = mid.num_faces();
    const int nv = mid.num_vertices();
    const int excised = disk_map.excised_face;

    DiscreteConformalFactors out;
    out.mu_E_face.assign(nf, 0.0);
    for (int f = 0; f < nf; ++f) {
        if (f == excised) continue;
        const auto& mf = mid.faces[f];
        Eigen::Vector3d e1 = mid.vertices[mf[1]] - mid.vertices[mf[0]];
        Eigen::Vector3d e2 = mid.vertices[mf[2]] - mid.vertices[mf[0]];
        double area3 = 0.5 * e1.cross(e2).norm();
        cplx b = disk_map.phi[mf[1]] - disk_map.phi[mf[0]];
        cplx c = disk_map.phi[mf[2]] - disk_map.phi[mf[0]];
        double area2 = 0.5 * std::abs(b.real() * c.imag() - b.imag() * c.real());
        if (area2 <= 1e-14)
            throw NumericalError("collapsed image of mid-edge face " + std::to_string(f));
        out.mu_E_face[f] = area3 / area2;
    }

    out.mu_E_vertex.assign(nv, 0.0);
    out.mu_H_vertex.assign(nv, 0.0);
    for (int r = 0; r < nv; ++r) {
        double acc = 0.0;
        int cnt = 0;
        for (int f : mid.vertex_faces[r]) {
            if (f < 0 || f == excised) continue;
            acc += out.mu_E_face[f];
            ++cnt;
        }
        if (cnt == 0)
            throw NumericalError("mid-edge vertex " + std::to_string(r) +
                                 " has no surviving face");
        out.mu_E_vertex[r] = acc / cnt;
        double t = 1.0 - std::norm(disk_map.phi[r]);
        out.mu_H_vertex[r] = out.mu_E_vertex[r] * t * t;
    }
    return out;
}

int default_excised_face(const TriMesh& mesh, const MidEdgeMesh& mid) {
    SurfaceGraph graph = midedge_graph(mesh, mid);
    std::vector<int> boundary;
    for (int r = 0; r < mesh.num_edges(); ++r)
        if (mesh.edges[r].is_boundary()) boundary.push_back(r);
    if (boundary.empty()) throw ValidationError("mesh has no boundary");
    GeodesicField field = shortest_paths(graph, boundary);

    int best = -1;
    double best_score = -1.0;
    for (int f = 0; f < mesh.num_faces(); ++f) {
        bool interior = true;
        double score = 0.0;
        for (int r : mid.faces[f]) {
            if (mesh.edges[r].is_boundary()) interior = false;
            score += field.dist[r];
        }
        if (interior && score > best_score) {
            best_score = score;
            best = f;
        }
    }
    if (best < 0)
        throw ValidationError("mesh has no interior face to excise (too coarse)");
    return best;
}

Uniformization uniformize(const TriMesh& mesh, int excised_face) {
    Uniformization uni;
    uni.midedge = build_midedge(mesh);
    if (excised_face < 0) excised_face = default_excised_face(mesh, uni.midedge);
    if (excised_face >= mesh.num_faces())
        throw ValidationError("excised face index out of range");
    for (int r : uni.midedge.faces[excised_face])
        if (mesh.edges[r].is_boundary())
            throw ValidationError("excised face must not touch the boundary");
    const auto& ef = mesh.faces[excised_face];
    uni.field = solve_harmonic(mesh, excised_face, {ef[0], ef[1]});
    uni.field.u_star = conjugate_harmonic(mesh, uni.midedge, uni.field);
    uni.slit = flatten(mesh, uni.midedge, uni.field);
    uni.disk = slit_to_disk(mesh, uni.midedge, uni.slit);
    center_disk(uni.midedge, uni.disk);
    uni.factors = conformal_factors(uni.midedge, uni.disk);
    return uni;
}

} // namespace surfot
