#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Sparse>

#include "surfot/hyperbolic.hpp"
#include "surfot/mesh.hpp"

namespace surfot {

// Stiffness matrix of the piecewise-linear Dirichlet energy: entry (i, j) is
// the integral of <grad phi_i, grad phi_j> over the surface (the cotangent
// assembly). Symmetric, rows sum to zero. Faces equal to `excised_face` are
// left out of the assembly.
Eigen::SparseMatrix<double> assemble_dirichlet(const TriMesh& mesh, int excised_face = -1);

// In-plane gradient of the linear interpolant of `vertex_values` over face f.
Eigen::Vector3d face_gradient(const TriMesh& mesh, int f, const double* vertex_values);

struct HarmonicField {
    Eigen::VectorXd u;           // per parent vertex
    std::vector<double> u_star;  // per mid-edge vertex (conjugate)
    int excised_face = -1;
    std::array<int, 2> pinned{-1, -1};  // vertices held at 0 and 1
};

// Minimize the Dirichlet energy over the mesh minus the excised face with
// u(pins[0]) = 0 and u(pins[1]) = 1. Direct sparse factorization plus
// iterative refinement; bitwise deterministic for identical inputs.
HarmonicField solve_harmonic(const TriMesh& mesh, int excised_face, std::array<int, 2> pins);

// Integrate the conjugate field: on each remaining face the gradient of
// u_star is grad u rotated a quarter turn counterclockwise in the face plane.
// The base value is 0 at the first mid-edge vertex of the first remaining
// face. Throws NumericalError when re-integration along different paths
// disagrees by more than 1e-6 (relative to the value spread).
std::vector<double> conjugate_harmonic(const TriMesh& mesh, const MidEdgeMesh& mid,
                                       const HarmonicField& field);

enum class FlatStage { slit_plane, disk };

struct FlatMap {
    std::vector<cplx> phi;  // per mid-edge vertex
    FlatStage stage = FlatStage::slit_plane;
    int excised_face = -1;
    // Boundary mid-edge vertices in parent-loop order; slit_side[i] is +1
    // when boundary[i] is approached from above the slit, -1 from below
    // (meaningful in disk stage).
    std::vector<int> boundary;
    std::vector<int> slit_side;
    // Real interval covered by the boundary image before normalization.
    std::array<double, 2> slit_interval{0.0, 0.0};
};

// Phi(v_r) = u(v_r) + i * u_star(v_r), with u at a mid-edge vertex taken as
// the mean of its parent edge's endpoint values. Slit-plane stage.
FlatMap flatten(const TriMesh& mesh, const MidEdgeMesh& mid, const HarmonicField& field);

// The root of w + 1/w = z lying in the closed unit disk. Continuous off the
// slit [-2, 2]; the two banks of the slit map to the two semicircles.
cplx inverse_joukowski(cplx z);

// Normalize the slit image to [-2, 2] and invert z = w + 1/w, landing the
// mesh in the closed unit disk: interior vertices strictly inside, boundary
// vertices on the circle (the two slit banks fill the two semicircles).
FlatMap slit_to_disk(const TriMesh& mesh, const MidEdgeMesh& mid, const FlatMap& flat);

// The slit inversion fixes the disk image only up to a disk automorphism:
// where the mesh lands depends on where the excised face drifted during
// flattening. Post-compose with the automorphism that moves the area-weighted
// barycenter of the image to the origin, making the coordinates canonical so
// isometric surfaces receive near-identical frames. Returns the applied map.
DiskMobius center_disk(const MidEdgeMesh& mid, FlatMap& disk);

struct DiscreteConformalFactors {
    std::vector<double> mu_E_face;    // excised face slot holds 0
    std::vector<double> mu_E_vertex;  // mean of the 1-2 adjacent face factors
    std::vector<double> mu_H_vertex;  // mu_E * (1 - |phi|^2)^2
};

DiscreteConformalFactors conformal_factors(const MidEdgeMesh& mid, const FlatMap& disk_map);

// Face whose mid-edge vertices are farthest (graph-geodesically) from the
// boundary; ties resolve to the lowest face index.
int default_excised_face(const TriMesh& mesh, const MidEdgeMesh& mid);

struct Uniformization {
    MidEdgeMesh midedge;
    HarmonicField field;
    FlatMap slit;  // slit-plane stage, kept for diagnostics
    FlatMap disk;
    DiscreteConformalFactors factors;
};

// Full chain: mid-edge build, harmonic solve, conjugate, flatten, disk map,
// conformal factors. excised_face < 0 selects the default face.
Uniformization uniformize(const TriMesh& mesh, int excised_face = -1);

} // namespace surfot
