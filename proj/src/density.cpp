#include "surfot/density.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "surfot/errors.hpp"

namespace surfot {

ConformalDensity fit_density(const std::vector<cplx>& centers, const std::vector<cplx>& points,
                             const std::vector<double>& values, double lambda) {
    const int n = static_cast<int>(centers.size());
    const int m = static_cast<int>(points.size());
    if (n < 3) throw ValidationError("density fit needs at least 3 centers");
    if (m == 0 || m != static_cast<int>(values.size()))
        throw ValidationError("density fit needs a value per data point");
    if (!(lambda > 0.0) || lambda > 1.0) throw ValidationError("lambda must lie in (0, 1]");

    // gamma(z) = p1(z) + sum b_i psi(|z - z_i|); minimize
    //   lambda |E b + P a - v|^2 + (1 - lambda) b^T K b
    // over the moment conditions Pc^T b = 0. E is the data-by-center kernel
    // matrix, K the center kernel matrix, P/Pc the affine design blocks.
    Eigen::MatrixXd E(m, n), P(m, 3), K(n, n), Pc(n, 3);
    for (int r = 0; r < m; ++r) {
        for (int i = 0; i < n; ++i) E(r, i) = tps_kernel_sq(std::norm(points[r] - centers[i]));
        P(r, 0) = 1.0;
        P(r, 1) = points[r].real();
        P(r, 2) = points[r].imag();
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) K(i, j) = tps_kernel_sq(std::norm(centers[i] - centers[j]));
        Pc(i, 0) = 1.0;
        Pc(i, 1) = centers[i].real();
        Pc(i, 2) = centers[i].imag();
    }
    Eigen::Map<const Eigen::VectorXd> v(values.data(), m);

    const int dim = n + 6;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    A.topLeftCorner(n, n) = lambda * (E.transpose() * E) + (1.0 - lambda) * K;
    A.block(0, n, n, 3) = lambda * (E.transpose() * P);
    A.block(n, 0, 3, n) = lambda * (P.transpose() * E);
    A.block(n, n, 3, 3) = lambda * (P.transpose() * P);
    A.block(0, n + 3, n, 3) = Pc;
    A.block(n + 3, 0, 3, n) = Pc.transpose();
    rhs.head(n) = lambda * (E.transpose() * v);
    rhs.segment(n, 3) = lambda * (P.transpose() * v);

    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible())
        throw ValidationError("rank-deficient center configuration");
    Eigen::VectorXd sol = lu.solve(rhs);

    ConformalDensity d;
    d.centers = centers;
    d.b = sol.head(n);
    d.p1 = sol.segment(n, 3);
    d.lambda = lambda;
    d.floor_epsilon = 1e-8 * (v.sum() / m);
    return d;
}

} // namespace surfot
