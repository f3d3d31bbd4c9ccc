#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "surfot/hyperbolic.hpp"
#include "surfot/rng.hpp"

using namespace surfot;

namespace {

// Deterministic pseudo-random disk points / unit phases for the property
// checks.
cplx random_disk_point(std::uint64_t& state, double max_r = 0.9) {
    state = splitmix64(state);
    double r = max_r * std::sqrt(to_unit(state));
    state = splitmix64(state);
    return std::polar(r, 2.0 * M_PI * to_unit(state));
}

cplx random_phase(std::uint64_t& state) {
    state = splitmix64(state);
    return std::polar(1.0, 2.0 * M_PI * to_unit(state));
}

DiskMobius random_mobius(std::uint64_t& state) {
    DiskMobius m;
    m.a = random_disk_point(state);
    m.tau = random_phase(state);
    return m;
}

} // namespace

TEST_CASE("identity map") {
    DiskMobius id;  // a = 0, tau = 1
    cplx z(0.3, 0.4);
    CHECK(mobius_apply(id, z) == z);
}

TEST_CASE("m(a) = 0") {
    DiskMobius m;
    m.a = 0.5;
    CHECK(std::abs(mobius_apply(m, cplx(0.5, 0.0))) == 0.0);
}

TEST_CASE("hyperbolic isometry identity") {
    // (1-|m(z)|^2)^-2 |m'(z)|^2 == (1-|z|^2)^-2, via finite-difference-free
    // closed form |m'(z)| = (1-|a|^2)/|1-conj(a) z|^2.
    std::uint64_t state = 7;
    cplx z(0.2, 0.1);
    for (int t = 0; t < 50; ++t) {
        DiskMobius m = random_mobius(state);
        double deriv = (1.0 - std::norm(m.a)) / std::norm(1.0 - std::conj(m.a) * z);
        double lhs = deriv * deriv / std::pow(1.0 - std::norm(mobius_apply(m, z)), 2);
        double rhs = 1.0 / std::pow(1.0 - std::norm(z), 2);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("compose against pointwise application") {
    std::uint64_t state = 11;
    for (int t = 0; t < 50; ++t) {
        DiskMobius m1 = random_mobius(state);
        DiskMobius m2 = random_mobius(state);
        DiskMobius c = mobius_compose(m1, m2);
        CHECK(std::abs(c.a) < 1.0);
        CHECK(std::abs(std::abs(c.tau) - 1.0) <= 1e-12);
        for (int p = 0; p < 10; ++p) {
            cplx z = random_disk_point(state);
            cplx direct = mobius_apply(m1, mobius_apply(m2, z));
            CHECK(std::abs(mobius_apply(c, z) - direct) <= 1e-12);
        }
    }
}

TEST_CASE("inverse undoes the map") {
    std::uint64_t state = 13;
    for (int t = 0; t < 50; ++t) {
        DiskMobius m = random_mobius(state);
        DiskMobius c = mobius_compose(m, mobius_inverse(m));
        CHECK(std::abs(c.a) <= 1e-12);
        CHECK(std::abs(c.tau - 1.0) <= 1e-12);
        cplx z = random_disk_point(state);
        CHECK(std::abs(mobius_apply(mobius_inverse(m), mobius_apply(m, z)) - z) <= 1e-12);
    }
}

TEST_CASE("compose with identity") {
    std::uint64_t state = 17;
    DiskMobius m = random_mobius(state);
    DiskMobius c = mobius_compose(DiskMobius{}, m);
    cplx z = random_disk_point(state);
    CHECK(std::abs(mobius_apply(c, z) - mobius_apply(m, z)) <= 1e-15);
}

TEST_CASE("composition associativity") {
    std::uint64_t state = 19;
    DiskMobius m1 = random_mobius(state);
    DiskMobius m2 = random_mobius(state);
    DiskMobius m3 = random_mobius(state);
    DiskMobius left = mobius_compose(mobius_compose(m1, m2), m3);
    DiskMobius right = mobius_compose(m1, mobius_compose(m2, m3));
    for (int p = 0; p < 10; ++p) {
        cplx z = random_disk_point(state);
        CHECK(std::abs(mobius_apply(left, z) - mobius_apply(right, z)) <= 1e-12);
    }
}

TEST_CASE("family at the origin is the identity") {
    DiskMobius m = mobius_family(0.0, 0.0, 1.0);
    CHECK(m.a == cplx(0.0, 0.0));
    CHECK(m.tau == cplx(1.0, 0.0));
}

TEST_CASE("family with w0 = 0 recovers the centering map") {
    DiskMobius m = mobius_family(0.5, 0.0, 1.0);
    CHECK(std::abs(m.a - 0.5) <= 1e-15);
    CHECK(std::abs(m.tau - 1.0) <= 1e-15);
    CHECK(std::abs(mobius_apply(m, cplx(0.25, 0.0)) - (0.25 - 0.5) / (1.0 - 0.125)) <= 1e-15);
}

TEST_CASE("family sends z0 to w0") {
    std::uint64_t state = 23;
    for (int t = 0; t < 100; ++t) {
        cplx z0 = random_disk_point(state);
        cplx w0 = random_disk_point(state);
        cplx sigma = random_phase(state);
        DiskMobius m = mobius_family(z0, w0, sigma);
        CHECK(std::abs(m.a) < 1.0);
        CHECK(std::abs(std::abs(m.tau) - 1.0) <= 1e-12);
        CHECK(std::abs(mobius_apply(m, z0) - w0) <= 1e-12);
    }
}

TEST_CASE("base point map") {
    DiskMobius id = base_mobius(0.0);
    CHECK(id.a == cplx(0.0, 0.0));
    CHECK(id.tau == cplx(1.0, 0.0));

    DiskMobius m = base_mobius(0.5);
    CHECK(std::abs(mobius_apply(m, cplx(0.0, 0.0)) - 0.5) <= 1e-15);
    CHECK(std::abs(mobius_apply(m, cplx(0.5, 0.0)) - 0.8) <= 1e-15);

    std::uint64_t state = 29;
    for (int t = 0; t < 50; ++t) {
        cplx z = random_disk_point(state);
        CHECK(std::abs(mobius_apply(base_mobius(z), cplx(0.0, 0.0)) - z) <= 1e-14);
    }
}

TEST_CASE("hyperbolic distance basics") {
    CHECK(hyperbolic_distance(0.0, 0.0) == 0.0);
    CHECK(hyperbolic_distance(0.0, std::tanh(1.0)) == doctest::Approx(1.0).epsilon(1e-14));

    std::uint64_t state = 31;
    for (int t = 0; t < 50; ++t) {
        cplx z = random_disk_point(state);
        cplx w = random_disk_point(state);
        CHECK(hyperbolic_distance(z, w) == hyperbolic_distance(w, z));
        DiskMobius m = random_mobius(state);
        double before = hyperbolic_distance(z, w);
        double after = hyperbolic_distance(mobius_apply(m, z), mobius_apply(m, w));
        CHECK(after == doctest::Approx(before).epsilon(1e-12));
    }
}

TEST_CASE("quadrature with one center carries the full area") {
    QuadratureGrid g = build_quadrature(1.0, 1, 42);
    REQUIRE(g.size() == 1);
    CHECK(g.r_R == doctest::Approx(std::tanh(1.0)).epsilon(1e-15));
    CHECK(g.total_weight() ==
          doctest::Approx(M_PI * std::sinh(1.0) * std::sinh(1.0)).epsilon(1e-12));
}

TEST_CASE("quadrature total weight matches the hyperbolic area") {
    for (double R : {0.5, 1.0}) {
        QuadratureGrid g = build_quadrature(R, 100, 1);
        double area = M_PI * std::sinh(R) * std::sinh(R);
        CHECK(g.total_weight() == doctest::Approx(area).epsilon(1e-3));
        for (int k = 0; k < g.size(); ++k) {
            CHECK(std::abs(g.centers[k]) <= g.r_R + 1e-15);
            CHECK(g.weights[k] > 0.0);
        }
    }
}

TEST_CASE("quadrature is deterministic") {
    QuadratureGrid a = build_quadrature(1.0, 64, 9);
    QuadratureGrid b = build_quadrature(1.0, 64, 9);
    REQUIRE(a.size() == b.size());
    for (int k = 0; k < a.size(); ++k) {
        CHECK(a.centers[k] == b.centers[k]);
        CHECK(a.weights[k] == b.weights[k]);
    }
}

TEST_CASE("quadrature error shrinks with K") {
    // Exact integrals over the hyperbolic disk of radius R = 1:
    //   f = 1                -> pi sinh^2(1)
    //   f = (1 - |z|^2)^2    -> pi tanh^2(1)
    double area = M_PI * std::sinh(1.0) * std::sinh(1.0);
    double smooth = M_PI * std::tanh(1.0) * std::tanh(1.0);
    auto f_one = [](cplx) { return 1.0; };
    auto f_smooth = [](cplx z) { return std::pow(1.0 - std::norm(z), 2); };

    std::vector<double> err_one, err_smooth;
    for (int K : {50, 100, 300, 1000}) {
        QuadratureGrid g = build_quadrature(1.0, K, 5);
        err_one.push_back(std::abs(g.integrate(f_one) - area));
        err_smooth.push_back(std::abs(g.integrate(f_smooth) - smooth));
    }
    // The constant integrand is reproduced to additive rounding noise at
    // every K (the weights are exact cell areas); monotonicity is only
    // meaningful above that floor.
    double floor_one = 1e-12 * area;
    for (size_t i = 0; i + 1 < err_one.size(); ++i)
        CHECK(std::max(err_one[i + 1], floor_one) <= std::max(err_one[i], floor_one) * (1 + 1e-9));
    CHECK(std::max(err_one[3], floor_one) <= std::max(err_one[1] / 3.0, floor_one));

    double floor_smooth = 1e-12 * smooth;
    for (size_t i = 0; i + 1 < err_smooth.size(); ++i)
        CHECK(err_smooth[i + 1] <= std::max(err_smooth[i], floor_smooth) * (1 + 1e-9));
    CHECK(err_smooth[3] <= std::max(err_smooth[1] / 3.0, floor_smooth));
}

TEST_CASE("family maps the quadrature neighborhood onto the target neighborhood") {
    QuadratureGrid g = build_quadrature(1.0, 200, 3);
    std::uint64_t state = 37;
    for (int t = 0; t < 20; ++t) {
        cplx z = random_disk_point(state, 0.7);
        cplx w = random_disk_point(state, 0.7);
        cplx sigma = random_phase(state);
        DiskMobius m = mobius_family(z, w, sigma);
        DiskMobius base = base_mobius(z);
        for (int k = 0; k < g.size(); ++k) {
            cplx q = mobius_apply(base, g.centers[k]);  // point of Omega_{z,R}
            CHECK(hyperbolic_distance(w, mobius_apply(m, q)) <= 1.0 + 1e-9);
        }
    }
}
