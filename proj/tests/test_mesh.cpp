#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "layered_elastica/mesh.hpp"

using namespace le;

namespace {

double jac(const DiskMesh& m, int t, double xi, double eta) {
    double N[6], dN[6][2];
    p2_shape(xi, eta, N, dN);
    Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
    for (int a = 0; a < 6; ++a) J += m.nodes[m.tris[t][a]] * Eigen::RowVector2d(dN[a][0], dN[a][1]);
    return J.determinant();
}

double area(const DiskMesh& m, Side* only = nullptr) {
    TriRule q = triangle_rule(6);
    double A = 0.0;
    for (int t = 0; t < (int)m.tris.size(); ++t) {
        if (only && m.region[t] != *only) continue;
        for (size_t i = 0; i < q.w.size(); ++i) A += q.w[i] * jac(m, t, q.xi[i], q.eta[i]);
    }
    return A;
}

}  // namespace

TEST_CASE("P2 shape functions") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(0, 1);
    for (int n = 0; n < 50; ++n) {
        double xi = U(rng), eta = U(rng) * (1 - xi), N[6], dN[6][2];
        p2_shape(xi, eta, N, dN);
        double s = 0, d0 = 0, d1 = 0, x = 0;
        for (int a = 0; a < 6; ++a) {
            s += N[a];
            d0 += dN[a][0];
            d1 += dN[a][1];
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(d0) < 1e-13);
        CHECK(std::abs(d1) < 1e-13);
        // nodal coordinates (0,0) (1,0) (0,1) (.5,0) (.5,.5) (0,.5) reproduce xi
        const double nx[6] = {0, 1, 0, 0.5, 0.5, 0};
        for (int a = 0; a < 6; ++a) x += N[a] * nx[a];
        CHECK(x == doctest::Approx(xi).epsilon(1e-14));
    }
}

TEST_CASE("triangle rule") {
    for (int n : {2, 4, 6}) {
        TriRule q = triangle_rule(n);
        double w = 0, m = 0;
        for (size_t i = 0; i < q.w.size(); ++i) {
            w += q.w[i];
            m += q.w[i] * q.xi[i] * q.eta[i];
            CHECK(q.xi[i] + q.eta[i] <= 1.0 + 1e-15);
        }
        CHECK(w == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(m == doctest::Approx(1.0 / 24.0).epsilon(1e-13));
    }
}

TEST_CASE("flat disk mesh") {
    DiskMesh m = make_disk_mesh(2.0, 8, 4, SurfaceProfile::flat());
    CHECK(m.R == 2.0);
    Side up = Side::plus, dn = Side::minus;
    CHECK(area(m, &up) == doctest::Approx(area(m, &dn)).epsilon(1e-13));
    // isoparametric P2 arcs: area error of order h^4
    double e0 = std::abs(area(m) - 4 * pi);
    DiskMesh r = refine(m, SurfaceProfile::flat());
    double e1 = std::abs(area(r) - 4 * pi);
    CHECK(e0 < 1e-4);
    CHECK(e0 / e1 > 12.0);
    for (int t = 0; t < (int)m.tris.size(); ++t) CHECK(jac(m, t, 1.0 / 3, 1.0 / 3) > 0);

    double span = 0.0;
    for (const auto& e : m.interface) {
        for (int k : e.nodes) CHECK(std::abs(m.nodes[k](1)) < 1e-14);
        span += m.nodes[e.nodes[2]](0) - m.nodes[e.nodes[0]](0);
        CHECK(m.region[e.tri_plus] == Side::plus);
        CHECK(m.region[e.tri_minus] == Side::minus);
    }
    CHECK(span == doctest::Approx(4.0));
    double arc = 0.0;
    for (const auto& b : m.boundary) {
        for (int k : b.nodes) CHECK(m.nodes[k].norm() == doctest::Approx(2.0).epsilon(1e-14));
        arc += b.theta1 - b.theta0;
    }
    CHECK(arc == doctest::Approx(2 * pi));
}

TEST_CASE("bump mesh conforms to the profile") {
    SurfaceProfile p = SurfaceProfile::bump(0.3, 0.8, 0.1);
    DiskMesh m = make_disk_mesh(3.0, 10, 4, p);
    for (const auto& e : m.interface)
        for (int k : e.nodes) CHECK(std::abs(m.nodes[k](1) - p(m.nodes[k](0))) < 1e-13);
    for (int t = 0; t < (int)m.tris.size(); ++t) CHECK(jac(m, t, 1.0 / 3, 1.0 / 3) > 0);
    // the bump moves area from the lower to the upper region
    double bump_area = 0.0;
    for (int i = 0; i < 4000; ++i) {
        double x = 0.1 - 0.8 + 1.6 * (i + 0.5) / 4000;
        bump_area += p(x) * 1.6 / 4000;
    }
    Side dn = Side::minus;
    double e[3];
    for (int r = 0; r < 3; ++r) {
        e[r] = std::abs(area(m, &dn) - 4.5 * pi - bump_area);
        CHECK(area(m) == doctest::Approx(9 * pi).epsilon(1e-5));
        m = refine(m, p);
    }
    CHECK(e[0] < 1e-3);
    CHECK(e[1] < 0.1 * e[0]);
    CHECK(e[2] < 0.5 * e[1]);
}

TEST_CASE("point location") {
    DiskMesh m = make_disk_mesh(2.0, 8, 4, SurfaceProfile::bump(0.2, 0.7));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-2, 2);
    int found = 0;
    for (int n = 0; n < 300; ++n) {
        Vec2 x(U(rng), U(rng)), ref;
        int t = m.locate(x, ref);
        if (x.norm() > 1.99) continue;
        REQUIRE(t >= 0);
        ++found;
        CHECK((map_point(m, t, ref(0), ref(1)) - x).norm() < 1e-10);
    }
    CHECK(found > 100);
    Vec2 ref;
    CHECK(m.locate(Vec2(2.5, 0.0), ref) == -1);
}

TEST_CASE("refinement doubles the cells") {
    SurfaceProfile p = SurfaceProfile::bump(0.2, 0.7);
    DiskMesh a = make_disk_mesh(2.0, 8, 4, p), b = refine(a, p);
    CHECK(b.core_cells == 16);
    CHECK(b.ring_cells == 8);
    CHECK(b.tris.size() == 4 * a.tris.size());
    CHECK(b.interface.size() == 2 * a.interface.size());
    DiskMesh c = make_disk_mesh(2.0, 0.1, p);
    CHECK(c.h <= 0.1 + 1e-12);
}

TEST_CASE("profiles") {
    SurfaceProfile b = SurfaceProfile::bump(0.5, 1.0, 0.2);
    CHECK(b(0.2) == doctest::Approx(0.5));
    CHECK(b(1.2) == 0.0);
    CHECK(b.support_radius == doctest::Approx(1.2));
    const double h = 1e-6;
    for (double x : {-0.5, 0.0, 0.6, 1.1}) CHECK(b.slope(x) == doctest::Approx((b(x + h) - b(x - h)) / (2 * h)).epsilon(1e-6));
    CHECK(b.max_abs() == doctest::Approx(0.5).epsilon(1e-6));

    SurfaceProfile s = SurfaceProfile::samples({-1, -0.5, 0, 0.5, 1}, {0, 0.1, 0.2, 0.05, 0});
    CHECK(s(0.0) == doctest::Approx(0.2));
    CHECK(s(0.5) == doctest::Approx(0.05));
    CHECK(s(2.0) == 0.0);
    CHECK(std::abs(s.slope(-1.0)) < 1e-12);
    CHECK_THROWS_AS(SurfaceProfile::samples({-1, 0, 1}, {0.1, 0.2, 0}), Error);

    SurfaceProfile j = profile_from_json(R"({"type": "bump", "height": 0.3, "half_width": 0.5})");
    CHECK(j.type == "bump");
    CHECK(j(0.0) == doctest::Approx(0.3));
    CHECK(profile_from_json(R"({"type": "flat"})").is_flat());
    CHECK(profile_from_json(R"({"type": "samples", "x": [-1, 0, 1], "f": [0, 0.1, 0]})")(0.0) == doctest::Approx(0.1));
    CHECK_THROWS_AS(profile_from_json(R"({"type": "wave"})"), Error);
    CHECK_THROWS_AS(profile_from_json("[1, 2"), Error);
}

TEST_CASE("profile validation") {
    CHECK_NOTHROW(check_profile(SurfaceProfile::bump(0.2, 0.7), 2.0));
    CHECK_THROWS_AS(check_profile(SurfaceProfile::bump(0.2, 1.5), 2.0), Error);
    CHECK_THROWS_AS(check_profile(SurfaceProfile::bump(3.0, 0.7), 2.0), Error);
    CHECK_THROWS_AS(make_disk_mesh(2.0, 8, 4, SurfaceProfile::bump(0.2, 1.5)), Error);
}
