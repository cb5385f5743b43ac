#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "layered_elastica/medium.hpp"
#include "layered_elastica/quadrature.hpp"
#include "layered_elastica/specfun.hpp"

using namespace le;

TEST_CASE("Gauss-Legendre rule") {
    std::vector<double> x, w;
    for (int n : {4, 7, 16, 40}) {
        gauss_legendre(n, x, w);
        REQUIRE(x.size() == (size_t)n);
        for (int p = 0; p < 2 * n; ++p) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], p);
            double ref = p % 2 ? 0.0 : 2.0 / (p + 1);
            CHECK(s == doctest::Approx(ref).epsilon(1e-13));
        }
    }
}

TEST_CASE("Fourier inversion: image-point identity") {
    auto f = [](cplx xi) {
        cplx b = beta(xi, 1.0);
        return std::exp(-2.0 * b) / (2.0 * b);
    };
    QuadResult r = fourier_inversion(f, 2.0, 1e-12, {1.0});
    CHECK(std::abs(r.value - cplx(-0.1275939182, 0.0559726948)) < 1e-9);
    CHECK(std::abs(r.value - 0.25 * I * hankel1(0, 2.0)) < 1e-10);
    CHECK(r.error_estimate < 1e-10);
}

TEST_CASE("Fourier inversion: shifted source, rotated tails") {
    for (double D : {0.0, 1.5, -4.0})
        for (bool rot : {false, true}) {
            SpectralSetup s;
            s.branch_points = {1.3};
            s.decay_rate = 0.7;
            s.shift = D;
            s.oscillation = std::abs(D);
            s.rotate_tails = rot;
            QuadConfig c;
            c.tol = 1e-12;
            auto q = fourier_inversion_vec(
                1,
                [](cplx xi, cplx* o) {
                    cplx b = beta(xi, 1.3);
                    o[0] = std::exp(-b * 0.7) / (2.0 * b);
                },
                s, c);
            // the shift enters through the kernel factor exp(i xi D)
            auto q2 = fourier_inversion_vec(
                1,
                [D](cplx xi, cplx* o) {
                    cplx b = beta(xi, 1.3);
                    o[0] = std::exp(-b * 0.7 + I * xi * D) / (2.0 * b);
                },
                s, c);
            cplx e = q2.value[0] - 0.25 * I * hankel1(0, 1.3 * std::hypot(0.7, D));
            CHECK(std::abs(e) < 1e-9);
            if (D == 0.0) CHECK(std::abs(q.value[0] - q2.value[0]) < 1e-12);
        }
}

TEST_CASE("Fourier inversion: trivial kernels") {
    QuadResult z = fourier_inversion([](cplx) { return cplx(0.0); }, 1.0, 1e-10, {1.0});
    CHECK(z.value == cplx(0.0));
    CHECK(z.error_estimate == 0.0);
    QuadResult odd = fourier_inversion(
        [](cplx xi) {
            cplx b = beta(xi, 1.0);
            return xi * std::exp(-b) / b;
        },
        1.0, 1e-11, {1.0});
    CHECK(std::abs(odd.value) < 1e-10);
}

TEST_CASE("Hankel path integral: free-space value") {
    auto f = [](cplx xi) {
        cplx b = beta(xi, 1.0);
        return std::exp(-2.0 * b) / (2.0 * b);
    };
    QuadResult r = hankel_path_integral(f, 0, 0.0, 2.0, 1e-12, {1.0});
    CHECK(std::abs(r.value - cplx(-0.0165579565, 0.0361797951)) < 1e-9);
    CHECK(std::abs(r.value - std::exp(2.0 * I) / (8 * pi)) < 1e-11);
    for (double rho : {0.3, 1.0, 3.0, 10.0})
        for (HankelRoute route : {HankelRoute::automatic, HankelRoute::path_c, HankelRoute::j_form}) {
            QuadResult q = hankel_path_integral(f, 0, rho, 2.0, 1e-12, {1.0}, {}, route);
            double R = std::hypot(rho, 2.0);
            CHECK(std::abs(q.value - std::exp(I * R) / (4 * pi * R)) < 1e-9);
        }
}

TEST_CASE("Hankel path integral: decay in rho and zero kernel") {
    auto f = [](cplx xi) {
        cplx b = beta(xi, 1.0);
        return std::exp(-0.5 * b) / (2.0 * b);
    };
    double first = 0.0;
    for (double rho : {10.0, 20.0, 40.0, 80.0}) {
        double v = std::sqrt(rho) * std::abs(hankel_path_integral(f, 0, rho, 0.5, 1e-12, {1.0}).value);
        if (first == 0.0) first = v;
        CHECK(v <= 1.01 * first);
    }
    QuadResult z = hankel_path_integral([](cplx) { return cplx(0.0); }, 1, 2.0, 1.0, 1e-10, {1.0});
    CHECK(std::abs(z.value) == 0.0);
}

TEST_CASE("path integration on lines and arcs") {
    QuadConfig c;
    c.tol = 1e-13;
    SpectralPath p;
    Segment line;
    line.a = cplx(-1.0, 0.0);
    line.b = cplx(2.0, 1.0);
    p.segments.push_back(line);
    auto poly = [](cplx z, cplx* o) { o[0] = z * z * z - 2.0 * z; };
    auto prim = [](cplx z) { return z * z * z * z / 4.0 - z * z; };
    QuadResultN r = integrate_path(p, 1, poly, c);
    CHECK(std::abs(r.value[0] - (prim(line.b) - prim(line.a))) < 1e-12);

    SpectralPath q;
    Segment arc;
    arc.kind = Segment::Kind::arc;
    arc.center = 0.0;
    arc.radius = 1.0;
    arc.theta0 = 0.0;
    arc.theta1 = 2 * pi;
    q.segments.push_back(arc);
    QuadResultN s = integrate_path(q, 2, [](cplx z, cplx* o) { o[0] = 1.0 / z; o[1] = z * z; }, c);
    CHECK(std::abs(s.value[0] - 2.0 * pi * I) < 1e-12);
    CHECK(std::abs(s.value[1]) < 1e-12);
}

TEST_CASE("fourier path cuts at the branch points") {
    SpectralPath p = fourier_path({1.0, 2.0}, 10.0, 0.1);
    CHECK(p.segments.front().a.real() == doctest::Approx(-10.0));
    CHECK(p.segments.back().b.real() == doctest::Approx(10.0));
    double len = 0;
    for (const auto& s : p.segments) len += s.length();
    CHECK(len > 20.0);
}

TEST_CASE("quadrature config JSON") {
    QuadConfig c = quad_config_from_json("{\"tol\": 1e-8, \"node_budget\": 5000}");
    CHECK(c.tol == 1e-8);
    CHECK(c.node_budget == 5000);
    CHECK_THROWS_AS(quad_config_from_json("{\"tol\": -1}"), Error);
}
