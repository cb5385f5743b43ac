#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "layered_elastica/specfun.hpp"

using namespace le;

namespace {

// Power series in long double, used for |z| <= 6.
cplx j_series(int m, cplx z) {
    using C = std::complex<long double>;
    C h = C(z) / 2.0L, q = -h * h, term = 1.0L;
    for (int i = 1; i <= m; ++i) term *= h / (long double)i;
    C sum = term;
    for (int k = 1; k < 80; ++k) {
        term *= q / ((long double)k * (long double)(k + m));
        sum += term;
    }
    return cplx((double)sum.real(), (double)sum.imag());
}

}  // namespace

TEST_CASE("Bessel J values") {
    CHECK(std::abs(bessel_j(0, 0.0) - 1.0) < 1e-15);
    CHECK(std::abs(bessel_j(1, 0.0)) < 1e-15);
    CHECK(std::abs(bessel_j(0, 1.0) - 0.7651976866) < 1e-10);
}

TEST_CASE("Hankel values") {
    CHECK(std::abs(hankel1(0, 1.0) - cplx(0.7651976866, 0.0882569642)) < 1e-10);
    cplx lead = hankel1(1, 100.0) * std::sqrt(pi * 100.0 / 2.0) * std::exp(-I * (100.0 - 3 * pi / 4));
    CHECK(std::abs(lead - 1.0) < 0.01);
}

TEST_CASE("continuation to negative arguments") {
    cplx r = bessel_j(2, 5.0) - 0.5 * (hankel1(2, 5.0) - hankel1(2, -5.0));
    CHECK(std::abs(r) < 1e-10);
    for (int m = 0; m <= 2; ++m)
        for (double x : {0.3, 2.0, 7.5, 30.0}) {
            cplx s = m % 2 ? -1.0 : 1.0;
            CHECK(std::abs(bessel_j(m, x) - 0.5 * (hankel1(m, x) - s * hankel1(m, -x))) < 1e-10);
        }
}

TEST_CASE("J against the power series") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-4, 4);
    for (int n = 0; n < 300; ++n) {
        cplx z(U(rng), 0.5 * U(rng));
        for (int m = 0; m <= 2; ++m) {
            cplx ref = j_series(m, z);
            CHECK(std::abs(bessel_j(m, z) - ref) < 1e-13 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("Wronskian and recurrence") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(0.05, 40);
    for (int n = 0; n < 300; ++n) {
        // arguments in the closed upper half plane, off the cut
        cplx z(U(rng) * (n % 2 ? 1 : -1), 0.1 * U(rng));
        cplx j0 = bessel_j(0, z), j1 = bessel_j(1, z), j2 = bessel_j(2, z);
        cplx y0 = bessel_y(0, z), y1 = bessel_y(1, z);
        cplx w = j1 * y0 - j0 * y1, ref = 2.0 / (pi * z);
        double scale = std::max(1.0, std::abs(j0) * std::abs(y1) + std::abs(j1) * std::abs(y0));
        CHECK(std::abs(w - ref) < 1e-12 * scale);
        CHECK(std::abs(j0 + j2 - 2.0 / z * j1) < 1e-12 * std::max(1.0, std::abs(j0) + std::abs(j2)));
        CHECK(std::abs(hankel1(0, z) - (j0 + I * y0)) < 1e-12 * std::max(1.0, std::abs(y0)));
    }
}

TEST_CASE("general integer orders") {
    for (int m = 0; m <= 6; ++m)
        for (double x : {0.5, 3.0, 9.0}) {
            CHECK(std::abs(detail::bessel_j_any(m, x) - j_series(m, x)) < 1e-12);
            if (m <= 2) CHECK(std::abs(detail::hankel1_any(m, x) - hankel1(m, x)) < 1e-12 * std::abs(hankel1(m, x)));
        }
}
