#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "layered_elastica/medium.hpp"

using namespace le;

namespace {

ElasticMedium make(double lambda, double mu, double rp, double rm, double omega) {
    ElasticMedium m;
    m.lambda = lambda;
    m.mu = mu;
    m.rho_plus = rp;
    m.rho_minus = rm;
    m.omega = omega;
    return m;
}

// sqrt(xi-k) sqrt(xi+k) with arg(xi-k) in [-3pi/2, pi/2), arg(xi+k) in [-pi/2, 3pi/2)
cplx beta_oracle(cplx xi, double k) {
    cplx a = xi - k, b = xi + k;
    double ta = std::arg(a), tb = std::arg(b);
    if (ta >= pi / 2) ta -= 2 * pi;
    if (tb < -pi / 2) tb += 2 * pi;
    return std::sqrt(std::abs(a) * std::abs(b)) * std::exp(I * (0.5 * (ta + tb)));
}

}  // namespace

TEST_CASE("wavenumbers") {
    Wavenumbers k = wavenumbers(make(2, 1, 4, 4, 1));
    CHECK(k.kp_plus == doctest::Approx(1.0));
    CHECK(k.kp_minus == doctest::Approx(1.0));
    CHECK(k.ks_plus == doctest::Approx(2.0));
    CHECK(k.ks_minus == doctest::Approx(2.0));

    Wavenumbers u = wavenumbers(make(1, 1, 1, 1, 1));
    CHECK(u.kp_plus == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(u.ks_minus == doctest::Approx(1.0));

    Wavenumbers a = wavenumbers(make(1.3, 0.9, 1.0, 2.7, 1.7)), b = wavenumbers(make(1.3, 0.9, 1.0, 2.7, 3.4));
    for (Wave w : {Wave::p, Wave::s})
        for (Side s : {Side::plus, Side::minus}) CHECK(b.k(w, s) == doctest::Approx(2 * a.k(w, s)));
    CHECK(a.max() == doctest::Approx(a.ks_minus));
    CHECK(a.min() == doctest::Approx(a.kp_plus));
}

TEST_CASE("beta branch values") {
    CHECK(std::abs(beta(0.0, 1.0) - (-I)) < 1e-15);
    CHECK(std::abs(beta(2.0, 1.0) - std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(beta(1.0, 1.0)) < 1e-7);
    // 1 + 0.5i sits on the cut above +k; the right-hand limit has Re > 0
    CHECK_THROWS_AS(beta(cplx(1.0, 0.5), 1.0), Error);
    cplx xi(1.0 + 1e-9, 0.5);
    CHECK(std::abs(beta(xi, 1.0) - beta_oracle(xi, 1.0)) < 1e-14);
    CHECK(beta(xi, 1.0).real() > 0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-4, 4);
    for (int n = 0; n < 1000; ++n) {
        cplx z(U(rng), U(rng));
        if (std::abs(z.real()) > 1.0 && std::abs(z.imag()) < 1e-3) continue;
        CHECK(std::abs(beta(z, 1.3) - beta_oracle(z, 1.3)) < 1e-12 * (1 + std::abs(z)));
    }
}

TEST_CASE("beta on the real axis") {
    for (double xi = -5; xi <= 5; xi += 0.37) {
        cplx b = beta(xi, 1.5);
        CHECK(std::abs(b * b - (xi * xi - 2.25)) < 1e-12);
        if (std::abs(xi) > 1.5)
            CHECK(b.real() > 0);
        else
            CHECK(b.imag() < 0);
        CHECK(beta_real(xi, 1.5) == doctest::Approx(std::abs(xi) > 1.5 ? b.real() : 0.0));
    }
}

TEST_CASE("reflection and transmission") {
    ReflTrans same = refl_trans(cplx(0.3, -0.8), cplx(0.3, -0.8), 1.2, 1.2);
    CHECK(std::abs(same.R) < 1e-15);
    CHECK(std::abs(same.T - 1.0) < 1e-15);

    ReflTrans r = refl_trans(-I, -2.0 * I, 1.0, 2.0);
    CHECK(std::abs(r.R - 1.0 / 3.0) < 1e-15);
    CHECK(std::abs(r.T - 4.0 / 3.0) < 1e-15);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.1, 3);
    for (int n = 0; n < 200; ++n) {
        double kp = U(rng), km = U(rng), xi = 2 * U(rng);
        ReflTrans q = refl_trans(beta(xi, kp), beta(xi, km), kp, km);
        CHECK(std::abs(q.T - q.R - 1.0) < 1e-14);
    }
    CHECK_THROWS_AS(refl_trans(0.0, 0.0, 1.0, 1.0), Error);
}

TEST_CASE("spectral constants") {
    ElasticMedium eq = make(1.3, 0.9, 1.4, 1.4, 1.7);
    Wavenumbers k = wavenumbers(eq);
    for (double xi : {0.0, 0.4, 1.9, 3.5}) {
        SpectralConstants c = spectral_constants(eq, xi);
        CHECK(c.C0 == 0.0);
        cplx D = -(2.0 * beta(xi, k.kp_plus) / (k.kp_plus * k.kp_plus)) *
                 (2.0 * beta(xi, k.ks_plus) / (k.ks_plus * k.ks_plus));
        CHECK(std::abs(c.D - D) < 1e-13 * std::max(1.0, std::abs(D)));
    }
    DScan s = scan_D(make(1.3, 0.9, 1.0, 2.7, 1.7));
    CHECK(s.min_abs_D > 0.0);
}

TEST_CASE("stress weights") {
    ElasticMedium m = make(1.3, 0.9, 1, 2.7, 1.7);
    StressWeights p = StressWeights::physical(m);
    CHECK(p.mu_tilde == 0.9);
    CHECK(p.lambda_tilde == 1.3);
    StressWeights b = StressWeights::boundary_choice(m);
    CHECK(b.mu_tilde + b.lambda_tilde == doctest::Approx(m.mu + m.lambda));
    CHECK(b.mu_tilde == doctest::Approx(0.9 * 2.2 / 4.0));
    StressWeights f = StressWeights::from_mu_tilde(m, 0.25);
    CHECK(f.lambda_tilde == doctest::Approx(1.95));
}

TEST_CASE("medium validation and JSON") {
    ElasticMedium m = make(1.3, 0.9, 1, 2.7, 1.7);
    CHECK_NOTHROW(m.validate());
    ElasticMedium r = medium_from_json(medium_to_json(m));
    CHECK(r.lambda == m.lambda);
    CHECK(r.rho_minus == m.rho_minus);
    CHECK(r.omega == m.omega);

    auto code = [](const ElasticMedium& x) {
        try {
            x.validate();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::invalid_input;
    };
    ElasticMedium b = m;
    b.mu = -1;
    CHECK(code(b) == ErrorCode::invalid_medium);
    b = m;
    b.lambda = -0.95;  // 2 lambda + 2 mu < 0
    CHECK(code(b) == ErrorCode::invalid_medium);
    b = m;
    b.rho_minus = 0;
    CHECK(code(b) == ErrorCode::invalid_medium);
    b = m;
    b.a0 = 2;
    CHECK(code(b) == ErrorCode::invalid_medium);
    CHECK_THROWS_AS(medium_from_json("{\"lambda\": 1}"), Error);
    CHECK_THROWS_AS(medium_from_json("not json"), Error);
}
