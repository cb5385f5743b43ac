#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "layered_elastica/elastic_fields.hpp"

using namespace le;

namespace {

ElasticMedium medium(int dim) {
    ElasticMedium m;
    m.lambda = 1.3;
    m.mu = 0.9;
    m.rho_plus = 1.0;
    m.rho_minus = 2.7;
    m.omega = 1.7;
    m.dim = dim;
    return m;
}

using Rng = std::mt19937_64;
double uni(Rng& r, double a, double b) { return std::uniform_real_distribution<double>(a, b)(r); }

VecX rand_vec(Rng& r, int d, double s = 1.0) {
    VecX v(d);
    for (int i = 0; i < d; ++i) v(i) = uni(r, -s, s);
    return v;
}

FieldJet rand_jet(Rng& r, int d) {
    FieldJet j;
    j.u.resize(d);
    j.grad.resize(d, d);
    for (int i = 0; i < d; ++i) {
        j.u(i) = cplx(uni(r, -1, 1), uni(r, -1, 1));
        for (int k = 0; k < d; ++k) j.grad(i, k) = cplx(uni(r, -1, 1), uni(r, -1, 1));
    }
    return j;
}

FieldJet column(const TensorJet& t, const CVecX& a) {
    FieldJet j;
    j.u = t.value * a;
    j.grad.resize(a.size(), a.size());
    for (int k = 0; k < (int)a.size(); ++k) j.grad.col(k) = t.grad_x[k] * a;
    return j;
}

// plane wave u = pol exp(i k d.x)
FieldJet plane(const VecX& d, const CVecX& pol, double k, const VecX& x) {
    cplx e = std::exp(I * k * d.dot(x));
    FieldJet j;
    j.u = pol * e;
    j.grad = (I * k * e) * pol * d.transpose().cast<cplx>();
    return j;
}

// bilinear cross product (Eigen conjugates complex operands)
CVec3 cross(const CVec3& a, const CVec3& b) {
    return CVec3(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
}

}  // namespace

TEST_CASE("fundamental solution values") {
    VecX x2(2), y2(2);
    x2 << 1.0, 0.0;
    y2 << 0.0, 0.0;
    CHECK(std::abs(phi(1.0, x2, y2, 2) - cplx(-0.0220642411, 0.1912994216)) < 1e-9);
    VecX x3(3), y3 = VecX::Zero(3), z3(3);
    x3 << 0.0, 1.0, 0.0;
    z3 << 0.0, 2.0, 0.0;
    CHECK(std::abs(phi(1.0, x3, y3, 3) - cplx(0.0429958914, 0.0669621334)) < 1e-9);
    CHECK(std::abs(phi(1.0, z3, y3, 3)) == doctest::Approx(0.5 * std::abs(phi(1.0, x3, y3, 3))));
}

TEST_CASE("Kupradze tensor symmetry") {
    Rng rng(1);
    for (int dim : {2, 3}) {
        ElasticMedium m = medium(dim);
        for (int n = 0; n < 50; ++n) {
            VecX x = rand_vec(rng, dim, 2), y = rand_vec(rng, dim, 2);
            Side s = n % 2 ? Side::plus : Side::minus;
            CMatX a = kupradze_tensor(m, s, x, y), b = kupradze_tensor(m, s, y, x);
            CHECK((a - b.transpose()).cwiseAbs().maxCoeff() < 1e-12);
            CHECK((a - a.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("Kupradze tensor solves the Navier equation") {
    Rng rng(2);
    for (int dim : {2, 3}) {
        ElasticMedium m = medium(dim);
        for (int n = 0; n < 10; ++n) {
            Side s = n % 2 ? Side::plus : Side::minus;
            VecX y = rand_vec(rng, dim), x = y + rand_vec(rng, dim).normalized() * uni(rng, 0.5, 2.0);
            CVecX a = rand_vec(rng, dim).cast<cplx>();
            const double h = 1e-3;
            // fourth-order differences of the analytic gradient
            std::vector<CMatX> H(dim);  // H[k](i, l) = d_k d_l u_i
            for (int k = 0; k < dim; ++k) {
                auto g = [&](double t) {
                    VecX xx = x;
                    xx(k) += t;
                    return column(kupradze_jet(m, s, xx, y), a).grad;
                };
                H[k] = (-g(2 * h) + 8.0 * g(h) - 8.0 * g(-h) + g(-2 * h)) / (12 * h);
            }
            CVecX u = kupradze_tensor(m, s, x, y) * a, res = m.rho(s) * m.omega * m.omega * u;
            for (int i = 0; i < dim; ++i)
                for (int k = 0; k < dim; ++k) res(i) += m.mu * H[k](i, k) + (m.lambda + m.mu) * H[i](k, k);
            CHECK(res.norm() / (m.rho(s) * m.omega * m.omega * u.norm()) < 1e-5);
        }
    }
}

TEST_CASE("Kupradze tensor radiating decay") {
    for (int dim : {2, 3}) {
        ElasticMedium m = medium(dim);
        VecX y = VecX::Zero(dim), d = VecX::Ones(dim).normalized();
        double lo = 1e300, hi = 0;
        for (double r = 100; r <= 1e4; r *= 1.7) {
            double v = std::pow(r, 0.5 * (dim - 1)) * kupradze_tensor(m, Side::plus, r * d, y).norm();
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(hi < 3 * lo);
    }
}

TEST_CASE("generalized stress: direct form") {
    Rng rng(3);
    for (int dim : {2, 3}) {
        ElasticMedium m = medium(dim);
        VecX nu = rand_vec(rng, dim).normalized();
        SurfaceFrame fr = SurfaceFrame::make(nu);
        FieldJet c;
        c.u = rand_vec(rng, dim).cast<cplx>();
        c.grad = CMatX::Zero(dim, dim);
        StressWeights w = StressWeights::boundary_choice(m);
        CHECK(stress_direct(c, fr, w, m, dim).norm() == 0.0);
        CHECK(stress_identity(c, fr, w, m, dim).norm() < 1e-15);

        // physical weights give the traction lambda div u nu + mu (grad u + grad u^T) nu
        FieldJet j = rand_jet(rng, dim);
        cplx div = j.grad.trace();
        CVecX Tu = m.lambda * div * nu.cast<cplx>() + m.mu * (j.grad + j.grad.transpose()) * nu.cast<cplx>();
        CHECK((stress_direct(j, fr, StressWeights::physical(m), m, dim) - Tu).norm() < 1e-13);

        // plane p-wave along d, nu = -d
        VecX d = rand_vec(rng, dim).normalized(), x = rand_vec(rng, dim);
        double kp = wavenumbers(m).kp_plus;
        FieldJet p = plane(d, d.cast<cplx>(), kp, x);
        SurfaceFrame fd = SurfaceFrame::make(-d);
        StressWeights ws = StressWeights::from_mu_tilde(m, 0.4);
        cplx e = std::exp(I * kp * d.dot(x));
        CVecX ref = I * kp * (ws.lambda_tilde + m.mu + ws.mu_tilde) * e * (-d).cast<cplx>();
        CHECK((stress_direct(p, fd, ws, m, dim) - ref).norm() < 1e-13);
        CHECK((stress_identity(p, fd, ws, m, dim) - ref).norm() < 1e-13);
    }
}

TEST_CASE("generalized stress: identity form") {
    Rng rng(4);
    for (int dim : {2, 3}) {
        ElasticMedium m = medium(dim);
        for (int n = 0; n < 1000; ++n) {
            FieldJet j = rand_jet(rng, dim);
            SurfaceFrame fr = SurfaceFrame::make(rand_vec(rng, dim).normalized());
            StressWeights w = StressWeights::from_mu_tilde(m, uni(rng, -1, 2));
            CHECK((stress_direct(j, fr, w, m, dim) - stress_identity(j, fr, w, m, dim)).cwiseAbs().maxCoeff() <
                  1e-13);
        }
        // the weights enter only through (mu_tilde1 - mu_tilde2) times the tangential term
        FieldJet j = rand_jet(rng, dim);
        SurfaceFrame fr = SurfaceFrame::make(rand_vec(rng, dim).normalized());
        auto P = [&](double mt) { return stress_identity(j, fr, StressWeights::from_mu_tilde(m, mt), m, dim); };
        CVecX tang(dim);
        if (dim == 2) {
            CVecX dt = j.grad * fr.tau.cast<cplx>();
            tang << dt(1), -dt(0);
        } else {
            tang = m_nu(j, fr);
        }
        CHECK((P(0.8) - P(0.2) - 0.6 * tang).norm() < 1e-13);
        CHECK((P(1.9) - P(-0.4) - 2.3 * tang).norm() < 1e-13);
    }
}

TEST_CASE("M_nu operator") {
    Rng rng(5);
    SurfaceFrame fr = SurfaceFrame::make(rand_vec(rng, 3).normalized());
    FieldJet id;
    id.u = rand_vec(rng, 3).cast<cplx>();
    id.grad = CMatX::Identity(3, 3);
    // each row picks up -nu_i twice from the diagonal
    CHECK((m_nu(id, fr) + 2.0 * fr.nu.cast<cplx>()).norm() < 1e-15);
    FieldJet sym;
    sym.u = id.u;
    CMat3 S;
    S << 1.0, 2.0, 0.5, 2.0, -1.0, 3.0, 0.5, 3.0, 0.25;
    sym.grad = S;
    VecX n = fr.nu;
    CVec3 hand(n(1) * S(1, 0) - n(0) * S(1, 1) + n(2) * S(2, 0) - n(0) * S(2, 2),
               n(0) * S(0, 1) - n(1) * S(0, 0) + n(2) * S(2, 1) - n(1) * S(2, 2),
               n(0) * S(0, 2) - n(2) * S(0, 0) + n(1) * S(1, 2) - n(2) * S(1, 1));
    CHECK((m_nu(sym, fr) - hand).norm() < 1e-15);

    for (int n = 0; n < 20; ++n) {
        VecX nu = rand_vec(rng, 3).normalized();
        SurfaceFrame f = SurfaceFrame::make(nu);
        FieldJet u = rand_jet(rng, 3), v = rand_jet(rng, 3);
        CVec3 uu = u.u.head<3>(), vv = v.u.head<3>();
        CMat3 Gu = u.grad, Gv = v.grad;
        // w = u x v, d_k w = (d_k u) x v + u x (d_k v)
        CMat3 dw;
        for (int k = 0; k < 3; ++k) {
            CVec3 a = Gu.col(k), b = Gv.col(k);
            dw.col(k) = cross(a, vv) + cross(uu, b);
        }
        CVec3 curl(dw(2, 1) - dw(1, 2), dw(0, 2) - dw(2, 0), dw(1, 0) - dw(0, 1));
        cplx lhs = m_nu(u, f).cwiseProduct(vv).sum() - m_nu(v, f).cwiseProduct(uu).sum();
        cplx rhs = nu.cast<cplx>().dot(curl);
        CHECK(std::abs(lhs - rhs) < 1e-13);
    }
}

TEST_CASE("Helmholtz split of plane waves") {
    Rng rng(6);
    for (int dim : {2, 3}) {
        ElasticMedium m = medium(dim);
        Wavenumbers k = wavenumbers(m);
        VecX d = rand_vec(rng, dim).normalized(), x = rand_vec(rng, dim);
        FieldJet p = plane(d, d.cast<cplx>(), k.kp_plus, x);
        HelmholtzParts hp = helmholtz_split(p, dim);
        CHECK(std::abs(hp.phi_s) + hp.phi_s3.norm() < 1e-14);
        CHECK(std::abs(hp.phi_p) > 0.1);

        VecX t = rand_vec(rng, dim);
        t -= t.dot(d) * d;
        t.normalize();
        FieldJet s = plane(d, t.cast<cplx>(), k.ks_plus, x);
        HelmholtzParts hs = helmholtz_split(s, dim);
        CHECK(std::abs(hs.phi_p) < 1e-14);
    }
}

TEST_CASE("Helmholtz recomposition of Kupradze columns") {
    for (int dim : {2, 3}) {
        ElasticMedium m = medium(dim);
        Wavenumbers k = wavenumbers(m);
        VecX y = VecX::Zero(dim), x = VecX::Zero(dim);
        x(0) = 1.2;
        x(dim - 1) = 1.6;  // |x - y| = 2
        CVecX a = VecX::LinSpaced(dim, 0.3, 1.0).cast<cplx>();
        auto parts = [&](const VecX& z) { return helmholtz_split(column(kupradze_jet(m, Side::plus, z, y), a), dim); };
        const double h = 1e-3;
        HelmholtzGrads g;
        g.grad_phi_p = CVecX::Zero(dim);
        g.grad_phi_s = CVecX::Zero(dim);
        g.curl_phi_s = CVecX::Zero(dim);
        std::vector<CVec3> dcurl(dim);
        for (int l = 0; l < dim; ++l) {
            auto at = [&](double t) {
                VecX z = x;
                z(l) += t;
                return parts(z);
            };
            HelmholtzParts a2 = at(2 * h), a1 = at(h), b1 = at(-h), b2 = at(-2 * h);
            g.grad_phi_p(l) = (-a2.phi_p + 8.0 * a1.phi_p - 8.0 * b1.phi_p + b2.phi_p) / (12 * h);
            g.grad_phi_s(l) = (-a2.phi_s + 8.0 * a1.phi_s - 8.0 * b1.phi_s + b2.phi_s) / (12 * h);
            dcurl[l] = (-a2.phi_s3 + 8.0 * a1.phi_s3 - 8.0 * b1.phi_s3 + b2.phi_s3) / (12 * h);
        }
        if (dim == 3)
            g.curl_phi_s = CVec3(dcurl[1](2) - dcurl[2](1), dcurl[2](0) - dcurl[0](2), dcurl[0](1) - dcurl[1](0));
        CVecX u = kupradze_tensor(m, Side::plus, x, y) * a;
        CVecX r = helmholtz_recompose(g, k.kp_plus, k.ks_plus, dim);
        CHECK((r - u).norm() / u.norm() < 1e-8);
    }
}

TEST_CASE("radiation probes") {
    for (int dim : {2, 3}) {
        ElasticMedium m = medium(dim);
        VecX y1 = VecX::Zero(dim), y2 = VecX::Zero(dim);
        y1(dim - 1) = 0.5;
        y2(0) = -0.4;
        y2(dim - 1) = 0.8;
        CVecX a = CVecX::Zero(dim), b = CVecX::Zero(dim);
        a(0) = 1.0;
        b(dim - 1) = 1.0;
        FieldEval u = [&](const VecX& x) { return column(kupradze_jet(m, Side::plus, x, y1), a); };
        FieldEval v = [&](const VecX& x) { return column(kupradze_jet(m, Side::plus, x, y2), b); };
        ProbeOptions po;
        if (dim == 3) po.nodes_per_wavelength = 8;
        CHECK(std::abs(radiation_probe_pair(u, u, m, 25.0, dim, po)) < 1e-14);
        if (dim == 2) {
            double prev = 1e300;
            for (double R : {25.0, 50.0, 100.0, 200.0}) {
                double p = std::abs(radiation_probe_pair(u, v, m, R, dim, po));
                CHECK(p < prev);
                prev = p;
            }
        }
        double e25 = std::abs(radiation_probe_energy(u, m, 25.0, dim, po));
        double e200 = std::abs(radiation_probe_energy(u, m, 200.0, dim, po));
        CHECK(e200 <= 0.2 * e25);
    }
}
