#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "layered_elastica/bie2d.hpp"

using namespace le;

namespace {

ElasticMedium medium() {
    ElasticMedium m;
    m.lambda = 1.3;
    m.mu = 0.9;
    m.rho_plus = 1.0;
    m.rho_minus = 2.7;
    m.omega = 1.7;
    return m;
}

ElasticMedium equal_medium() {
    ElasticMedium m = medium();
    m.rho_minus = m.rho_plus;
    return m;
}

IncidentSource source() {
    IncidentSource s;
    s.z = Vec2(0.3, 1.0);
    s.a = CVec2(1.0, cplx(0.3, 0.2));
    return s;
}

SolverOptions coarse(double ppw = 8) {
    SolverOptions o;
    o.R = 3.0;
    o.boundary_nodes = 128;
    o.points_per_wavelength = ppw;
    return o;
}

CVec2 closed_form(const Vec2& x, const ElasticMedium& m, const IncidentSource& s, const QuadConfig& q) {
    return reference_wave(x, s, m, SurfaceProfile::flat(), q) - incident_wave(x, s, m).u.head<2>();
}

double probe_error(const ScatterSolution& sol, const ElasticMedium& m, const IncidentSource& s) {
    double en = 0, ed = 0;
    for (int i = 1; i <= 5; ++i)
        for (int j = 0; j < 24; ++j) {
            double r = 0.5 * i, th = 2 * pi * (j + 0.5) / 24;
            Vec2 x(r * std::cos(th), r * std::sin(th));
            if ((x - s.z).norm() < 0.3) continue;
            CVec2 ex = closed_form(x, m, s, sol.options.quad);
            en += (sol.u_hat_at(x) - ex).squaredNorm();
            ed += ex.squaredNorm();
        }
    return std::sqrt(en / ed);
}

// trace and traction of G(., z) a on the circle nodes with the operator weights
void radiating_data(const BoundaryOperators& ops, const ElasticMedium& m, const Vec2& z, const CVec2& a,
                    CVecX& u, CVecX& t) {
    u.resize(2 * ops.N);
    t.resize(2 * ops.N);
    GreenOptions o;
    o.grad_x = true;
    QuadConfig q{1e-11, 0.0, 200000, 1.0};
    for (int n = 0; n < ops.N; ++n) {
        GreenMatrix g = assemble_G(ops.nodes[n], z, m, q, o);
        FieldJet j;
        j.u = g.G * a;
        j.grad.resize(2, 2);
        for (int l = 0; l < 2; ++l) j.grad.col(l) = g.grad_x[l] * a;
        u.segment<2>(2 * n) = j.u;
        t.segment<2>(2 * n) = stress_direct(j, SurfaceFrame::make(ops.normals[n]), ops.weights, m, 2);
    }
}

}  // namespace

TEST_CASE("boundary operators: zero density") {
    auto ops = boundary_operators(medium(), 3.0, 32);
    CVecX z = CVecX::Zero(64);
    CHECK(operator_S(*ops, z).norm() == 0.0);
    CHECK(operator_K(*ops, z).norm() == 0.0);
    CHECK(ops->nodes.size() == 32);
    CHECK(ops->weight == doctest::Approx(2 * pi * 3.0 / 32));
}

TEST_CASE("single layer against adaptive quadrature") {
    ElasticMedium m = equal_medium();
    m.omega = 0.5;
    const double R = 2.0;
    const int N = 64;
    auto ops = boundary_operators(m, R, N);
    CVec2 g(1.0, cplx(0.0, 0.5));
    CVecX dens(2 * N);
    for (int n = 0; n < N; ++n) dens.segment<2>(2 * n) = g;
    CVecX Sg = operator_S(*ops, dens);
    QuadConfig c;
    c.tol = 1e-11;
    for (int n : {0, 17, 40}) {
        double t0 = 2 * pi * (n + 0.5) / N;
        Vec2 x = R * Vec2(std::cos(t0), std::sin(t0));
        // graded composite Gauss rule toward the log singularity at both ends
        std::vector<double> gx, gw;
        gauss_legendre(20, gx, gw);
        CVec2 ref = CVec2::Zero();
        auto panel = [&](double a, double b) {
            for (size_t i = 0; i < gx.size(); ++i) {
                double t = 0.5 * (a + b) + 0.5 * (b - a) * gx[i];
                Vec2 y = R * Vec2(std::cos(t0 + t), std::sin(t0 + t));
                ref += 0.5 * (b - a) * gw[i] * R * (kupradze_tensor(m, Side::plus, x, y) * g).head<2>();
            }
        };
        double s = pi;
        std::vector<double> cuts = {pi};
        while (s > 1e-7) cuts.push_back(s *= 0.25);
        cuts.push_back(0.0);
        for (size_t k = 0; k + 1 < cuts.size(); ++k) {
            panel(cuts[k + 1], cuts[k]);
            panel(2 * pi - cuts[k], 2 * pi - cuts[k + 1]);
        }
        CHECK((Sg.segment<2>(2 * n) - ref).norm() < 1e-8 * ref.norm());
    }
}

TEST_CASE("jump relation for radiating fields") {
    ElasticMedium m = medium();
    double rel[2];
    int i = 0;
    for (int N : {64, 128}) {
        auto ops = boundary_operators(m, 4.0, N);
        double worst = 0;
        for (Vec2 z : {Vec2(0.7, 0.9), Vec2(-0.5, -1.1)}) {
            CVecX u, t;
            radiating_data(*ops, m, z, CVec2(1.0, cplx(0.3, 0.2)), u, t);
            CVecX r = 0.5 * u - operator_K(*ops, u) + operator_S(*ops, t);
            worst = std::max(worst, r.norm() / u.norm());
        }
        rel[i++] = worst;
    }
    CHECK(rel[0] < 1e-3);
    CHECK(rel[1] < 1e-4);
    CHECK(rel[1] < 0.25 * rel[0]);
}

TEST_CASE("reference wave") {
    ElasticMedium eq = equal_medium(), m = medium();
    IncidentSource s = source();
    for (Vec2 x : {Vec2(0.8, 0.4), Vec2(-0.6, -1.2)}) {
        CVec2 u = reference_wave(x, s, eq, SurfaceProfile::flat());
        CVec2 ref = incident_wave(x, s, eq).u.head<2>();
        CHECK(ref.norm() > 1e-2);
        CHECK((u - ref).cwiseAbs().maxCoeff() < 1e-10);
    }
    // source in a dip of the interface, above it but below x2 = 0
    SurfaceProfile dip = SurfaceProfile::bump(-0.5, 0.8);
    IncidentSource d;
    d.z = Vec2(0.0, -0.2);
    d.a = CVec2(1.0, 0.0);
    CHECK(reference_wave(Vec2(0.5, 0.7), d, m, dip).norm() == 0.0);
    CHECK(reference_wave_jet(Vec2(0.5, 0.7), d, m, dip).grad.norm() == 0.0);

    Vec2 x(-0.4, 0.8);
    QuadConfig q{1e-11, 0.0, 200000, 1.0};
    IncidentSource sx;
    sx.z = x;
    sx.a = CVec2(cplx(0.2, -1.0), 0.7);
    cplx lhs = (sx.a.transpose() * reference_wave(x, s, m, SurfaceProfile::flat(), q))(0);
    cplx rhs = (s.a.transpose() * reference_wave(s.z, sx, m, SurfaceProfile::flat(), q))(0);
    CHECK(std::abs(lhs - rhs) < 1e-8 * std::abs(lhs));
}

TEST_CASE("no scatterer gives no scattered field") {
    ElasticMedium m = equal_medium();
    IncidentSource s = source();
    ScatterSolution sol = solve_scattering(m, SurfaceProfile::flat(), s, coarse());
    double uin = 0;
    for (const auto& x : sol.disc.mesh.nodes)
        if ((x - s.z).norm() > 0.3) uin = std::max(uin, incident_wave(x, s, m).u.head<2>().norm());
    CHECK(sol.u_hat.cwiseAbs().maxCoeff() <= 1e-6 * uin);
    CHECK(sol.residual < 1e-10);
}

TEST_CASE("flat interface against the closed form") {
    ElasticMedium m = medium();
    IncidentSource s = source();
    ScatterSolution a = solve_scattering(m, SurfaceProfile::flat(), s, coarse(8));
    ScatterSolution b = solve_scattering(m, SurfaceProfile::flat(), s, coarse(12));
    double ea = probe_error(a, m, s), eb = probe_error(b, m, s);
    CHECK(ea < 5e-2);
    CHECK(eb < 0.5 * ea);
    TransmissionCheck tc = transmission_check(b);
    CHECK(tc.displacement_jump < 1e-12);

    // the exterior representation continues the interior field
    const double eps = 0.01, R = b.options.R;
    for (double th : {0.5, 2.0, -1.0}) {
        Vec2 d(std::cos(th), std::sin(th));
        CVec2 jump = reconstruct_exterior(b, (R + eps) * d) - b.field_inside((R - eps) * d);
        CVec2 ex = closed_form((R + eps) * d, m, s, b.options.quad) - closed_form((R - eps) * d, m, s, b.options.quad);
        if (th < 0) {
            // below the interface u_- = u_hat + u_in
            ex += incident_wave((R + eps) * d, s, m).u.head<2>() - incident_wave((R - eps) * d, s, m).u.head<2>();
        }
        CHECK((jump - ex).norm() < 5 * eb * closed_form(R * d, m, s, b.options.quad).norm() + 1e-3);
    }
    CHECK_THROWS_AS(b.u_hat_at(Vec2(R + 0.5, 0.0)), Error);
}

TEST_CASE("exterior field radiates") {
    ElasticMedium m = medium();
    ScatterSolution sol = solve_scattering(m, SurfaceProfile::flat(), source(), coarse(12));
    const double R = sol.options.R;
    double lo = 1e300, hi = 0;
    for (double f : {2.0, 4.0, 8.0, 16.0, 32.0}) {
        Vec2 x = f * R * Vec2(std::cos(0.7), std::sin(0.7));
        double v = std::sqrt(x.norm()) * tilde_exterior(sol, x).norm();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi > 0.0);
    CHECK(hi < 1.5 * lo);
}

TEST_CASE("volume weights are load bearing") {
    ElasticMedium m = medium();
    SolverOptions o = coarse(12), p = o;
    p.physical_volume_weights = true;
    ScatterSolution a = solve_scattering(m, SurfaceProfile::flat(), source(), o);
    ScatterSolution b = solve_scattering(m, SurfaceProfile::flat(), source(), p);
    double e = probe_error(a, m, source());
    CHECK((a.u_hat - b.u_hat).norm() > 10 * e * a.u_hat.norm());
}

TEST_CASE("bump interface: reciprocity of the scattered field") {
    ElasticMedium m = medium();
    SurfaceProfile bump = SurfaceProfile::bump(0.25, 0.9, 0.1);
    IncidentSource s1 = source(), s2;
    s2.z = Vec2(-0.7, 0.6);
    s2.a = CVec2(cplx(0.2, -1.0), 0.7);
    double d[2];
    int i = 0;
    for (double ppw : {8.0, 12.0}) {
        ScatterSolution a = solve_scattering(m, bump, s1, coarse(ppw));
        ScatterSolution b = solve_scattering(m, bump, s2, coarse(ppw));
        cplx l = (s2.a.transpose() * a.field_inside(s2.z))(0);
        cplx r = (s1.a.transpose() * b.field_inside(s1.z))(0);
        d[i++] = std::abs(l - r) / std::abs(l);
        CHECK(transmission_check(a).displacement_jump < 1e-12);
    }
    CHECK(d[1] < 0.05);
    CHECK(d[1] < d[0]);
}

TEST_CASE("invalid configurations") {
    ElasticMedium m = medium();
    IncidentSource s = source();
    SolverOptions o = coarse();
    o.R = 1.5;
    CHECK_THROWS_AS(solve_scattering(m, SurfaceProfile::bump(0.2, 0.9), s, o), Error);
    IncidentSource below;
    below.z = Vec2(0.0, -0.5);
    CHECK_THROWS_AS(solve_scattering(m, SurfaceProfile::flat(), below, coarse()), Error);
    // P2 elements carry two nodes per edge length
    CHECK(element_size_for(m, 10.0) == doctest::Approx(2 * (2 * pi / wavenumbers(m).max()) / 10.0));
    CHECK_THROWS_AS(element_size_for(m, 0.0), Error);
    CHECK_THROWS_AS(boundary_operators(m, 3.0, 30), Error);
}
