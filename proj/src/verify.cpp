#include "layered_elastica/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "layered_elastica/bie2d.hpp"
#include "layered_elastica/elastic_fields.hpp"
#include "layered_elastica/green2d.hpp"
#include "layered_elastica/green3d.hpp"
#include "layered_elastica/parallel.hpp"
#include "layered_elastica/quadrature.hpp"
#include "layered_elastica/specfun.hpp"

namespace le {

ElasticMedium verify_medium(int dim) {
    ElasticMedium m;
    m.lambda = 1.3;
    m.mu = 0.9;
    m.rho_plus = 1.0;
    m.rho_minus = 2.7;
    m.omega = 1.7;
    m.dim = dim;
    return m;
}

std::string SuiteReport::to_json() const {
    nlohmann::ordered_json j;
    j["suite"] = name;
    j["description"] = description;
    j["seed"] = seed;
    j["pass"] = pass;
    j["runtime_s"] = runtime;
    j["runtime_limit_s"] = runtime_limit;
    nlohmann::ordered_json ms = nlohmann::ordered_json::array();
    for (const Metric& m : metrics) {
        nlohmann::ordered_json e;
        e["name"] = m.name;
        e["value"] = m.value;
        e["threshold"] = m.threshold;
        e["bound"] = m.upper ? "max" : "min";
        e["pass"] = m.pass;
        ms.push_back(e);
    }
    j["metrics"] = ms;
    j["notes"] = notes;
    double mx = -1.0;
    for (const Metric& m : metrics)
        if (m.error) mx = std::max(mx, m.value);
    if (mx >= 0.0) j["max_error"] = mx;
    return j.dump(2);
}

namespace {

using Rng = std::mt19937_64;

double uni(Rng& r, double a, double b) { return std::uniform_real_distribution<double>(a, b)(r); }

cplx cuni(Rng& r) { return {uni(r, -1, 1), uni(r, -1, 1)}; }

Metric upper(const std::string& n, double v, double t) { return {n, v, t, true, v <= t, true}; }
Metric lower(const std::string& n, double v, double t) { return {n, v, t, false, v >= t, false}; }
Metric bound(const std::string& n, double v, double t) { return {n, v, t, true, v <= t, false}; }

double max_abs(const CMatX& a) { return a.cwiseAbs().maxCoeff(); }

// -d log e / d log r by least squares.
double decay_exponent(const std::vector<double>& r, const std::vector<double>& e) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = (double)r.size();
    for (size_t i = 0; i < r.size(); ++i) {
        double x = std::log(r[i]), y = std::log(std::max(e[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

FieldJet column_jet(const CMatX& value, const std::vector<CMatX>& grad, const CVecX& a) {
    FieldJet j;
    j.u = value * a;
    j.grad.resize(value.rows(), value.rows());
    for (int l = 0; l < (int)grad.size(); ++l) j.grad.col(l) = grad[l] * a;
    return j;
}

// ---------------------------------------------------------------------------

void suite_stress_identity(SuiteReport& rep, Rng& rng) {
    for (int dim : {2, 3}) {
        double err = 0.0;
        for (int n = 0; n < 1000; ++n) {
            ElasticMedium m;
            m.lambda = uni(rng, 0.2, 3.0);
            m.mu = uni(rng, 0.2, 3.0);
            m.dim = dim;
            StressWeights w = StressWeights::from_mu_tilde(m, uni(rng, -1.0, 2.0) * m.mu);
            FieldJet j;
            j.u.resize(dim);
            j.grad.resize(dim, dim);
            for (int i = 0; i < dim; ++i) {
                j.u(i) = cuni(rng);
                for (int k = 0; k < dim; ++k) j.grad(i, k) = cuni(rng);
            }
            VecX nu(dim);
            for (int i = 0; i < dim; ++i) nu(i) = uni(rng, -1, 1);
            nu.normalize();
            SurfaceFrame fr = SurfaceFrame::make(nu);
            CVecX a = stress_direct(j, fr, w, m, dim), b = stress_identity(j, fr, w, m, dim);
            err = std::max(err, (a - b).cwiseAbs().maxCoeff());
        }
        rep.metrics.push_back(upper("max_error_" + std::to_string(dim) + "d", err, 1e-13));
    }
}

void suite_spectral_system(SuiteReport& rep, Rng& rng) {
    ElasticMedium m = verify_medium(2);
    Wavenumbers k = wavenumbers(m);
    double e2 = 0.0;
    for (int n = 0; n < 1000; ++n) {
        int j = 1 + n % 2;
        double xi = uni(rng, -3, 3) * k.max();
        double y2 = (n % 4 < 2 ? 1.0 : -1.0) * uni(rng, 0.05, 2.0);
        auto r = jump_residual2d(j, xi, y2, m);
        // scale of the individual terms of the two equations
        SpectralPoint sp = spectral_point(m, k, cplx(xi, 0.0));
        Side ys = y2 >= 0 ? Side::plus : Side::minus;
        RegionTag t{ys == Side::plus ? Side::minus : Side::plus, ys};
        double sy = ys == Side::plus ? -1.0 : 1.0;
        double amp = std::abs(coeff_AB(Wave::p, j, xi, y2, m, ys)) +
                     std::abs(coeff_AB(Wave::s, j, xi, y2, m, ys)) +
                     std::abs(tilde_G_kernel(Wave::p, j, sp, m, t) * std::exp(sy * sp.bp(ys) * y2)) +
                     std::abs(tilde_G_kernel(Wave::s, j, sp, m, t) * std::exp(sy * sp.bs(ys) * y2));
        double fac = std::max({sp.ip_plus, sp.ip_minus, sp.is_plus, sp.is_minus}) *
                     (std::abs(xi) + std::abs(sp.bp_plus) + std::abs(sp.bp_minus) +
                      std::abs(sp.bs_plus) + std::abs(sp.bs_minus));
        double scale = std::max(amp * fac, 1e-300);
        e2 = std::max(e2, std::max(std::abs(r[0]), std::abs(r[1])) / scale);
    }
    rep.metrics.push_back(upper("residual_2d", e2, 1e-12));

    ElasticMedium m3 = verify_medium(3);
    Wavenumbers k3 = wavenumbers(m3);
    double e3 = 0.0;
    for (int n = 0; n < 1000; ++n) {
        int j = 1 + n % 3;
        double z1 = uni(rng, -3, 3) * k3.max(), z2 = uni(rng, -3, 3) * k3.max();
        double y3 = (n % 2 ? 1.0 : -1.0) * uni(rng, 0.05, 2.0);
        e3 = std::max(e3, jump_residual3d(j, z1, z2, y3, m3).max());
    }
    rep.metrics.push_back(upper("residual_3d", e3, 1e-12));
    rep.notes.push_back(transcription_report().summary());
}

void suite_sommerfeld(SuiteReport& rep, Rng& rng) {
    double e2 = 0.0, e3 = 0.0;
    QuadConfig cfg;
    cfg.tol = 1e-12;
    for (int n = 0; n < 20; ++n) {
        double k = uni(rng, 0.5, 3.0), h = uni(rng, 0.2, 3.0), D = uni(rng, -4.0, 4.0);
        auto f = [&](cplx xi) {
            cplx b = beta(xi, k);
            return std::exp(-b * h + I * xi * D) / (2.0 * b);
        };
        SpectralSetup su;
        su.branch_points = {k};
        su.decay_rate = h;
        su.shift = D;
        su.oscillation = std::abs(D);
        QuadResultN q = fourier_inversion_vec(1, [&](cplx xi, cplx* o) { o[0] = f(xi); }, su, cfg);
        cplx ref = 0.25 * I * hankel1(0, k * std::hypot(h, D));
        e2 = std::max(e2, std::abs(q.value[0] - ref));

        double rho = uni(rng, 0.0, 5.0);
        auto g = [&](cplx xi) {
            cplx b = beta(xi, k);
            return std::exp(-b * h) / (2.0 * b);
        };
        QuadResult r = hankel_path_integral(g, 0, rho, h, cfg.tol, {k}, cfg);
        double R = std::hypot(rho, h);
        e3 = std::max(e3, std::abs(r.value - std::exp(I * k * R) / (4 * pi * R)));
    }
    rep.metrics.push_back(upper("fourier_error", e2, 1e-8));
    rep.metrics.push_back(upper("hankel_error", e3, 1e-8));
}

// random point with |height| in [lo, hi] on the given side
Vec2 point2(Rng& rng, Side s, double lo = 0.2, double hi = 1.2) {
    return Vec2(uni(rng, -1.0, 1.0), (s == Side::plus ? 1 : -1) * uni(rng, lo, hi));
}
Vec3 point3(Rng& rng, Side s, double lo = 0.2, double hi = 1.0) {
    return Vec3(uni(rng, -0.8, 0.8), uni(rng, -0.8, 0.8), (s == Side::plus ? 1 : -1) * uni(rng, lo, hi));
}

CMatX traction_columns(const CMatX& G, const std::vector<CMatX>& grad, const VecX& nu,
                       const StressWeights& w, const ElasticMedium& m) {
    const int d = (int)G.rows();
    CMatX out(d, d);
    SurfaceFrame fr = SurfaceFrame::make(nu);
    for (int j = 0; j < d; ++j) {
        CVecX e = CVecX::Zero(d);
        e(j) = 1.0;
        out.col(j) = stress_direct(column_jet(G, grad, e), fr, w, m, d);
    }
    return out;
}

template <class GM>
std::vector<CMatX> grads(const GM& g) {
    std::vector<CMatX> v;
    for (const auto& a : g.grad_x) v.push_back(a);
    return v;
}

void suite_green2d(SuiteReport& rep, Rng& rng) {
    ElasticMedium m = verify_medium(2);
    QuadConfig c;
    c.tol = 1e-12;
    GreenOptions o;
    o.grad_x = true;
    const double w2 = m.omega * m.omega;

    std::vector<std::pair<Vec2, Vec2>> pts;
    while (pts.size() < 50) {
        Side sx = pts.size() % 2 ? Side::plus : Side::minus;
        Side sy = pts.size() % 4 < 2 ? Side::plus : Side::minus;
        Vec2 x = point2(rng, sx), y = point2(rng, sy);
        if ((x - y).norm() > 0.5) pts.emplace_back(x, y);
    }
    std::vector<double> nav(pts.size());
    parallel_for(pts.size(), [&](std::size_t n) {
        auto [x, y] = pts[n];
        const double h = 1e-3;
        CMat2 H[2][2];
        for (int k = 0; k < 2; ++k) {
            Vec2 e = Vec2::Zero();
            e(k) = h;
            auto a = assemble_G(x + 2 * e, y, m, c, o), b = assemble_G(x + e, y, m, c, o);
            auto d = assemble_G(x - e, y, m, c, o), f = assemble_G(x - 2 * e, y, m, c, o);
            for (int l = 0; l < 2; ++l)
                H[k][l] = (-a.grad_x[l] + 8.0 * b.grad_x[l] - 8.0 * d.grad_x[l] + f.grad_x[l]) / (12 * h);
        }
        auto g0 = assemble_G(x, y, m, c);
        double rho = m.rho(side_of(x(1)));
        CMat2 res = rho * w2 * g0.G;
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i)
                for (int k = 0; k < 2; ++k) res(i, j) += m.mu * H[k][k](i, j) + (m.lambda + m.mu) * H[i][k](k, j);
        nav[n] = max_abs(res) / (rho * w2 * max_abs(g0.G));
    });
    rep.metrics.push_back(upper("navier_residual", *std::max_element(nav.begin(), nav.end()), 1e-4));

    StressWeights w = StressWeights::boundary_choice(m);
    VecX nu(2);
    nu << 0.0, 1.0;
    double jg = 0.0, jt = 0.0;
    std::vector<std::pair<double, Vec2>> jp;
    for (int n = 0; n < 10; ++n) jp.emplace_back(uni(rng, -1.5, 1.5), point2(rng, n % 2 ? Side::minus : Side::plus, 0.3, 1.0));
    std::vector<std::array<double, 2>> jr(jp.size());
    parallel_for(jp.size(), [&](std::size_t n) {
        auto [x1, y] = jp[n];
        CMatX J[2], T[2];
        double sg = 0.0, st = 0.0;
        const double eps[2] = {1e-2, 1e-3};
        for (int e = 0; e < 2; ++e) {
            auto gp = assemble_G(Vec2(x1, eps[e]), y, m, c, o), gm = assemble_G(Vec2(x1, -eps[e]), y, m, c, o);
            J[e] = gp.G - gm.G;
            CMatX tp = traction_columns(gp.G, grads(gp), nu, w, m), tm = traction_columns(gm.G, grads(gm), nu, w, m);
            T[e] = tp - tm;
            sg = std::max(sg, max_abs(gp.G));
            st = std::max(st, max_abs(tp));
        }
        jr[n][0] = max_abs((10.0 * J[1] - J[0]) / 9.0) / sg;
        jr[n][1] = max_abs((10.0 * T[1] - T[0]) / 9.0) / st;
    });
    for (auto& r : jr) {
        jg = std::max(jg, r[0]);
        jt = std::max(jt, r[1]);
    }
    rep.metrics.push_back(upper("jump_G", jg, 1e-4));
    rep.metrics.push_back(upper("jump_traction", jt, 1e-4));

    std::vector<std::pair<Vec2, Vec2>> rp;
    for (int n = 0; n < 20; ++n) rp.emplace_back(point2(rng, Side::plus), point2(rng, Side::minus));
    std::vector<double> rec(rp.size());
    parallel_for(rp.size(), [&](std::size_t n) {
        auto [x, y] = rp[n];
        if (n % 2) std::swap(x, y);
        rec[n] = max_abs(assemble_G(x, y, m, c).G - assemble_G(y, x, m, c).G.transpose());
    });
    rep.metrics.push_back(upper("reciprocity", *std::max_element(rec.begin(), rec.end()), 1e-7));
}

void suite_green3d(SuiteReport& rep, Rng& rng) {
    ElasticMedium m = verify_medium(3);
    QuadConfig c;
    c.tol = 1e-12;
    GreenOptions o;
    o.grad_x = true;
    const double w2 = m.omega * m.omega;

    std::vector<std::pair<Vec3, Vec3>> pts;
    while (pts.size() < 10) {
        Side sx = pts.size() % 2 ? Side::plus : Side::minus;
        Side sy = pts.size() % 4 < 2 ? Side::plus : Side::minus;
        Vec3 x = point3(rng, sx), y = point3(rng, sy);
        if ((x - y).norm() > 0.5) pts.emplace_back(x, y);
    }
    std::vector<double> nav(pts.size());
    parallel_for(pts.size(), [&](std::size_t n) {
        auto [x, y] = pts[n];
        const double h = 1e-4;
        CMat3 lap = CMat3::Zero(), gd = CMat3::Zero();
        for (int k = 0; k < 3; ++k) {
            Vec3 xp = x, xm = x;
            xp(k) += h;
            xm(k) -= h;
            auto gp = assemble_G3d(xp, y, m, c, o), gm = assemble_G3d(xm, y, m, c, o);
            lap += (gp.grad_x[k] - gm.grad_x[k]) / (2 * h);
            for (int j = 0; j < 3; ++j) {
                cplx dp = gp.grad_x[0](0, j) + gp.grad_x[1](1, j) + gp.grad_x[2](2, j);
                cplx dm = gm.grad_x[0](0, j) + gm.grad_x[1](1, j) + gm.grad_x[2](2, j);
                gd(k, j) = (dp - dm) / (2 * h);
            }
        }
        auto g0 = assemble_G3d(x, y, m, c);
        double rho = m.rho(side_of(x(2)));
        CMat3 res = m.mu * lap + (m.lambda + m.mu) * gd + rho * w2 * g0.G;
        nav[n] = max_abs(res) / (rho * w2 * max_abs(g0.G));
    });
    rep.metrics.push_back(upper("navier_residual", *std::max_element(nav.begin(), nav.end()), 1e-3));

    StressWeights w = StressWeights::boundary_choice(m);
    VecX nu(3);
    nu << 0.0, 0.0, 1.0;
    std::vector<std::pair<Vec2, Vec3>> jp;
    for (int n = 0; n < 10; ++n)
        jp.emplace_back(Vec2(uni(rng, -1, 1), uni(rng, -1, 1)), point3(rng, n % 2 ? Side::minus : Side::plus, 0.3, 0.8));
    std::vector<std::array<double, 2>> jr(jp.size());
    parallel_for(jp.size(), [&](std::size_t n) {
        auto [xh, y] = jp[n];
        CMatX J[2], T[2];
        double sg = 0.0, st = 0.0;
        const double eps[2] = {1e-2, 1e-3};
        for (int e = 0; e < 2; ++e) {
            auto gp = assemble_G3d(Vec3(xh(0), xh(1), eps[e]), y, m, c, o);
            auto gm = assemble_G3d(Vec3(xh(0), xh(1), -eps[e]), y, m, c, o);
            J[e] = gp.G - gm.G;
            CMatX tp = traction_columns(gp.G, grads(gp), nu, w, m), tm = traction_columns(gm.G, grads(gm), nu, w, m);
            T[e] = tp - tm;
            sg = std::max(sg, max_abs(gp.G));
            st = std::max(st, max_abs(tp));
        }
        jr[n][0] = max_abs((10.0 * J[1] - J[0]) / 9.0) / sg;
        jr[n][1] = max_abs((10.0 * T[1] - T[0]) / 9.0) / st;
    });
    double jg = 0.0, jt = 0.0;
    for (auto& r : jr) {
        jg = std::max(jg, r[0]);
        jt = std::max(jt, r[1]);
    }
    rep.metrics.push_back(upper("jump_G", jg, 1e-3));
    rep.metrics.push_back(upper("jump_traction", jt, 1e-3));

    std::vector<std::pair<Vec3, Vec3>> rp;
    for (int n = 0; n < 10; ++n) rp.emplace_back(point3(rng, Side::plus), point3(rng, Side::minus));
    std::vector<double> rec(rp.size());
    parallel_for(rp.size(), [&](std::size_t n) {
        auto [x, y] = rp[n];
        if (n % 2) std::swap(x, y);
        rec[n] = max_abs(assemble_G3d(x, y, m, c).G - assemble_G3d(y, x, m, c).G.transpose());
    });
    rep.metrics.push_back(upper("reciprocity", *std::max_element(rec.begin(), rec.end()), 1e-6));

    // Hankel reduction against a tensor-product Gauss rule in the spectral plane
    std::vector<double> gx, gw;
    gauss_legendre(240, gx, gw);
    const int mono[5][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0}};
    double eh = 0.0;
    for (int t = 0; t < 5; ++t) {
        double s = uni(rng, 0.5, 1.5);
        Vec3 x(uni(rng, -0.5, 0.5), uni(rng, -0.5, 0.5), 0.3), y(uni(rng, -0.5, 0.5), uni(rng, -0.5, 0.5), 0.2);
        auto f = [s](cplx xi) { return std::exp(-0.5 * s * xi * xi); };
        int a = mono[t][0], b = mono[t][1];
        QuadResult r = hankel_reduce_monomial(f, a, b, x, y, m, c, false);
        const double L = 9.0 / std::sqrt(s);
        cplx bf = 0.0;
        for (size_t i = 0; i < gx.size(); ++i)
            for (size_t j = 0; j < gx.size(); ++j) {
                double z1 = L * gx[i], z2 = L * gx[j];
                bf += gw[i] * gw[j] * L * L * std::exp(-0.5 * s * (z1 * z1 + z2 * z2)) * std::pow(z1, a) *
                      std::pow(z2, b) * std::exp(I * (z1 * (x(0) - y(0)) + z2 * (x(1) - y(1))));
            }
        bf /= 4 * pi * pi;
        eh = std::max(eh, std::abs(r.value - bf));
    }
    rep.metrics.push_back(upper("hankel_vs_direct", eh, 1e-6));
}

void suite_degenerate(SuiteReport& rep, Rng& rng) {
    ElasticMedium m = verify_medium(2);
    m.rho_minus = m.rho_plus;
    QuadConfig c;
    c.tol = 1e-13;
    double e2 = 0.0;
    for (int n = 0; n < 20; ++n) {
        Vec2 x = point2(rng, n % 2 ? Side::plus : Side::minus), y = point2(rng, n % 3 ? Side::minus : Side::plus);
        if ((x - y).norm() < 0.2) y(0) += 0.5;
        CMatX P = kupradze_tensor(m, side_of(x(1)), x, y);
        e2 = std::max(e2, max_abs(assemble_G(x, y, m, c).G - P));
    }
    rep.metrics.push_back(upper("max_G_minus_Pi_2d", e2, 1e-10));
    ElasticMedium m3 = verify_medium(3);
    m3.rho_minus = m3.rho_plus;
    std::vector<std::pair<Vec3, Vec3>> pts;
    for (int n = 0; n < 20; ++n) {
        Vec3 x = point3(rng, n % 2 ? Side::plus : Side::minus), y = point3(rng, n % 3 ? Side::minus : Side::plus);
        if ((x - y).norm() < 0.2) y(0) += 0.5;
        pts.emplace_back(x, y);
    }
    std::vector<double> e3(pts.size());
    parallel_for(pts.size(), [&](std::size_t n) {
        auto [x, y] = pts[n];
        CMatX P = kupradze_tensor(m3, side_of(x(2)), x, y);
        e3[n] = max_abs(assemble_G3d(x, y, m3, c).G - P);
    });
    rep.metrics.push_back(upper("max_G_minus_Pi_3d", *std::max_element(e3.begin(), e3.end()), 1e-10));
}

void suite_far_field(SuiteReport& rep, Rng&) {
    const std::vector<double> radii = {50, 100, 200, 400, 800};
    QuadConfig c;
    c.tol = 1e-13;
    ElasticMedium m = verify_medium(2);
    Wavenumbers k = wavenumbers(m);
    const double th2[8] = {0.5, 1.1, 1.9, 2.6, -0.5, -1.1, -1.9, -2.6};
    const Vec2 y(0.3, 0.6);
    struct Case2 {
        Wave a;
        int j;
        double theta;
    };
    std::vector<Case2> cases;
    for (double th : th2)
        for (Wave a : {Wave::p, Wave::s})
            for (int j : {1, 2}) cases.push_back({a, j, th});
    std::vector<double> q2(cases.size());
    parallel_for(cases.size(), [&](std::size_t n) {
        const Case2& cs = cases[n];
        Vec2 xh(std::cos(cs.theta), std::sin(cs.theta));
        Side X = side_of(xh(1));
        double ka = k.k(cs.a, X);
        cplx uinf = far_field(cs.a, cs.j, cs.theta, y, m).value;
        std::vector<double> e;
        for (double r : radii) {
            Vec2 x = r * xh;
            ScalarPotentialPair p = scalar_potentials(cs.j, x, y, m, c, PotentialPart::correction, region_tag(x, y));
            cplx U = cs.a == Wave::p ? p.G_p : p.G_s;
            e.push_back(std::abs(U - std::exp(I * ka * r) / std::sqrt(r) * uinf));
        }
        q2[n] = decay_exponent(radii, e);
    });
    rep.metrics.push_back(lower("min_exponent_2d", *std::min_element(q2.begin(), q2.end()), 0.70));

    ElasticMedium m3 = verify_medium(3);
    Wavenumbers k3 = wavenumbers(m3);
    struct Case3 {
        Coeff3DKey key;
        int cs;
        double theta, phi;
    };
    const double th3[4] = {0.5, 1.1, -0.5, -1.1};
    const double ph3[2] = {0.4, 2.1};
    std::vector<Case3> cases3;
    for (double th : th3)
        for (double ph : ph3) {
            Side sd = side_of(th);
            std::map<int, bool> seen;
            for (const Coeff3DKey& key : all_keys3d()) {
                int cs = far_field_case_of(key, sd);
                if (cs == 0 || seen[cs]) continue;
                seen[cs] = true;
                cases3.push_back({key, cs, th, ph});
            }
        }
    std::vector<double> q3(cases3.size());
    parallel_for(cases3.size(), [&](std::size_t n) {
        const Case3& cs = cases3[n];
        Vec3 ys(0.2, -0.1, y_side_of(cs.key) == Side::plus ? 0.5 : -0.5);
        Vec3 xh(std::cos(cs.phi) * std::cos(cs.theta), std::sin(cs.phi) * std::cos(cs.theta), std::sin(cs.theta));
        double ka = k3.k(x_wave(cs.key), side_of(cs.theta));
        cplx finf = far_field3d(cs.cs, cs.key, cs.theta, cs.phi, ys, m3).value;
        std::vector<double> e;
        for (double r : radii) {
            QuadResult q = far_field_integral3d(cs.key, r * xh, ys, m3, c);
            cplx lead = std::exp(I * ka * r) / r * finf;
            e.push_back(std::abs(q.value - lead) / std::abs(lead));
        }
        q3[n] = decay_exponent(radii, e);
    });
    auto it = std::min_element(q3.begin(), q3.end());
    rep.metrics.push_back(lower("min_relative_exponent_3d", *it, 0.95));
    const Case3& worst = cases3[it - q3.begin()];
    std::ostringstream s;
    s << "3d worst: " << key_name(worst.key) << " case " << worst.cs << " theta " << worst.theta << " phi "
      << worst.phi << "; " << cases3.size() << " key/direction pairs";
    rep.notes.push_back(s.str());
}

FieldEval kupradze_column(const ElasticMedium& m, const VecX& y, const CVecX& a) {
    return [m, y, a](const VecX& x) {
        TensorJet t = kupradze_jet(m, Side::plus, x, y);
        return column_jet(t.value, t.grad_x, a);
    };
}

void suite_radiation(SuiteReport& rep, Rng&) {
    for (int dim : {2, 3}) {
        ElasticMedium m = verify_medium(dim);
        VecX y1(dim), y2(dim);
        CVecX a = CVecX::Zero(dim), b = CVecX::Zero(dim);
        if (dim == 2) {
            y1 << 0.3, 0.5;
            y2 << -0.4, 0.8;
        } else {
            y1 << 0.3, -0.2, 0.5;
            y2 << -0.4, 0.1, 0.8;
        }
        a(0) = 1.0;
        b(dim - 1) = cplx(0.6, 0.3);
        a(1) = cplx(0.0, 0.4);
        FieldEval u = kupradze_column(m, y1, a), v = kupradze_column(m, y2, b);
        ProbeOptions po;
        po.nodes_per_wavelength = dim == 2 ? 32 : 8;
        double p25 = std::abs(radiation_probe_pair(u, v, m, 25.0, dim, po));
        double p400 = std::abs(radiation_probe_pair(u, v, m, 400.0, dim, po));
        double e25 = std::abs(radiation_probe_energy(u, m, 25.0, dim, po));
        double e400 = std::abs(radiation_probe_energy(u, m, 400.0, dim, po));
        std::string d = std::to_string(dim) + "d";
        rep.metrics.push_back(bound("pair_ratio_" + d, p400 / p25, 0.2));
        rep.metrics.push_back(bound("energy_ratio_" + d, e400 / e25, 0.2));
        std::ostringstream s;
        s.precision(6);
        s << d << ": pair " << p25 << " -> " << p400 << ", energy defect " << e25 << " -> " << e400;
        rep.notes.push_back(s.str());
    }
}

void suite_angular(SuiteReport& rep, Rng& rng) {
    const AngularKind kinds[6] = {AngularKind::one, AngularKind::cos_alpha, AngularKind::sin_alpha,
                                  AngularKind::sin_2alpha, AngularKind::cos_minus, AngularKind::cos_plus};
    QuadConfig c;
    c.tol = 1e-14;
    double err = 0.0;
    for (int n = 0; n < 50; ++n) {
        double t = uni(rng, 0.0, 20.0), al = uni(rng, 0.0, 2 * pi);
        SpectralPath path;
        Segment sg;
        sg.a = 0.0;
        sg.b = 2 * pi;
        path.segments.push_back(sg);
        path.node_budget = c.node_budget;
        QuadResultN q = integrate_path(
            path, 6,
            [&](cplx th, cplx* out) {
                double s = std::sin(th.real()), co = std::cos(th.real());
                cplx e = std::exp(I * t * std::cos(th.real() - al));
                out[0] = e;
                out[1] = e * co;
                out[2] = e * s;
                out[3] = e * s * co;
                out[4] = e * co * co;
                out[5] = e * s * s;
            },
            c, t);
        for (int r = 0; r < 6; ++r)
            err = std::max(err, std::abs(q.value[r] / (2 * pi) - angular_identity_closed(kinds[r], t, al)));
    }
    rep.metrics.push_back(upper("max_error", err, 1e-10));
}

IncidentSource verify_source() {
    IncidentSource s;
    s.z = Vec2(0.3, 1.0);
    s.a = CVec2(1.0, cplx(0.3, 0.2));
    return s;
}

double flat_error(const ScatterSolution& s, const ElasticMedium& m, const IncidentSource& src) {
    SurfaceProfile flat = SurfaceProfile::flat();
    double en = 0.0, ed = 0.0;
    for (int i = 1; i <= 6; ++i)
        for (int j = 0; j < 24; ++j) {
            double r = 0.6 * i, th = 2 * pi * (j + 0.5) / 24;
            Vec2 x(r * std::cos(th), r * std::sin(th));
            if ((x - src.z).norm() < 0.3) continue;
            CVec2 ex = reference_wave(x, src, m, flat, s.options.quad) - incident_wave(x, src, m).u.head<2>();
            en += (s.u_hat_at(x) - ex).squaredNorm();
            ed += ex.squaredNorm();
        }
    return std::sqrt(en / ed);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void suite_bie2d_flat(SuiteReport& rep, Rng&) {
    ElasticMedium m = verify_medium(2);
    IncidentSource src = verify_source();
    SolverOptions o;
    o.R = 4.0;
    o.boundary_nodes = 512;
    o.points_per_wavelength = 20;
    double err[2], t[2];
    for (int lev = 0; lev < 2; ++lev) {
        auto t0 = std::chrono::steady_clock::now();
        SolverOptions ol = o;
        ol.points_per_wavelength = o.points_per_wavelength * (lev ? 2 : 1);
        ScatterSolution s = solve_scattering(m, SurfaceProfile::flat(), src, ol);
        t[lev] = seconds_since(t0);
        err[lev] = flat_error(s, m, src);
    }
    rep.metrics.push_back(upper("relative_l2_error", err[0], 1e-3));
    rep.metrics.push_back(bound("refinement_ratio", err[1] / err[0], 0.5));
    rep.metrics.push_back(bound("max_solve_seconds", std::max(t[0], t[1]), 300.0));
    std::ostringstream s;
    s << "N = 512, nodes per wavelength 20 and 40: errors " << err[0] << ", " << err[1];
    rep.notes.push_back(s.str());
}

void suite_bie2d_rough(SuiteReport& rep, Rng&) {
    ElasticMedium m = verify_medium(2);
    IncidentSource src = verify_source();
    const double lam = 2 * pi / wavenumbers(m).max();
    SurfaceProfile bump = SurfaceProfile::bump(0.2 * lam, 1.2);
    SolverOptions o;
    o.R = 4.0;
    o.boundary_nodes = 512;
    o.points_per_wavelength = 20;
    std::vector<ScatterSolution> sols;
    TransmissionCheck tc[2];
    for (int lev = 0; lev < 2; ++lev) {
        SolverOptions ol = o;
        ol.points_per_wavelength = o.points_per_wavelength * (lev ? 2 : 1);
        sols.push_back(solve_scattering(m, bump, src, ol));
        tc[lev] = transmission_check(sols.back());
    }
    rep.metrics.push_back(upper("displacement_jump", std::max(tc[0].displacement_jump, tc[1].displacement_jump), 1e-12));
    rep.metrics.push_back(bound("traction_jump_ratio", tc[1].traction_jump_rms / tc[0].traction_jump_rms, 0.5));
    // one-sided quadratic extrapolation to |x| = R from R -+ eps, 2 eps, 3 eps
    const double eps = 0.02, R = o.R;
    const double ths[5] = {0.6, 1.9, 2.8, -0.9, -2.2};
    double worst = 0.0;
    for (double th : ths) {
        Vec2 e(std::cos(th), std::sin(th));
        auto extrap = [&](const std::function<CVec2(double)>& F, double sg) {
            return CVec2(3.0 * F(R + sg * eps) - 3.0 * F(R + sg * 2 * eps) + F(R + sg * 3 * eps));
        };
        CVec2 in0 = extrap([&](double r) { return sols[0].field_inside(r * e); }, -1);
        CVec2 in1 = extrap([&](double r) { return sols[1].field_inside(r * e); }, -1);
        CVec2 out0 = extrap([&](double r) { return reconstruct_exterior(sols[0], r * e); }, 1);
        double disc = (in0 - in1).norm();
        worst = std::max(worst, (in0 - out0).norm() / (2.0 * disc));
    }
    rep.metrics.push_back(bound("trace_mismatch_over_2x_discretization", worst, 1.0));
    std::ostringstream s;
    s << "bump height " << 0.2 * lam << ", traction jump rms " << tc[0].traction_jump_rms << " -> "
      << tc[1].traction_jump_rms << " (scale " << tc[0].traction_scale << ")";
    rep.notes.push_back(s.str());
}

struct SuiteDef {
    std::string name, description;
    double limit;
    std::function<void(SuiteReport&, Rng&)> run;
};

const std::vector<SuiteDef>& registry() {
    static const std::vector<SuiteDef> defs = {
        {"stress-identity", "direct vs identity form of the generalized stress, 2D and 3D", 1.0,
         suite_stress_identity},
        {"spectral-system", "transformed interface systems satisfied by the 2D and 3D coefficients", 5.0,
         suite_spectral_system},
        {"sommerfeld", "Fourier and Hankel inversions against closed-form free-space values", 30.0,
         suite_sommerfeld},
        {"green2d", "2D Green tensor: Navier residual, interface jumps, reciprocity", 180.0, suite_green2d},
        {"green3d", "3D Green tensor: Navier residual, interface jumps, reciprocity, Hankel reduction", 900.0,
         suite_green3d},
        {"degenerate-media", "equal densities reduce the Green tensor to the Kupradze tensor", 60.0,
         suite_degenerate},
        {"far-field", "decay of the far-field residual of the correction fields", 600.0, suite_far_field},
        {"radiation", "surface radiation probes vanish as the radius grows", 300.0, suite_radiation},
        {"angular-identities", "angular integrals of the Hankel reduction vs adaptive quadrature", 10.0,
         suite_angular},
        {"bie2d-flat", "scattering solver on a flat interface against the closed form", 600.0,
         suite_bie2d_flat},
        {"bie2d-rough", "scattering solver on a bump: transmission and trace consistency", 600.0,
         suite_bie2d_rough},
    };
    return defs;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& d : registry()) v.push_back(d.name);
        return v;
    }();
    return names;
}

std::string suite_description(const std::string& name) {
    for (const auto& d : registry())
        if (d.name == name) return d.description;
    throw Error(ErrorCode::invalid_input, "unknown verify suite: " + name);
}

SuiteReport run_suite(const std::string& name, const VerifyOptions& opt) {
    for (const auto& d : registry()) {
        if (d.name != name) continue;
        SuiteReport rep;
        rep.name = d.name;
        rep.description = d.description;
        rep.seed = opt.seed;
        rep.runtime_limit = d.limit;
        Rng rng(opt.seed);
        auto t0 = std::chrono::steady_clock::now();
        d.run(rep, rng);
        rep.runtime = seconds_since(t0);
        rep.pass = rep.runtime <= rep.runtime_limit;
        for (const Metric& m : rep.metrics) rep.pass = rep.pass && m.pass;
        return rep;
    }
    throw Error(ErrorCode::invalid_input, "unknown verify suite: " + name);
}

}  // namespace le
