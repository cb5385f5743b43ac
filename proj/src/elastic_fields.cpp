#include "layered_elastica/elastic_fields.hpp"

#include <cmath>

#include "layered_elastica/quadrature.hpp"
#include "layered_elastica/specfun.hpp"

namespace le {

SurfaceFrame SurfaceFrame::make(const VecX& nu) {
    SurfaceFrame f;
    f.nu = nu / nu.norm();
    if (nu.size() == 2) {
        f.tau.resize(2);
        f.tau << f.nu(1), -f.nu(0);
    }
    return f;
}

cplx phi(double k, const VecX& x, const VecX& y, int dim) {
    double r = (x - y).norm();
    if (r == 0.0) throw Error(ErrorCode::coincident_points, "fundamental solution at x = y");
    if (dim == 2) return 0.25 * I * hankel1(0, k * r);
    return std::exp(I * (k * r)) / (4 * pi * r);
}

namespace {

// Coefficients of Phi_k = sum_m r^(2m) (P_m + Q_m ln r) in 2D.
void log_series_coeffs(double k, int n, std::vector<cplx>& P, std::vector<double>& Q) {
    P.resize(n);
    Q.resize(n);
    double t = 1.0, H = 0.0;
    for (int m = 0; m < n; ++m) {
        if (m > 0) {
            t *= -(k * k / 4) / ((double)m * m);
            H += 1.0 / m;
        }
        Q[m] = -t / (2 * pi);
        P[m] = t * (0.25 * I - (std::log(k / 2) + euler_gamma - H) / (2 * pi));
    }
}

constexpr int n_series = 40;

// Sums the radial jets of sum_m r^(2m) (P_m + Q_m ln r) for m >= m0.
RadialJet log_series_jet(const std::vector<cplx>& P, const std::vector<double>& Q, double r,
                         int m0) {
    RadialJet j{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    double L = std::log(r);
    double r2 = r * r;
    double pw = std::pow(r2, m0);  // r^(2m)
    for (int m = m0; m < (int)P.size(); ++m) {
        cplx base = P[m] + Q[m] * L;
        double q = Q[m];
        double a = 2.0 * m;
        cplx tg = pw * base;
        cplx tdg = pw / r * (a * base + q);
        cplx tA = pw / r2 * (a * base + q);
        cplx tB = pw / r2 * (a * (a - 2) * base + (2 * a - 2) * q);
        cplx tE = pw / (r2 * r) * (a * (a - 2) * (a - 4) * base + (3 * a * a - 12 * a + 8) * q);
        j.g += tg;
        j.dg += tdg;
        j.A += tA;
        j.B += tB;
        j.E += tE;
        pw *= r2;
        if (m > m0 + 2 && std::abs(tA) + std::abs(tE) * r < 1e-18 * (std::abs(j.A) + 1e-300) &&
            std::abs(tg) < 1e-18 * (std::abs(j.g) + 1e-300))
            break;
    }
    j.C = j.B / r;
    return j;
}

RadialJet sub(const RadialJet& a, const RadialJet& b) {
    return {a.g - b.g, a.dg - b.dg, a.A - b.A, a.B - b.B, a.C - b.C, a.E - b.E};
}

}  // namespace

RadialJet phi_radial(double k, double r, int dim) {
    if (r <= 0.0) throw Error(ErrorCode::coincident_points, "radial jet at r = 0");
    RadialJet j;
    if (dim == 2) {
        double z = k * r;
        if (z <= 2.0) {
            std::vector<cplx> P;
            std::vector<double> Q;
            log_series_coeffs(k, n_series, P, Q);
            return log_series_jet(P, Q, r, 0);
        }
        cplx h0 = hankel1(0, z), h1 = hankel1(1, z);
        j.g = 0.25 * I * h0;
        j.dg = -0.25 * I * k * h1;
        j.A = j.dg / r;
        cplx g2 = -0.25 * I * k * k * (h0 - h1 / z);
        cplx g3 = 0.25 * I * k * k * k * (h1 + h0 / z - 2.0 * h1 / (z * z));
        j.B = g2 - j.A;
        j.C = j.B / r;
        j.E = g3 - 3.0 * j.B / r;
        return j;
    }
    cplx e = std::exp(I * (k * r)) / (4 * pi);
    cplx ikr = I * (k * r);
    double kr2 = k * k * r * r;
    j.g = e / r;
    j.dg = e * (ikr - 1.0) / (r * r);
    j.A = j.dg / r;
    cplx g2 = e * (2.0 - 2.0 * ikr - kr2) / (r * r * r);
    cplx g3 = e * (-6.0 + 6.0 * ikr + 3.0 * kr2 - ikr * kr2) / (r * r * r * r);
    j.B = g2 - j.A;
    j.C = j.B / r;
    j.E = g3 - 3.0 * j.B / r;
    return j;
}

RadialJet psi_radial(double ks, double kp, double r, int dim) {
    if (r <= 0.0) throw Error(ErrorCode::coincident_points, "radial jet at r = 0");
    if (dim == 2 && ks * r <= 2.0) {
        std::vector<cplx> Ps, Pp;
        std::vector<double> Qs, Qp;
        log_series_coeffs(ks, n_series, Ps, Qs);
        log_series_coeffs(kp, n_series, Pp, Qp);
        for (int m = 0; m < n_series; ++m) {
            Ps[m] -= Pp[m];
            Qs[m] -= Qp[m];
        }
        return log_series_jet(Ps, Qs, r, 0);
    }
    if (dim == 3 && ks * r <= 1.0) {
        RadialJet j{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
        cplx as = I * ks, ap = I * kp;
        cplx ps = as, pp = ap;
        double fact = 1.0;
        double rp = 1.0;  // r^(n-1)
        for (int n = 1; n < 40; ++n) {
            fact *= n;
            cplx c = (ps - pp) / (4 * pi * fact);
            double nn = n;
            j.g += c * rp;
            j.dg += c * (nn - 1) * rp / r;
            j.A += c * (nn - 1) * rp / (r * r);
            j.B += c * (nn - 1) * (nn - 3) * rp / (r * r);
            j.E += c * (nn - 1) * (nn - 3) * (nn - 5) * rp / (r * r * r);
            ps *= as;
            pp *= ap;
            rp *= r;
            if (std::abs(c) * rp < 1e-20 * (std::abs(j.g) + 1e-300) && n > 4) break;
        }
        j.C = j.B / r;
        return j;
    }
    return sub(phi_radial(ks, r, dim), phi_radial(kp, r, dim));
}

TensorJet radial_tensor_jet(const RadialJet& s, const RadialJet& q, double mu, double irw,
                            const VecX& dx) {
    int d = (int)dx.size();
    VecX rh = dx / dx.norm();
    TensorJet t;
    CMatX rr = (rh * rh.transpose()).cast<cplx>();
    t.value = (s.g / mu + irw * q.A) * CMatX::Identity(d, d) + irw * q.B * rr;
    t.grad_x.assign(d, CMatX::Zero(d, d));
    for (int kk = 0; kk < d; ++kk) {
        CMatX& G = t.grad_x[kk];
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                cplx v = q.E * rh(i) * rh(j) * rh(kk);
                v += q.C * ((i == j ? rh(kk) : 0.0) + (i == kk ? rh(j) : 0.0) +
                            (j == kk ? rh(i) : 0.0));
                G(i, j) = irw * v + (i == j ? s.dg * rh(kk) / mu : 0.0);
            }
    }
    return t;
}

TensorJet kupradze_jet(const ElasticMedium& m, Side side, const VecX& x, const VecX& y) {
    int d = (int)x.size();
    Wavenumbers k = wavenumbers(m);
    double ks = k.k(Wave::s, side), kp = k.k(Wave::p, side);
    VecX dx = x - y;
    double r = dx.norm();
    if (r < 1e-12 * (2 * pi / ks))
        throw Error(ErrorCode::coincident_points, "Kupradze tensor at coincident points");
    RadialJet s = phi_radial(ks, r, d);
    RadialJet q = psi_radial(ks, kp, r, d);
    return radial_tensor_jet(s, q, m.mu, 1.0 / (m.rho(side) * m.omega * m.omega), dx);
}

CMatX kupradze_tensor(const ElasticMedium& m, Side side, const VecX& x, const VecX& y) {
    int d = (int)x.size();
    Wavenumbers k = wavenumbers(m);
    double ks = k.k(Wave::s, side), kp = k.k(Wave::p, side);
    VecX dx = x - y;
    double r = dx.norm();
    if (r < 1e-12 * (2 * pi / ks))
        throw Error(ErrorCode::coincident_points, "Kupradze tensor at coincident points");
    VecX rh = dx / r;
    RadialJet s = phi_radial(ks, r, d);
    RadialJet q = psi_radial(ks, kp, r, d);
    double irw = 1.0 / (m.rho(side) * m.omega * m.omega);
    CMatX rr = (rh * rh.transpose()).cast<cplx>();
    return (s.g / m.mu + irw * q.A) * CMatX::Identity(d, d) + irw * q.B * rr;
}

StaticKelvin2d static_kelvin2d(const ElasticMedium& m) {
    double l = m.lambda, u = m.mu;
    return {-(l + 3 * u) / (4 * pi * u * (l + 2 * u)), (l + u) / (4 * pi * u * (l + 2 * u))};
}

CMat2 kupradze_remainder2d(const ElasticMedium& m, Side side, const Vec2& x, const Vec2& y) {
    Wavenumbers k = wavenumbers(m);
    double ks = k.k(Wave::s, side), kp = k.k(Wave::p, side);
    double irw = 1.0 / (m.rho(side) * m.omega * m.omega);
    StaticKelvin2d sk = static_kelvin2d(m);
    Vec2 dx = x - y;
    double r = dx.norm();
    std::vector<cplx> Ps, Pp;
    std::vector<double> Qs, Qp;
    if (ks * r <= 2.0) {
        log_series_coeffs(ks, n_series, Ps, Qs);
        log_series_coeffs(kp, n_series, Pp, Qp);
        cplx dP1 = Ps[1] - Pp[1];
        double dQ1 = Qs[1] - Qp[1];
        cplx iso = Ps[0] / m.mu + irw * (2.0 * dP1 + dQ1);
        if (r == 0.0) return iso * CMat2::Identity();
        // higher-order parts of Phi_ks and of the psi Hessian
        RadialJet s1 = log_series_jet(Ps, Qs, r, 1);
        std::vector<cplx> dP(n_series);
        std::vector<double> dQ(n_series);
        for (int i = 0; i < n_series; ++i) {
            dP[i] = Ps[i] - Pp[i];
            dQ[i] = Qs[i] - Qp[i];
        }
        RadialJet q2 = log_series_jet(dP, dQ, r, 2);
        Vec2 rh = dx / r;
        cplx a = iso + s1.g / m.mu + irw * q2.A;
        cplx b = irw * q2.B;
        CMat2 out = a * CMat2::Identity() + b * (rh * rh.transpose()).cast<cplx>();
        return out;
    }
    Vec2 rh = dx / r;
    CMatX P = kupradze_tensor(m, side, x, y);
    CMat2 out = P;
    out -= (sk.alpha * std::log(r)) * CMat2::Identity() +
           (sk.gamma0 * rh * rh.transpose()).cast<cplx>();
    return out;
}

namespace {

cplx divergence(const FieldJet& j) { return j.grad.trace(); }

CVec3 curl3(const CMatX& g) {
    return CVec3(g(2, 1) - g(1, 2), g(0, 2) - g(2, 0), g(1, 0) - g(0, 1));
}

CVec3 cross(const VecX& a, const CVec3& b) {
    return CVec3(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
}

}  // namespace

CVecX stress_direct(const FieldJet& jet, const SurfaceFrame& fr, const StressWeights& w,
                    const ElasticMedium& m, int dim) {
    CVecX dnu = jet.grad * fr.nu.cast<cplx>();
    cplx dv = divergence(jet);
    if (dim == 2) {
        cplx dperp = jet.grad(0, 1) - jet.grad(1, 0);
        return (m.mu + w.mu_tilde) * dnu + (w.lambda_tilde * dv) * fr.nu.cast<cplx>() -
               (w.mu_tilde * dperp) * fr.tau.cast<cplx>();
    }
    CVec3 c = curl3(jet.grad);
    CVecX out = (m.mu + w.mu_tilde) * dnu + (w.lambda_tilde * dv) * fr.nu.cast<cplx>();
    out += w.mu_tilde * cross(fr.nu, c);
    return out;
}

CVec3 m_nu(const FieldJet& jet, const SurfaceFrame& fr) {
    const CMatX& g = jet.grad;  // g(i, j) = d_j u_i
    const VecX& n = fr.nu;
    return CVec3(n(1) * g(1, 0) - n(0) * g(1, 1) + n(2) * g(2, 0) - n(0) * g(2, 2),
                 n(0) * g(0, 1) - n(1) * g(0, 0) + n(2) * g(2, 1) - n(1) * g(2, 2),
                 n(0) * g(0, 2) - n(2) * g(0, 0) + n(1) * g(1, 2) - n(2) * g(1, 1));
}

CVecX stress_identity(const FieldJet& jet, const SurfaceFrame& fr, const StressWeights& w,
                      const ElasticMedium& m, int dim) {
    cplx dv = divergence(jet);
    if (dim == 2) {
        CVecX dt = jet.grad * fr.tau.cast<cplx>();
        CVecX perp(2);
        perp << dt(1), -dt(0);
        cplx dperp = jet.grad(0, 1) - jet.grad(1, 0);
        return (m.mu + w.mu_tilde) * perp + ((2 * m.mu + m.lambda) * dv) * fr.nu.cast<cplx>() +
               (m.mu * dperp) * fr.tau.cast<cplx>();
    }
    CVecX out = (m.mu + w.mu_tilde) * m_nu(jet, fr);
    out += ((2 * m.mu + m.lambda) * dv) * fr.nu.cast<cplx>();
    out -= m.mu * cross(fr.nu, curl3(jet.grad));
    return out;
}

HelmholtzParts helmholtz_split(const FieldJet& jet, int dim) {
    HelmholtzParts h;
    h.phi_p = divergence(jet);
    if (dim == 2)
        h.phi_s = jet.grad(0, 1) - jet.grad(1, 0);
    else
        h.phi_s3 = curl3(jet.grad);
    return h;
}

CVecX helmholtz_recompose(const HelmholtzGrads& g, double kp, double ks, int dim) {
    double ip = 1.0 / (kp * kp), is = 1.0 / (ks * ks);
    if (dim == 2) {
        CVecX gp(2);
        gp << g.grad_phi_s(1), -g.grad_phi_s(0);
        return -ip * g.grad_phi_p - is * gp;
    }
    return -ip * g.grad_phi_p + is * g.curl_phi_s;
}

namespace {

struct SurfNode {
    VecX x, nu;
    double w;
};

std::vector<SurfNode> hemisphere_nodes(double R, int dim, Side side, double wavelength, int npw) {
    std::vector<SurfNode> out;
    std::vector<double> gx, gw;
    const int ng = 16;
    gauss_legendre(ng, gx, gw);
    double sgn = side == Side::plus ? 1.0 : -1.0;
    if (dim == 2) {
        double len = pi * R;
        int np = std::max(1, (int)std::ceil(len / wavelength * npw / ng));
        for (int p = 0; p < np; ++p) {
            double t0 = pi * p / np, t1 = pi * (p + 1) / np;
            for (int i = 0; i < ng; ++i) {
                double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gx[i];
                VecX n(2);
                n << std::cos(t), sgn * std::sin(t);
                out.push_back({R * n, n, 0.5 * (t1 - t0) * gw[i] * R});
            }
        }
        return out;
    }
    double len = 0.5 * pi * R;
    int np = std::max(1, (int)std::ceil(len / wavelength * npw / ng));
    for (int p = 0; p < np; ++p) {
        double t0 = 0.5 * pi * p / np, t1 = 0.5 * pi * (p + 1) / np;
        for (int i = 0; i < ng; ++i) {
            double th = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gx[i];
            double wt = 0.5 * (t1 - t0) * gw[i];
            int nphi = std::max(8, (int)std::ceil(2 * pi * R * std::sin(th) / wavelength * npw));
            for (int q = 0; q < nphi; ++q) {
                double ph = 2 * pi * q / nphi;
                VecX n(3);
                n << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), sgn * std::cos(th);
                out.push_back({R * n, n, wt * (2 * pi / nphi) * R * R * std::sin(th)});
            }
        }
    }
    return out;
}

StressWeights probe_weights(const ElasticMedium& m, const ProbeOptions& o) {
    return o.physical_weights ? StressWeights::physical(m) : o.weights;
}

}  // namespace

cplx radiation_probe_pair(const FieldEval& u, const FieldEval& v, const ElasticMedium& m, double R,
                          int dim, const ProbeOptions& opt) {
    Wavenumbers k = wavenumbers(m);
    double lam = 2 * pi / k.k(Wave::s, opt.side);
    StressWeights w = probe_weights(m, opt);
    cplx acc = 0.0;
    for (const SurfNode& n : hemisphere_nodes(R, dim, opt.side, lam, opt.nodes_per_wavelength)) {
        SurfaceFrame fr = SurfaceFrame::make(n.nu);
        FieldJet ju = u(n.x), jv = v(n.x);
        CVecX pu = stress_direct(ju, fr, w, m, dim), pv = stress_direct(jv, fr, w, m, dim);
        acc += n.w * (pu.cwiseProduct(jv.u).sum() - pv.cwiseProduct(ju.u).sum());
    }
    return acc;
}

cplx radiation_probe_energy(const FieldEval& u, const ElasticMedium& m, double R, int dim,
                            const ProbeOptions& opt) {
    Wavenumbers k = wavenumbers(m);
    double kp = k.k(Wave::p, opt.side), ks = k.k(Wave::s, opt.side);
    double lam = 2 * pi / ks;
    StressWeights w = probe_weights(m, opt);
    double flux = 0.0, ep = 0.0, es = 0.0;
    for (const SurfNode& n : hemisphere_nodes(R, dim, opt.side, lam, opt.nodes_per_wavelength)) {
        SurfaceFrame fr = SurfaceFrame::make(n.nu);
        FieldJet ju = u(n.x);
        CVecX pu = stress_direct(ju, fr, w, m, dim);
        flux += n.w * pu.cwiseProduct(ju.u.conjugate()).sum().imag();
        HelmholtzParts h = helmholtz_split(ju, dim);
        ep += n.w * std::norm(h.phi_p);
        es += n.w * (dim == 2 ? std::norm(h.phi_s) : h.phi_s3.squaredNorm());
    }
    return flux - (2 * m.mu + m.lambda) / kp * ep - m.mu / ks * es;
}

}  // namespace le
