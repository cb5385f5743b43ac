#include "layered_elastica/green2d.hpp"

#include <cmath>

#include "layered_elastica/elastic_fields.hpp"

namespace le {

RegionTag region_tag(const Vec2& x, const Vec2& y, std::optional<Side> x_side,
                     std::optional<Side> y_side) {
    RegionTag t;
    t.x_region = x(1) > 0 ? Side::plus : (x(1) < 0 ? Side::minus : x_side.value_or(Side::plus));
    t.y_region = y(1) > 0 ? Side::plus : (y(1) < 0 ? Side::minus : y_side.value_or(Side::plus));
    return t;
}

std::array<cplx, 2> coeff_AB_parts(Wave a, int j, const SpectralPoint& sp, Side y_side) {
    const cplx xi = sp.xi;
    const cplx pre = sp.C0 * xi / sp.D;
    const double dks = sp.is_plus - sp.is_minus;
    const double dkp = sp.ip_plus - sp.ip_minus;
    const bool up = y_side == Side::plus;
    const cplx bs = up ? sp.bs_plus : sp.bs_minus;
    const cplx bp = up ? sp.bp_plus : sp.bp_minus;
    const double is = up ? sp.is_plus : sp.is_minus;
    const double ip = up ? sp.ip_plus : sp.ip_minus;
    cplx cp = 0.0, cs = 0.0;  // parts multiplying exp(+-beta_p y2), exp(+-beta_s y2)
    if (a == Wave::p && j == 1) {
        cs = I * pre * (up ? is * bs : -is * bs);
        cp = -I * pre * dks * ip * xi * xi / sp.Dp;
    } else if (a == Wave::s && j == 1) {
        cs = pre * (up ? -1.0 : 1.0) * dkp * is * bs * xi / sp.Ds;
        cp = pre * ip * xi;
    } else if (a == Wave::p && j == 2) {
        cs = pre * is * xi;
        cp = pre * (up ? -1.0 : 1.0) * dks * ip * bp * xi / sp.Dp;
    } else if (a == Wave::s && j == 2) {
        cs = I * pre * dkp * is * xi * xi / sp.Ds;
        cp = I * pre * (up ? -1.0 : 1.0) * ip * bp;
    } else {
        throw Error(ErrorCode::invalid_key, "column must be 1 or 2");
    }
    return {cp, cs};
}

cplx coeff_AB(Wave a, int j, cplx xi, double y2, const ElasticMedium& m, Side y_side) {
    Wavenumbers k = wavenumbers(m);
    SpectralPoint sp = spectral_point(m, k, xi);
    auto c = coeff_AB_parts(a, j, sp, y_side);
    double sy = y_side == Side::plus ? -1.0 : 1.0;
    return c[0] * std::exp(sy * sp.bp(y_side) * y2) + c[1] * std::exp(sy * sp.bs(y_side) * y2);
}

cplx tilde_G_kernel(Wave a, int j, const SpectralPoint& sp, const ElasticMedium& m,
                    const RegionTag& t) {
    const bool xp = t.x_region == Side::plus, yp = t.y_region == Side::plus;
    const cplx xi = sp.xi;
    const double c = a == Wave::p ? 1.0 / (2 * m.mu + m.lambda) : 1.0 / m.mu;
    const cplx R = a == Wave::p ? sp.Rp : sp.Rs;
    const cplx T = a == Wave::p ? sp.Tp : sp.Ts;
    const cplx Dn = a == Wave::p ? sp.Dp : sp.Ds;
    const double ikp = a == Wave::p ? sp.ip_plus : sp.is_plus;
    const cplx bplus = a == Wave::p ? sp.bp_plus : sp.bs_plus;
    const cplx bminus = a == Wave::p ? sp.bp_minus : sp.bs_minus;
    // p,1 and s,2 carry xi/beta; s,1 and p,2 carry 1/2
    const bool odd = (a == Wave::p && j == 1) || (a == Wave::s && j == 2);
    if (j != 1 && j != 2) throw Error(ErrorCode::invalid_key, "column must be 1 or 2");
    cplx v;
    if (odd) {
        cplx f;
        if (xp && yp)
            f = R / bplus;
        else if (!xp && yp)
            f = 2.0 * ikp / Dn;  // T / beta_+
        else if (xp && !yp)
            f = -(T - 2.0) / bminus;
        else
            f = -R / bminus;
        v = 0.5 * I * xi * f;
        if (a == Wave::s) v = -v;
    } else {
        cplx f;
        if (xp == yp)
            f = R;
        else if (!xp && yp)
            f = T;
        else
            f = T - 2.0;
        v = 0.5 * f;
    }
    return c * v;
}

std::array<cplx, 2> jump_residual2d(int j, double xi_r, double y2, const ElasticMedium& m) {
    Wavenumbers k = wavenumbers(m);
    cplx xi(xi_r, 0.0);
    SpectralPoint sp = spectral_point(m, k, xi);
    Side ys = y2 >= 0 ? Side::plus : Side::minus;
    cplx Up = coeff_AB(Wave::p, j, xi, y2, m, ys);
    cplx Us = coeff_AB(Wave::s, j, xi, y2, m, ys);
    // interface trace of G~ from the side opposite to y (equal on both sides)
    RegionTag t{ys == Side::plus ? Side::minus : Side::plus, ys};
    double sy = ys == Side::plus ? -1.0 : 1.0;
    cplx gp = tilde_G_kernel(Wave::p, j, sp, m, t) * std::exp(sy * sp.bp(ys) * y2);
    cplx gs = tilde_G_kernel(Wave::s, j, sp, m, t) * std::exp(sy * sp.bs(ys) * y2);
    cplx e1 = (sp.ip_plus * (-sp.bp_plus) * Up - I * xi * sp.is_plus * Us) -
              (sp.ip_minus * sp.bp_minus * Up - I * xi * sp.is_minus * Us) -
              I * xi * (sp.is_plus - sp.is_minus) * gs;
    cplx e2 = (I * xi * sp.ip_plus * Up + sp.is_plus * (-sp.bs_plus) * Us) -
              (I * xi * sp.ip_minus * Up + sp.is_minus * sp.bs_minus * Us) +
              I * xi * (sp.ip_plus - sp.ip_minus) * gp;
    return {e1, e2};
}

namespace {

struct Kernel2d {
    const ElasticMedium& m;
    Wavenumbers k;
    RegionTag t;
    Vec2 x, y;
    bool tilde, corr;

    // Hat of G_{a,j} split by y-wave: c[a][j-1][b] with all exponentials applied.
    void parts(cplx xi, cplx c[2][2][2], cplx dX[2][2], cplx dY[2][2]) const {
        SpectralPoint sp = spectral_point(m, k, xi);
        const Side X = t.x_region, Y = t.y_region;
        const double sx = X == Side::plus ? -1.0 : 1.0;
        const double sy = Y == Side::plus ? -1.0 : 1.0;
        const cplx bX[2] = {sp.bp(X), sp.bs(X)};
        const cplx bY[2] = {sp.bp(Y), sp.bs(Y)};
        const cplx ph = std::exp(I * xi * (x(0) - y(0)));
        cplx Ex[2], Ey[2];
        for (int w = 0; w < 2; ++w) {
            Ex[w] = std::exp(sx * bX[w] * x(1));
            Ey[w] = std::exp(sy * bY[w] * y(1));
            dX[w][0] = I * xi;
            dX[w][1] = sx * bX[w];
            dY[w][0] = -I * xi;
            dY[w][1] = sy * bY[w];
        }
        for (int a = 0; a < 2; ++a)
            for (int j = 1; j <= 2; ++j) {
                Wave wa = a == 0 ? Wave::p : Wave::s;
                std::array<cplx, 2> cc{0.0, 0.0};
                if (corr) cc = coeff_AB_parts(wa, j, sp, Y);
                if (tilde) cc[a] += tilde_G_kernel(wa, j, sp, m, t);
                for (int b = 0; b < 2; ++b) c[a][j - 1][b] = cc[b] * Ex[a] * Ey[b] * ph;
            }
    }
};

double slow_threshold(const Wavenumbers& k) { return 1e-2 / k.max(); }

SpectralSetup setup_for(const Wavenumbers& k, const Vec2& x, const Vec2& y) {
    SpectralSetup s;
    s.branch_points = {k.kp_plus, k.ks_plus, k.kp_minus, k.ks_minus};
    s.decay_rate = std::abs(x(1)) + std::abs(y(1));
    s.shift = x(0) - y(0);
    s.oscillation = std::abs(s.shift);
    s.rotate_tails = true;
    s.h_min = slow_threshold(k);
    return s;
}

void check_separation(const Vec2& x, const Vec2& y, const Wavenumbers& k) {
    if ((x - y).norm() < 1e-6 * 2 * pi / k.max())
        throw Error(ErrorCode::coincident_points, "source and observation points coincide");
}

}  // namespace

ScalarPotentialPair scalar_potentials(int j, const Vec2& x, const Vec2& y, const ElasticMedium& m,
                                      const QuadConfig& cfg, PotentialPart part,
                                      const RegionTag& tag) {
    if (j != 1 && j != 2) throw Error(ErrorCode::invalid_key, "column must be 1 or 2");
    Wavenumbers k = wavenumbers(m);
    check_separation(x, y, k);
    Kernel2d K{m, k, tag, x, y, part != PotentialPart::correction, part != PotentialPart::tilde};
    VecKernel f = [&](cplx xi, cplx* out) {
        cplx c[2][2][2], dX[2][2], dY[2][2];
        K.parts(xi, c, dX, dY);
        for (int a = 0; a < 2; ++a) {
            cplx P = c[a][j - 1][0] + c[a][j - 1][1];
            out[a] = P;
            out[2 + 2 * a] = dX[a][0] * P;
            out[3 + 2 * a] = dX[a][1] * P;
        }
    };
    ScalarPotentialPair r;
    QuadResultN q;
    if (m.rho_plus == m.rho_minus && part == PotentialPart::correction) {
        q.value.assign(6, 0.0);
    } else {
        q = fourier_inversion_vec(6, f, setup_for(k, x, y), cfg);
    }
    r.G_p = q.value[0];
    r.G_s = q.value[1];
    r.grad_G_p << q.value[2], q.value[3];
    r.grad_G_s << q.value[4], q.value[5];
    r.error_estimate = q.error_estimate;
    if (part != PotentialPart::correction && tag.x_region == tag.y_region) {
        Side X = tag.x_region;
        double cp = 1.0 / (2 * m.mu + m.lambda), cs = 1.0 / m.mu;
        Vec2 d = x - y;
        double rr = d.norm();
        Vec2 rh = d / rr;
        RadialJet jp = phi_radial(k.k(Wave::p, X), rr, 2);
        RadialJet js = phi_radial(k.k(Wave::s, X), rr, 2);
        auto grad = [&](const RadialJet& g) { return CVec2(g.dg * rh(0), g.dg * rh(1)); };
        auto hess = [&](const RadialJet& g) {
            CMat2 H = g.A * CMat2::Identity() + g.B * (rh * rh.transpose()).cast<cplx>();
            return H;
        };
        CVec2 gp = grad(jp), gs = grad(js);
        CMat2 Hp = hess(jp), Hs = hess(js);
        if (j == 1) {
            r.G_p += cp * gp(0);
            r.grad_G_p += cp * Hp.row(0).transpose();
            r.G_s += cs * gs(1);
            r.grad_G_s += cs * Hs.row(1).transpose();
        } else {
            r.G_p += cp * gp(1);
            r.grad_G_p += cp * Hp.row(1).transpose();
            r.G_s -= cs * gs(0);
            r.grad_G_s -= cs * Hs.row(0).transpose();
        }
    }
    return r;
}

GreenMatrix assemble_G(const Vec2& x, const Vec2& y, const ElasticMedium& m, const QuadConfig& cfg,
                       const GreenOptions& opt) {
    if (m.a0 != 1.0) throw Error(ErrorCode::invalid_medium, "Green tensor requires a0 = 1");
    Wavenumbers k = wavenumbers(m);
    GreenMatrix g;
    g.x = x;
    g.y = y;
    g.region = region_tag(x, y, opt.x_side, opt.y_side);
    // the same-side remainder G - Pi is continuous at x = y
    if (opt.include_free_space || g.region.x_region != g.region.y_region) check_separation(x, y, k);
    const Side X = g.region.x_region;
    const double ipX = 1.0 / (k.k(Wave::p, X) * k.k(Wave::p, X));
    const double isX = 1.0 / (k.k(Wave::s, X) * k.k(Wave::s, X));
    const int ncomp = 4 + (opt.grad_x ? 8 : 0) + (opt.grad_y ? 8 : 0);
    const int ox = 4, oy = opt.grad_x ? 12 : 4;
    Kernel2d K{m, k, g.region, x, y, true, true};
    VecKernel f = [&](cplx xi, cplx* out) {
        cplx c[2][2][2], dX[2][2], dY[2][2];
        K.parts(xi, c, dX, dY);
        for (int q = 0; q < ncomp; ++q) out[q] = 0.0;
        for (int j = 0; j < 2; ++j)
            for (int b = 0; b < 2; ++b) {
                // column j from wave b in y: -ipX grad P_p - isX grad_perp P_s
                cplx vp = c[0][j][b], vs = c[1][j][b];
                cplx col[2] = {-ipX * dX[0][0] * vp - isX * dX[1][1] * vs,
                               -ipX * dX[0][1] * vp + isX * dX[1][0] * vs};
                for (int i = 0; i < 2; ++i) out[i + 2 * j] += col[i];
                if (opt.grad_x)
                    for (int kk = 0; kk < 2; ++kk) {
                        cplx cx[2] = {-ipX * dX[0][0] * dX[0][kk] * vp - isX * dX[1][1] * dX[1][kk] * vs,
                                      -ipX * dX[0][1] * dX[0][kk] * vp + isX * dX[1][0] * dX[1][kk] * vs};
                        for (int i = 0; i < 2; ++i) out[ox + 4 * kk + i + 2 * j] += cx[i];
                    }
                if (opt.grad_y)
                    for (int kk = 0; kk < 2; ++kk)
                        for (int i = 0; i < 2; ++i) out[oy + 4 * kk + i + 2 * j] += col[i] * dY[b][kk];
            }
    };
    if (m.rho_plus != m.rho_minus || g.region.x_region != g.region.y_region) {
        QuadResultN q = fourier_inversion_vec(ncomp, f, setup_for(k, x, y), cfg);
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i) {
                g.G(i, j) = q.value[i + 2 * j];
                for (int kk = 0; kk < 2; ++kk) {
                    if (opt.grad_x) g.grad_x[kk](i, j) = q.value[ox + 4 * kk + i + 2 * j];
                    if (opt.grad_y) g.grad_y[kk](i, j) = q.value[oy + 4 * kk + i + 2 * j];
                }
            }
        g.error_estimate = q.error_estimate;
        g.nodes_used = q.nodes_used;
    }
    if (opt.include_free_space && g.region.x_region == g.region.y_region) {
        TensorJet t = kupradze_jet(m, X, x, y);
        g.G += t.value;
        for (int kk = 0; kk < 2; ++kk) {
            if (opt.grad_x) g.grad_x[kk] += t.grad_x[kk];
            if (opt.grad_y) g.grad_y[kk] -= t.grad_x[kk];
        }
    }
    return g;
}

FarFieldPattern far_field(Wave a, int j, double theta, const Vec2& y, const ElasticMedium& m) {
    double s = std::sin(theta), c = std::cos(theta);
    if (std::abs(s) < theta_min)
        throw Error(ErrorCode::grazing_direction, "far-field direction too close to the interface");
    Wavenumbers k = wavenumbers(m);
    Side X = s > 0 ? Side::plus : Side::minus;
    Side Y = y(1) >= 0 ? Side::plus : Side::minus;
    double ka = k.k(a, X);
    cplx xi(ka * c, 0.0);
    SpectralPoint sp = spectral_point(m, k, xi);
    auto parts = coeff_AB_parts(a, j, sp, Y);
    double sy = Y == Side::plus ? -1.0 : 1.0;
    cplx ep = std::exp(sy * sp.bp(Y) * y(1)), es = std::exp(sy * sp.bs(Y) * y(1));
    cplx coef = parts[0] * ep + parts[1] * es;
    cplx dcoef = parts[0] * sy * sp.bp(Y) * ep + parts[1] * sy * sp.bs(Y) * es;
    cplx pref = (X == Side::plus ? std::polar(1.0, -pi / 4) : std::polar(1.0, 3 * pi / 4)) *
                std::sqrt(ka / (2 * pi)) * s * std::exp(-I * ka * y(0) * c);
    FarFieldPattern f;
    f.wave_type = a;
    f.column = j;
    f.angle = theta;
    f.value = pref * coef;
    f.gradient_y << -I * xi * f.value, pref * dcoef;
    return f;
}

}  // namespace le
