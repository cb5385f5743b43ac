#include "layered_elastica/green3d.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "layered_elastica/elastic_fields.hpp"
#include "layered_elastica/specfun.hpp"

namespace le {

RegionTag region_tag3d(const Vec3& x, const Vec3& y, std::optional<Side> x_side,
                       std::optional<Side> y_side) {
    RegionTag t;
    t.x_region = x(2) > 0 ? Side::plus : (x(2) < 0 ? Side::minus : x_side.value_or(Side::plus));
    t.y_region = y(2) > 0 ? Side::plus : (y(2) < 0 ? Side::minus : y_side.value_or(Side::plus));
    return t;
}

// ---------------------------------------------------------------- keys

namespace {

bool y_plus_family(Family3 f) {
    return f == Family3::A_p || f == Family3::A_s || f == Family3::hatA_s || f == Family3::R_p ||
           f == Family3::R_s;
}

std::vector<Coeff3DKey> build_keys() {
    std::vector<Coeff3DKey> v;
    const Sup pm[2] = {Sup::plus, Sup::minus};
    for (Family3 f : {Family3::A_p, Family3::B_p})
        for (int j = 1; j <= 3; ++j)
            for (Sup s : pm) v.push_back({f, j, s, 0});
    for (Family3 f : {Family3::A_s, Family3::B_s}) {
        v.push_back({f, 1, Sup::none, 1});
        for (Sup s : pm) v.push_back({f, 1, s, 2});
        for (Sup s : pm) v.push_back({f, 1, s, 3});
        for (Sup s : pm) v.push_back({f, 2, s, 1});
        v.push_back({f, 2, Sup::none, 2});
        for (Sup s : pm) v.push_back({f, 2, s, 3});
        for (int l = 1; l <= 2; ++l)
            for (Sup s : pm) v.push_back({f, 3, s, l});
    }
    for (Family3 f : {Family3::hatA_s, Family3::hatB_s}) {
        v.push_back({f, 1, Sup::none, 2});
        v.push_back({f, 2, Sup::none, 1});
    }
    for (Family3 f : {Family3::R_p, Family3::T_p})
        for (int j = 1; j <= 3; ++j) v.push_back({f, j, Sup::none, 0});
    for (Family3 f : {Family3::R_s, Family3::T_s})
        for (int j = 1; j <= 3; ++j)
            for (int l = 1; l <= 2; ++l) v.push_back({f, j, Sup::none, l});
    return v;
}

}  // namespace

const std::vector<Coeff3DKey>& all_keys3d() {
    static const std::vector<Coeff3DKey> keys = build_keys();
    return keys;
}

bool is_valid(const Coeff3DKey& key) {
    const auto& k = all_keys3d();
    return std::find(k.begin(), k.end(), key) != k.end();
}

std::string key_name(const Coeff3DKey& key) {
    static const char* names[] = {"A_p", "B_p", "A_s", "B_s", "hatA_s",
                                  "hatB_s", "R_p", "T_p", "R_s", "T_s"};
    std::string n = names[static_cast<int>(key.family)];
    std::string base = n.substr(0, n.size() - 2);
    std::string wave = n.substr(n.size() - 1);
    std::ostringstream os;
    os << base << "_{" << wave << "," << key.column << "}";
    if (key.component > 0 || key.sup != Sup::none) {
        os << "^";
        if (key.component > 0) os << "(" << key.component << ")";
        if (key.sup == Sup::plus) os << "+";
        if (key.sup == Sup::minus) os << "-";
    }
    return os.str();
}

Wave x_wave(const Coeff3DKey& key) {
    switch (key.family) {
        case Family3::A_p:
        case Family3::B_p:
        case Family3::R_p:
        case Family3::T_p:
            return Wave::p;
        default:
            return Wave::s;
    }
}

Side y_side_of(const Coeff3DKey& key) {
    return y_plus_family(key.family) ? Side::plus : Side::minus;
}

cplx CoeffParts::eval(double y3) const {
    cplx v = 0.0;
    for (int b = 0; b < 2; ++b)
        if (amp[b] != 0.0) v += amp[b] * std::exp(rate[b] * y3);
    return v;
}

cplx CoeffParts::d_y3(double y3) const {
    cplx v = 0.0;
    for (int b = 0; b < 2; ++b)
        if (amp[b] != 0.0) v += amp[b] * rate[b] * std::exp(rate[b] * y3);
    return v;
}

// ---------------------------------------------------------------- coefficients

CoeffParts coeff3d_parts(const Coeff3DKey& key, const SpectralPoint& sp,
                         const TranscriptionChoice& choice) {
    if (!is_valid(key)) throw Error(ErrorCode::invalid_key, "no such coefficient: " + key_name(key));
    const bool yp = y_plus_family(key.family);
    const bool xplus = key.sup == Sup::plus;
    const cplx bpp = sp.bp_plus, bpm = sp.bp_minus, bsp = sp.bs_plus, bsm = sp.bs_minus;
    const cplx s = sp.s;
    const cplx S = bsp + bsm;
    const double dks = sp.is_plus - sp.is_minus, dkp = sp.ip_plus - sp.ip_minus;
    const cplx cd = sp.C0 / sp.D;
    CoeffParts r;
    r.rate = yp ? std::array<cplx, 2>{-bpp, -bsp} : std::array<cplx, 2>{bpm, bsm};
    cplx& ap = r.amp[0];
    cplx& as = r.amp[1];
    const int j = key.column, l = key.component;
    switch (key.family) {
        case Family3::A_p:
            if (j < 3) {
                ap = I / (2.0 * bpp) * (xplus ? sp.Rp : sp.Tp);
            } else {
                ap = 0.5 * (xplus ? sp.Rp : sp.Tp);
                if (!xplus && choice.a_p3_minus == Transcription::printed) r.rate[0] = bpp;
            }
            break;
        case Family3::B_p:
            if (j < 3) {
                ap = -I / (2.0 * bpm) * (xplus ? sp.Tp - 2.0 : sp.Rp);
            } else if (!xplus) {
                ap = 0.5 * sp.Rp;
            } else if (choice.b_p3_plus == Transcription::printed) {
                // T_p evaluated with (beta_{p,+}, beta_{p,-} - 2)
                ap = 0.5 * (2.0 * sp.ip_plus * bpp) /
                     (sp.ip_plus * bpp + sp.ip_minus * (bpm - 2.0));
            } else {
                ap = 0.5 * (sp.Tp - 2.0);
            }
            break;
        case Family3::A_s:
        case Family3::B_s: {
            if (j == 3) {
                if (yp)
                    as = I / (2.0 * bsp) * (xplus ? sp.Rs : sp.Ts);
                else
                    as = -I / (2.0 * bsm) * (xplus ? sp.Ts - 2.0 : sp.Rs);
                break;
            }
            const cplx a1 = (sp.is_minus - sp.is_plus) / (sp.Ds * S);
            // zeta-free parts A^{(2)}_{s,1} = A^{(1)}_{s,2} and the zeta-monomial parts
            const bool constant = (j == 1 && l == 2) || (j == 2 && l == 1);
            const bool third = l == 3;
            if (!constant && !third) {
                as = a1;  // A^{(1)}_{s,1}, A^{(2)}_{s,2} = hatA^{(2)}_{s,1}
                if (j == 2) as = -a1;
                break;
            }
            cplx a2;
            if (yp)
                a2 = xplus ? 0.5 - bsp / S : bsm / S;
            else
                a2 = xplus ? -bsp / S : -(0.5 - bsm / S);
            if (constant)
                as = a2;
            else
                as = xplus ? a2 / (I * bsp) : -a2 / (I * bsm);
            break;
        }
        case Family3::hatA_s:
        case Family3::hatB_s:
            as = -(sp.is_minus - sp.is_plus) / (sp.Ds * S);
            break;
        case Family3::R_p:
            if (j < 3) {
                as = cd * I * (sp.Ds * bsm + dks * s) / S;
                ap = -cd * I * dks * sp.ip_plus * s / sp.Dp;
            } else {
                as = cd * s * sp.is_plus;
                ap = -cd * s * dks * sp.ip_plus * bpp / sp.Dp;
            }
            break;
        case Family3::T_p:
            if (j < 3) {
                as = cd * I * (-sp.Ds * bsp + dks * s) / S;
                ap = -cd * I * dks * sp.ip_minus * s / sp.Dp;
            } else {
                as = cd * s * sp.is_minus;
                ap = cd * s * dks * sp.ip_minus * bpm / sp.Dp;
            }
            break;
        case Family3::R_s:
        case Family3::T_s: {
            const double sg = l == 1 ? 1.0 : -1.0;
            if (j < 3) {
                if (yp) {
                    as = cd * dkp * (sp.Ds * bsm + dks * s) / (sp.Ds * S);
                    ap = -cd * sp.ip_plus;
                } else {
                    as = -cd * dkp * (sp.Ds * bsp - dks * s) / (sp.Ds * S);
                    ap = -cd * sp.ip_minus;
                }
            } else {
                if (yp) {
                    as = -cd * I * dkp * sp.is_plus * s / sp.Ds;
                    ap = cd * I * sp.ip_plus * bpp;
                } else {
                    as = -cd * I * dkp * sp.is_minus * s / sp.Ds;
                    ap = -cd * I * sp.ip_minus * bpm;
                }
            }
            as *= sg;
            ap *= sg;
            break;
        }
    }
    return r;
}

CoeffParts coeff3d_parts(const Coeff3DKey& key, const SpectralPoint& sp) {
    return coeff3d_parts(key, sp, active_transcription());
}

cplx coeff3d(const Coeff3DKey& key, cplx s, double y3, const ElasticMedium& m,
             const TranscriptionChoice& choice) {
    SpectralPoint sp = spectral_point(m, wavenumbers(m), std::sqrt(s));
    return coeff3d_parts(key, sp, choice).eval(y3);
}

cplx coeff3d(const Coeff3DKey& key, cplx s, double y3, const ElasticMedium& m) {
    return coeff3d(key, s, y3, m, active_transcription());
}

// ---------------------------------------------------------------- zeta polynomials

namespace {

constexpr int kDeg = 4;

struct Poly {
    cplx c[kDeg + 1][kDeg + 1] = {};

    void add(int a, int b, cplx v) {
        if (a + b <= kDeg) c[a][b] += v;
    }
    Poly& operator+=(const Poly& o) {
        for (int a = 0; a <= kDeg; ++a)
            for (int b = 0; a + b <= kDeg; ++b) c[a][b] += o.c[a][b];
        return *this;
    }
    Poly operator*(cplx s) const {
        Poly p;
        for (int a = 0; a <= kDeg; ++a)
            for (int b = 0; a + b <= kDeg; ++b) p.c[a][b] = c[a][b] * s;
        return p;
    }
    // multiply by i zeta_k (k = 0, 1)
    Poly iz(int k) const {
        Poly p;
        for (int a = 0; a <= kDeg; ++a)
            for (int b = 0; a + b < kDeg; ++b) {
                if (k == 0)
                    p.c[a + 1][b] = I * c[a][b];
                else
                    p.c[a][b + 1] = I * c[a][b];
            }
        return p;
    }
    cplx at(cplx z1, cplx z2) const {
        cplx v = 0.0, p1 = 1.0;
        for (int a = 0; a <= kDeg; ++a, p1 *= z1) {
            cplx p2 = 1.0;
            for (int b = 0; a + b <= kDeg; ++b, p2 *= z2) v += c[a][b] * p1 * p2;
        }
        return v;
    }
};

Poly operator-(const Poly& a, const Poly& b) {
    Poly p = a;
    p += b * cplx(-1.0);
    return p;
}

Poly operator+(const Poly& a, const Poly& b) {
    Poly p = a;
    p += b;
    return p;
}

// Corrections of one column for one x side, y-exponentials included (or their
// y3-derivative), x-exponentials NOT included.
struct Pieces {
    Poly P;              // x-wave p
    std::array<Poly, 3> S;  // x-wave s
};

struct PieceRequest {
    int j;
    Side X, Y;
    double y3;
    bool tilde, u;
    bool dy3;
    const TranscriptionChoice* choice;
};

Pieces build_pieces(const SpectralPoint& sp, const ElasticMedium& m, const PieceRequest& q) {
    Pieces out;
    const bool yp = q.Y == Side::plus;
    const Sup xs = q.X == Side::plus ? Sup::plus : Sup::minus;
    auto val = [&](Family3 f, int j, Sup s, int l) {
        CoeffParts c = coeff3d_parts({f, j, s, l}, sp, *q.choice);
        return q.dy3 ? c.d_y3(q.y3) : c.eval(q.y3);
    };
    const int j = q.j;
    int ma = 0, mb = 0;  // monomial of the p potential
    if (j == 1) ma = 1;
    if (j == 2) mb = 1;
    if (q.tilde) {
        const double cp = 1.0 / (2 * m.mu + m.lambda), cs = 1.0 / m.mu;
        out.P.add(ma, mb, cp * val(yp ? Family3::A_p : Family3::B_p, j, xs, 0));
        const Family3 F = yp ? Family3::A_s : Family3::B_s;
        const Family3 H = yp ? Family3::hatA_s : Family3::hatB_s;
        if (j == 1) {
            out.S[0].add(1, 1, cs * val(F, 1, Sup::none, 1));
            out.S[1].add(0, 0, cs * val(F, 1, xs, 2));
            out.S[1].add(2, 0, cs * val(H, 1, Sup::none, 2));
            out.S[2].add(0, 1, -cs * val(F, 1, xs, 3));
        } else if (j == 2) {
            out.S[0].add(0, 0, -cs * val(F, 2, xs, 1));
            out.S[0].add(0, 2, -cs * val(H, 2, Sup::none, 1));
            out.S[1].add(1, 1, cs * val(F, 2, Sup::none, 2));
            out.S[2].add(1, 0, cs * val(F, 2, xs, 3));
        } else {
            out.S[0].add(0, 1, cs * val(F, 3, xs, 1));
            out.S[1].add(1, 0, -cs * val(F, 3, xs, 2));
        }
    }
    if (q.u) {
        out.P.add(ma, mb, val(yp ? Family3::R_p : Family3::T_p, j, Sup::none, 0));
        const Family3 F = yp ? Family3::R_s : Family3::T_s;
        if (j == 1) {
            out.S[0].add(1, 1, val(F, 1, Sup::none, 1));
            out.S[1].add(2, 0, val(F, 1, Sup::none, 2));
        } else if (j == 2) {
            out.S[0].add(0, 2, val(F, 2, Sup::none, 1));
            out.S[1].add(1, 1, val(F, 2, Sup::none, 2));
        } else {
            out.S[0].add(0, 1, val(F, 3, Sup::none, 1));
            out.S[1].add(1, 0, val(F, 3, Sup::none, 2));
        }
    }
    return out;
}

double sx_of(Side X) { return X == Side::plus ? -1.0 : 1.0; }

// ---------------------------------------------------------------- jump residuals

struct Wavelet {
    CVec3 a;
    cplx c;  // d/dx3 rate
};

using Field = std::vector<Wavelet>;

// Eigen's cross() conjugates complex results
CVec3 cx(const CVec3& a, const CVec3& b) {
    return CVec3(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
}

CVec3 fval(const Field& F) {
    CVec3 v = CVec3::Zero();
    for (const auto& w : F) v += w.a;
    return v;
}

CVec3 fcurl(const Field& F, double z1, double z2) {
    CVec3 v = CVec3::Zero();
    for (const auto& w : F) {
        CVec3 d(I * z1, I * z2, w.c);
        v += cx(d, w.a);
    }
    return v;
}

// scalar fields live in component 0
CVec3 fgrad(const Field& F, double z1, double z2) {
    CVec3 v = CVec3::Zero();
    for (const auto& w : F) v += CVec3(I * z1 * w.a(0), I * z2 * w.a(0), w.c * w.a(0));
    return v;
}

double fscale(const Field& F) {
    double s = 0.0;
    for (const auto& w : F) s += w.a.norm() * (1.0 + std::abs(w.c));
    return s;
}

struct InterfaceFields {
    Field gp[2], gs[2], up[2], us[2];  // index 0: x+, 1: x-
};

InterfaceFields interface_fields(int j, double z1, double z2, double y3, const ElasticMedium& m,
                                 const TranscriptionChoice& choice) {
    Wavenumbers k = wavenumbers(m);
    SpectralPoint sp = spectral_point(m, k, std::sqrt(cplx(z1 * z1 + z2 * z2)));
    InterfaceFields f;
    const Side Y = y3 > 0 ? Side::plus : Side::minus;
    const double cp = 1.0 / (2 * m.mu + m.lambda), cs = 1.0 / m.mu;
    const double zz[2] = {z1, z2};
    for (int xi = 0; xi < 2; ++xi) {
        Side X = xi == 0 ? Side::plus : Side::minus;
        const double sx = sx_of(X);
        Pieces t = build_pieces(sp, m, {j, X, Y, y3, true, false, false, &choice});
        Pieces u = build_pieces(sp, m, {j, X, Y, y3, false, true, false, &choice});
        cplx rp = sx * sp.bp(X), rs = sx * sp.bs(X);
        f.gp[xi].push_back({CVec3(t.P.at(z1, z2), 0, 0), rp});
        f.up[xi].push_back({CVec3(u.P.at(z1, z2), 0, 0), rp});
        f.gs[xi].push_back({CVec3(t.S[0].at(z1, z2), t.S[1].at(z1, z2), t.S[2].at(z1, z2)), rs});
        f.us[xi].push_back({CVec3(u.S[0].at(z1, z2), u.S[1].at(z1, z2), u.S[2].at(z1, z2)), rs});
    }
    // free-space parts written as exponentials valid between the interface and y
    if (Y == Side::plus) {
        cplx bp = sp.bp_plus, bs = sp.bs_plus;
        cplx ep = std::exp(-bp * y3), es = std::exp(-bs * y3);
        cplx v = j < 3 ? cplx(cp * I * zz[j - 1] * ep / (2.0 * bp)) : cplx(cp * 0.5 * ep);
        f.gp[0].push_back({CVec3(v, 0, 0), bp});
        CVec3 g(I * z1 * es / (2.0 * bs), I * z2 * es / (2.0 * bs), 0.5 * es);
        f.gs[0].push_back({cs * cx(g, CVec3::Unit(j - 1)), bs});
    } else {
        cplx bp = sp.bp_minus, bs = sp.bs_minus;
        cplx ep = std::exp(bp * y3), es = std::exp(bs * y3);
        cplx v = j < 3 ? cplx(cp * I * zz[j - 1] * ep / (2.0 * bp)) : cplx(-cp * 0.5 * ep);
        f.gp[1].push_back({CVec3(v, 0, 0), -bp});
        CVec3 g(I * z1 * es / (2.0 * bs), I * z2 * es / (2.0 * bs), -0.5 * es);
        f.gs[1].push_back({cs * cx(g, CVec3::Unit(j - 1)), -bs});
    }
    return f;
}

double rel(double r, double scale) { return r / std::max(scale, 1e-300); }

}  // namespace

double Jump3Residual::max() const { return std::max({tilde_p, tilde_s, correction}); }

Jump3Residual jump_residual3d(int j, double z1, double z2, double y3, const ElasticMedium& m,
                              const TranscriptionChoice& choice) {
    if (j < 1 || j > 3) throw Error(ErrorCode::invalid_key, "column must be 1, 2 or 3");
    if (y3 == 0.0) throw Error(ErrorCode::domain_error, "source height must be nonzero");
    Wavenumbers k = wavenumbers(m);
    InterfaceFields f = interface_fields(j, z1, z2, y3, m, choice);
    const double ip[2] = {1.0 / (k.kp_plus * k.kp_plus), 1.0 / (k.kp_minus * k.kp_minus)};
    const double is[2] = {1.0 / (k.ks_plus * k.ks_plus), 1.0 / (k.ks_minus * k.ks_minus)};
    Jump3Residual r;
    {
        double sc = fscale(f.gp[0]) + fscale(f.gp[1]);
        double r1 = std::abs(fval(f.gp[0])(0) - fval(f.gp[1])(0));
        cplx d0 = 0.0, d1 = 0.0;
        for (const auto& w : f.gp[0]) d0 += w.a(0) * w.c;
        for (const auto& w : f.gp[1]) d1 += w.a(0) * w.c;
        double r2 = std::abs(ip[0] * d0 - ip[1] * d1) / std::max(ip[0], ip[1]);
        r.tilde_p = rel(std::max(r1, r2), sc);
    }
    {
        double sc = fscale(f.gs[0]) + fscale(f.gs[1]);
        CVec3 dv = fval(f.gs[0]) - fval(f.gs[1]);
        CVec3 dc = is[0] * fcurl(f.gs[0], z1, z2) - is[1] * fcurl(f.gs[1], z1, z2);
        double r1 = std::max(std::abs(dv(0)), std::abs(dv(1)));
        double r2 = std::max(std::abs(dc(0)), std::abs(dc(1))) / std::max(is[0], is[1]);
        double r3 = 0.0;
        for (int s = 0; s < 2; ++s)
            for (const auto& w : f.gs[s])
                r3 = std::max(r3, std::abs(I * z1 * w.a(0) + I * z2 * w.a(1) + w.c * w.a(2)));
        r.tilde_s = rel(std::max({r1, r2, r3}), sc);
    }
    {
        const CVec3 nu(0, 0, -1);
        double sc = fscale(f.up[0]) + fscale(f.up[1]) + fscale(f.us[0]) + fscale(f.us[1]) +
                    fscale(f.gp[0]) + fscale(f.gs[0]) + fscale(f.gp[1]) + fscale(f.gs[1]);
        double r0 = std::abs(fval(f.up[0])(0) - fval(f.up[1])(0));
        CVec3 t = cx(nu.cast<cplx>(), fval(f.us[0]) - fval(f.us[1]));
        double r1 = t.cwiseAbs().maxCoeff();
        cplx fj = is[0] * nu.cast<cplx>().dot(fcurl(f.gs[0], z1, z2)) -
                  is[1] * nu.cast<cplx>().dot(fcurl(f.gs[1], z1, z2));
        CVec3 Fj = cx(nu.cast<cplx>(), ip[0] * fgrad(f.gp[0], z1, z2)) -
                   cx(nu.cast<cplx>(), ip[1] * fgrad(f.gp[1], z1, z2));
        auto side_l1 = [&](int s) {
            cplx d3 = 0.0;
            for (const auto& w : f.up[s]) d3 += w.a(0) * w.c;
            return ip[s] * (-d3) - is[s] * nu.cast<cplx>().dot(fcurl(f.us[s], z1, z2));
        };
        auto side_l2 = [&](int s) -> CVec3 {
            return -ip[s] * cx(nu.cast<cplx>(), fgrad(f.up[s], z1, z2)) +
                   is[s] * cx(nu.cast<cplx>(), fcurl(f.us[s], z1, z2));
        };
        double kscale = std::max(ip[0], ip[1]);
        double r2 = std::abs(side_l1(0) - side_l1(1) - fj) / kscale;
        double r3 = (side_l2(0) - side_l2(1) - Fj).cwiseAbs().maxCoeff() / kscale;
        r.correction = rel(std::max({r0, r1, r2, r3}), sc);
    }
    return r;
}

Jump3Residual jump_residual3d(int j, double z1, double z2, double y3, const ElasticMedium& m) {
    return jump_residual3d(j, z1, z2, y3, m, active_transcription());
}

// ---------------------------------------------------------------- transcription arbiter

namespace {

TranscriptionReport run_arbiter() {
    TranscriptionReport rep;
    std::vector<ElasticMedium> media(2);
    media[0].lambda = 1.3, media[0].mu = 0.9, media[0].rho_plus = 1.0, media[0].rho_minus = 2.7;
    media[0].omega = 1.7, media[0].dim = 3;
    media[1].lambda = 2.0, media[1].mu = 1.0, media[1].rho_plus = 1.0, media[1].rho_minus = 0.4;
    media[1].omega = 1.0, media[1].dim = 3;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const TranscriptionChoice printed{Transcription::printed, Transcription::printed};
    const TranscriptionChoice corrected{Transcription::corrected, Transcription::corrected};
    int n = 0;
    for (const auto& m : media) {
        double kmax = wavenumbers(m).max();
        for (int t = 0; t < 40; ++t) {
            double z1 = 2.0 * kmax * U(rng), z2 = 2.0 * kmax * U(rng);
            double h = 0.1 + std::abs(U(rng));
            // A_{p,3}^- enters for a source above, B_{p,3}^+ for a source below
            for (int typo = 0; typo < 2; ++typo) {
                double y3 = typo == 0 ? h : -h;
                double rp = jump_residual3d(3, z1, z2, y3, m, printed).tilde_p;
                double rc = jump_residual3d(3, z1, z2, y3, m, corrected).tilde_p;
                rep.residual_printed[typo] = std::max(rep.residual_printed[typo], rp);
                rep.residual_corrected[typo] = std::max(rep.residual_corrected[typo], rc);
            }
            ++n;
        }
    }
    rep.samples = n;
    rep.choice.a_p3_minus = rep.residual_corrected[0] <= rep.residual_printed[0]
                                ? Transcription::corrected
                                : Transcription::printed;
    rep.choice.b_p3_plus = rep.residual_corrected[1] <= rep.residual_printed[1]
                               ? Transcription::corrected
                               : Transcription::printed;
    return rep;
}

}  // namespace

std::string TranscriptionReport::summary() const {
    std::ostringstream os;
    os.precision(3);
    auto name = [](Transcription t) { return t == Transcription::printed ? "printed" : "corrected"; };
    os << "A_{p,3}^-: " << name(choice.a_p3_minus) << " (residual printed " << residual_printed[0]
       << ", corrected " << residual_corrected[0] << "); B_{p,3}^+: " << name(choice.b_p3_plus)
       << " (residual printed " << residual_printed[1] << ", corrected " << residual_corrected[1]
       << "); " << samples << " spectral samples";
    return os.str();
}

const TranscriptionReport& transcription_report() {
    static const TranscriptionReport rep = run_arbiter();
    return rep;
}

const TranscriptionChoice& active_transcription() {
    static const TranscriptionChoice c = transcription_report().choice;
    return c;
}

// ---------------------------------------------------------------- angular reduction

namespace {

std::vector<AngularFactor> build_angular_table() {
    const double f4 = 1.0 / (4 * pi), f8 = 1.0 / (8 * pi);
    return {
        {AngularKind::one, 0, 0, {{0, f4, false, 0}}},
        {AngularKind::cos_alpha, 1, 0, {{1, I * f4, false, 1}}},
        {AngularKind::sin_alpha, 0, 1, {{1, I * f4, true, 1}}},
        {AngularKind::sin_2alpha, 1, 1, {{2, -f8, true, 2}}},
        {AngularKind::cos_minus, 2, 0, {{0, f8, false, 0}, {2, -f8, false, 2}}},
        {AngularKind::cos_plus, 0, 2, {{0, f8, false, 0}, {2, f8, false, 2}}},
    };
}

const std::vector<AngularFactor>& angular_table() {
    static const std::vector<AngularFactor> t = build_angular_table();
    return t;
}

// cos^a g sin^b g = sum_n c_n e^{i n g}, n in [-4, 4] -> index n + 4
std::array<cplx, 2 * kDeg + 1> harmonics(int a, int b) {
    std::array<cplx, 2 * kDeg + 1> c{};
    c[kDeg] = 1.0;
    auto mul = [&](cplx up, cplx down) {
        std::array<cplx, 2 * kDeg + 1> o{};
        for (int n = 0; n <= 2 * kDeg; ++n) {
            if (c[n] == 0.0) continue;
            if (n + 1 <= 2 * kDeg) o[n + 1] += up * c[n];
            if (n - 1 >= 0) o[n - 1] += down * c[n];
        }
        c = o;
    };
    for (int i = 0; i < a; ++i) mul(0.5, 0.5);
    for (int i = 0; i < b; ++i) mul(-0.5 * I, 0.5 * I);
    return c;
}

// Weight table T[a][b][m] with (1/(2pi)) int cos^a sin^b e^{i t cos(g - alpha)} dg
// = sum_m T[a][b][m] J_m(t).
struct WeightTable {
    cplx T[kDeg + 1][kDeg + 1][kDeg + 1] = {};
};

WeightTable weight_table(double alpha) {
    WeightTable w;
    for (int a = 0; a <= kDeg; ++a)
        for (int b = 0; a + b <= kDeg; ++b) {
            auto c = harmonics(a, b);
            for (int n = -kDeg; n <= kDeg; ++n) {
                cplx cn = c[n + kDeg];
                if (cn == 0.0) continue;
                int mo = std::abs(n);
                cplx im = std::pow(I, mo);
                w.T[a][b][mo] += cn * im * std::polar(1.0, n * alpha);
            }
        }
    return w;
}

struct HankelGeometry {
    double rho = 0.0, alpha = 0.0, h = 0.0;
    bool j_form = false;
};

HankelGeometry hankel_geometry(const Vec3& x, const Vec3& y, const Wavenumbers& k) {
    HankelGeometry g;
    double d1 = x(0) - y(0), d2 = x(1) - y(1);
    g.rho = std::hypot(d1, d2);
    g.alpha = g.rho > 0 ? std::atan2(d2, d1) : 0.0;
    g.h = std::abs(x(2)) + std::abs(y(2));
    g.j_form = g.rho * std::max(k.max(), 1.0) < 0.5;
    return g;
}

SpectralSetup hankel_setup(const Wavenumbers& k, const HankelGeometry& g, bool rotate) {
    SpectralSetup s;
    s.branch_points = {k.kp_plus, k.ks_plus, k.kp_minus, k.ks_minus};
    s.decay_rate = g.h;
    s.oscillation = g.rho;
    s.shift = g.rho;
    s.rotate_tails = rotate && !g.j_form;
    s.h_min = 1e-2 / k.max();
    return s;
}

// Z_m(xi rho), m = 0..kDeg: Hankel (path C) or Bessel J (J-form).
void cylinder_values(cplx xi, const HankelGeometry& g, cplx* Z) {
    if (g.j_form) {
        if (g.rho == 0.0) {
            Z[0] = 1.0;
            for (int mo = 1; mo <= kDeg; ++mo) Z[mo] = 0.0;
            return;
        }
        for (int mo = 0; mo <= kDeg; ++mo) Z[mo] = detail::bessel_j_any(mo, xi * g.rho);
        return;
    }
    cplx z = xi * g.rho;
    Z[0] = hankel1(0, z);
    Z[1] = hankel1(1, z);
    for (int mo = 1; mo < kDeg; ++mo) Z[mo + 1] = (2.0 * mo) / z * Z[mo] - Z[mo - 1];
}

using PolyBuilder = std::function<void(cplx xi, const SpectralPoint& sp, Poly* out)>;

// (1/(2pi)^2) int poly(zeta) e^{i zeta.(x'-y')} d zeta for every output polynomial.
QuadResultN reduce_polys(int nout, const PolyBuilder& build, const HankelGeometry& g,
                         const ElasticMedium& m, const Wavenumbers& k, const QuadConfig& cfg) {
    WeightTable W = weight_table(g.alpha);
    std::vector<Poly> polys(nout);
    VecKernel f = [&](cplx xi, cplx* out) {
        SpectralPoint sp = spectral_point(m, k, xi);
        for (auto& p : polys) p = Poly{};
        build(xi, sp, polys.data());
        cplx Z[kDeg + 1];
        cylinder_values(xi, g, Z);
        cplx w[kDeg + 1][kDeg + 1];
        cplx pw[kDeg + 2];  // xi^(d+1)
        pw[0] = xi;
        for (int d = 1; d <= kDeg; ++d) pw[d] = pw[d - 1] * xi;
        for (int a = 0; a <= kDeg; ++a)
            for (int b = 0; a + b <= kDeg; ++b) {
                cplx s = 0.0;
                for (int mo = 0; mo <= kDeg; ++mo)
                    if (W.T[a][b][mo] != 0.0) s += W.T[a][b][mo] * Z[mo];
                w[a][b] = s * pw[a + b];
            }
        for (int o = 0; o < nout; ++o) {
            cplx v = 0.0;
            for (int a = 0; a <= kDeg; ++a)
                for (int b = 0; a + b <= kDeg; ++b)
                    if (polys[o].c[a][b] != 0.0) v += polys[o].c[a][b] * w[a][b];
            out[o] = v;
        }
    };
    const double scale = g.j_form ? 1.0 / (2 * pi) : 1.0 / (4 * pi);
    QuadConfig c2 = cfg;
    c2.tol = cfg.tol / scale;
    QuadResultN q = hankel_inversion_vec(nout, f, hankel_setup(k, g, true), c2, g.j_form);
    for (auto& v : q.value) v *= scale;
    q.error_estimate *= scale;
    return q;
}

void check_separation3(const Vec3& x, const Vec3& y, const Wavenumbers& k) {
    if ((x - y).norm() < 1e-6 * 2 * pi / k.max())
        throw Error(ErrorCode::coincident_points, "source and observation points coincide");
}

}  // namespace

const AngularFactor& angular_factor(AngularKind kind) {
    return angular_table()[static_cast<int>(kind)];
}

AngularKind angular_kind_for(int a, int b) {
    for (const auto& r : angular_table())
        if (r.a == a && r.b == b) return r.kind;
    throw Error(ErrorCode::invalid_key, "monomial has no row in the angular table");
}

cplx angular_identity_closed(AngularKind kind, double t, double alpha) {
    cplx J0 = bessel_j(0, t), J1 = bessel_j(1, t), J2 = bessel_j(2, t);
    switch (kind) {
        case AngularKind::one: return J0;
        case AngularKind::cos_alpha: return I * J1 * std::cos(alpha);
        case AngularKind::sin_alpha: return I * J1 * std::sin(alpha);
        case AngularKind::sin_2alpha: return -J2 * std::sin(alpha) * std::cos(alpha);
        case AngularKind::cos_minus: return 0.5 * (J0 - J2 * std::cos(2 * alpha));
        case AngularKind::cos_plus: return 0.5 * (J0 + J2 * std::cos(2 * alpha));
    }
    return 0.0;
}

QuadResult hankel_reduce(const ScalarKernel& f, AngularKind kind, const Vec3& x, const Vec3& y,
                         const ElasticMedium& m, const QuadConfig& cfg, bool rotate_tails) {
    const AngularFactor& row = angular_factor(kind);
    Wavenumbers k = wavenumbers(m);
    HankelGeometry g = hankel_geometry(x, y, k);
    const int nt = static_cast<int>(row.terms.size());
    const int pw = row.a + row.b + 1;
    VecKernel kern = [&](cplx xi, cplx* out) {
        cplx Z[kDeg + 1];
        cylinder_values(xi, g, Z);
        cplx fx = f(xi) * std::pow(xi, pw);
        for (int t = 0; t < nt; ++t) out[t] = fx * Z[row.terms[t].order];
    };
    // J-form integrals over [0, inf) are half of the path-C integrals
    const double route = g.j_form ? 2.0 : 1.0;
    double cmax = 0.0;
    for (const auto& t : row.terms) cmax = std::max(cmax, std::abs(t.c));
    QuadConfig c2 = cfg;
    c2.tol = cfg.tol / (cmax * route * nt);
    QuadResultN q = hankel_inversion_vec(nt, kern, hankel_setup(k, g, rotate_tails), c2, g.j_form);
    QuadResult r;
    for (int t = 0; t < nt; ++t) {
        const auto& term = row.terms[t];
        double trig = term.sine ? std::sin(term.harmonic * g.alpha) : std::cos(term.harmonic * g.alpha);
        r.value += term.c * trig * route * q.value[t];
    }
    r.error_estimate = q.error_estimate * cmax * route;
    r.nodes_used = q.nodes_used;
    return r;
}

QuadResult hankel_reduce_monomial(const ScalarKernel& f, int a, int b, const Vec3& x,
                                  const Vec3& y, const ElasticMedium& m, const QuadConfig& cfg,
                                  bool rotate_tails) {
    if (a < 0 || b < 0 || a + b > kDeg) throw Error(ErrorCode::domain_error, "monomial degree above 4");
    Wavenumbers k = wavenumbers(m);
    HankelGeometry g = hankel_geometry(x, y, k);
    WeightTable W = weight_table(g.alpha);
    VecKernel kern = [&](cplx xi, cplx* out) {
        cplx Z[kDeg + 1];
        cylinder_values(xi, g, Z);
        cplx s = 0.0;
        for (int mo = 0; mo <= kDeg; ++mo) s += W.T[a][b][mo] * Z[mo];
        out[0] = f(xi) * std::pow(xi, a + b + 1) * s;
    };
    const double scale = g.j_form ? 1.0 / (2 * pi) : 1.0 / (4 * pi);
    QuadConfig c2 = cfg;
    c2.tol = cfg.tol / scale;
    QuadResultN q = hankel_inversion_vec(1, kern, hankel_setup(k, g, rotate_tails), c2, g.j_form);
    return {q.value[0] * scale, q.error_estimate * scale, q.nodes_used};
}

// ---------------------------------------------------------------- potentials

namespace {

Potential3 potential3(Wave a, int j, int l, const Vec3& x, const Vec3& y, const ElasticMedium& m,
                      const QuadConfig& cfg, const GreenOptions& opt, bool tilde) {
    if (j < 1 || j > 3) throw Error(ErrorCode::invalid_key, "column must be 1, 2 or 3");
    if (a == Wave::s && (l < 1 || l > 3))
        throw Error(ErrorCode::invalid_key, "shear component must be 1, 2 or 3");
    Wavenumbers k = wavenumbers(m);
    check_separation3(x, y, k);
    RegionTag tag = region_tag3d(x, y, opt.x_side, opt.y_side);
    const Side X = tag.x_region, Y = tag.y_region;
    const double sx = sx_of(X);
    const TranscriptionChoice& choice = active_transcription();
    Potential3 r;
    const bool zero_spectral = m.rho_plus == m.rho_minus && X == Y;
    if (!zero_spectral && !(a == Wave::s && l == 3 && (j == 3 || !tilde))) {
        HankelGeometry g = hankel_geometry(x, y, k);
        PolyBuilder build = [&](cplx, const SpectralPoint& sp, Poly* out) {
            Pieces p = build_pieces(sp, m, {j, X, Y, y(2), tilde, !tilde, false, &choice});
            cplx beta = a == Wave::p ? sp.bp(X) : sp.bs(X);
            cplx ex = std::exp(sx * beta * x(2));
            Poly v = (a == Wave::p ? p.P : p.S[l - 1]) * ex;
            out[0] = v;
            out[1] = v.iz(0);
            out[2] = v.iz(1);
            out[3] = v * (sx * beta);
        };
        QuadResultN q = reduce_polys(4, build, g, m, k, cfg);
        r.value = q.value[0];
        r.grad_x << q.value[1], q.value[2], q.value[3];
        r.error_estimate = q.error_estimate;
        r.nodes_used = q.nodes_used;
    }
    if (tilde && X == Y) {
        Vec3 d = x - y;
        double rr = d.norm();
        Vec3 rh = d / rr;
        RadialJet g = phi_radial(k.k(a, X), rr, 3);
        CVec3 grad = g.dg * rh.cast<cplx>();
        CMat3 H = g.A * CMat3::Identity() + g.B * (rh * rh.transpose()).cast<cplx>();
        if (a == Wave::p) {
            double cp = 1.0 / (2 * m.mu + m.lambda);
            r.value += cp * grad(j - 1);
            r.grad_x += cp * H.row(j - 1).transpose();
        } else {
            // (grad Phi x e_j)_l = eps_{l n j} d_n Phi
            double cs = 1.0 / m.mu;
            for (int n = 0; n < 3; ++n) {
                int e = 0;
                int L = l - 1, J = j - 1;
                if ((L + 1) % 3 == n && (n + 1) % 3 == J) e = 1;
                if ((L + 2) % 3 == n && (n + 2) % 3 == J) e = -1;
                if (e == 0) continue;
                r.value += cs * double(e) * grad(n);
                r.grad_x += cs * double(e) * H.row(n).transpose();
            }
        }
    }
    return r;
}

}  // namespace

Potential3 tilde_G3d(Wave a, int j, int l, const Vec3& x, const Vec3& y, const ElasticMedium& m,
                     const QuadConfig& cfg, const GreenOptions& opt) {
    return potential3(a, j, l, x, y, m, cfg, opt, true);
}

Potential3 correction3d(Wave a, int j, int l, const Vec3& x, const Vec3& y, const ElasticMedium& m,
                        const QuadConfig& cfg, const GreenOptions& opt) {
    return potential3(a, j, l, x, y, m, cfg, opt, false);
}

// ---------------------------------------------------------------- assembly

GreenMatrix3 assemble_G3d(const Vec3& x, const Vec3& y, const ElasticMedium& m,
                          const QuadConfig& cfg, const GreenOptions& opt) {
    if (m.a0 != 1.0) throw Error(ErrorCode::invalid_medium, "Green tensor requires a0 = 1");
    Wavenumbers k = wavenumbers(m);
    check_separation3(x, y, k);
    GreenMatrix3 g;
    g.x = x;
    g.y = y;
    g.region = region_tag3d(x, y, opt.x_side, opt.y_side);
    const Side X = g.region.x_region, Y = g.region.y_region;
    const double sx = sx_of(X);
    const double ipX = 1.0 / (k.k(Wave::p, X) * k.k(Wave::p, X));
    const double isX = 1.0 / (k.k(Wave::s, X) * k.k(Wave::s, X));
    const int ox = 9, oy = opt.grad_x ? 36 : 9;
    const int nout = 9 + (opt.grad_x ? 27 : 0) + (opt.grad_y ? 27 : 0);
    const TranscriptionChoice& choice = active_transcription();
    PolyBuilder build = [&](cplx, const SpectralPoint& sp, Poly* out) {
        const cplx bp = sp.bp(X), bs = sp.bs(X);
        const cplx ep = std::exp(sx * bp * x(2)), es = std::exp(sx * bs * x(2));
        for (int j = 0; j < 3; ++j) {
            Poly colp[3], cols[3], colp_y[3], cols_y[3];
            for (int pass = 0; pass < (opt.grad_y ? 2 : 1); ++pass) {
                Pieces pc = build_pieces(sp, m, {j + 1, X, Y, y(2), true, true, pass == 1, &choice});
                Poly P = pc.P * ep;
                Poly S[3] = {pc.S[0] * es, pc.S[1] * es, pc.S[2] * es};
                Poly* cp = pass == 0 ? colp : colp_y;
                Poly* cs = pass == 0 ? cols : cols_y;
                // -kp^-2 grad P
                cp[0] = P.iz(0) * cplx(-ipX);
                cp[1] = P.iz(1) * cplx(-ipX);
                cp[2] = P * cplx(-ipX * sx * bp);
                // ks^-2 curl S with d = (i z1, i z2, sx beta_s)
                cplx d3 = sx * bs;
                cs[0] = (S[2].iz(1) - S[1] * d3) * cplx(isX);
                cs[1] = (S[0] * d3 - S[2].iz(0)) * cplx(isX);
                cs[2] = (S[1].iz(0) - S[0].iz(1)) * cplx(isX);
            }
            for (int i = 0; i < 3; ++i) {
                out[i + 3 * j] = colp[i] + cols[i];
                if (opt.grad_x) {
                    out[ox + 9 * 0 + i + 3 * j] = colp[i].iz(0) + cols[i].iz(0);
                    out[ox + 9 * 1 + i + 3 * j] = colp[i].iz(1) + cols[i].iz(1);
                    out[ox + 9 * 2 + i + 3 * j] = colp[i] * (sx * bp) + cols[i] * (sx * bs);
                }
                if (opt.grad_y) {
                    Poly v = colp[i] + cols[i];
                    out[oy + 9 * 0 + i + 3 * j] = v.iz(0) * cplx(-1.0);
                    out[oy + 9 * 1 + i + 3 * j] = v.iz(1) * cplx(-1.0);
                    out[oy + 9 * 2 + i + 3 * j] = colp_y[i] + cols_y[i];
                }
            }
        }
    };
    if (m.rho_plus != m.rho_minus || X != Y) {
        HankelGeometry hg = hankel_geometry(x, y, k);
        QuadResultN q = reduce_polys(nout, build, hg, m, k, cfg);
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) {
                g.G(i, j) = q.value[i + 3 * j];
                for (int kk = 0; kk < 3; ++kk) {
                    if (opt.grad_x) g.grad_x[kk](i, j) = q.value[ox + 9 * kk + i + 3 * j];
                    if (opt.grad_y) g.grad_y[kk](i, j) = q.value[oy + 9 * kk + i + 3 * j];
                }
            }
        g.error_estimate = q.error_estimate;
        g.nodes_used = q.nodes_used;
    }
    if (opt.include_free_space && X == Y) {
        TensorJet t = kupradze_jet(m, X, x, y);
        g.G += t.value;
        for (int kk = 0; kk < 3; ++kk) {
            if (opt.grad_x) g.grad_x[kk] += t.grad_x[kk];
            if (opt.grad_y) g.grad_y[kk] -= t.grad_x[kk];
        }
    }
    return g;
}

// ---------------------------------------------------------------- far fields

namespace {

struct CaseRow {
    int a, b;
    std::vector<Coeff3DKey> members;  // sup plus; mirrored for the lower side
};

std::vector<CaseRow> build_cases() {
    using F = Family3;
    const Sup P = Sup::plus, N = Sup::none;
    return {
        {0, 0, {{F::A_p, 3, P, 0}, {F::B_p, 3, P, 0}, {F::A_s, 1, P, 2}, {F::B_s, 1, P, 2},
                {F::A_s, 2, P, 1}, {F::B_s, 2, P, 1}, {F::R_p, 3, N, 0}, {F::T_p, 3, N, 0}}},
        {1, 0, {{F::A_p, 1, P, 0}, {F::B_p, 1, P, 0}, {F::A_s, 2, P, 3}, {F::B_s, 2, P, 3},
                {F::A_s, 3, P, 2}, {F::B_s, 3, P, 2}, {F::R_p, 1, N, 0}, {F::T_p, 1, N, 0},
                {F::R_s, 3, N, 2}, {F::T_s, 3, N, 2}}},
        {0, 1, {{F::A_p, 2, P, 0}, {F::B_p, 2, P, 0}, {F::A_s, 1, P, 3}, {F::B_s, 1, P, 3},
                {F::A_s, 3, P, 1}, {F::B_s, 3, P, 1}, {F::R_p, 2, N, 0}, {F::T_p, 2, N, 0},
                {F::R_s, 3, N, 1}, {F::T_s, 3, N, 1}}},
        {1, 1, {{F::A_s, 1, N, 1}, {F::B_s, 1, N, 1}, {F::A_s, 2, N, 2}, {F::B_s, 2, N, 2},
                {F::R_s, 1, N, 1}, {F::T_s, 1, N, 1}, {F::R_s, 2, N, 2}, {F::T_s, 2, N, 2}}},
        {2, 0, {{F::hatA_s, 1, N, 2}, {F::hatB_s, 1, N, 2}, {F::R_s, 1, N, 2}, {F::T_s, 1, N, 2}}},
        {0, 2, {{F::hatA_s, 2, N, 1}, {F::hatB_s, 2, N, 1}, {F::R_s, 2, N, 1}, {F::T_s, 2, N, 1}}},
    };
}

const std::vector<CaseRow>& cases() {
    static const std::vector<CaseRow> c = build_cases();
    return c;
}

}  // namespace

bool far_field_case_contains(int case_index, Side side, const Coeff3DKey& key) {
    if (case_index < 1 || case_index > 6) return false;
    for (Coeff3DKey k : cases()[case_index - 1].members) {
        if (k.sup == Sup::plus && side == Side::minus) k.sup = Sup::minus;
        if (k == key) return true;
    }
    return false;
}

int far_field_case_of(const Coeff3DKey& key, Side side) {
    for (int c = 1; c <= 6; ++c)
        if (far_field_case_contains(c, side, key)) return c;
    return 0;
}

FarFieldPattern3 far_field3d(int case_index, const Coeff3DKey& key, double theta, double phi,
                             const Vec3& y, const ElasticMedium& m) {
    if (std::abs(std::sin(theta)) < theta_min)
        throw Error(ErrorCode::grazing_direction, "far-field direction too close to the interface");
    const Side X = theta > 0 ? Side::plus : Side::minus;
    if (!far_field_case_contains(case_index, X, key))
        throw Error(ErrorCode::invalid_key,
                    key_name(key) + " is not listed in far-field case " + std::to_string(case_index));
    Wavenumbers k = wavenumbers(m);
    const Wave a = x_wave(key);
    const double ka = k.k(a, X);
    const Vec3 xh(std::cos(phi) * std::cos(theta), std::sin(phi) * std::cos(theta), std::sin(theta));
    const CaseRow& row = cases()[case_index - 1];
    SpectralPoint sp = spectral_point(m, k, cplx(ka * std::cos(theta), 0.0));
    CoeffParts parts = coeff3d_parts(key, sp);
    const int deg = row.a + row.b;
    double mono = std::pow(xh(0), row.a) * std::pow(xh(1), row.b);
    cplx pref = (X == Side::plus ? -I : I) * std::pow(ka, deg + 1) / (2 * pi) * xh(2) * mono *
                std::exp(-I * ka * (xh(0) * y(0) + xh(1) * y(1)));
    FarFieldPattern3 f;
    f.case_index = case_index;
    f.key = key;
    f.wave_type = a;
    f.theta = theta;
    f.phi = phi;
    f.value = pref * parts.eval(y(2));
    f.gradient_y << -I * ka * xh(0) * f.value, -I * ka * xh(1) * f.value, pref * parts.d_y3(y(2));
    return f;
}

QuadResult far_field_integral3d(const Coeff3DKey& key, const Vec3& x, const Vec3& y,
                                const ElasticMedium& m, const QuadConfig& cfg) {
    const Side X = x(2) > 0 ? Side::plus : Side::minus;
    const int c = far_field_case_of(key, X);
    if (c == 0) throw Error(ErrorCode::invalid_key, key_name(key) + " has no far-field case");
    if ((y(2) >= 0) != (y_side_of(key) == Side::plus))
        throw Error(ErrorCode::domain_error, "source side does not match the coefficient family");
    Wavenumbers k = wavenumbers(m);
    const Wave a = x_wave(key);
    const double sx = sx_of(X);
    const CaseRow& row = cases()[c - 1];
    ScalarKernel f = [&](cplx xi) {
        SpectralPoint sp = spectral_point(m, k, xi);
        cplx beta = a == Wave::p ? sp.bp(X) : sp.bs(X);
        return coeff3d_parts(key, sp).eval(y(2)) * std::exp(sx * beta * x(2));
    };
    return hankel_reduce(f, angular_kind_for(row.a, row.b), x, y, m, cfg);
}

}  // namespace le
