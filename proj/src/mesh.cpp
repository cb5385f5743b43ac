#include "layered_elastica/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"

#include "layered_elastica/quadrature.hpp"

namespace le {

double SurfaceProfile::max_abs(int samples) const {
    if (is_flat()) return 0.0;
    double m = 0.0;
    for (int i = 0; i < samples; ++i) {
        double x = -support_radius + 2 * support_radius * i / (samples - 1.0);
        m = std::max(m, std::abs((*this)(x)));
    }
    return m;
}

SurfaceProfile SurfaceProfile::flat() { return SurfaceProfile{}; }

SurfaceProfile SurfaceProfile::bump(double height, double half_width, double center) {
    if (!(half_width > 0.0) || !std::isfinite(height))
        throw Error(ErrorCode::invalid_input, "bump needs a positive half width");
    SurfaceProfile p;
    p.type = "bump";
    p.f = [=](double x) {
        double s = (x - center) / half_width;
        if (std::abs(s) >= 1.0) return 0.0;
        return height * std::exp(1.0 - 1.0 / (1.0 - s * s));
    };
    p.df = [=](double x) {
        double s = (x - center) / half_width;
        if (std::abs(s) >= 1.0) return 0.0;
        double q = 1.0 - s * s;
        return height * std::exp(1.0 - 1.0 / q) * (-2.0 * s / (q * q)) / half_width;
    };
    p.support_radius = std::abs(center) + half_width;
    double L = 0.0;
    for (int i = 0; i <= 4000; ++i) L = std::max(L, std::abs(p.df(center - half_width + half_width * i / 2000.0)));
    p.lipschitz_bound = L;
    return p;
}

SurfaceProfile SurfaceProfile::samples(const std::vector<double>& x, const std::vector<double>& f) {
    const int n = (int)x.size();
    if (n < 3 || f.size() != x.size())
        throw Error(ErrorCode::invalid_input, "samples profile needs at least 3 matching points");
    for (int i = 1; i < n; ++i)
        if (!(x[i] > x[i - 1])) throw Error(ErrorCode::invalid_input, "sample abscissae must increase");
    if (f.front() != 0.0 || f.back() != 0.0)
        throw Error(ErrorCode::invalid_input, "samples profile must vanish at both ends");
    // clamped spline with zero end slopes: second derivatives M
    std::vector<double> a(n), b(n), c(n), d(n), M(n);
    for (int i = 0; i < n; ++i) {
        double hl = i > 0 ? x[i] - x[i - 1] : 0.0, hr = i < n - 1 ? x[i + 1] - x[i] : 0.0;
        a[i] = hl / 6;
        c[i] = hr / 6;
        b[i] = (hl + hr) / 3;
        double sl = i > 0 ? (f[i] - f[i - 1]) / hl : 0.0;
        double sr = i < n - 1 ? (f[i + 1] - f[i]) / hr : 0.0;
        d[i] = sr - sl;
    }
    for (int i = 1; i < n; ++i) {
        double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    M[n - 1] = d[n - 1] / b[n - 1];
    for (int i = n - 2; i >= 0; --i) M[i] = (d[i] - c[i] * M[i + 1]) / b[i];
    auto seg = [x, n](double t) {
        int i = (int)(std::upper_bound(x.begin(), x.end(), t) - x.begin()) - 1;
        return std::clamp(i, 0, n - 2);
    };
    SurfaceProfile p;
    p.type = "samples";
    p.f = [=](double t) {
        if (t <= x.front() || t >= x.back()) return 0.0;
        int i = seg(t);
        double h = x[i + 1] - x[i], A = (x[i + 1] - t) / h, B = (t - x[i]) / h;
        return A * f[i] + B * f[i + 1] + ((A * A * A - A) * M[i] + (B * B * B - B) * M[i + 1]) * h * h / 6;
    };
    p.df = [=](double t) {
        if (t <= x.front() || t >= x.back()) return 0.0;
        int i = seg(t);
        double h = x[i + 1] - x[i], A = (x[i + 1] - t) / h, B = (t - x[i]) / h;
        return (f[i + 1] - f[i]) / h - (3 * A * A - 1) * h / 6 * M[i] + (3 * B * B - 1) * h / 6 * M[i + 1];
    };
    p.support_radius = std::max(std::abs(x.front()), std::abs(x.back()));
    double L = 0.0;
    for (int i = 0; i <= 8000; ++i) L = std::max(L, std::abs(p.df(x.front() + (x.back() - x.front()) * i / 8000.0)));
    p.lipschitz_bound = L;
    return p;
}

SurfaceProfile profile_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::invalid_input, std::string("profile JSON: ") + e.what());
    }
    std::string type = j.value("type", "flat");
    try {
        if (type == "flat") return SurfaceProfile::flat();
        if (type == "bump")
            return SurfaceProfile::bump(j.at("height").get<double>(), j.at("half_width").get<double>(),
                                        j.value("center", 0.0));
        if (type == "samples")
            return SurfaceProfile::samples(j.at("x").get<std::vector<double>>(),
                                           j.at("f").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::invalid_input, std::string("profile JSON: ") + e.what());
    }
    throw Error(ErrorCode::invalid_input, "unknown profile type '" + type + "'");
}

namespace {

double smoothstep7(double s) { return s * s * s * s * (35 - 84 * s + 70 * s * s - 20 * s * s * s); }

double blend(double y, double R) {
    double s = std::abs(y) / (R / 2);
    return s >= 1.0 ? 0.0 : 1.0 - smoothstep7(s);
}

// max |d chi / dy| = 2.1875 / (R/2)
double blend_slope_max(double R) { return 2.1875 * 2 / R; }

struct Builder {
    double R, q;
    std::map<std::pair<long long, long long>, int> index;
    std::vector<Vec2> pts;

    int add(const Vec2& p) {
        auto key = std::make_pair(std::llround(p(0) / q), std::llround(p(1) / q));
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = (int)pts.size();
        index.emplace(key, id);
        pts.push_back(p);
        return id;
    }

    // lattice of (2nu+1) x (2nv+1) points; quads split along the (0,0)-(2,2) diagonal
    void block(int nu, int nv, const std::function<Vec2(double, double)>& X, std::vector<Tri6>& tris,
               bool flip) {
        std::vector<int> id((2 * nu + 1) * (2 * nv + 1));
        auto at = [&](int i, int j) -> int& { return id[i * (2 * nv + 1) + j]; };
        for (int i = 0; i <= 2 * nu; ++i)
            for (int j = 0; j <= 2 * nv; ++j) at(i, j) = add(X(i / (2.0 * nu), j / (2.0 * nv)));
        for (int I = 0; I < nu; ++I)
            for (int J = 0; J < nv; ++J) {
                int i = 2 * I, j = 2 * J;
                Tri6 t1 = {at(i, j), at(i + 2, j), at(i + 2, j + 2), at(i + 1, j), at(i + 2, j + 1),
                           at(i + 1, j + 1)};
                Tri6 t2 = {at(i, j), at(i + 2, j + 2), at(i, j + 2), at(i + 1, j + 1), at(i + 1, j + 2),
                           at(i, j + 1)};
                if (flip) {
                    std::swap(t1[1], t1[2]);
                    std::swap(t1[3], t1[5]);
                    std::swap(t2[1], t2[2]);
                    std::swap(t2[3], t2[5]);
                }
                tris.push_back(t1);
                tris.push_back(t2);
            }
    }
};

Vec2 rot90(const Vec2& p, int b) {
    Vec2 r = p;
    for (int i = 0; i < b; ++i) r = Vec2(-r(1), r(0));
    return r;
}

double signed_area(const std::vector<Vec2>& P, const Tri6& t) {
    Vec2 a = P[t[1]] - P[t[0]], b = P[t[2]] - P[t[0]];
    return 0.5 * (a(0) * b(1) - a(1) * b(0));
}

}  // namespace

void check_profile(const SurfaceProfile& profile, double R) {
    if (!(R > 0.0)) throw Error(ErrorCode::invalid_input, "radius must be positive");
    if (profile.is_flat()) return;
    if (!(R > 2 * profile.support_radius))
        throw Error(ErrorCode::invalid_input, "interface must be flat outside B_{R/2}: need R > 2 * support radius");
    double fm = profile.max_abs();
    if (fm * blend_slope_max(R) >= 0.9)
        throw Error(ErrorCode::invalid_input, "profile too tall for the interface-fitted mesh at this radius");
}

DiskMesh make_disk_mesh(double R, int core_cells, int ring_cells, const SurfaceProfile& profile) {
    if (core_cells < 2 || core_cells % 2 != 0 || ring_cells < 1)
        throw Error(ErrorCode::invalid_input, "core cells must be even and >= 2, ring cells >= 1");
    check_profile(profile, R);
    const double a = R / 2;
    const int n = core_cells, mr = ring_cells;
    Builder B{R, 1e-9 * R, {}, {}};
    std::vector<Tri6> tris;
    B.block(n, n, [&](double u, double v) { return Vec2(-a + 2 * a * u, -a + 2 * a * v); }, tris, false);
    for (int b = 0; b < 4; ++b) {
        double th0 = -pi / 4 + b * pi / 2;
        B.block(mr, n,
                [&](double u, double v) {
                    Vec2 inner = rot90(Vec2(a, -a + 2 * a * v), b);
                    double th = th0 + v * pi / 2;
                    Vec2 outer(R * std::cos(th), R * std::sin(th));
                    return Vec2((1 - u) * inner + u * outer);
                },
                tris, false);
    }
    DiskMesh m;
    m.R = R;
    m.core_cells = n;
    m.ring_cells = mr;
    m.h = R / n;
    std::vector<Vec2> base = B.pts;
    // orientation and regions from the undeformed mesh
    for (auto& t : tris) {
        if (signed_area(base, t) < 0) {
            std::swap(t[1], t[2]);
            std::swap(t[3], t[5]);
        }
    }
    const double eps = 1e-10 * R;
    std::map<std::pair<int, int>, std::vector<int>> edge_tris;
    static const int E[3][3] = {{0, 3, 1}, {1, 4, 2}, {2, 5, 0}};
    for (int ti = 0; ti < (int)tris.size(); ++ti) {
        const Tri6& t = tris[ti];
        double yc = (base[t[0]](1) + base[t[1]](1) + base[t[2]](1)) / 3;
        m.region.push_back(yc > 0 ? Side::plus : Side::minus);
        for (auto& e : E) {
            int p = t[e[0]], mid = t[e[1]], q = t[e[2]];
            edge_tris[{std::min(p, q), std::max(p, q)}].push_back(ti);
            auto on_circle = [&](int i) { return std::abs(base[i].norm() - R) < eps; };
            if (on_circle(p) && on_circle(mid) && on_circle(q)) {
                double t0 = std::atan2(base[p](1), base[p](0)), t1 = std::atan2(base[q](1), base[q](0));
                double d = t1 - t0;
                if (d > pi) d -= 2 * pi;
                if (d < -pi) d += 2 * pi;
                BoundaryEdge be{{p, mid, q}, t0, t0 + d};
                if (d < 0) be = BoundaryEdge{{q, mid, p}, t1, t1 - d};
                m.boundary.push_back(be);
            }
        }
    }
    for (auto& [key, ts] : edge_tris) {
        int p = key.first, q = key.second;
        if (std::abs(base[p](1)) > eps || std::abs(base[q](1)) > eps || ts.size() != 2) continue;
        const Tri6& t = tris[ts[0]];
        int mid = -1;
        for (auto& e : E)
            if ((t[e[0]] == p && t[e[2]] == q) || (t[e[0]] == q && t[e[2]] == p)) mid = t[e[1]];
        InterfaceEdge ie{{p, mid, q}, ts[0], ts[1]};
        if (base[p](0) > base[q](0)) std::swap(ie.nodes[0], ie.nodes[2]);
        if (m.region[ts[0]] == Side::minus) std::swap(ie.tri_plus, ie.tri_minus);
        m.interface.push_back(ie);
    }
    std::sort(m.interface.begin(), m.interface.end(), [&](const InterfaceEdge& x, const InterfaceEdge& y) {
        return base[x.nodes[0]](0) < base[y.nodes[0]](0);
    });
    std::sort(m.boundary.begin(), m.boundary.end(),
              [](const BoundaryEdge& x, const BoundaryEdge& y) { return x.theta0 < y.theta0; });
    m.nodes = base;
    if (!profile.is_flat())
        for (auto& p : m.nodes) p(1) += profile(p(0)) * blend(p(1), R);
    m.tris = std::move(tris);
    for (int ti = 0; ti < (int)m.tris.size(); ++ti)
        if (signed_area(m.nodes, m.tris[ti]) <= 0)
            throw Error(ErrorCode::invalid_input, "interface deformation inverted an element");
    return m;
}

DiskMesh make_disk_mesh(double R, double h, const SurfaceProfile& profile) {
    if (!(h > 0.0)) throw Error(ErrorCode::invalid_input, "element size must be positive");
    int n = 2 * (int)std::ceil(R / (2 * h));
    return make_disk_mesh(R, n, std::max(1, n / 2), profile);
}

DiskMesh refine(const DiskMesh& mesh, const SurfaceProfile& profile) {
    return make_disk_mesh(mesh.R, 2 * mesh.core_cells, 2 * mesh.ring_cells, profile);
}

void p2_shape(double xi, double eta, double N[6], double dN[6][2]) {
    double L1 = 1 - xi - eta, L2 = xi, L3 = eta;
    N[0] = L1 * (2 * L1 - 1);
    N[1] = L2 * (2 * L2 - 1);
    N[2] = L3 * (2 * L3 - 1);
    N[3] = 4 * L1 * L2;
    N[4] = 4 * L2 * L3;
    N[5] = 4 * L3 * L1;
    // dL1 = (-1,-1), dL2 = (1,0), dL3 = (0,1)
    dN[0][0] = -(4 * L1 - 1);
    dN[0][1] = -(4 * L1 - 1);
    dN[1][0] = 4 * L2 - 1;
    dN[1][1] = 0;
    dN[2][0] = 0;
    dN[2][1] = 4 * L3 - 1;
    dN[3][0] = 4 * (L1 - L2);
    dN[3][1] = -4 * L2;
    dN[4][0] = 4 * L3;
    dN[4][1] = 4 * L2;
    dN[5][0] = -4 * L3;
    dN[5][1] = 4 * (L1 - L3);
}

Vec2 map_point(const DiskMesh& m, int t, double xi, double eta) {
    double N[6], dN[6][2];
    p2_shape(xi, eta, N, dN);
    Vec2 x = Vec2::Zero();
    for (int a = 0; a < 6; ++a) x += N[a] * m.nodes[m.tris[t][a]];
    return x;
}

int DiskMesh::locate(const Vec2& x, Vec2& ref) const {
    for (int t = 0; t < (int)tris.size(); ++t) {
        Vec2 lo = nodes[tris[t][0]], hi = lo;
        for (int a = 1; a < 6; ++a) {
            lo = lo.cwiseMin(nodes[tris[t][a]]);
            hi = hi.cwiseMax(nodes[tris[t][a]]);
        }
        double pad = 0.25 * (hi - lo).maxCoeff();
        if ((x.array() < lo.array() - pad).any() || (x.array() > hi.array() + pad).any()) continue;
        Vec2 r(1.0 / 3, 1.0 / 3);
        bool ok = false;
        for (int it = 0; it < 30; ++it) {
            double N[6], dN[6][2];
            p2_shape(r(0), r(1), N, dN);
            Vec2 p = Vec2::Zero();
            Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
            for (int a = 0; a < 6; ++a) {
                const Vec2& X = nodes[tris[t][a]];
                p += N[a] * X;
                J.col(0) += dN[a][0] * X;
                J.col(1) += dN[a][1] * X;
            }
            Vec2 dr = J.inverse() * (x - p);
            r += dr;
            ok = dr.norm() < 1e-11;
            if (dr.norm() < 1e-14 || r.cwiseAbs().maxCoeff() > 10) break;
        }
        const double tol = 1e-10;
        if (ok && r(0) >= -tol && r(1) >= -tol && r(0) + r(1) <= 1 + tol) {
            ref = r;
            return t;
        }
    }
    return -1;
}

TriRule triangle_rule(int n) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    TriRule r;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double u = 0.5 * (x[i] + 1), v = 0.5 * (x[j] + 1);
            r.xi.push_back(u);
            r.eta.push_back(v * (1 - u));
            r.w.push_back(0.25 * w[i] * w[j] * (1 - u));
        }
    return r;
}

}  // namespace le
