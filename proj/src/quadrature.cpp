#include "layered_elastica/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "json.hpp"
#include "layered_elastica/specfun.hpp"

namespace le {

QuadConfig quad_config_from_json(const std::string& text) {
    QuadConfig c;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        c.tol = j.value("tol", c.tol);
        c.rel_tol = j.value("rel_tol", c.rel_tol);
        c.node_budget = j.value("node_budget", c.node_budget);
        c.indent_scale = j.value("indent_scale", c.indent_scale);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::invalid_input, std::string("bad quadrature config: ") + e.what());
    }
    if (!(c.tol > 0) || c.rel_tol < 0 || c.node_budget < 15 || !(c.indent_scale >= 0))
        throw Error(ErrorCode::invalid_input, "quadrature config out of range");
    return c;
}

void Segment::eval(double u, cplx& xi, cplx& dxi) const {
    double s = u, ds = 1.0;
    switch (cluster) {
        case Cluster::none: break;
        case Cluster::start: s = u * u; ds = 2 * u; break;
        case Cluster::end: s = 1 - (1 - u) * (1 - u); ds = 2 * (1 - u); break;
        case Cluster::both: s = u * u * (3 - 2 * u); ds = 6 * u * (1 - u); break;
    }
    if (kind == Kind::line) {
        xi = a + (b - a) * s;
        dxi = (b - a) * ds;
        if (a.imag() == 0.0 && b.imag() == 0.0) xi = cplx(xi.real(), 0.0);
    } else {
        double th = theta0 + (theta1 - theta0) * s;
        cplx e = std::polar(1.0, th);
        xi = center + radius * e;
        dxi = I * radius * (theta1 - theta0) * ds * e;
    }
}

double Segment::length() const {
    if (kind == Kind::line) return std::abs(b - a);
    return radius * std::abs(theta1 - theta0);
}

namespace {

std::vector<double> unique_positive(const std::vector<double>& bp) {
    std::vector<double> k;
    for (double v : bp)
        if (v > 0) k.push_back(v);
    std::sort(k.begin(), k.end());
    std::vector<double> out;
    for (double v : k)
        if (out.empty() || v - out.back() > 1e-12 * v) out.push_back(v);
    return out;
}

Segment line(cplx a, cplx b, Cluster c) {
    Segment s;
    s.kind = Segment::Kind::line;
    s.a = a;
    s.b = b;
    s.cluster = c;
    return s;
}

Segment arc(cplx center, double r, double t0, double t1) {
    Segment s;
    s.kind = Segment::Kind::arc;
    s.center = center;
    s.radius = r;
    s.theta0 = t0;
    s.theta1 = t1;
    return s;
}

Cluster cluster_for(bool start_sing, bool end_sing) {
    if (start_sing && end_sing) return Cluster::both;
    if (start_sing) return Cluster::start;
    if (end_sing) return Cluster::end;
    return Cluster::none;
}

// Points along the real axis with flags marking branch points; consecutive
// points are joined by lines, branch points optionally indented.
struct Mark {
    double x;
    int branch;  // 0 plain, +1 indent below (positive k), -1 indent above (negative k)
};

void build_axis(std::vector<Segment>& segs, const std::vector<Mark>& marks, double r) {
    double prev = marks.front().x;
    bool prev_sing = marks.front().branch != 0;
    for (size_t i = 1; i < marks.size(); ++i) {
        const Mark& m = marks[i];
        if (m.branch != 0 && r > 0) {
            double x0 = m.x - r, x1 = m.x + r;
            segs.push_back(line(prev, x0, cluster_for(prev_sing, true)));
            if (m.branch > 0)
                segs.push_back(arc(m.x, r, pi, 2 * pi));
            else
                segs.push_back(arc(m.x, r, pi, 0.0));
            prev = x1;
            prev_sing = true;
        } else {
            segs.push_back(line(prev, m.x, cluster_for(prev_sing, m.branch != 0)));
            prev = m.x;
            prev_sing = m.branch != 0;
        }
    }
}

}  // namespace

SpectralPath fourier_path(const std::vector<double>& branch_points, double truncation,
                          double indent_radius) {
    std::vector<double> k = unique_positive(branch_points);
    SpectralPath p;
    p.indent_radius = indent_radius;
    p.truncation = truncation;
    std::vector<Mark> marks{{-truncation, 0}};
    for (auto it = k.rbegin(); it != k.rend(); ++it)
        if (*it < truncation) marks.push_back({-*it, -1});
    for (double v : k)
        if (v < truncation) marks.push_back({v, +1});
    marks.push_back({truncation, 0});
    build_axis(p.segments, marks, indent_radius);
    return p;
}

SpectralPath hankel_path(const std::vector<double>& branch_points, double truncation,
                         double indent_radius, double origin_radius) {
    std::vector<double> k = unique_positive(branch_points);
    SpectralPath p;
    p.indent_radius = indent_radius;
    p.truncation = truncation;
    std::vector<Mark> left{{-truncation, 0}};
    for (auto it = k.rbegin(); it != k.rend(); ++it)
        if (*it < truncation) left.push_back({-*it, -1});
    left.push_back({-origin_radius, 0});
    build_axis(p.segments, left, indent_radius);
    p.segments.push_back(arc(0.0, origin_radius, pi, 0.0));
    std::vector<Mark> right{{origin_radius, 0}};
    for (double v : k)
        if (v < truncation) right.push_back({v, +1});
    right.push_back({truncation, 0});
    build_axis(p.segments, right, indent_radius);
    return p;
}

SpectralPath half_line_path(const std::vector<double>& branch_points, double truncation,
                            double indent_radius) {
    std::vector<double> k = unique_positive(branch_points);
    SpectralPath p;
    p.indent_radius = indent_radius;
    p.truncation = truncation;
    std::vector<Mark> marks{{0.0, 0}};
    for (double v : k)
        if (v < truncation) marks.push_back({v, +1});
    marks.push_back({truncation, 0});
    build_axis(p.segments, marks, indent_radius);
    return p;
}

namespace {

const double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                       0.207784955007898467600689403773245, 0.0};
const double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    int seg;
    double u0, u1;
    double err;
    size_t slot;
    long id;
};

struct PanelLess {
    bool operator()(const Panel& a, const Panel& b) const {
        if (a.err != b.err) return a.err < b.err;
        return a.id > b.id;
    }
};

}  // namespace

QuadResultN integrate_path(const SpectralPath& path, int ncomp, const VecKernel& f,
                           const QuadConfig& cfg, double oscillation) {
    QuadResultN res;
    res.value.assign(ncomp, 0.0);
    std::vector<cplx> store;  // panel values, ncomp per slot
    std::vector<cplx> fk(15 * (size_t)ncomp);
    std::vector<cplx> kron(ncomp), gauss(ncomp);
    long nodes = 0;
    long next_id = 0;

    auto eval_panel = [&](int si, double u0, double u1, size_t slot) {
        const Segment& sg = path.segments[si];
        double c = 0.5 * (u0 + u1), hw = 0.5 * (u1 - u0);
        std::fill(kron.begin(), kron.end(), 0.0);
        std::fill(gauss.begin(), gauss.end(), 0.0);
        cplx xi, dxi;
        for (int n = 0; n < 15; ++n) {
            int idx = n < 7 ? n : (n == 7 ? 7 : 14 - n);
            double x = n < 7 ? -xgk[n] : (n == 7 ? 0.0 : xgk[14 - n]);
            sg.eval(c + hw * x, xi, dxi);
            cplx* out = &fk[(size_t)n * ncomp];
            f(xi, out);
            double wk = wgk[idx] * hw;
            bool is_gauss = (idx % 2 == 1);
            double wgv = is_gauss ? wg[idx / 2] * hw : 0.0;
            for (int q = 0; q < ncomp; ++q) {
                cplx v = out[q] * dxi;
                kron[q] += wk * v;
                if (is_gauss) gauss[q] += wgv * v;
            }
        }
        nodes += 15;
        double e = 0.0;
        for (int q = 0; q < ncomp; ++q) {
            store[slot * ncomp + q] = kron[q];
            double d = std::abs(kron[q] - gauss[q]);
            if (!std::isfinite(d)) throw Error(ErrorCode::overflow, "non-finite integrand on path");
            e = std::max(e, d);
        }
        return e;
    };

    std::priority_queue<Panel, std::vector<Panel>, PanelLess> heap;
    size_t nslots = 0;
    auto new_slot = [&]() {
        store.resize((nslots + 1) * ncomp);
        return nslots++;
    };
    for (int si = 0; si < (int)path.segments.size(); ++si) {
        const Segment& sg = path.segments[si];
        double len = sg.length();
        if (len == 0.0) continue;
        long n0 = sg.kind == Segment::Kind::arc ? 2 : 2 + (long)std::ceil(len * oscillation / 3.0);
        n0 = std::min<long>(n0, 4000);
        for (long i = 0; i < n0; ++i) {
            double u0 = (double)i / n0, u1 = (double)(i + 1) / n0;
            size_t slot = new_slot();
            double e = eval_panel(si, u0, u1, slot);
            heap.push({si, u0, u1, e, slot, next_id++});
        }
    }
    double frozen_err = 0.0;
    std::vector<Panel> done;
    auto total = [&](double& err_sum, double& vmax) {
        err_sum = frozen_err;
        std::vector<cplx> acc(ncomp, 0.0);
        auto h2 = heap;
        while (!h2.empty()) {
            const Panel& p = h2.top();
            err_sum += p.err;
            for (int q = 0; q < ncomp; ++q) acc[q] += store[p.slot * ncomp + q];
            h2.pop();
        }
        for (const Panel& p : done)
            for (int q = 0; q < ncomp; ++q) acc[q] += store[p.slot * ncomp + q];
        vmax = 0;
        for (auto& v : acc) vmax = std::max(vmax, std::abs(v));
    };
    double err_sum = 0.0, vmax = 0.0;
    // running error sum, refreshed periodically to limit drift
    long iter = 0;
    while (!heap.empty()) {
        if (iter % 256 == 0) total(err_sum, vmax);
        double target = std::max(cfg.tol, cfg.rel_tol * vmax);
        if (err_sum <= target) break;
        if (nodes + 30 > cfg.node_budget)
            throw Error(ErrorCode::budget_exceeded,
                        "adaptive quadrature exhausted node budget (err " + std::to_string(err_sum) +
                            ")");
        Panel p = heap.top();
        heap.pop();
        double um = 0.5 * (p.u0 + p.u1);
        if (!(um > p.u0 && um < p.u1)) {
            frozen_err += p.err;
            done.push_back(p);
            continue;
        }
        size_t s2 = new_slot();
        double e1 = eval_panel(p.seg, p.u0, um, p.slot);
        double e2 = eval_panel(p.seg, um, p.u1, s2);
        err_sum += e1 + e2 - p.err;
        heap.push({p.seg, p.u0, um, e1, p.slot, next_id++});
        heap.push({p.seg, um, p.u1, e2, s2, next_id++});
        ++iter;
    }
    // deterministic summation in path order
    std::vector<Panel> all = done;
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& a, const Panel& b) {
        if (a.seg != b.seg) return a.seg < b.seg;
        return a.u0 < b.u0;
    });
    double e = 0.0;
    for (const Panel& p : all) {
        e += p.err;
        for (int q = 0; q < ncomp; ++q) res.value[q] += store[p.slot * ncomp + q];
    }
    res.error_estimate = e;
    res.nodes_used = nodes;
    return res;
}

double default_indent_radius(const std::vector<double>& branch_points, double oscillation,
                             double indent_scale) {
    std::vector<double> k = unique_positive(branch_points);
    if (k.empty()) return 0.0;
    double gap = 2 * k.front();
    for (size_t i = 1; i < k.size(); ++i) gap = std::min(gap, k[i] - k[i - 1]);
    double r = std::min(0.05 * k.front(), gap / 4);
    if (oscillation > 0) r = std::min(r, 0.5 / oscillation);
    return indent_scale * r;
}

double choose_truncation(int ncomp, const VecKernel& f, const SpectralSetup& s, double tol,
                         bool symmetric) {
    double kmax = 0.0;
    for (double v : s.branch_points) kmax = std::max(kmax, v);
    double h = s.decay_rate;
    double L = kmax + std::max(1.0, 2.0 / h);
    std::vector<cplx> out(ncomp);
    auto probe = [&](double x) {
        double v = 0.0;
        f(cplx(x, 0.0), out.data());
        for (auto& c : out) v = std::max(v, std::abs(c));
        return v;
    };
    double Lmax = kmax + 2000.0 / h + 10.0;
    for (int it = 0; it < 80; ++it) {
        double v = std::max(probe(L), probe(L + 0.5 / h));
        if (symmetric) v = std::max({v, probe(-L), probe(-L - 0.5 / h)});
        if (!std::isfinite(v)) throw Error(ErrorCode::overflow, "kernel not finite in tail");
        double tail = v / h;
        if (tail < tol / 10) break;
        double step = std::log(10 * tail / tol) / h;
        L += std::max(step, 0.25 / h);
        if (L > Lmax) {
            L = Lmax;
            break;
        }
    }
    return L;
}

namespace {

double max_branch(const std::vector<double>& bp) {
    double kmax = 0.0;
    for (double v : bp) kmax = std::max(kmax, v);
    return kmax;
}

// Ray length T such that |f(start + T dir)| / d < tol / 10.
double ray_length(int ncomp, const VecKernel& f, cplx start, cplx dir, double d, double tol) {
    std::vector<cplx> out(ncomp);
    auto probe = [&](double t) {
        f(start + t * dir, out.data());
        double v = 0.0;
        for (auto& c : out) v = std::max(v, std::abs(c));
        return v;
    };
    double T = 4.0 / d;
    for (int it = 0; it < 80; ++it) {
        double v = std::max(probe(T), probe(T + 0.5 / d));
        if (!std::isfinite(v)) throw Error(ErrorCode::overflow, "kernel not finite on tail ray");
        double tail = v / d;
        if (tail < tol / 10) break;
        T += std::max(std::log(10 * tail / tol) / d, 0.25 / d);
        if (T > 2000.0 / d) break;
    }
    return T;
}

Segment ray(cplx a, cplx b) {
    Segment s;
    s.kind = Segment::Kind::line;
    s.a = a;
    s.b = b;
    return s;
}

double ray_start(const std::vector<double>& bp, double indent) {
    return 1.5 * max_branch(bp) + 1.0 + 2 * indent;
}

QuadResultN run_with_rays(SpectralPath path, int ncomp, const VecKernel& f, const SpectralSetup& s,
                          const QuadConfig& cfg, double L0, bool left_ray, double tol) {
    double h = s.decay_rate, D = s.shift;
    double d = std::hypot(h, D);
    double phi = std::atan2(D, h);
    cplx vr = std::polar(1.0, phi);
    cplx vl = -std::polar(1.0, -phi);
    double Tr = ray_length(ncomp, f, L0, vr, d, tol);
    path.segments.push_back(ray(L0, L0 + Tr * vr));
    if (left_ray) {
        double Tl = ray_length(ncomp, f, -L0, vl, d, tol);
        path.segments.insert(path.segments.begin(), ray(-L0 + Tl * vl, -L0));
    }
    path.node_budget = cfg.node_budget;
    QuadConfig c2 = cfg;
    c2.tol = tol;
    return integrate_path(path, ncomp, f, c2, std::abs(D));
}

}  // namespace

QuadResultN fourier_inversion_vec(int ncomp, const VecKernel& f, const SpectralSetup& s,
                                  const QuadConfig& cfg) {
    double r = s.indent_radius >= 0 ? s.indent_radius
                                    : default_indent_radius(s.branch_points, s.oscillation,
                                                            cfg.indent_scale);
    QuadResultN res;
    if (s.rotate_tails) {
        double d = std::hypot(s.decay_rate, s.shift);
        if (!(d > 0) || d < s.h_min)
            throw Error(ErrorCode::slow_decay, "observation point too close to the image source");
        double L0 = ray_start(s.branch_points, r);
        SpectralPath path = fourier_path(s.branch_points, L0, r);
        res = run_with_rays(path, ncomp, f, s, cfg, L0, true, cfg.tol * 2 * pi);
    } else {
        if (!(s.decay_rate > 0) || s.decay_rate < s.h_min)
            throw Error(ErrorCode::slow_decay, "decay rate below threshold for plain truncation");
        double L = choose_truncation(ncomp, f, s, cfg.tol, true);
        SpectralPath path = fourier_path(s.branch_points, L, r);
        path.node_budget = cfg.node_budget;
        QuadConfig c2 = cfg;
        c2.tol = cfg.tol * 2 * pi;
        res = integrate_path(path, ncomp, f, c2, std::max(s.oscillation, 0.0));
    }
    for (auto& v : res.value) v /= 2 * pi;
    res.error_estimate /= 2 * pi;
    return res;
}

QuadResultN hankel_inversion_vec(int ncomp, const VecKernel& f, const SpectralSetup& s,
                                 const QuadConfig& cfg, bool j_form) {
    double kmin = 1e300;
    for (double v : s.branch_points)
        if (v > 0) kmin = std::min(kmin, v);
    if (kmin == 1e300) kmin = 1.0;
    double r = s.indent_radius >= 0 ? s.indent_radius
                                    : default_indent_radius(s.branch_points, s.oscillation,
                                                            cfg.indent_scale);
    if (j_form || !s.rotate_tails) {
        if (!(s.decay_rate > 0) || s.decay_rate < s.h_min)
            throw Error(ErrorCode::slow_decay, "decay rate below threshold for plain truncation");
        double L = choose_truncation(ncomp, f, s, cfg.tol, !j_form);
        SpectralPath path = j_form ? half_line_path(s.branch_points, L, r)
                                   : hankel_path(s.branch_points, L, r, 0.05 * kmin);
        path.node_budget = cfg.node_budget;
        return integrate_path(path, ncomp, f, cfg, s.oscillation);
    }
    double d = std::hypot(s.decay_rate, s.shift);
    if (!(d > 0) || d < s.h_min)
        throw Error(ErrorCode::slow_decay, "observation point too close to the image source");
    double L0 = ray_start(s.branch_points, r);
    SpectralPath path = hankel_path(s.branch_points, L0, r, 0.05 * kmin);
    return run_with_rays(path, ncomp, f, s, cfg, L0, true, cfg.tol);
}

QuadResult fourier_inversion(const ScalarKernel& f, double decay_rate, double tol,
                             const std::vector<double>& branch_points, QuadConfig cfg,
                             double oscillation) {
    cfg.tol = tol;
    SpectralSetup s;
    s.branch_points = branch_points;
    s.decay_rate = decay_rate;
    s.oscillation = oscillation;
    QuadResultN r = fourier_inversion_vec(1, [&](cplx xi, cplx* o) { o[0] = f(xi); }, s, cfg);
    return {r.value[0], r.error_estimate, r.nodes_used};
}

QuadResult hankel_path_integral(const ScalarKernel& f, int order, double rho, double decay_rate,
                                double tol, const std::vector<double>& branch_points,
                                QuadConfig cfg, HankelRoute route) {
    if (order < 0 || order > 2) throw Error(ErrorCode::domain_error, "order must be 0, 1 or 2");
    if (rho < 0) throw Error(ErrorCode::domain_error, "rho must be non-negative");
    if (!(decay_rate > 0)) throw Error(ErrorCode::slow_decay, "decay rate must be positive");
    double kmax = 0.0;
    for (double v : branch_points) kmax = std::max(kmax, v);
    if (route == HankelRoute::automatic)
        route = (rho * std::max(kmax, 1.0) < 0.5) ? HankelRoute::j_form : HankelRoute::path_c;
    if (route == HankelRoute::path_c && rho == 0.0)
        throw Error(ErrorCode::singular_origin, "path C form needs rho > 0");
    cfg.tol = tol;
    SpectralSetup s;
    s.branch_points = branch_points;
    s.decay_rate = decay_rate;
    s.oscillation = rho;
    VecKernel g;
    if (route == HankelRoute::j_form) {
        g = [&](cplx xi, cplx* o) {
            cplx p = xi;
            for (int i = 0; i < order; ++i) p *= xi;
            o[0] = f(xi) * detail::bessel_j_any(order, xi * rho) * p;
        };
    } else {
        g = [&](cplx xi, cplx* o) {
            cplx p = xi;
            for (int i = 0; i < order; ++i) p *= xi;
            o[0] = f(xi) * detail::hankel1_any(order, xi * rho) * p;
        };
    }
    s.rotate_tails = route == HankelRoute::path_c;
    s.shift = rho;
    double scale = route == HankelRoute::j_form ? 1.0 / (2 * pi) : 1.0 / (4 * pi);
    QuadConfig c2 = cfg;
    c2.tol = tol / scale;
    QuadResultN res = hankel_inversion_vec(1, g, s, c2, route == HankelRoute::j_form);
    return {res.value[0] * scale, res.error_estimate * scale, res.nodes_used};
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (z * p1 - p0) / (z * z - 1);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1 - z * z) * dp * dp);
    }
}

}  // namespace le
