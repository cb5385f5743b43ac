#include "layered_elastica/bie2d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>

#include <Eigen/SparseLU>

#include "layered_elastica/parallel.hpp"
#include "layered_elastica/specfun.hpp"

namespace le {

FieldJet incident_wave(const Vec2& x, const IncidentSource& src, const ElasticMedium& m) {
    TensorJet t = kupradze_jet(m, Side::plus, x, src.z);
    FieldJet j;
    j.u = t.value * src.a;
    j.grad.resize(2, 2);
    for (int l = 0; l < 2; ++l) j.grad.col(l) = t.grad_x[l] * src.a;
    return j;
}

namespace {

void check_source(const IncidentSource& src, const SurfaceProfile& profile) {
    if (!(src.z(1) > profile(src.z(0))))
        throw Error(ErrorCode::invalid_input, "source must lie above the interface");
    if (src.a.norm() == 0.0) throw Error(ErrorCode::invalid_input, "polarization must be nonzero");
}

FieldJet zero_jet() {
    FieldJet j;
    j.u = CVecX::Zero(2);
    j.grad = CMatX::Zero(2, 2);
    return j;
}

}  // namespace

FieldJet reference_wave_jet(const Vec2& x, const IncidentSource& src, const ElasticMedium& m,
                            const SurfaceProfile& profile, const QuadConfig& cfg) {
    check_source(src, profile);
    if (src.z(1) <= 0.0) return zero_jet();
    GreenOptions o;
    o.grad_x = true;
    GreenMatrix g = assemble_G(x, src.z, m, cfg, o);
    FieldJet j;
    j.u = g.G * src.a;
    j.grad.resize(2, 2);
    for (int l = 0; l < 2; ++l) j.grad.col(l) = g.grad_x[l] * src.a;
    return j;
}

CVec2 reference_wave(const Vec2& x, const IncidentSource& src, const ElasticMedium& m,
                     const SurfaceProfile& profile, const QuadConfig& cfg) {
    check_source(src, profile);
    if (src.z(1) <= 0.0) return CVec2::Zero();
    return assemble_G(x, src.z, m, cfg).G * src.a;
}

namespace {

// Radial jet of -(1/2pi) J0(k r), the coefficient of ln r in Phi_k.
RadialJet log_coeff_radial(double k, double r) {
    RadialJet j{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    double z = k * r;
    if (z <= 2.0) {
        double c = -1.0 / (2 * pi), pw = 1.0;
        for (int m = 0; m < 40; ++m) {
            if (m > 0) c *= -(k * k / 4) / ((double)m * m);
            double a = 2.0 * m;
            j.g += c * pw;
            if (m > 0) {
                j.dg += c * a * pw / r;
                j.A += c * a * pw / (r * r);
                j.B += c * a * (a - 2) * pw / (r * r);
                j.E += c * a * (a - 2) * (a - 4) * pw / (r * r * r);
            }
            pw *= r * r;
            if (std::abs(c) * pw < 1e-20) break;
        }
        j.C = j.B / r;
        return j;
    }
    double J0 = bessel_j(0, z).real(), J1 = bessel_j(1, z).real();
    double f = 1.0 / (2 * pi);
    j.g = -f * J0;
    j.dg = f * k * J1;
    j.A = f * k * k * J1 / z;
    j.B = f * k * k * (J0 - 2 * J1 / z);
    j.C = j.B / r;
    j.E = f * k * k * k * (-J1 - 4 * J0 / z + 8 * J1 / (z * z));
    return j;
}

RadialJet log_coeff_diff(double ks, double kp, double r) {
    if (ks * r > 2.0) {
        RadialJet a = log_coeff_radial(ks, r), b = log_coeff_radial(kp, r);
        return {a.g - b.g, a.dg - b.dg, a.A - b.A, a.B - b.B, a.C - b.C, a.E - b.E};
    }
    RadialJet j{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    double cs = -1.0 / (2 * pi), cp = cs, pw = r * r;
    for (int m = 1; m < 40; ++m) {
        cs *= -(ks * ks / 4) / ((double)m * m);
        cp *= -(kp * kp / 4) / ((double)m * m);
        double c = cs - cp, a = 2.0 * m;
        j.g += c * pw;
        j.dg += c * a * pw / r;
        j.A += c * a * pw / (r * r);
        j.B += c * a * (a - 2) * pw / (r * r);
        j.E += c * a * (a - 2) * (a - 4) * pw / (r * r * r);
        pw *= r * r;
        if (std::abs(cs) * pw < 1e-20) break;
    }
    j.C = j.B / r;
    return j;
}

// Row-wise traction at y of F(x, y), given F and its y-derivatives: out(i, k).
CMat2 row_traction(const CMat2& F, const CMat2 Fy[2], const Vec2& nu, const StressWeights& w,
                   const ElasticMedium& m) {
    SurfaceFrame fr = SurfaceFrame::make(nu);
    CMat2 out;
    for (int i = 0; i < 2; ++i) {
        FieldJet j;
        j.u = F.row(i).transpose();
        j.grad.resize(2, 2);
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) j.grad(k, l) = Fy[l](i, k);
        out.row(i) = stress_direct(j, fr, w, m, 2).transpose();
    }
    return out;
}

LogSplit split_off_diagonal(const ElasticMedium& m, Side side, const StressWeights& w,
                            const Vec2& x, const Vec2& y, int kernel) {
    Wavenumbers k = wavenumbers(m);
    double ks = k.k(Wave::s, side), kp = k.k(Wave::p, side);
    double irw = 1.0 / (m.rho(side) * m.omega * m.omega);
    Vec2 d = x - y;
    double r = d.norm();
    TensorJet P = kupradze_jet(m, side, x, y);
    TensorJet L = radial_tensor_jet(log_coeff_radial(ks, r), log_coeff_diff(ks, kp, r), m.mu, irw, d);
    LogSplit s;
    if (kernel == 0) {
        s.log_coeff = L.value;
        s.regular = CMat2(P.value) - s.log_coeff * std::log(r);
        return s;
    }
    Vec2 nu = y / y.norm();
    CMat2 Py[2] = {-P.grad_x[0], -P.grad_x[1]};
    CMat2 Ly[2] = {-L.grad_x[0], -L.grad_x[1]};
    s.log_coeff = row_traction(L.value, Ly, nu, w, m);
    s.regular = row_traction(P.value, Py, nu, w, m) - s.log_coeff * std::log(r);
    return s;
}

}  // namespace

LogSplit free_space_split(const ElasticMedium& m, Side side, const StressWeights& w, double R,
                          double t, double tau, int kernel) {
    auto at = [&](double a) { return Vec2(R * std::cos(a), R * std::sin(a)); };
    if (t != tau) return split_off_diagonal(m, side, w, at(t), at(tau), kernel);
    // symmetric Richardson limit along the circle
    const double d = 1e-3;
    auto avg = [&](double h) {
        LogSplit a = split_off_diagonal(m, side, w, at(t), at(t + h), kernel);
        LogSplit b = split_off_diagonal(m, side, w, at(t), at(t - h), kernel);
        return LogSplit{0.5 * (a.log_coeff + b.log_coeff), 0.5 * (a.regular + b.regular)};
    };
    LogSplit f1 = avg(d), f2 = avg(2 * d);
    return LogSplit{(4.0 * f1.log_coeff - f2.log_coeff) / 3.0, (4.0 * f1.regular - f2.regular) / 3.0};
}

namespace {

// Trigonometric product weights for the log(4 sin^2((t - tau)/2)) kernel, by offset.
std::vector<double> log_weights(int N) {
    int n = N / 2;
    std::vector<double> w(N);
    for (int j = 0; j < N; ++j) {
        double d = 2 * pi * j / N, s = 0.0;
        for (int m = 1; m < n; ++m) s += std::cos(m * d) / m;
        w[j] = -(2 * pi / n) * s - (pi / ((double)n * n)) * std::cos(n * d);
    }
    return w;
}

struct PairData {
    CMat2 G;
    CMat2 Gy[2];
};

std::string ops_key(const ElasticMedium& m, double R, int N, const QuadConfig& c) {
    std::ostringstream s;
    s.precision(17);
    s << m.lambda << ' ' << m.mu << ' ' << m.rho_plus << ' ' << m.rho_minus << ' ' << m.omega << ' '
      << R << ' ' << N << ' ' << c.tol << ' ' << c.rel_tol << ' ' << c.node_budget << ' '
      << c.indent_scale;
    return s.str();
}

std::mutex ops_mutex;
std::map<std::string, std::shared_ptr<const BoundaryOperators>> ops_cache;

Side node_side(const Vec2& y) { return y(1) >= 0 ? Side::plus : Side::minus; }

}  // namespace

std::shared_ptr<const BoundaryOperators> boundary_operators(const ElasticMedium& m, double R, int N,
                                                            const QuadConfig& cfg) {
    m.validate();
    if (m.dim != 2) throw Error(ErrorCode::invalid_medium, "boundary operators are two-dimensional");
    if (N < 8 || N % 4 != 0) throw Error(ErrorCode::invalid_input, "boundary nodes must be a multiple of 4, >= 8");
    if (!(R > 0.0)) throw Error(ErrorCode::invalid_input, "radius must be positive");
    const std::string key = ops_key(m, R, N, cfg);
    {
        std::lock_guard<std::mutex> lk(ops_mutex);
        auto it = ops_cache.find(key);
        if (it != ops_cache.end()) return it->second;
    }
    auto ops = std::make_shared<BoundaryOperators>();
    ops->medium = m;
    ops->weights = StressWeights::boundary_choice(m);
    ops->R = R;
    ops->N = N;
    ops->weight = 2 * pi * R / N;
    for (int n = 0; n < N; ++n) {
        double t = (n + 0.5) * 2 * pi / N;
        ops->nodes.emplace_back(R * std::cos(t), R * std::sin(t));
        ops->normals.emplace_back(std::cos(t), std::sin(t));
    }
    // spectral parts on orbits of {swap, mirror x1 -> -x1}
    auto mir = [N](int n) { return (N / 2 - 1 - n + N) % N; };
    std::vector<std::pair<int, int>> reps;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            long id = (long)a * N + b;
            long o1 = (long)b * N + a, o2 = (long)mir(a) * N + mir(b), o3 = (long)mir(b) * N + mir(a);
            if (id <= o1 && id <= o2 && id <= o3) reps.emplace_back(a, b);
        }
    std::vector<PairData> pairs((size_t)N * N);
    std::vector<long> used(reps.size(), 0);
    GreenOptions go;
    go.include_free_space = false;
    go.grad_x = true;
    go.grad_y = true;
    const Eigen::Matrix2d M = Eigen::Vector2d(-1.0, 1.0).asDiagonal();
    const double sg[2] = {-1.0, 1.0};
    parallel_for(reps.size(), [&](std::size_t r) {
        auto [a, b] = reps[r];
        GreenMatrix g = assemble_G(ops->nodes[a], ops->nodes[b], m, cfg, go);
        used[r] = g.nodes_used;
        PairData d0{g.G, {g.grad_y[0], g.grad_y[1]}};
        PairData d1{g.G.transpose(), {g.grad_x[0].transpose(), g.grad_x[1].transpose()}};
        auto mirror = [&](const PairData& d) {
            PairData e;
            e.G = M * d.G * M;
            for (int k = 0; k < 2; ++k) e.Gy[k] = sg[k] * (M * d.Gy[k] * M);
            return e;
        };
        pairs[(size_t)a * N + b] = d0;
        pairs[(size_t)b * N + a] = d1;
        pairs[(size_t)mir(a) * N + mir(b)] = mirror(d0);
        pairs[(size_t)mir(b) * N + mir(a)] = mirror(d1);
    });
    for (long u : used) ops->spectral_nodes += u;

    const std::vector<double> lw = log_weights(N);
    const double h = 2 * pi / N, logR = std::log(R);
    ops->S = CMatX::Zero(2 * N, 2 * N);
    ops->K = CMatX::Zero(2 * N, 2 * N);
    parallel_for(N, [&](std::size_t mi) {
        const int a = (int)mi;
        const Vec2& x = ops->nodes[a];
        const Side X = node_side(x);
        const double ta = (a + 0.5) * h;
        for (int b = 0; b < N; ++b) {
            const Vec2& y = ops->nodes[b];
            const double tb = (b + 0.5) * h;
            LogSplit s0 = free_space_split(m, X, ops->weights, R, ta, a == b ? ta : tb, 0);
            LogSplit s1 = free_space_split(m, X, ops->weights, R, ta, a == b ? ta : tb, 1);
            const PairData& d = pairs[(size_t)a * N + b];
            CMat2 rem = d.G;
            CMat2 remy[2] = {d.Gy[0], d.Gy[1]};
            if (node_side(y) != X) {
                TensorJet P = kupradze_jet(m, X, x, y);
                rem -= CMat2(P.value);
                for (int l = 0; l < 2; ++l) remy[l] += CMat2(P.grad_x[l]);
            }
            CMat2 remK = row_traction(rem, remy, ops->normals[b], ops->weights, m);
            double kw = 0.5 * lw[(a - b + N) % N];
            CMat2 Sab = R * (kw * s0.log_coeff + h * (s0.regular + s0.log_coeff * logR + rem));
            CMat2 Kab = R * (kw * s1.log_coeff + h * (s1.regular + s1.log_coeff * logR + remK));
            ops->S.block<2, 2>(2 * a, 2 * b) = Sab;
            ops->K.block<2, 2>(2 * a, 2 * b) = Kab;
        }
    });
    std::lock_guard<std::mutex> lk(ops_mutex);
    ops_cache.emplace(key, ops);
    return ops;
}

CVecX operator_S(const BoundaryOperators& ops, const CVecX& density) {
    if (density.size() != 2 * ops.N) throw Error(ErrorCode::invalid_input, "density size mismatch");
    return ops.S * density;
}

CVecX operator_K(const BoundaryOperators& ops, const CVecX& trace) {
    if (trace.size() != 2 * ops.N) throw Error(ErrorCode::invalid_input, "trace size mismatch");
    return ops.K * trace;
}

double element_size_for(const ElasticMedium& m, double ppw) {
    if (!(ppw > 0.0)) throw Error(ErrorCode::invalid_input, "points per wavelength must be positive");
    double lam = 2 * pi / wavenumbers(m).max();
    return 2 * lam / ppw;
}

DiscretizedBall discretize(const ElasticMedium& m, const SurfaceProfile& profile,
                           const SolverOptions& opt) {
    double h = opt.element_size > 0 ? opt.element_size : element_size_for(m, opt.points_per_wavelength);
    DiscretizedBall d;
    d.R = opt.R;
    d.mesh = make_disk_mesh(opt.R, h, profile);
    d.ops = boundary_operators(m, opt.R, opt.boundary_nodes, opt.quad);
    return d;
}

namespace {

struct ElementGeometry {
    double N[6];
    double dN[6][2];  // physical derivatives
    double detJ;
    Vec2 x;
};

ElementGeometry element_geometry(const DiskMesh& mesh, int t, double xi, double eta) {
    ElementGeometry g;
    double dr[6][2];
    p2_shape(xi, eta, g.N, dr);
    Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
    g.x = Vec2::Zero();
    for (int a = 0; a < 6; ++a) {
        const Vec2& X = mesh.nodes[mesh.tris[t][a]];
        g.x += g.N[a] * X;
        J.col(0) += dr[a][0] * X;
        J.col(1) += dr[a][1] * X;
    }
    g.detJ = J.determinant();
    if (!(g.detJ > 0.0)) throw Error(ErrorCode::invalid_input, "degenerate mesh element");
    Eigen::Matrix2d Jit = J.inverse().transpose();
    for (int a = 0; a < 6; ++a) {
        Vec2 d = Jit * Vec2(dr[a][0], dr[a][1]);
        g.dN[a][0] = d(0);
        g.dN[a][1] = d(1);
    }
    return g;
}

// Boundary nodes to mesh trace: three shape values per node.
Eigen::SparseMatrix<double> trace_matrix(const DiskMesh& mesh, const BoundaryOperators& ops) {
    std::vector<Eigen::Triplet<double>> T;
    for (int n = 0; n < ops.N; ++n) {
        double th = (n + 0.5) * 2 * pi / ops.N;
        bool found = false;
        for (const auto& e : mesh.boundary) {
            double d = std::fmod(th - e.theta0 + 4 * pi, 2 * pi);
            double L = e.theta1 - e.theta0;
            if (d > L * (1 + 1e-12)) continue;
            double s = d / L;
            double l[3] = {(1 - s) * (1 - 2 * s), 4 * s * (1 - s), s * (2 * s - 1)};
            for (int q = 0; q < 3; ++q)
                for (int c = 0; c < 2; ++c) T.emplace_back(2 * n + c, 2 * e.nodes[q] + c, l[q]);
            found = true;
            break;
        }
        if (!found) throw Error(ErrorCode::invalid_input, "boundary node outside the mesh boundary");
    }
    Eigen::SparseMatrix<double> Tr(2 * ops.N, 2 * (int)mesh.nodes.size());
    Tr.setFromTriplets(T.begin(), T.end());
    return Tr;
}

}  // namespace

LinearSystem assemble_system(const DiscretizedBall& disc, const ElasticMedium& m,
                             const SurfaceProfile& profile, const IncidentSource& src,
                             const SolverOptions& opt) {
    m.validate();
    if (m.a0 != 1.0) throw Error(ErrorCode::invalid_medium, "the solver requires a0 = 1");
    check_source(src, profile);
    if (std::abs(src.z.norm() - disc.R) < 1e-9 * disc.R)
        throw Error(ErrorCode::invalid_input, "source on the artificial boundary");
    const DiskMesh& mesh = disc.mesh;
    const BoundaryOperators& ops = *disc.ops;
    const int nn = (int)mesh.nodes.size(), nv = 2 * nn, nb = 2 * ops.N;
    const StressWeights wb = ops.weights;
    const StressWeights wv = opt.physical_volume_weights ? StressWeights::physical(m) : wb;
    const double w2 = m.omega * m.omega;

    std::vector<Eigen::Triplet<cplx>> T;
    LinearSystem sys;
    sys.n_volume = nv;
    sys.n_boundary = nb;
    sys.rhs = CVecX::Zero(nv + nb);

    TriRule rule = triangle_rule(4), rhs_rule = triangle_rule(7);
    for (int t = 0; t < (int)mesh.tris.size(); ++t) {
        const Tri6& tri = mesh.tris[t];
        const double rho = m.rho(mesh.region[t]);
        Eigen::Matrix<double, 12, 12> Ke = Eigen::Matrix<double, 12, 12>::Zero();
        for (size_t q = 0; q < rule.w.size(); ++q) {
            ElementGeometry g = element_geometry(mesh, t, rule.xi[q], rule.eta[q]);
            double wq = rule.w[q] * g.detJ;
            for (int a = 0; a < 6; ++a)
                for (int c = 0; c < 2; ++c) {
                    double pa = c == 0 ? g.dN[a][1] : -g.dN[a][0];  // div_perp of N_a e_c
                    for (int b = 0; b < 6; ++b)
                        for (int d = 0; d < 2; ++d) {
                            double pb = d == 0 ? g.dN[b][1] : -g.dN[b][0];
                            double v = wv.lambda_tilde * g.dN[a][c] * g.dN[b][d] - wv.mu_tilde * pa * pb;
                            if (c == d)
                                v += (m.mu + wv.mu_tilde) * (g.dN[a][0] * g.dN[b][0] + g.dN[a][1] * g.dN[b][1]) -
                                     rho * w2 * g.N[a] * g.N[b];
                            Ke(2 * b + d, 2 * a + c) += wq * v;
                        }
                }
        }
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j)
                if (Ke(i, j) != 0.0)
                    T.emplace_back(2 * tri[i / 2] + i % 2, 2 * tri[j / 2] + j % 2, cplx(Ke(i, j), 0.0));
        if (mesh.region[t] == Side::minus && m.rho_minus != m.rho_plus) {
            for (size_t q = 0; q < rhs_rule.w.size(); ++q) {
                ElementGeometry g = element_geometry(mesh, t, rhs_rule.xi[q], rhs_rule.eta[q]);
                CVecX uin = incident_wave(g.x, src, m).u;
                double wq = rhs_rule.w[q] * g.detJ * (m.rho_minus - m.rho_plus) * w2;
                for (int b = 0; b < 6; ++b)
                    for (int d = 0; d < 2; ++d) sys.rhs(2 * tri[b] + d) += wq * g.N[b] * uin(d);
            }
        }
    }

    // u^0 - u^in and its traction at the boundary nodes
    sys.w_trace = CVecX::Zero(nb);
    sys.w_traction = CVecX::Zero(nb);
    std::vector<FieldJet> wj(ops.N);
    parallel_for(ops.N, [&](std::size_t n) {
        FieldJet r = reference_wave_jet(ops.nodes[n], src, m, profile, opt.quad);
        FieldJet i = incident_wave(ops.nodes[n], src, m);
        FieldJet w;
        w.u = r.u - i.u;
        w.grad = r.grad - i.grad;
        wj[n] = w;
    });
    for (int n = 0; n < ops.N; ++n) {
        SurfaceFrame fr = SurfaceFrame::make(ops.normals[n]);
        sys.w_trace.segment<2>(2 * n) = wj[n].u;
        sys.w_traction.segment<2>(2 * n) = stress_direct(wj[n], fr, wb, m, 2);
    }

    sys.trace = trace_matrix(mesh, ops);
    const Eigen::SparseMatrix<double>& Tr = sys.trace;
    // b1 boundary coupling and the traction part of L1
    for (int k = 0; k < Tr.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(Tr, k); it; ++it) {
            int row = (int)it.row(), col = (int)it.col();  // row 2n + c, col 2 node + c
            double wv2 = ops.weight * it.value();
            T.emplace_back(col, nv + row, cplx(-wv2, 0.0));
            sys.rhs(col) += wv2 * sys.w_traction(row);
        }
    // b2 rows: (1/2 - K) Tr u + S p
    std::vector<int> bcols;
    {
        std::vector<char> seen(nv, 0);
        for (int k = 0; k < Tr.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(Tr, k); it; ++it)
                if (!seen[it.col()]) {
                    seen[it.col()] = 1;
                    bcols.push_back((int)it.col());
                }
    }
    std::sort(bcols.begin(), bcols.end());
    std::map<int, int> local;
    for (int i = 0; i < (int)bcols.size(); ++i) local[bcols[i]] = i;
    CMatX TrD = CMatX::Zero(nb, (int)bcols.size());
    for (int k = 0; k < Tr.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(Tr, k); it; ++it)
            TrD(it.row(), local[(int)it.col()]) = it.value();
    CMatX B = 0.5 * TrD - ops.K * TrD;
    for (int i = 0; i < nb; ++i) {
        for (int j = 0; j < (int)bcols.size(); ++j)
            if (B(i, j) != 0.0) T.emplace_back(nv + i, bcols[j], B(i, j));
        for (int j = 0; j < nb; ++j) T.emplace_back(nv + i, nv + j, ops.S(i, j));
    }
    sys.rhs.tail(nb) = 0.5 * sys.w_trace - ops.K * sys.w_trace;
    sys.A.resize(nv + nb, nv + nb);
    sys.A.setFromTriplets(T.begin(), T.end());
    return sys;
}

ScatterSolution solve(const LinearSystem& sys, const DiscretizedBall& disc, const ElasticMedium& m,
                      const SurfaceProfile& profile, const IncidentSource& src,
                      const SolverOptions& opt) {
    Eigen::SparseMatrix<cplx> A = sys.A;
    A.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw Error(ErrorCode::singular_system, "sparse factorization failed: " + lu.lastErrorMessage());
    CVecX x = lu.solve(sys.rhs);
    if (lu.info() != Eigen::Success || !x.allFinite())
        throw Error(ErrorCode::singular_system, "sparse solve failed");
    ScatterSolution s;
    s.medium = m;
    s.profile = profile;
    s.source = src;
    s.options = opt;
    s.disc = disc;
    s.u_hat = x.head(sys.n_volume);
    s.p = x.tail(sys.n_boundary);
    s.w_trace = sys.w_trace;
    s.w_traction = sys.w_traction;
    s.trace = sys.trace;
    double bn = sys.rhs.norm();
    s.residual = (A * x - sys.rhs).norm() / (bn > 0 ? bn : 1.0);
    return s;
}

ScatterSolution solve_scattering(const ElasticMedium& m, const SurfaceProfile& profile,
                                 const IncidentSource& src, const SolverOptions& opt) {
    DiscretizedBall d = discretize(m, profile, opt);
    LinearSystem sys = assemble_system(d, m, profile, src, opt);
    return solve(sys, d, m, profile, src, opt);
}

ScatterSolution solve_scattering(const ElasticMedium& m, const SurfaceProfile& profile,
                                 const IncidentSource& src, const SolverOptions& opt,
                                 const DiskMesh& mesh) {
    DiscretizedBall d;
    d.R = opt.R;
    d.mesh = mesh;
    d.ops = boundary_operators(m, opt.R, opt.boundary_nodes, opt.quad);
    LinearSystem sys = assemble_system(d, m, profile, src, opt);
    return solve(sys, d, m, profile, src, opt);
}

FieldJet ScatterSolution::u_hat_jet(const Vec2& x) const {
    Vec2 ref;
    int t = disc.mesh.locate(x, ref);
    if (t < 0) throw Error(ErrorCode::domain_error, "point outside the meshed ball");
    ElementGeometry g = element_geometry(disc.mesh, t, ref(0), ref(1));
    FieldJet j;
    j.u = CVecX::Zero(2);
    j.grad = CMatX::Zero(2, 2);
    for (int a = 0; a < 6; ++a) {
        int n = disc.mesh.tris[t][a];
        for (int c = 0; c < 2; ++c) {
            cplx v = u_hat(2 * n + c);
            j.u(c) += g.N[a] * v;
            j.grad(c, 0) += g.dN[a][0] * v;
            j.grad(c, 1) += g.dN[a][1] * v;
        }
    }
    return j;
}

CVecX ScatterSolution::tilde_trace() const { return trace * u_hat - w_trace; }

CVec2 ScatterSolution::field_inside(const Vec2& x) const {
    CVec2 u = u_hat_at(x);
    if (x(1) < profile(x(0))) u += incident_wave(x, source, medium).u.head<2>();
    return u;
}

namespace {

// Trigonometric interpolation of a 2-component density sampled at (n + 1/2) 2 pi / N
// onto M = factor N points at (m + 1/2) 2 pi / M.
CVecX trig_upsample(const CVecX& v, int N, int factor) {
    const int M = N * factor;
    const double h = 2 * pi / N;
    CVecX out = CVecX::Zero(2 * M);
    for (int c = 0; c < 2; ++c) {
        std::vector<cplx> co(N + 1);
        for (int k = -N / 2; k <= N / 2; ++k) {
            cplx s = 0.0;
            for (int n = 0; n < N; ++n) s += v(2 * n + c) * std::exp(cplx(0.0, -k * (n + 0.5) * h));
            co[k + N / 2] = s / (double)N * ((k == -N / 2 || k == N / 2) ? 0.5 : 1.0);
        }
        for (int j = 0; j < M; ++j) {
            double t = (j + 0.5) * 2 * pi / M;
            cplx s = 0.0;
            for (int k = -N / 2; k <= N / 2; ++k) s += co[k + N / 2] * std::exp(cplx(0.0, k * t));
            out(2 * j + c) = s;
        }
    }
    return out;
}

}  // namespace

CVec2 tilde_exterior(const ScatterSolution& sol, const Vec2& x) {
    const BoundaryOperators& ops = *sol.disc.ops;
    const ElasticMedium& m = sol.medium;
    if (!(x.norm() > ops.R)) throw Error(ErrorCode::domain_error, "exterior point required");
    const Side X = x(1) >= 0 ? Side::plus : Side::minus;
    CVecX ut = sol.tilde_trace();
    // smooth part G - Pi_X on the Nystrom nodes
    std::vector<CVec2> part(ops.N);
    GreenOptions o;
    o.grad_y = true;
    parallel_for(ops.N, [&](std::size_t n) {
        GreenMatrix g = assemble_G(x, ops.nodes[n], m, sol.options.quad, o);
        TensorJet P = kupradze_jet(m, X, x, ops.nodes[n]);
        CMat2 F = g.G - CMat2(P.value);
        CMat2 Fy[2] = {g.grad_y[0] + CMat2(P.grad_x[0]), g.grad_y[1] + CMat2(P.grad_x[1])};
        CMat2 D = row_traction(F, Fy, ops.normals[n], ops.weights, m);
        part[n] = D * ut.segment<2>(2 * n) - F * sol.p.segment<2>(2 * n);
    });
    CVec2 u = CVec2::Zero();
    for (const auto& v : part) u += v;
    u *= ops.weight;
    // Pi_X part on a grid fine enough for the distance to the circle
    const double dist = x.norm() - ops.R;
    const int factor = std::min(64, std::max(1, (int)std::ceil(4.0 * ops.weight / dist)));
    const int M = ops.N * factor;
    CVecX uf = factor == 1 ? ut : trig_upsample(ut, ops.N, factor);
    CVecX pf = factor == 1 ? sol.p : trig_upsample(sol.p, ops.N, factor);
    std::vector<CVec2> fine(M);
    parallel_for(M, [&](std::size_t j) {
        double t = (j + 0.5) * 2 * pi / M;
        Vec2 nu(std::cos(t), std::sin(t));
        TensorJet P = kupradze_jet(m, X, x, Vec2(ops.R * nu));
        CMat2 F = P.value;
        CMat2 Fy[2] = {-P.grad_x[0], -P.grad_x[1]};
        CMat2 D = row_traction(F, Fy, nu, ops.weights, m);
        fine[j] = D * uf.segment<2>(2 * j) - F * pf.segment<2>(2 * j);
    });
    CVec2 v = CVec2::Zero();
    for (const auto& w : fine) v += w;
    return u + (2 * pi * ops.R / M) * v;
}

CVec2 reconstruct_exterior(const ScatterSolution& sol, const Vec2& x) {
    CVec2 u = tilde_exterior(sol, x);
    u += reference_wave(x, sol.source, sol.medium, sol.profile, sol.options.quad);
    if (x(1) >= 0) u -= incident_wave(x, sol.source, sol.medium).u.head<2>();
    return u;
}

TransmissionCheck transmission_check(const ScatterSolution& sol) {
    const DiskMesh& mesh = sol.disc.mesh;
    const StressWeights w = StressWeights::physical(sol.medium);
    static const int E[3][3] = {{0, 3, 1}, {1, 4, 2}, {2, 5, 0}};
    std::vector<double> gx, gw;
    gauss_legendre(3, gx, gw);
    TransmissionCheck out;
    double umax = 0.0, sq = 0.0, len = 0.0;
    for (const auto& ie : mesh.interface) {
        for (size_t gi = 0; gi < gx.size(); ++gi) {
            double s = 0.5 * (gx[gi] + 1);
            double ds = 0.0;
            FieldJet side[2];
            Vec2 nu;
            for (int k = 0; k < 2; ++k) {
                int t = k == 0 ? ie.tri_plus : ie.tri_minus;
                const Tri6& tri = mesh.tris[t];
                int e = -1;
                bool fwd = true;
                for (int q = 0; q < 3; ++q) {
                    if (tri[E[q][0]] == ie.nodes[0] && tri[E[q][2]] == ie.nodes[2]) e = q;
                    if (tri[E[q][0]] == ie.nodes[2] && tri[E[q][2]] == ie.nodes[0]) {
                        e = q;
                        fwd = false;
                    }
                }
                double u = fwd ? s : 1 - s;
                Vec2 ref = e == 0 ? Vec2(u, 0) : e == 1 ? Vec2(1 - u, u) : Vec2(0, 1 - u);
                ElementGeometry geo = element_geometry(mesh, t, ref(0), ref(1));
                FieldJet j;
                j.u = CVecX::Zero(2);
                j.grad = CMatX::Zero(2, 2);
                for (int a = 0; a < 6; ++a)
                    for (int c = 0; c < 2; ++c) {
                        cplx v = sol.u_hat(2 * tri[a] + c);
                        j.u(c) += geo.N[a] * v;
                        j.grad(c, 0) += geo.dN[a][0] * v;
                        j.grad(c, 1) += geo.dN[a][1] * v;
                    }
                FieldJet inc = incident_wave(geo.x, sol.source, sol.medium);
                j.u += inc.u;
                j.grad += inc.grad;
                side[k] = j;
                if (k == 0) {
                    // tangent of the quadratic edge at s
                    const Vec2 &A = mesh.nodes[ie.nodes[0]], &Mn = mesh.nodes[ie.nodes[1]],
                               &Bn = mesh.nodes[ie.nodes[2]];
                    Vec2 tg = (4 * s - 3) * A + (4 - 8 * s) * Mn + (4 * s - 1) * Bn;
                    nu = Vec2(-tg(1), tg(0)).normalized();
                    ds = 0.5 * gw[gi] * tg.norm();
                }
            }
            SurfaceFrame fr = SurfaceFrame::make(nu);
            CVecX tp = stress_direct(side[0], fr, w, sol.medium, 2);
            CVecX tm = stress_direct(side[1], fr, w, sol.medium, 2);
            out.displacement_jump = std::max(out.displacement_jump, (side[0].u - side[1].u).norm());
            if ((tp - tm).norm() > out.traction_jump) {
                out.traction_jump = (tp - tm).norm();
                out.worst_point = mesh.nodes[ie.nodes[0]] * (1 - s) + mesh.nodes[ie.nodes[2]] * s;
            }
            out.traction_scale = std::max(out.traction_scale, std::max(tp.norm(), tm.norm()));
            sq += ds * (tp - tm).squaredNorm();
            len += ds;
            umax = std::max(umax, side[0].u.norm());
        }
    }
    if (umax > 0) out.displacement_jump /= umax;
    if (len > 0) out.traction_jump_rms = std::sqrt(sq / len);
    return out;
}

}  // namespace le
