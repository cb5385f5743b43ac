#pragma once

#include <functional>
#include <vector>

#include "layered_elastica/medium.hpp"
#include "layered_elastica/types.hpp"

namespace le {

using VecX = Eigen::VectorXd;
using CVecX = Eigen::VectorXcd;
using CMatX = Eigen::MatrixXcd;

struct SurfaceFrame {
    VecX nu;
    VecX tau;  // 2D only: (nu2, -nu1)

    static SurfaceFrame make(const VecX& nu);
};

struct FieldJet {
    CVecX u;
    CMatX grad;  // grad(i, j) = d_j u_i
};

cplx phi(double k, const VecX& x, const VecX& y, int dim);

// Radial derivative data of g(r):
// A = g'/r, B = g'' - g'/r, C = B/r, E = g''' - 3B/r.
// d_i d_j g = A delta_ij + B rh_i rh_j,
// d_k d_i d_j g = C (delta_ij rh_k + delta_ik rh_j + delta_jk rh_i) + E rh_i rh_j rh_k.
struct RadialJet {
    cplx g, dg, A, B, C, E;
};

RadialJet phi_radial(double k, double r, int dim);
// Phi_ks - Phi_kp without cancellation at small r.
RadialJet psi_radial(double ks, double kp, double r, int dim);

CMatX kupradze_tensor(const ElasticMedium& m, Side side, const VecX& x, const VecX& y);

struct TensorJet {
    CMatX value;
    std::vector<CMatX> grad_x;  // grad_x[k](i, j) = d/dx_k Pi_ij
};

TensorJet kupradze_jet(const ElasticMedium& m, Side side, const VecX& x, const VecX& y);
// (s.g / mu) I + irw Hess(q) and its x-gradient at x - y = dx; kupradze_jet with
// s = Phi_ks, q = Phi_ks - Phi_kp, irw = 1/(rho omega^2).
TensorJet radial_tensor_jet(const RadialJet& s, const RadialJet& q, double mu, double irw,
                            const VecX& dx);

// 2D static part alpha ln r I + gamma0 rh rh^T and the remainder Pi - Pi0.
// The remainder is continuous at x = y and returns its limit there.
struct StaticKelvin2d {
    double alpha, gamma0;
};
StaticKelvin2d static_kelvin2d(const ElasticMedium& m);
CMat2 kupradze_remainder2d(const ElasticMedium& m, Side side, const Vec2& x, const Vec2& y);

CVecX stress_direct(const FieldJet& jet, const SurfaceFrame& frame, const StressWeights& w,
                    const ElasticMedium& m, int dim);
CVecX stress_identity(const FieldJet& jet, const SurfaceFrame& frame, const StressWeights& w,
                      const ElasticMedium& m, int dim);
CVec3 m_nu(const FieldJet& jet, const SurfaceFrame& frame);

struct HelmholtzParts {
    cplx phi_p = 0.0;
    cplx phi_s = 0.0;      // 2D
    CVec3 phi_s3 = CVec3::Zero();  // 3D
};

HelmholtzParts helmholtz_split(const FieldJet& jet, int dim);

// grad_phi_p: gradient of div u. 2D: grad_phi_s is the gradient of div_perp u.
// 3D: curl_phi_s is the curl of curl u.
struct HelmholtzGrads {
    CVecX grad_phi_p;
    CVecX grad_phi_s;
    CVecX curl_phi_s;
};

CVecX helmholtz_recompose(const HelmholtzGrads& g, double kp, double ks, int dim);

// Field and its Jacobian at a point.
using FieldEval = std::function<FieldJet(const VecX& x)>;

struct ProbeOptions {
    Side side = Side::plus;
    int nodes_per_wavelength = 32;
    StressWeights weights{0.0, 0.0};
    bool physical_weights = true;
};

cplx radiation_probe_pair(const FieldEval& u, const FieldEval& v, const ElasticMedium& m, double R,
                          int dim, const ProbeOptions& opt = {});
cplx radiation_probe_energy(const FieldEval& u, const ElasticMedium& m, double R, int dim,
                            const ProbeOptions& opt = {});

}  // namespace le
