#pragma once

#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "layered_elastica/elastic_fields.hpp"
#include "layered_elastica/green2d.hpp"
#include "layered_elastica/medium.hpp"
#include "layered_elastica/mesh.hpp"
#include "layered_elastica/quadrature.hpp"

namespace le {

struct IncidentSource {
    Vec2 z = Vec2(0.0, 1.0);
    CVec2 a = CVec2(1.0, 0.0);
};

// u^in = Pi_+(x, z) a, with its Jacobian.
FieldJet incident_wave(const Vec2& x, const IncidentSource& src, const ElasticMedium& m);

// G(x, z) a for z above the flat interface, zero for z in a dip of the rough interface.
CVec2 reference_wave(const Vec2& x, const IncidentSource& src, const ElasticMedium& m,
                     const SurfaceProfile& profile, const QuadConfig& cfg = {});
FieldJet reference_wave_jet(const Vec2& x, const IncidentSource& src, const ElasticMedium& m,
                            const SurfaceProfile& profile, const QuadConfig& cfg = {});

// Nystrom discretization of S and K on the circle |x| = R with nodes at angles
// (n + 1/2) 2 pi / N. Unknown index 2 n + component. The kernels are split into
// the free-space tensor of the observation side (log part by trigonometric
// product weights) and the smooth remainder G - Pi (trapezoidal).
struct BoundaryOperators {
    ElasticMedium medium;
    StressWeights weights{0.0, 0.0};
    double R = 0.0;
    int N = 0;
    std::vector<Vec2> nodes, normals;
    double weight = 0.0;  // trapezoidal arc-length weight 2 pi R / N
    CMatX S, K;
    long spectral_nodes = 0;
};

// Remainder tensors are cached per (medium, R, N, tolerance).
std::shared_ptr<const BoundaryOperators> boundary_operators(const ElasticMedium& m, double R, int N,
                                                            const QuadConfig& cfg = {});

CVecX operator_S(const BoundaryOperators& ops, const CVecX& density);
CVecX operator_K(const BoundaryOperators& ops, const CVecX& trace);

// Free-space parts with their kernels split as L1 log r + L2 on the circle;
// exposed for tests. kernel = 0 for S (Pi), 1 for K (Pi^(2)).
struct LogSplit {
    CMat2 log_coeff, regular;
};
LogSplit free_space_split(const ElasticMedium& m, Side side, const StressWeights& w, double R,
                          double t, double tau, int kernel);

struct SolverOptions {
    double R = 4.0;
    int boundary_nodes = 512;
    double points_per_wavelength = 10.0;  // P2 nodes per shortest wavelength
    double element_size = 0.0;            // overrides points_per_wavelength when > 0
    QuadConfig quad{1e-9, 0.0, 200000, 1.0};
    // volume form with the physical weights (mu, lambda) instead of the boundary choice
    bool physical_volume_weights = false;
};

struct DiscretizedBall {
    double R = 0.0;
    DiskMesh mesh;
    std::shared_ptr<const BoundaryOperators> ops;
};

DiscretizedBall discretize(const ElasticMedium& m, const SurfaceProfile& profile,
                           const SolverOptions& opt);

struct LinearSystem {
    Eigen::SparseMatrix<cplx> A;
    CVecX rhs;
    int n_volume = 0;    // 2 * mesh nodes
    int n_boundary = 0;  // 2 * N
    CVecX w_trace, w_traction;  // u^0 - u^in and its traction at the boundary nodes
    Eigen::SparseMatrix<double> trace;  // boundary nodes x volume unknowns
};

LinearSystem assemble_system(const DiscretizedBall& disc, const ElasticMedium& m,
                             const SurfaceProfile& profile, const IncidentSource& src,
                             const SolverOptions& opt);

struct ScatterSolution {
    ElasticMedium medium;
    SurfaceProfile profile;
    IncidentSource source;
    SolverOptions options;
    DiscretizedBall disc;
    CVecX u_hat;  // 2 per mesh node
    CVecX p;      // 2 per boundary node
    CVecX w_trace, w_traction;
    Eigen::SparseMatrix<double> trace;
    double residual = 0.0;

    // u_hat and its Jacobian inside B_R; throws domain_error outside.
    FieldJet u_hat_jet(const Vec2& x) const;
    CVec2 u_hat_at(const Vec2& x) const { return u_hat_jet(x).u.head<2>(); }
    // Trace of u_tilde = u_hat - (u^0 - u^in) at the boundary nodes.
    CVecX tilde_trace() const;
    // Field u_+ (above the interface) or u_- (below) inside B_R.
    CVec2 field_inside(const Vec2& x) const;
};

ScatterSolution solve(const LinearSystem& sys, const DiscretizedBall& disc, const ElasticMedium& m,
                      const SurfaceProfile& profile, const IncidentSource& src,
                      const SolverOptions& opt);

// Discretize, assemble and solve.
ScatterSolution solve_scattering(const ElasticMedium& m, const SurfaceProfile& profile,
                                 const IncidentSource& src, const SolverOptions& opt);
// Same boundary operators, given mesh.
ScatterSolution solve_scattering(const ElasticMedium& m, const SurfaceProfile& profile,
                                 const IncidentSource& src, const SolverOptions& opt,
                                 const DiskMesh& mesh);

// u_tilde(x) for |x| > R from the boundary data.
CVec2 tilde_exterior(const ScatterSolution& sol, const Vec2& x);
// u_+ or u_- at |x| > R: u_tilde + u^re.
CVec2 reconstruct_exterior(const ScatterSolution& sol, const Vec2& x);

// Jumps of the total field and its physical traction across the interface at Gauss
// points of every interface edge. Displacement jump relative to max |u|; traction
// jumps absolute, max and arc-length RMS, with the max traction as scale.
struct TransmissionCheck {
    double displacement_jump = 0.0;
    double traction_jump = 0.0;
    double traction_jump_rms = 0.0;
    double traction_scale = 0.0;
    Vec2 worst_point = Vec2::Zero();  // location of the largest traction jump
};
TransmissionCheck transmission_check(const ScatterSolution& sol);

// Element size for the requested P2 nodes per shortest wavelength.
double element_size_for(const ElasticMedium& m, double points_per_wavelength);

}  // namespace le
