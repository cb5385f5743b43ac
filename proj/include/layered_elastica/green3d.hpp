#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "layered_elastica/green2d.hpp"
#include "layered_elastica/medium.hpp"
#include "layered_elastica/quadrature.hpp"
#include "layered_elastica/types.hpp"

namespace le {

RegionTag region_tag3d(const Vec3& x, const Vec3& y, std::optional<Side> x_side = {},
                       std::optional<Side> y_side = {});

enum class Family3 { A_p, B_p, A_s, B_s, hatA_s, hatB_s, R_p, T_p, R_s, T_s };
enum class Sup { none, plus, minus };

// component 0 means no (l) tag.
struct Coeff3DKey {
    Family3 family = Family3::A_p;
    int column = 1;
    Sup sup = Sup::none;
    int component = 0;

    bool operator==(const Coeff3DKey&) const = default;
};

bool is_valid(const Coeff3DKey& key);
std::string key_name(const Coeff3DKey& key);
// Every valid key, in table order.
const std::vector<Coeff3DKey>& all_keys3d();
// Wave of the x-exponential carried by the key.
Wave x_wave(const Coeff3DKey& key);
// Side of y the key belongs to (A, R families: plus; B, T families: minus).
Side y_side_of(const Coeff3DKey& key);

enum class Transcription { printed, corrected };

// Two suspected misprints: A_{p,3}^- (y-exponential) and B_{p,3}^+ (placement of -2).
struct TranscriptionChoice {
    Transcription a_p3_minus = Transcription::corrected;
    Transcription b_p3_plus = Transcription::corrected;
};

// value(y3) = sum_b amp[b] exp(rate[b] y3); b = 0 p-wave, b = 1 s-wave in y.
struct CoeffParts {
    std::array<cplx, 2> amp{0.0, 0.0};
    std::array<cplx, 2> rate{0.0, 0.0};

    cplx eval(double y3) const;
    cplx d_y3(double y3) const;
};

CoeffParts coeff3d_parts(const Coeff3DKey& key, const SpectralPoint& sp,
                         const TranscriptionChoice& choice);
CoeffParts coeff3d_parts(const Coeff3DKey& key, const SpectralPoint& sp);

// s = |zeta|^2; evaluated at xi = sqrt(s) with the arbiter's transcription.
cplx coeff3d(const Coeff3DKey& key, cplx s, double y3, const ElasticMedium& m);
cplx coeff3d(const Coeff3DKey& key, cplx s, double y3, const ElasticMedium& m,
             const TranscriptionChoice& choice);

// Relative residuals of the Fourier-transformed jump systems at one spectral point
// (zeta real, y3 != 0): auxiliary p potential, auxiliary s potential (including
// the divergence), and the correction system.
struct Jump3Residual {
    double tilde_p = 0.0, tilde_s = 0.0, correction = 0.0;
    double max() const;
};

Jump3Residual jump_residual3d(int j, double zeta1, double zeta2, double y3, const ElasticMedium& m,
                              const TranscriptionChoice& choice);
Jump3Residual jump_residual3d(int j, double zeta1, double zeta2, double y3, const ElasticMedium& m);

struct TranscriptionReport {
    TranscriptionChoice choice;
    double residual_printed[2] = {0.0, 0.0};    // A_{p,3}^-, B_{p,3}^+
    double residual_corrected[2] = {0.0, 0.0};
    int samples = 0;
    std::string summary() const;
};

// Decided once from the jump systems and immutable afterwards.
const TranscriptionReport& transcription_report();
const TranscriptionChoice& active_transcription();

// Angular rows of the Hankel reduction: zeta monomials 1, zeta1, zeta2, zeta1 zeta2,
// zeta1^2, zeta2^2.
enum class AngularKind { one, cos_alpha, sin_alpha, sin_2alpha, cos_minus, cos_plus };

struct AngularTerm {
    int order;
    cplx c;          // prefactor in front of the path-C integral
    bool sine;       // trig function of h alpha: cos or sin
    int harmonic;    // h
};

struct AngularFactor {
    AngularKind kind;
    int a, b;                       // monomial zeta1^a zeta2^b
    std::vector<AngularTerm> terms;
};

const AngularFactor& angular_factor(AngularKind kind);
AngularKind angular_kind_for(int a, int b);

// Left side of the angular identities, the closed form on the right
// (index = row of AngularKind).
cplx angular_identity_closed(AngularKind kind, double t, double alpha);

// (1/(2pi)^2) int f(|zeta|^2) zeta-monomial e^{i zeta.(x'-y')} d zeta through the
// path-C integrals of the table row. f is the radial kernel including its
// x3/y3 exponentials. rotate_tails requires f analytic in the sector swept by the
// tail rays; pass false for kernels like Gaussians that grow there.
QuadResult hankel_reduce(const ScalarKernel& f, AngularKind kind, const Vec3& x, const Vec3& y,
                         const ElasticMedium& m, const QuadConfig& cfg = {},
                         bool rotate_tails = true);

// Same transform for any monomial zeta1^a zeta2^b with a + b <= 4 through the
// harmonic expansion of cos^a sin^b.
QuadResult hankel_reduce_monomial(const ScalarKernel& f, int a, int b, const Vec3& x,
                                  const Vec3& y, const ElasticMedium& m, const QuadConfig& cfg = {},
                                  bool rotate_tails = true);

struct Potential3 {
    cplx value = 0.0;
    CVec3 grad_x = CVec3::Zero();
    double error_estimate = 0.0;
    long nodes_used = 0;
};

// G~_{p,j} (a = p, l ignored) or G~^{(l)}_{s,j} (a = s). Includes the free-space
// derivative on the source side.
Potential3 tilde_G3d(Wave a, int j, int l, const Vec3& x, const Vec3& y, const ElasticMedium& m,
                     const QuadConfig& cfg = {}, const GreenOptions& opt = {});
// U_{p,j} or U^{(l)}_{s,j}.
Potential3 correction3d(Wave a, int j, int l, const Vec3& x, const Vec3& y, const ElasticMedium& m,
                        const QuadConfig& cfg = {}, const GreenOptions& opt = {});

struct GreenMatrix3 {
    CMat3 G = CMat3::Zero();
    std::array<CMat3, 3> grad_x{CMat3::Zero(), CMat3::Zero(), CMat3::Zero()};
    std::array<CMat3, 3> grad_y{CMat3::Zero(), CMat3::Zero(), CMat3::Zero()};
    Vec3 x = Vec3::Zero(), y = Vec3::Zero();
    RegionTag region;
    double error_estimate = 0.0;
    long nodes_used = 0;
};

GreenMatrix3 assemble_G3d(const Vec3& x, const Vec3& y, const ElasticMedium& m,
                          const QuadConfig& cfg = {}, const GreenOptions& opt = {});

struct FarFieldPattern3 {
    int case_index = 1;
    Coeff3DKey key;
    Wave wave_type = Wave::p;
    double theta = 0.0, phi = 0.0;
    cplx value = 0.0;
    CVec3 gradient_y = CVec3::Zero();
};

// Cases 1..6 of the far-field lists; membership of the key is checked.
bool far_field_case_contains(int case_index, Side side, const Coeff3DKey& key);
// The case a key belongs to, 0 if none.
int far_field_case_of(const Coeff3DKey& key, Side side);

// x_hat = (cos phi cos theta, sin phi cos theta, sin theta); side from the sign of theta.
FarFieldPattern3 far_field3d(int case_index, const Coeff3DKey& key, double theta, double phi,
                             const Vec3& y, const ElasticMedium& m);

// The integral the pattern describes: (1/(2pi)^2) int f e^{x-exponential} zeta-monomial
// e^{i zeta.(x'-y')} for the key's case, evaluated by hankel_reduce at x.
QuadResult far_field_integral3d(const Coeff3DKey& key, const Vec3& x, const Vec3& y,
                                const ElasticMedium& m, const QuadConfig& cfg = {});

}  // namespace le
