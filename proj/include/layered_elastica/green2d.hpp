#pragma once

#include <array>
#include <optional>

#include "layered_elastica/medium.hpp"
#include "layered_elastica/quadrature.hpp"
#include "layered_elastica/types.hpp"

namespace le {

struct RegionTag {
    Side x_region = Side::plus;
    Side y_region = Side::plus;
};

// Sides of x and y; a point with zero height takes the override or plus.
RegionTag region_tag(const Vec2& x, const Vec2& y, std::optional<Side> x_side = {},
                     std::optional<Side> y_side = {});

// A_{a,j} (y_side plus) or B_{a,j} (y_side minus) at (xi, y2), exponentials included.
cplx coeff_AB(Wave a, int j, cplx xi, double y2, const ElasticMedium& m, Side y_side);

// Same coefficient split by the vertical wave in y: value = sum_b part[b] exp(+-beta_b y2),
// with the exponentials NOT included. b = 0 is p, b = 1 is s.
std::array<cplx, 2> coeff_AB_parts(Wave a, int j, const SpectralPoint& sp, Side y_side);

// Spectral data of the correction integrals of the auxiliary functions for one region:
// G~_{a,j} - (free-space derivative term) = (1/2pi) int c(xi) e^{s_x beta_{a,X} x2}
// e^{s_y beta_{a,Y} y2} e^{i xi (x1-y1)}, returns c.
cplx tilde_G_kernel(Wave a, int j, const SpectralPoint& sp, const ElasticMedium& m,
                    const RegionTag& t);

// Fourier-transformed jump residuals of the correction system for (A or B) family.
// Returns the two residuals, which vanish when the coefficients are consistent.
std::array<cplx, 2> jump_residual2d(int j, double xi, double y2, const ElasticMedium& m);

struct ScalarPotentialPair {
    cplx G_p = 0.0, G_s = 0.0;
    CVec2 grad_G_p = CVec2::Zero(), grad_G_s = CVec2::Zero();
    double error_estimate = 0.0;
};

enum class PotentialPart { tilde, correction, total };

// G_{a,j} pieces for column j (1 or 2) with x-gradients.
ScalarPotentialPair scalar_potentials(int j, const Vec2& x, const Vec2& y, const ElasticMedium& m,
                                      const QuadConfig& cfg, PotentialPart part,
                                      const RegionTag& tag);

struct GreenMatrix {
    CMat2 G = CMat2::Zero();
    std::array<CMat2, 2> grad_x{CMat2::Zero(), CMat2::Zero()};  // d/dx_k G
    std::array<CMat2, 2> grad_y{CMat2::Zero(), CMat2::Zero()};  // d/dy_k G
    Vec2 x = Vec2::Zero(), y = Vec2::Zero();
    RegionTag region;
    double error_estimate = 0.0;
    long nodes_used = 0;
};

struct GreenOptions {
    bool grad_x = false;
    bool grad_y = false;
    bool include_free_space = true;  // false: G - Pi (same side) or G (cross side)
    std::optional<Side> x_side, y_side;
};

GreenMatrix assemble_G(const Vec2& x, const Vec2& y, const ElasticMedium& m,
                       const QuadConfig& cfg = {}, const GreenOptions& opt = {});

struct FarFieldPattern {
    Wave wave_type = Wave::p;
    int column = 1;
    double angle = 0.0;
    cplx value = 0.0;
    CVec2 gradient_y = CVec2::Zero();
};

inline constexpr double theta_min = 1e-3;

// Leading coefficient of U_{a,j}(r xhat, y) ~ e^{i k r} r^{-1/2} U_inf.
FarFieldPattern far_field(Wave a, int j, double theta, const Vec2& y, const ElasticMedium& m);

}  // namespace le
