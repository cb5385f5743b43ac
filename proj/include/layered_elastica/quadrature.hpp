#pragma once

#include <functional>
#include <string>
#include <vector>

#include "layered_elastica/types.hpp"

namespace le {

struct QuadConfig {
    double tol = 1e-10;       // absolute target on the summed error estimate
    double rel_tol = 0.0;     // optional relative target against max |component|
    long node_budget = 200000;
    double indent_scale = 1.0;
};

QuadConfig quad_config_from_json(const std::string& text);

struct QuadResult {
    cplx value = 0.0;
    double error_estimate = 0.0;
    long nodes_used = 0;
};

struct QuadResultN {
    std::vector<cplx> value;
    double error_estimate = 0.0;
    long nodes_used = 0;
};

// Clustering maps u -> s(u) with s'(0) = 0 and/or s'(1) = 0; they remove
// inverse square-root endpoint behaviour at branch points.
enum class Cluster { none, start, end, both };

struct Segment {
    enum class Kind { line, arc } kind = Kind::line;
    cplx a = 0.0, b = 0.0;                  // line endpoints
    cplx center = 0.0;                      // arc
    double radius = 0.0, theta0 = 0.0, theta1 = 0.0;
    Cluster cluster = Cluster::none;

    void eval(double u, cplx& xi, cplx& dxi) const;
    double length() const;
};

struct SpectralPath {
    std::vector<Segment> segments;
    double indent_radius = 0.0;
    double truncation = 0.0;
    long node_budget = 200000;
};

// Real line from -L to L, cut at +-k for every k in branch_points. With
// radius > 0 the path passes below +k and above -k on semicircles.
SpectralPath fourier_path(const std::vector<double>& branch_points, double truncation,
                          double indent_radius);

// Path from -L (just above the negative axis) over a semicircle of radius
// origin_radius around 0 in the upper half plane and on to +L.
SpectralPath hankel_path(const std::vector<double>& branch_points, double truncation,
                         double indent_radius, double origin_radius);

// Path from 0 to L along the positive real axis (J-form of Hankel integrals).
SpectralPath half_line_path(const std::vector<double>& branch_points, double truncation,
                            double indent_radius);

using VecKernel = std::function<void(cplx xi, cplx* out)>;
using ScalarKernel = std::function<cplx(cplx xi)>;

// Adaptive Gauss-Kronrod (7/15) with one global queue over all segments.
// oscillation is a phase rate |dphase/dxi| used to size the initial panels.
QuadResultN integrate_path(const SpectralPath& path, int ncomp, const VecKernel& f,
                           const QuadConfig& cfg, double oscillation = 0.0);

struct SpectralSetup {
    std::vector<double> branch_points;
    double decay_rate = 1.0;    // h: kernel ~ exp(-h |xi|)
    double oscillation = 0.0;   // |x1 - y1| or rho
    double h_min = 0.0;         // slow-decay threshold
    double indent_radius = -1;  // < 0: default rule
    // Tails beyond the branch points are moved onto rays along which the
    // factor exp(i xi shift - |xi| decay_rate) decays like exp(-t d),
    // d = hypot(decay_rate, shift). The kernel must be analytic there.
    bool rotate_tails = false;
    double shift = 0.0;  // signed x1 - y1 (Fourier) or rho (Hankel)
};

double default_indent_radius(const std::vector<double>& branch_points, double oscillation,
                             double indent_scale);

// Smallest L with estimated tail |f(L)|/h below tol/10.
double choose_truncation(int ncomp, const VecKernel& f, const SpectralSetup& s, double tol,
                         bool symmetric);

// (1/2pi) times the integral over the indented real line.
QuadResultN fourier_inversion_vec(int ncomp, const VecKernel& f, const SpectralSetup& s,
                                  const QuadConfig& cfg);
QuadResult fourier_inversion(const ScalarKernel& f, double decay_rate, double tol,
                             const std::vector<double>& branch_points, QuadConfig cfg = {},
                             double oscillation = 0.0);

// Raw integral over the path C (j_form = false) or over [0, inf).
QuadResultN hankel_inversion_vec(int ncomp, const VecKernel& f, const SpectralSetup& s,
                                 const QuadConfig& cfg, bool j_form);

enum class HankelRoute { automatic, path_c, j_form };

// (1/4pi) * integral over the path C of f(xi) H_m(xi rho) xi^(m+1) d xi.
// The J-form 1/(2pi) int_0^inf f J_m(xi rho) xi^(m+1) d xi is used for small rho
// and requires f even in xi.
QuadResult hankel_path_integral(const ScalarKernel& f, int order, double rho, double decay_rate,
                                double tol, const std::vector<double>& branch_points,
                                QuadConfig cfg = {}, HankelRoute route = HankelRoute::automatic);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace le
