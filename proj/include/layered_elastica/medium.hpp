#pragma once

#include <string>

#include "layered_elastica/types.hpp"

namespace le {

struct ElasticMedium {
    double lambda = 1.0;
    double mu = 1.0;
    double rho_plus = 1.0;
    double rho_minus = 1.0;
    double omega = 1.0;
    int dim = 2;
    double a0 = 1.0;

    void validate() const;
    double rho(Side s) const { return s == Side::plus ? rho_plus : rho_minus; }
};

ElasticMedium medium_from_json(const std::string& text);
std::string medium_to_json(const ElasticMedium& m);

struct Wavenumbers {
    double kp_plus, ks_plus, kp_minus, ks_minus;

    double k(Wave w, Side s) const {
        if (w == Wave::p) return s == Side::plus ? kp_plus : kp_minus;
        return s == Side::plus ? ks_plus : ks_minus;
    }
    double min() const;
    double max() const;
};

Wavenumbers wavenumbers(const ElasticMedium& m);

struct StressWeights {
    double mu_tilde;
    double lambda_tilde;

    // mu_tilde = mu, lambda_tilde = lambda
    static StressWeights physical(const ElasticMedium& m);
    // mu(lambda+mu)/(lambda+3mu), (lambda+mu)(lambda+2mu)/(lambda+3mu)
    static StressWeights boundary_choice(const ElasticMedium& m);
    // mu_tilde free, lambda_tilde fixed by mu_tilde + lambda_tilde = mu + lambda
    static StressWeights from_mu_tilde(const ElasticMedium& m, double mu_tilde);
};

// Vertical spectral wavenumber sqrt(xi-k)*sqrt(xi+k) on the sheet with
// -3pi/2 <= arg(xi-k) < pi/2 and -pi/2 <= arg(xi+k) < 3pi/2.
// Cuts run upward from +k and downward from -k.
cplx beta(cplx xi, double k, double eps_cut_scale = 1e-12);
double beta_real(double xi, double k);

struct ReflTrans {
    cplx R, T;
};

ReflTrans refl_trans(cplx beta_p, cplx beta_m, double k_p, double k_m);

struct SpectralConstants {
    double C0;
    cplx D;
};

SpectralConstants spectral_constants(const ElasticMedium& m, cplx xi);

// All branch values and derived scalars at one spectral point.
struct SpectralPoint {
    cplx xi;
    cplx s;  // xi^2 (or |zeta|^2 in 3D)
    cplx bp_plus, bp_minus, bs_plus, bs_minus;
    double ip_plus, ip_minus, is_plus, is_minus;  // k^-2
    double C0;
    cplx Dp, Ds, D;
    cplx Rp, Tp, Rs, Ts;

    cplx bp(Side sd) const { return sd == Side::plus ? bp_plus : bp_minus; }
    cplx bs(Side sd) const { return sd == Side::plus ? bs_plus : bs_minus; }
    double ip(Side sd) const { return sd == Side::plus ? ip_plus : ip_minus; }
    double is(Side sd) const { return sd == Side::plus ? is_plus : is_minus; }
};

SpectralPoint spectral_point(const ElasticMedium& m, const Wavenumbers& k, cplx xi);

struct DScan {
    double min_abs_D;
    double argmin_xi;
};

DScan scan_D(const ElasticMedium& m, int samples = 100000, double range_factor = 3.0);

}  // namespace le
