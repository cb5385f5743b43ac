#include "layered_elastica/medium.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace le {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::invalid_medium: return "invalid-medium";
        case ErrorCode::branch_cut: return "branch-cut";
        case ErrorCode::degenerate_denominator: return "degenerate-denominator";
        case ErrorCode::coincident_points: return "coincident-points";
        case ErrorCode::slow_decay: return "slow-decay";
        case ErrorCode::budget_exceeded: return "budget-exceeded";
        case ErrorCode::grazing_direction: return "grazing-direction";
        case ErrorCode::domain_error: return "domain-error";
        case ErrorCode::singular_system: return "singular-system";
        case ErrorCode::invalid_key: return "invalid-key";
        case ErrorCode::overflow: return "overflow";
        case ErrorCode::singular_origin: return "singular-origin";
        case ErrorCode::invalid_input: return "invalid-input";
    }
    return "unknown";
}

void ElasticMedium::validate() const {
    auto bad = [](const std::string& w) { throw Error(ErrorCode::invalid_medium, w); };
    if (!(std::isfinite(lambda) && std::isfinite(mu) && std::isfinite(rho_plus) &&
          std::isfinite(rho_minus) && std::isfinite(omega)))
        bad("non-finite parameter");
    if (dim != 2 && dim != 3) bad("dim must be 2 or 3");
    if (!(mu > 0)) bad("mu must be positive");
    if (!(dim * lambda + 2 * mu > 0)) bad("dim*lambda + 2*mu must be positive");
    if (!(rho_plus > 0) || !(rho_minus > 0)) bad("densities must be positive");
    if (!(omega > 0)) bad("omega must be positive");
    if (a0 != 1.0) bad("a0 must equal 1");
}

ElasticMedium medium_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::invalid_medium, std::string("bad JSON: ") + e.what());
    }
    ElasticMedium m;
    try {
        m.lambda = j.at("lambda").get<double>();
        m.mu = j.at("mu").get<double>();
        m.rho_plus = j.at("rho_plus").get<double>();
        m.rho_minus = j.at("rho_minus").get<double>();
        m.omega = j.at("omega").get<double>();
        m.dim = j.value("dim", 2);
        m.a0 = j.value("a0", 1.0);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::invalid_medium, std::string("missing or mistyped key: ") + e.what());
    }
    m.validate();
    return m;
}

std::string medium_to_json(const ElasticMedium& m) {
    nlohmann::json j = {{"lambda", m.lambda},     {"mu", m.mu},       {"rho_plus", m.rho_plus},
                        {"rho_minus", m.rho_minus}, {"omega", m.omega}, {"dim", m.dim},
                        {"a0", m.a0}};
    return j.dump();
}

double Wavenumbers::min() const { return std::min({kp_plus, ks_plus, kp_minus, ks_minus}); }
double Wavenumbers::max() const { return std::max({kp_plus, ks_plus, kp_minus, ks_minus}); }

Wavenumbers wavenumbers(const ElasticMedium& m) {
    m.validate();
    double w2 = m.omega * m.omega;
    return {std::sqrt(m.rho_plus * w2 / (2 * m.mu + m.lambda)), std::sqrt(m.rho_plus * w2 / m.mu),
            std::sqrt(m.rho_minus * w2 / (2 * m.mu + m.lambda)), std::sqrt(m.rho_minus * w2 / m.mu)};
}

StressWeights StressWeights::physical(const ElasticMedium& m) { return {m.mu, m.lambda}; }

StressWeights StressWeights::boundary_choice(const ElasticMedium& m) {
    double l = m.lambda, u = m.mu;
    return {u * (l + u) / (l + 3 * u), (l + u) * (l + 2 * u) / (l + 3 * u)};
}

StressWeights StressWeights::from_mu_tilde(const ElasticMedium& m, double mu_tilde) {
    return {mu_tilde, m.mu + m.lambda - mu_tilde};
}

double beta_real(double xi, double k) {
    double d = xi * xi - k * k;
    return d >= 0 ? std::sqrt(d) : 0.0;
}

cplx beta(cplx xi, double k, double eps_cut_scale) {
    if (xi.imag() == 0.0) {
        double x = xi.real();
        double d = (x - k) * (x + k);
        if (d >= 0) return {std::sqrt(d), 0.0};
        return {0.0, -std::sqrt(-d)};
    }
    cplx a = xi - k, b = xi + k;
    double eps = eps_cut_scale * k;
    if ((std::abs(a.real()) < eps && a.imag() > 0) || (std::abs(b.real()) < eps && b.imag() < 0))
        throw Error(ErrorCode::branch_cut, "spectral point on a branch cut");
    double a1 = std::atan2(a.imag(), a.real());
    if (a1 >= pi / 2) a1 -= 2 * pi;
    double a2 = std::atan2(b.imag(), b.real());
    if (a2 < -pi / 2) a2 += 2 * pi;
    return std::polar(std::sqrt(std::abs(a) * std::abs(b)), 0.5 * (a1 + a2));
}

ReflTrans refl_trans(cplx beta_p, cplx beta_m, double k_p, double k_m) {
    cplx up = beta_p / (k_p * k_p), dn = beta_m / (k_m * k_m);
    cplx den = up + dn;
    if (std::abs(den) == 0.0 || !std::isfinite(std::abs(den)))
        throw Error(ErrorCode::degenerate_denominator, "reflection/transmission denominator vanishes");
    return {(up - dn) / den, 2.0 * up / den};
}

SpectralConstants spectral_constants(const ElasticMedium& m, cplx xi) {
    Wavenumbers k = wavenumbers(m);
    SpectralPoint sp = spectral_point(m, k, xi);
    return {sp.C0, sp.D};
}

SpectralPoint spectral_point(const ElasticMedium& m, const Wavenumbers& k, cplx xi) {
    SpectralPoint sp;
    sp.xi = xi;
    sp.s = xi * xi;
    sp.bp_plus = beta(xi, k.kp_plus);
    sp.bp_minus = beta(xi, k.kp_minus);
    sp.bs_plus = beta(xi, k.ks_plus);
    sp.bs_minus = beta(xi, k.ks_minus);
    sp.ip_plus = 1.0 / (k.kp_plus * k.kp_plus);
    sp.ip_minus = 1.0 / (k.kp_minus * k.kp_minus);
    sp.is_plus = 1.0 / (k.ks_plus * k.ks_plus);
    sp.is_minus = 1.0 / (k.ks_minus * k.ks_minus);
    double w2 = m.omega * m.omega;
    sp.C0 = 1.0 / (m.rho_plus * w2) - 1.0 / (m.rho_minus * w2);
    sp.Dp = sp.ip_plus * sp.bp_plus + sp.ip_minus * sp.bp_minus;
    sp.Ds = sp.is_plus * sp.bs_plus + sp.is_minus * sp.bs_minus;
    sp.D = -sp.Dp * sp.Ds + (sp.ip_plus - sp.ip_minus) * (sp.is_plus - sp.is_minus) * sp.s;
    if (std::abs(sp.Dp) == 0.0 || std::abs(sp.Ds) == 0.0)
        throw Error(ErrorCode::degenerate_denominator, "reflection/transmission denominator vanishes");
    sp.Rp = (sp.ip_plus * sp.bp_plus - sp.ip_minus * sp.bp_minus) / sp.Dp;
    sp.Tp = 2.0 * sp.ip_plus * sp.bp_plus / sp.Dp;
    sp.Rs = (sp.is_plus * sp.bs_plus - sp.is_minus * sp.bs_minus) / sp.Ds;
    sp.Ts = 2.0 * sp.is_plus * sp.bs_plus / sp.Ds;
    return sp;
}

DScan scan_D(const ElasticMedium& m, int samples, double range_factor) {
    Wavenumbers k = wavenumbers(m);
    double L = range_factor * k.ks_plus;
    DScan out{std::numeric_limits<double>::infinity(), 0.0};
    for (int i = 0; i < samples; ++i) {
        double xi = -L + 2 * L * i / (samples - 1.0);
        double v = std::abs(spectral_point(m, k, xi).D);
        if (v < out.min_abs_D) out = {v, xi};
    }
    return out;
}

}  // namespace le
