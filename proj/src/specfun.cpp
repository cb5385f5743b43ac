#include "layered_elastica/specfun.hpp"

#include <cmath>

namespace le {

namespace {

using lcx = std::complex<long double>;

struct SeriesOut {
    lcx J, Y;
};

SeriesOut series(int n, cplx zd, bool need_y) {
    const long double lpi = 3.141592653589793238462643383279502884L;
    const long double lgam = 0.577215664901532860606512090082402431L;
    lcx z(zd.real(), zd.imag());
    lcx h = z / 2.0L;
    lcx q = -h * h;
    lcx t = 1.0L;
    for (int i = 1; i <= n; ++i) t *= h / (long double)i;
    lcx sj = t, sy = 0.0L;
    long double hk = 0.0L, hnk = 0.0L;
    for (int i = 1; i <= n; ++i) hnk += 1.0L / i;
    if (need_y) sy = t * (2 * -lgam + hk + hnk);
    long double tmax = std::abs(t);
    for (int k = 1; k < 400; ++k) {
        t *= q / ((long double)k * (long double)(k + n));
        hk += 1.0L / k;
        hnk += 1.0L / (k + n);
        sj += t;
        if (need_y) sy += t * (2 * -lgam + hk + hnk);
        long double at = std::abs(t);
        tmax = std::max(tmax, at);
        if (k > std::abs(h) && at < 1e-22L * tmax) break;
    }
    SeriesOut out{sj, 0.0L};
    if (!need_y) return out;
    lcx fin = 0.0L;
    if (n > 0) {
        lcx hinv = 1.0L / h;
        // sum_{k<n} (n-k-1)!/k! h^{2k-n}
        for (int k = 0; k < n; ++k) {
            long double c = 1.0L;
            for (int i = 2; i <= n - k - 1; ++i) c *= i;
            for (int i = 2; i <= k; ++i) c /= i;
            lcx p = 1.0L;
            int e = 2 * k - n;
            if (e >= 0)
                for (int i = 0; i < e; ++i) p *= h;
            else
                for (int i = 0; i < -e; ++i) p *= hinv;
            fin += c * p;
        }
    }
    out.Y = (2.0L / lpi) * sj * std::log(h) - fin / lpi - sy / lpi;
    return out;
}

struct AsymOut {
    cplx H1, H2;
};

AsymOut asymptotic(int n, cplx w) {
    double nu2 = 4.0 * n * n;
    cplx s1 = 1.0, s2 = 1.0;
    cplx ak = 1.0;
    cplx winv = 1.0 / w;
    cplx pw = 1.0;
    double prev = 1e300;
    cplx ik = 1.0;
    for (int k = 1; k < 200; ++k) {
        double c = (nu2 - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k);
        ak *= c;
        pw *= winv;
        ik *= I;
        cplx term = ak * pw;
        double at = std::abs(term);
        if (at > prev || at == 0.0) break;
        s1 += ik * term;
        s2 += std::conj(ik) * term;
        prev = at;
        if (at < 1e-17) break;
    }
    cplx pref = std::sqrt(2.0 / (pi * w));
    cplx ph = w - (n * pi / 2 + pi / 4);
    return {pref * std::exp(I * ph) * s1, pref * std::exp(-I * ph) * s2};
}

}  // namespace

namespace detail {

CylFunValue cyl_any(int n, cplx z, bool need_y) {
    if (n < 0) throw Error(ErrorCode::domain_error, "negative Bessel order");
    if (z.imag() == 0.0 && z.real() < 0.0) z = cplx(z.real(), 0.0);
    CylFunValue v{n, z, 0.0, 0.0, 0.0};
    if (z == cplx(0.0, 0.0)) {
        if (need_y) throw Error(ErrorCode::domain_error, "Y and H1 are singular at z = 0");
        v.J = n == 0 ? 1.0 : 0.0;
        return v;
    }
    if (std::abs(z.imag()) > 700.0) throw Error(ErrorCode::overflow, "|Im z| too large");
    double az = std::abs(z);
    if (az <= series_switch) {
        SeriesOut s = series(n, z, need_y);
        v.J = cplx((double)s.J.real(), (double)s.J.imag());
        if (need_y) {
            v.Y = cplx((double)s.Y.real(), (double)s.Y.imag());
            lcx h = s.J + lcx(0.0L, 1.0L) * s.Y;
            v.H1 = cplx((double)h.real(), (double)h.imag());
        }
        return v;
    }
    double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    if (z.real() >= 0.0) {
        AsymOut a = asymptotic(n, z);
        v.J = 0.5 * (a.H1 + a.H2);
        v.H1 = a.H1;
        v.Y = (a.H1 - a.H2) / (2.0 * I);
    } else {
        AsymOut a = asymptotic(n, -z);
        v.J = sgn * 0.5 * (a.H1 + a.H2);
        if (z.imag() >= 0.0)
            v.H1 = -sgn * a.H2;
        else
            v.H1 = sgn * (2.0 * a.H1 + a.H2);
        v.Y = (v.H1 - v.J) / I;
    }
    return v;
}

cplx bessel_j_any(int n, cplx z) { return cyl_any(n, z, false).J; }
cplx hankel1_any(int n, cplx z) { return cyl_any(n, z, true).H1; }

}  // namespace detail

static void check_order(int m) {
    if (m < 0 || m > 2) throw Error(ErrorCode::domain_error, "order must be 0, 1 or 2");
}

CylFunValue cyl(int m, cplx z) {
    check_order(m);
    return detail::cyl_any(m, z, true);
}

cplx bessel_j(int m, cplx z) {
    check_order(m);
    return detail::cyl_any(m, z, false).J;
}

cplx bessel_y(int m, cplx z) {
    check_order(m);
    return detail::cyl_any(m, z, true).Y;
}

cplx hankel1(int m, cplx z) {
    check_order(m);
    return detail::cyl_any(m, z, true).H1;
}

}  // namespace le
