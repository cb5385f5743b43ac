#pragma once

#include "layered_elastica/types.hpp"

namespace le {

struct CylFunValue {
    int order;
    cplx argument;
    cplx J, Y, H1;
};

// Orders 0, 1, 2. Negative real z is taken with arg z = pi.
CylFunValue cyl(int m, cplx z);
cplx bessel_j(int m, cplx z);
cplx bessel_y(int m, cplx z);
cplx hankel1(int m, cplx z);

namespace detail {

// Any integer order n >= 0; used internally for higher harmonics of
// differentiated Hankel kernels.
CylFunValue cyl_any(int n, cplx z, bool need_y = true);
cplx bessel_j_any(int n, cplx z);
cplx hankel1_any(int n, cplx z);

inline constexpr double series_switch = 17.0;

}  // namespace detail

}  // namespace le
