#pragma once

#include "diracbs/types.hpp"

namespace diracbs {

/// Spectral parameter z with its branch data. k = (z^2 - m^2)^{1/2} with
/// Im k > 0, zeta = (z + m) / k.
struct UniformizedPoint {
    Cplx z{0.0, 0.0};
    double m = 0.0;
    Cplx k{0.0, 0.0};
    Cplx zeta{0.0, 0.0};
    bool in_resolvent_set = false;
};

/// Distance from z to the free spectrum (-inf, -m] U [m, inf).
double dist_to_spectrum(Cplx z, double m);

/// Branch data at z. The branch is realized as k = i sqrt(m^2 - z^2) with the
/// principal square root, which has Im k > 0 exactly off the spectrum.
/// Throws BranchError within 1e-14 of the essential spectrum.
UniformizedPoint uniformize(Cplx z, double m);

/// N(x, y; z) = (i/2) [[zeta, sgn(x-y)], [sgn(x-y), 1/zeta]], sgn(0) = 0.
Mat2 kernel_N(double x, double y, const UniformizedPoint& up);

/// R(x, y; z) = N(x, y; z) exp(i k |x - y|).
Mat2 kernel_R(double x, double y, const UniformizedPoint& up);

}  // namespace diracbs
