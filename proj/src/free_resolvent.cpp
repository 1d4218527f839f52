#include "diracbs/free_resolvent.hpp"

#include <cmath>

namespace diracbs {

double dist_to_spectrum(Cplx z, double m) {
    // Two rays on the real axis; the nearest point of [m, inf) is either the
    // orthogonal projection or the tip.
    double x = z.real(), y = std::abs(z.imag());
    double d_right = (x >= m) ? y : std::hypot(m - x, y);
    double d_left = (-x >= m) ? y : std::hypot(m + x, y);
    return std::min(d_right, d_left);
}

UniformizedPoint uniformize(Cplx z, double m) {
    if (m < 0.0) throw ConfigError("uniformize: mass must be >= 0");
    if (dist_to_spectrum(z, m) < 1e-14)
        throw BranchError("uniformize: z on essential spectrum");
    UniformizedPoint up;
    up.z = z;
    up.m = m;
    // m^2 - z^2 avoids (-inf, 0] exactly when z is off the spectrum, so the
    // principal root has positive real part and k = i sqrt(...) has Im k > 0.
    up.k = kI * std::sqrt(Cplx(m * m, 0.0) - z * z);
    up.zeta = (z + m) / up.k;
    up.in_resolvent_set = true;
    return up;
}

Mat2 kernel_N(double x, double y, const UniformizedPoint& up) {
    double s = (x > y) ? 1.0 : (x < y ? -1.0 : 0.0);
    Mat2 n;
    const Cplx half_i{0.0, 0.5};
    n << half_i * up.zeta, half_i * s, half_i * s, half_i / up.zeta;
    return n;
}

Mat2 kernel_R(double x, double y, const UniformizedPoint& up) {
    return kernel_N(x, y, up) * std::exp(kI * up.k * std::abs(x - y));
}

}  // namespace diracbs
