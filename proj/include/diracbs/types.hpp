#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace diracbs {

using Cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;

inline constexpr Cplx kI{0.0, 1.0};

inline Mat2 pauli1() { Mat2 m; m << 0, 1, 1, 0; return m; }
inline Mat2 pauli2() { Mat2 m; m << 0, Cplx(0,-1), Cplx(0,1), 0; return m; }
inline Mat2 pauli3() { Mat2 m; m << 1, 0, 0, -1; return m; }

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration data.
struct ConfigError : Error {
    using Error::Error;
};

/// Spectral parameter too close to (or on) the essential spectrum.
struct BranchError : Error {
    using Error::Error;
};

/// Numerical failure (non-convergent eigensolve, non-integrable data, ...).
struct NumericError : Error {
    using Error::Error;
};

/// Axis-aligned closed rectangle in the complex plane.
struct Rect {
    double re_lo = 0.0, re_hi = 0.0;
    double im_lo = 0.0, im_hi = 0.0;

    double width() const { return re_hi - re_lo; }
    double height() const { return im_hi - im_lo; }
    Cplx center() const { return {0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)}; }
    bool contains(Cplx z, double slack = 0.0) const {
        return z.real() >= re_lo - slack && z.real() <= re_hi + slack &&
               z.imag() >= im_lo - slack && z.imag() <= im_hi + slack;
    }
};

}  // namespace diracbs
