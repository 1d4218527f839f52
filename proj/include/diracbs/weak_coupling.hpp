#pragma once

#include <vector>

#include "diracbs/bs_core.hpp"
#include "diracbs/potential.hpp"
#include "diracbs/types.hpp"

namespace diracbs {

/// U = integral of V over the line (2x2).
Mat2 coupling_matrix(const PotentialSpec& spec);

/// Eigenvalue emerging from +m: z+ = m - (m/2) U11^2 eps^2.
/// Requires Re U11 < 0.
Cplx predict_plus(double eps, const Mat2& U, double m);

/// Eigenvalue emerging from -m: z- = -m + (m/2) U22^2 eps^2.
/// Requires Re U22 > 0.
Cplx predict_minus(double eps, const Mat2& U, double m);

enum class ThresholdSide { Plus, Minus };

struct QuadraticFit {
    Cplx coefficient{0.0, 0.0};  // extrapolated eps^2 coefficient
    std::vector<Cplx> ratios;    // (z(eps) -/+ m) / eps^2 per sample
    bool monotone_residuals = true;  // fit-quality flag
};

/// Least-squares fit of (z(eps) - threshold) / eps^2 = c0 + c1 eps, returning
/// the extrapolated c0. eps_list must be decreasing, >= 3 entries.
QuadraticFit fit_quadratic(const std::vector<double>& eps_list, const std::vector<Cplx>& z_list,
                           double m, ThresholdSide side);

/// Search box for the weak eigenvalue: centered at the prediction with
/// half-width 5 (m/2) eps^2 v1^2, clipped away from the essential spectrum.
Rect weak_search_box(Cplx prediction, double eps, double m, double v1, double tol);

struct SweepPoint {
    double eps = 0.0;
    Cplx z{0.0, 0.0};
    Cplx predicted{0.0, 0.0};
    double residual = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    QuadraticFit fit;
    Mat2 U;
};

/// Locate the weak-coupling eigenvalue over an eps sweep (default
/// {0.4, 0.2, 0.1, 0.05}) and fit the quadratic coefficient.
SweepResult weak_coupling_sweep(double m, const PotentialSpec& spec, ThresholdSide side,
                                std::vector<double> eps_list = {0.4, 0.2, 0.1, 0.05},
                                const BS1DOptions& opt = {});

}  // namespace diracbs
