#pragma once

#include <vector>

#include "diracbs/types.hpp"

namespace diracbs {

/// The two closed disks B_{m r0}(+/- m x0) containing all non-embedded
/// eigenvalues of H + V when ||V||_1 < 1.
struct EnclosureDisks {
    double m = 0.0;
    double v1 = 0.0;
    bool valid = false;  // false when v1 >= 1 (disks undefined)
    double x0 = 1.0;
    double r0 = 0.0;
    Cplx center_plus{0.0, 0.0};
    Cplx center_minus{0.0, 0.0};
    double radius = 0.0;

    bool contains(Cplx z) const {
        return valid && (std::abs(z - center_plus) <= radius + 1e-12 ||
                         std::abs(z - center_minus) <= radius + 1e-12);
    }
};

EnclosureDisks enclosure(double m, double v1);

/// Unique root of rho * exp((rho+1)^2 / 2) = 1, approximately 0.38.
double rho0();

struct LTReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double tau = 0.0;       // 0 in the massless case
    double constant = 0.0;  // the calibration constant used
    double v1 = 0.0, v2 = 0.0;
    double m = 0.0;
    bool holds = false;
    std::vector<double> weights;  // per-eigenvalue summands
};

/// Calibrated default constants (seeded desk-scale ensemble, see tests).
double default_massless_constant();
double default_massive_constant(double tau);

/// Massless sum: dist(z, R) / (|z| + 1)^2 against C (1 + v2^4) v1^2.
LTReport lt_massless(const std::vector<Cplx>& eigs, double v1, double v2, double constant);

/// A_m(V): min of the two expressions when v1 < rho0, else the second one.
double lt_weight_A(double m, double tau, double v1, double v2);

/// Massive sum: dist(z, sigma(H)) |m^2 - z^2|^{tau/2} / (m + |z|)^{2+tau}
/// against C_tau (A_m(V)/m) max(v1, v1^2).
LTReport lt_massive(const std::vector<Cplx>& eigs, double m, double tau, double v1, double v2,
                    double constant);

/// K_{delta,epsilon,R}: dist(z, sigma(H)) >= delta, dist(z, {-m, m}) >= epsilon,
/// |z| <= R.
bool in_K_region(Cplx z, double m, double delta, double epsilon, double R);

struct CountBound {
    double delta = 0.0, epsilon = 0.0, R = 0.0;
    double bound = 0.0;
    int observed_count = 0;
};

CountBound count_bound(double m, double delta, double epsilon, double R, double tau, double v1,
                       double v2, double constant, int observed_count = 0);

}  // namespace diracbs
