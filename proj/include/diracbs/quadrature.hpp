#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "diracbs/types.hpp"

namespace diracbs {

/// Gauss-Legendre rule on [-1, 1]. Nodes ascending, weights sum to 2.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int n);
};

/// Cached rule lookup (rules are immutable once built).
const GaussLegendre& gauss_legendre(int n);

/// One quadrature panel [a, b] carrying a mapped Gauss-Legendre rule.
struct Panel {
    double a = 0.0, b = 0.0;
    std::vector<double> x;  // mapped nodes, ascending, strictly inside (a, b)
    std::vector<double> w;  // mapped weights, sum to b - a

    Panel() = default;
    Panel(double a_, double b_, int order);
};

/// Adaptive scalar quadrature of f over [a, b]: panels are bisected until the
/// embedded (n, 2n)-point Gauss estimates agree to rel_tol.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, int max_depth = 40);

/// Complex-valued counterpart.
Cplx adaptive_integrate_c(const std::function<Cplx(double)>& f, double a, double b,
                          double rel_tol = 1e-12, int max_depth = 40);

}  // namespace diracbs
