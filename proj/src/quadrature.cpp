#include "diracbs/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace diracbs {

GaussLegendre::GaussLegendre(int n) {
    if (n < 1) throw ConfigError("gauss_legendre: order must be >= 1");
    nodes.resize(n);
    weights.resize(n);
    // Newton iteration on P_n with the Chebyshev-angle initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
}

const GaussLegendre& gauss_legendre(int n) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, GaussLegendre(n)).first;
    return it->second;
}

Panel::Panel(double a_, double b_, int order) : a(a_), b(b_) {
    const GaussLegendre& gl = gauss_legendre(order);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    x.resize(order);
    w.resize(order);
    for (int i = 0; i < order; ++i) {
        x[i] = mid + half * gl.nodes[i];
        w[i] = half * gl.weights[i];
    }
}

namespace {

template <typename T>
T gl_apply(const std::function<T(double)>& f, double a, double b, int order) {
    const GaussLegendre& gl = gauss_legendre(order);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    T acc = T{};
    for (int i = 0; i < order; ++i) acc += T(half * gl.weights[i]) * f(mid + half * gl.nodes[i]);
    return acc;
}

template <typename T>
T adaptive_impl(const std::function<T(double)>& f, double a, double b, double rel_tol,
                int depth, int max_depth, double scale) {
    T coarse = gl_apply<T>(f, a, b, 7);
    T fine = gl_apply<T>(f, a, b, 15);
    double err = std::abs(fine - coarse);
    double ref = std::max(scale, std::abs(fine));
    if (err <= rel_tol * ref || depth >= max_depth) return fine;
    double mid = 0.5 * (a + b);
    return adaptive_impl<T>(f, a, mid, rel_tol, depth + 1, max_depth, ref) +
           adaptive_impl<T>(f, mid, b, rel_tol, depth + 1, max_depth, ref);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int max_depth) {
    return adaptive_impl<double>(f, a, b, rel_tol, 0, max_depth, 0.0);
}

Cplx adaptive_integrate_c(const std::function<Cplx(double)>& f, double a, double b,
                          double rel_tol, int max_depth) {
    return adaptive_impl<Cplx>(f, a, b, rel_tol, 0, max_depth, 0.0);
}

}  // namespace diracbs
