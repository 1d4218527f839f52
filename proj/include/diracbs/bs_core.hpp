#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "diracbs/free_resolvent.hpp"
#include "diracbs/potential.hpp"
#include "diracbs/quadrature.hpp"
#include "diracbs/types.hpp"

namespace diracbs {

struct GridOptions {
    int nodes_per_unit = 24;
    int min_nodes = 64;
    int panel_order = 12;
};

/// Composite Gauss-Legendre grid over the potential support, panels aligned
/// with the potential's non-smooth points. Weights sum to the support length;
/// nodes are strictly inside panel interiors.
struct QuadratureGrid {
    std::vector<Panel> panels;
    std::vector<double> nodes;    // flattened, ascending
    std::vector<double> weights;  // matching
    std::vector<int> panel_of;    // node index -> panel index
    std::vector<int> panel_first; // panel index -> first node index
    int panel_order = 12;

    int size() const { return static_cast<int>(nodes.size()); }
    double support_length() const;
};

QuadratureGrid build_grid(const std::vector<double>& breaks, const GridOptions& opt = {});
QuadratureGrid build_grid(const PotentialSpec& spec, const GridOptions& opt = {});

/// Polar factors sampled on the grid, plus the product-integration plan for
/// panels that contain the kink of |x - y|.
struct GridFactors {
    std::vector<Mat2> A, B;  // at grid nodes

    struct Row {
        int panel = -1;
        std::vector<double> y, w;          // sub-quadrature, both sides of the kink
        std::vector<Mat2> B_at;            // B(y)
        std::vector<std::vector<double>> lagrange;  // [sub-point][panel-local node]
    };
    std::vector<Row> correction;  // one per node; empty when correction disabled
};

GridFactors factors_on_grid(const PolarFactors& factors, const QuadratureGrid& grid,
                            bool diagonal_correction = true);

/// Dense Nystrom matrices of the Birman-Schwinger operator at fixed z, with
/// symmetric sqrt(w) weighting and the singular/regular split Q = L + M.
struct DiscretizedBS {
    Cplx z{0.0, 0.0};
    UniformizedPoint up;
    Mat2 Upsilon;
    MatC Q, L, M;
    int grid_size = 0;
};

DiscretizedBS assemble(Cplx z, const GridFactors& gf, const QuadratureGrid& grid, double m);

/// det in overflow-safe polar form.
struct LogDet {
    double log_abs = 0.0;
    double arg = 0.0;
    Cplx value() const { return std::polar(std::exp(log_abs), arg); }
};

/// det(I + eps Q) by LU with partial pivoting, log-accumulated.
LogDet det_eps_log(const MatC& q, double eps);
Cplx det_eps(const DiscretizedBS& bs, double eps);

/// Regularized determinant det2(I + eps Q) = prod (1 + eps lambda_j) e^{-eps lambda_j}
/// over the eigenvalues of Q.
Cplx det2(const DiscretizedBS& bs, double eps);

/// z -> det(I + eps Q(z)) in log form; shared by the 1D and waveguide solvers.
using DetFn = std::function<LogDet(Cplx)>;

struct ZeroOnBoundary : Error {
    using Error::Error;
};
struct StepLimit : Error {
    using Error::Error;
};

struct WindingOptions {
    int initial_per_side = 8;
    double max_phase_step = 1.5707963267948966;  // refine until increments < pi/2
    int max_evals = 40000;
    double min_rel_step = 1e-12;   // of the perimeter; finer means a boundary zero
    double min_log_abs = -600.0;   // |det| below exp(min_log_abs) on the boundary
};

/// Winding number of det around the rectangle boundary (counterclockwise) by
/// adaptive phase tracking. Equals the number of enclosed zeros counted with
/// multiplicity. Throws ZeroOnBoundary / StepLimit.
int count_zeros(const DetFn& det, const Rect& region, const WindingOptions& opt = {});

struct EigenvalueRecord {
    Cplx z{0.0, 0.0};
    int multiplicity = 1;
    double residual = 0.0;  // |det(I + eps Q(z))| at the reported z
    double epsilon = 1.0;
    std::string method = "birman-schwinger";
    int grid_size = 0;
};

struct FindOptions {
    double tol = 1e-8;
    int max_depth = 48;
    int newton_max_iter = 50;
    double newton_escape_factor = 4096.0;  // try Newton once cells shrink below factor*tol
    WindingOptions winding;
};

struct FindResult {
    std::vector<EigenvalueRecord> eigenvalues;
    bool complete = true;
};

/// All zeros of det in the region: winding-number quadrisection down to cell
/// size 10*tol, then Newton with central finite differences. Multiplicity is
/// the winding number of the final enclosing cell.
FindResult find_zeros(const DetFn& det, const Rect& region, const FindOptions& opt = {});

struct BS1DOptions {
    GridOptions grid;
    FindOptions find;
    bool diagonal_correction = true;
};

/// DetFn for H + eps V with precomputed grid data.
DetFn make_det_1d(double m, const GridFactors& gf, const QuadratureGrid& grid, double eps);

/// End-to-end 1D eigenvalue search for H + eps V in the region.
FindResult find_eigenvalues_1d(double m, const PotentialSpec& spec, double eps,
                               const Rect& region, const BS1DOptions& opt = {});

}  // namespace diracbs
