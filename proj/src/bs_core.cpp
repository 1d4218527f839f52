#include "diracbs/bs_core.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace diracbs {

double QuadratureGrid::support_length() const {
    double len = 0.0;
    for (const Panel& p : panels) len += p.b - p.a;
    return len;
}

QuadratureGrid build_grid(const std::vector<double>& breaks, const GridOptions& opt) {
    if (breaks.size() < 2) throw ConfigError("build_grid: need at least one piece");
    std::vector<double> bp = breaks;
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             bp.end());
    double total_len = bp.back() - bp.front();
    if (total_len <= 0.0) throw ConfigError("build_grid: empty support");

    double per_unit = std::max<double>(opt.nodes_per_unit,
                                       static_cast<double>(opt.min_nodes) / total_len);
    QuadratureGrid grid;
    grid.panel_order = opt.panel_order;
    for (size_t i = 0; i + 1 < bp.size(); ++i) {
        double a = bp[i], b = bp[i + 1], len = b - a;
        if (len <= 0.0) continue;
        int n_panels = std::max(1, static_cast<int>(std::ceil(len * per_unit / opt.panel_order)));
        for (int p = 0; p < n_panels; ++p) {
            double pa = a + len * p / n_panels;
            double pb = a + len * (p + 1) / n_panels;
            grid.panel_first.push_back(static_cast<int>(grid.nodes.size()));
            Panel panel(pa, pb, opt.panel_order);
            for (int q = 0; q < opt.panel_order; ++q) {
                grid.nodes.push_back(panel.x[q]);
                grid.weights.push_back(panel.w[q]);
                grid.panel_of.push_back(static_cast<int>(grid.panels.size()));
            }
            grid.panels.push_back(std::move(panel));
        }
    }
    return grid;
}

QuadratureGrid build_grid(const PotentialSpec& spec, const GridOptions& opt) {
    return build_grid(spec.breaklist(), opt);
}

namespace {

Mat2 to_mat2(const MatC& m) {
    if (m.rows() != 2 || m.cols() != 2) throw ConfigError("expected a 2x2 potential");
    return m;
}

/// Barycentric weights for a node set.
std::vector<double> bary_weights(const std::vector<double>& x) {
    const size_t n = x.size();
    std::vector<double> w(n, 1.0);
    for (size_t j = 0; j < n; ++j)
        for (size_t k = 0; k < n; ++k)
            if (k != j) w[j] /= (x[j] - x[k]);
    return w;
}

/// All Lagrange basis values L_j(y) for nodes x.
std::vector<double> lagrange_all(const std::vector<double>& x, const std::vector<double>& bw,
                                 double y) {
    const size_t n = x.size();
    std::vector<double> out(n, 0.0);
    for (size_t j = 0; j < n; ++j) {
        if (std::abs(y - x[j]) < 1e-300) {
            std::fill(out.begin(), out.end(), 0.0);
            out[j] = 1.0;
            return out;
        }
    }
    double denom = 0.0;
    for (size_t j = 0; j < n; ++j) {
        out[j] = bw[j] / (y - x[j]);
        denom += out[j];
    }
    for (double& v : out) v /= denom;
    return out;
}

}  // namespace

GridFactors factors_on_grid(const PolarFactors& factors, const QuadratureGrid& grid,
                            bool diagonal_correction) {
    GridFactors gf;
    const int n = grid.size();
    gf.A.resize(n);
    gf.B.resize(n);
    for (int i = 0; i < n; ++i) {
        auto [a, b] = polar_factors_at(evaluate(factors.spec, grid.nodes[i]));
        gf.A[i] = to_mat2(a);
        gf.B[i] = to_mat2(b);
    }
    if (!diagonal_correction) return gf;

    // Product-integration plan: the kernel has a kink in y at y = x_i, so the
    // panel holding x_i is integrated with one-sided sub-rules against the
    // Lagrange basis of its nodes.
    const int q = grid.panel_order;
    const int q_sub = q + 4;
    gf.correction.resize(n);
    for (int i = 0; i < n; ++i) {
        GridFactors::Row row;
        row.panel = grid.panel_of[i];
        const Panel& p = grid.panels[row.panel];
        auto bw = bary_weights(p.x);
        double xi = grid.nodes[i];
        for (int side = 0; side < 2; ++side) {
            double a = side == 0 ? p.a : xi;
            double b = side == 0 ? xi : p.b;
            if (b - a < 1e-15 * (p.b - p.a)) continue;
            Panel sub(a, b, q_sub);
            for (int s = 0; s < q_sub; ++s) {
                row.y.push_back(sub.x[s]);
                row.w.push_back(sub.w[s]);
                row.B_at.push_back(to_mat2(factors.B(sub.x[s])));
                row.lagrange.push_back(lagrange_all(p.x, bw, sub.x[s]));
            }
        }
        gf.correction[i] = std::move(row);
    }
    return gf;
}

DiscretizedBS assemble(Cplx z, const GridFactors& gf, const QuadratureGrid& grid, double m) {
    const int n = grid.size();
    DiscretizedBS bs;
    bs.z = z;
    bs.up = uniformize(z, m);
    bs.grid_size = n;
    const Cplx half_i{0.0, 0.5};
    bs.Upsilon = Mat2::Zero();
    bs.Upsilon(0, 0) = half_i * bs.up.zeta;
    bs.Upsilon(1, 1) = half_i / bs.up.zeta;

    const Mat2 sigma1 = pauli1();
    bs.L.resize(2 * n, 2 * n);
    bs.Q.resize(2 * n, 2 * n);

    std::vector<double> sw(n);
    for (int i = 0; i < n; ++i) sw[i] = std::sqrt(grid.weights[i]);

    std::vector<Mat2> a_ups(n), a_sig(n);
    for (int i = 0; i < n; ++i) {
        a_ups[i] = gf.A[i] * bs.Upsilon;
        a_sig[i] = gf.A[i] * (half_i * sigma1);
    }

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double d = grid.nodes[i] - grid.nodes[j];
            double s = (d > 0.0) ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
            Cplx e = std::exp(kI * bs.up.k * std::abs(d));
            Mat2 lb = (sw[i] * sw[j]) * (a_ups[i] * gf.B[j]);
            // Q kernel = A (Upsilon + (i/2) sgn sigma1) e^{ik|d|} B
            Mat2 qb = (sw[i] * sw[j] * e) * ((a_ups[i] + s * a_sig[i]) * gf.B[j]);
            bs.L.block<2, 2>(2 * i, 2 * j) = lb;
            bs.Q.block<2, 2>(2 * i, 2 * j) = qb;
        }
    }

    if (!gf.correction.empty()) {
        for (int i = 0; i < n; ++i) {
            const GridFactors::Row& row = gf.correction[i];
            const int first = grid.panel_first[row.panel];
            const int q = grid.panel_order;
            std::vector<Mat2> cij(q, Mat2::Zero());
            for (size_t s = 0; s < row.y.size(); ++s) {
                double d = grid.nodes[i] - row.y[s];
                double sg = (d > 0.0) ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
                Cplx e = std::exp(kI * bs.up.k * std::abs(d));
                Mat2 ker = e * ((a_ups[i] + sg * a_sig[i]) * row.B_at[s]);
                for (int j = 0; j < q; ++j) cij[j] += (row.w[s] * row.lagrange[s][j]) * ker;
            }
            for (int j = 0; j < q; ++j) {
                int jg = first + j;
                bs.Q.block<2, 2>(2 * i, 2 * jg) = (sw[i] / sw[jg]) * cij[j];
            }
        }
    }

    bs.M = bs.Q - bs.L;
    return bs;
}

LogDet det_eps_log(const MatC& q, double eps) {
    const Eigen::Index n = q.rows();
    MatC a = MatC::Identity(n, n) + eps * q;
    Eigen::PartialPivLU<MatC> lu(a);
    LogDet ld;
    double arg = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Cplx u = lu.matrixLU()(i, i);
        double au = std::abs(u);
        if (au == 0.0) {
            ld.log_abs = -std::numeric_limits<double>::infinity();
            ld.arg = 0.0;
            return ld;
        }
        ld.log_abs += std::log(au);
        arg += std::arg(u);
    }
    if (lu.permutationP().determinant() < 0) arg += M_PI;
    ld.arg = std::remainder(arg, 2.0 * M_PI);
    return ld;
}

Cplx det_eps(const DiscretizedBS& bs, double eps) { return det_eps_log(bs.Q, eps).value(); }

Cplx det2(const DiscretizedBS& bs, double eps) {
    Eigen::ComplexEigenSolver<MatC> es(bs.Q, false);
    if (es.info() != Eigen::Success) throw NumericError("det2: eigensolver failed");
    Cplx log_acc = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        Cplx lam = es.eigenvalues()(i);
        Cplx one_p = 1.0 + eps * lam;
        if (one_p == Cplx(0.0, 0.0)) return {0.0, 0.0};
        log_acc += std::log(one_p) - eps * lam;
    }
    return std::exp(log_acc);
}

// ---------------------------------------------------------------------------
// Winding numbers and zero finding

namespace {

struct BoundaryWalker {
    const DetFn& det;
    const WindingOptions& opt;
    double perimeter;
    int evals = 0;

    LogDet eval(Cplx z) {
        if (++evals > opt.max_evals) throw StepLimit("count_zeros: phase tracking step limit");
        LogDet ld = det(z);
        if (ld.log_abs < opt.min_log_abs)
            throw ZeroOnBoundary("count_zeros: |det| below threshold on boundary");
        return ld;
    }

    // Total phase increment along the segment [a, b].
    double walk(Cplx a, const LogDet& lda, Cplx b, const LogDet& ldb) {
        double d = std::remainder(ldb.arg - lda.arg, 2.0 * M_PI);
        if (std::abs(d) < opt.max_phase_step) return d;
        if (std::abs(b - a) < opt.min_rel_step * perimeter)
            throw ZeroOnBoundary("count_zeros: unresolvable phase jump on boundary");
        Cplx mid = 0.5 * (a + b);
        LogDet ldm = eval(mid);
        return walk(a, lda, mid, ldm) + walk(mid, ldm, b, ldb);
    }
};

}  // namespace

int count_zeros(const DetFn& det, const Rect& region, const WindingOptions& opt) {
    if (!(region.re_hi > region.re_lo) || !(region.im_hi > region.im_lo))
        throw ConfigError("count_zeros: degenerate region");
    BoundaryWalker walker{det, opt, 2.0 * (region.width() + region.height())};

    Cplx corners[4] = {Cplx(region.re_lo, region.im_lo), Cplx(region.re_hi, region.im_lo),
                       Cplx(region.re_hi, region.im_hi), Cplx(region.re_lo, region.im_hi)};
    double total = 0.0;
    LogDet ld_first = walker.eval(corners[0]);
    LogDet ld_prev = ld_first;
    for (int side = 0; side < 4; ++side) {
        Cplx a = corners[side];
        Cplx b = corners[(side + 1) % 4];
        LogDet ld_b = (side == 3) ? ld_first : walker.eval(b);
        // seed the side with initial samples so short-lived loops are not missed
        int m = std::max(1, opt.initial_per_side);
        Cplx prev_pt = a;
        LogDet prev_ld = ld_prev;
        for (int s = 1; s <= m; ++s) {
            Cplx pt = (s == m) ? b : a + (b - a) * (static_cast<double>(s) / m);
            LogDet ld = (s == m) ? ld_b : walker.eval(pt);
            total += walker.walk(prev_pt, prev_ld, pt, ld);
            prev_pt = pt;
            prev_ld = ld;
        }
        ld_prev = ld_b;
    }
    double w = total / (2.0 * M_PI);
    int rounded = static_cast<int>(std::lround(w));
    if (std::abs(w - rounded) > 0.25)
        throw NumericError("count_zeros: winding number failed to converge to an integer");
    return rounded;
}

namespace {

struct ZeroFinder {
    const DetFn& det;
    const FindOptions& opt;
    std::vector<EigenvalueRecord> found;
    bool complete = true;

    // Newton with central finite differences, overflow-safe via relative
    // magnitudes. Returns true when converged inside `cell` (with slack).
    bool newton(const Rect& cell, Cplx& z_out, double& residual) {
        double size = std::max(cell.width(), cell.height());
        double h = 1e-6 * size;
        Cplx z = cell.center();
        for (int it = 0; it < opt.newton_max_iter; ++it) {
            LogDet f0 = det(z);
            LogDet fp = det(z + h);
            LogDet fm = det(z - h);
            Cplx rel_p = std::polar(std::exp(fp.log_abs - f0.log_abs), fp.arg);
            Cplx rel_m = std::polar(std::exp(fm.log_abs - f0.log_abs), fm.arg);
            Cplx denom = rel_p - rel_m;
            if (std::abs(denom) == 0.0) return false;
            Cplx step = std::polar(1.0, f0.arg) * (2.0 * h) / denom;
            z -= step;
            if (!cell.contains(z, 4.0 * size)) return false;
            if (std::abs(step) < 0.25 * opt.tol) {
                LogDet ff = det(z);
                z_out = z;
                residual = std::exp(std::min(ff.log_abs, 700.0));
                return true;
            }
        }
        return false;
    }

    void record(Cplx z, int multiplicity, double residual) {
        for (EigenvalueRecord& r : found) {
            if (std::abs(r.z - z) < 2.0 * opt.tol) {
                r.multiplicity += multiplicity;
                return;
            }
        }
        EigenvalueRecord rec;
        rec.z = z;
        rec.multiplicity = multiplicity;
        rec.residual = residual;
        found.push_back(rec);
    }

    int count(const Rect& r) { return count_zeros(det, r, opt.winding); }

    void subdivide(const Rect& cell, int n_zeros, int depth) {
        if (n_zeros == 0) return;
        double size = std::max(cell.width(), cell.height());

        if (size <= opt.newton_escape_factor * opt.tol) {
            Cplx z;
            double residual;
            if (newton(cell, z, residual) && cell.contains(z, size)) {
                record(z, n_zeros, residual);
                return;
            }
            if (size <= 10.0 * opt.tol) {
                // cell small enough: report the center, flag incomplete
                LogDet f0 = det(cell.center());
                record(cell.center(), n_zeros, std::exp(std::min(f0.log_abs, 700.0)));
                complete = false;
                return;
            }
        }
        if (depth >= opt.max_depth) {
            LogDet f0 = det(cell.center());
            record(cell.center(), n_zeros, std::exp(std::min(f0.log_abs, 700.0)));
            complete = false;
            return;
        }

        // quadrisect, jittering the split lines if a zero sits on them
        static constexpr double fracs[] = {0.5, 0.53, 0.46, 0.57, 0.42, 0.61};
        for (double f : fracs) {
            double xm = cell.re_lo + f * cell.width();
            double ym = cell.im_lo + f * cell.height();
            Rect sub[4] = {{cell.re_lo, xm, cell.im_lo, ym},
                           {xm, cell.re_hi, cell.im_lo, ym},
                           {cell.re_lo, xm, ym, cell.im_hi},
                           {xm, cell.re_hi, ym, cell.im_hi}};
            int counts[4];
            int sum = 0;
            bool ok = true;
            for (int s = 0; s < 4 && ok; ++s) {
                try {
                    counts[s] = count(sub[s]);
                    sum += counts[s];
                } catch (const ZeroOnBoundary&) {
                    ok = false;
                }
            }
            if (!ok || sum != n_zeros) continue;
            for (int s = 0; s < 4; ++s) subdivide(sub[s], counts[s], depth + 1);
            return;
        }
        throw NumericError("find_zeros: could not split a cell without hitting a zero");
    }
};

}  // namespace

FindResult find_zeros(const DetFn& det, const Rect& region, const FindOptions& opt) {
    ZeroFinder finder{det, opt};
    int total = count_zeros(det, region, opt.winding);
    finder.subdivide(region, total, 0);
    FindResult result;
    result.eigenvalues = std::move(finder.found);
    result.complete = finder.complete;
    std::sort(result.eigenvalues.begin(), result.eigenvalues.end(),
              [](const EigenvalueRecord& a, const EigenvalueRecord& b) {
                  return a.z.real() != b.z.real() ? a.z.real() < b.z.real()
                                                  : a.z.imag() < b.z.imag();
              });
    return result;
}

DetFn make_det_1d(double m, const GridFactors& gf, const QuadratureGrid& grid, double eps) {
    return [m, &gf, &grid, eps](Cplx z) -> LogDet {
        DiscretizedBS bs = assemble(z, gf, grid, m);
        return det_eps_log(bs.Q, eps);
    };
}

FindResult find_eigenvalues_1d(double m, const PotentialSpec& spec, double eps,
                               const Rect& region, const BS1DOptions& opt) {
    Cplx corners[4] = {Cplx(region.re_lo, region.im_lo), Cplx(region.re_hi, region.im_lo),
                       Cplx(region.re_hi, region.im_hi), Cplx(region.re_lo, region.im_hi)};
    for (const Cplx& c : corners)
        if (dist_to_spectrum(c, m) < 10.0 * opt.find.tol)
            throw BranchError("find_eigenvalues_1d: region too close to the essential spectrum");

    QuadratureGrid grid = build_grid(spec, opt.grid);
    GridFactors gf = factors_on_grid(polar_factorize(spec), grid, opt.diagonal_correction);
    DetFn det = make_det_1d(m, gf, grid, eps);
    FindResult result = find_zeros(det, region, opt.find);
    for (EigenvalueRecord& r : result.eigenvalues) {
        r.epsilon = eps;
        r.method = "birman-schwinger";
        r.grid_size = grid.size();
    }
    return result;
}

}  // namespace diracbs
