#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diracbs/types.hpp"

namespace diracbs {

/// Compactly supported scalar profile on the line. Used for the transverse
/// factor of strip potentials and for damping profiles.
struct ScalarProfile {
    enum class Kind { PiecewiseConstant, GaussianEnvelope, SampledTable };

    Kind kind = Kind::PiecewiseConstant;

    // piecewise-constant: values[i] on [breakpoints[i], breakpoints[i+1])
    std::vector<double> breakpoints;
    std::vector<Cplx> values;

    // gaussian-envelope: amplitude * exp(-((x-center)/width)^2), truncated at
    // |x - center| <= cutoff * width
    Cplx amplitude{0.0, 0.0};
    double center = 0.0;
    double width = 1.0;
    double cutoff = 8.0;

    // sampled-table: linear interpolation through (nodes[i], samples[i])
    std::vector<double> nodes;
    std::vector<Cplx> samples;

    Cplx operator()(double x) const;
    std::pair<double, double> support() const;
    /// Points where the profile is not smooth (piece edges, table nodes).
    std::vector<double> breaklist() const;

    static ScalarProfile constant(Cplx value, double lo, double hi);
    static ScalarProfile gaussian(Cplx amplitude, double center = 0.0, double width = 1.0,
                                  double cutoff = 8.0);
    void validate() const;
};

/// Matrix-valued potential with compact support: a d x d complex matrix field
/// on the line (d = 2 or 4), or a transverse-profile x longitudinal-profile
/// product on a strip (d = 4).
struct PotentialSpec {
    enum class Kind { Zero, PiecewiseConstant, GaussianEnvelope, SampledTable, Product };

    int dimension = 2;
    Kind kind = Kind::Zero;

    // zero: support interval only (may be empty)
    double zero_lo = 0.0, zero_hi = 0.0;

    // piecewise-constant
    std::vector<double> breakpoints;
    std::vector<MatC> values;

    // gaussian-envelope
    MatC amplitude;
    double center = 0.0;
    double width = 1.0;
    double cutoff = 8.0;

    // sampled-table
    std::vector<double> nodes;
    std::vector<MatC> samples;

    // product (strip): V(x1, x2) = transverse(x1) * longitudinal(x2)
    std::optional<ScalarProfile> transverse;
    std::vector<PotentialSpec> longitudinal;  // size 1 when kind == Product

    void validate() const;
    bool is_strip() const { return kind == Kind::Product; }

    /// Longitudinal support [x_lo, x_hi]; V vanishes outside.
    std::pair<double, double> support() const;
    std::vector<double> breaklist() const;

    static PotentialSpec zero(int dimension = 2, double lo = 0.0, double hi = 1.0);
    static PotentialSpec piecewise(std::vector<double> breakpoints, std::vector<MatC> values);
    static PotentialSpec gaussian(MatC amplitude, double center = 0.0, double width = 1.0,
                                  double cutoff = 8.0);
    static PotentialSpec sampled(std::vector<double> nodes, std::vector<MatC> samples);
    static PotentialSpec product(ScalarProfile transverse, PotentialSpec longitudinal);
    /// profile(x) * coefficient, preserving the profile kind.
    static PotentialSpec scaled_matrix(const ScalarProfile& profile, const MatC& coefficient);
};

/// V(x) for line potentials; the zero matrix outside the support.
MatC evaluate(const PotentialSpec& spec, double x);

/// V(x1, x2) for strip potentials (kind == Product).
MatC evaluate(const PotentialSpec& spec, double x1, double x2);

/// (integral of ||V(x)||^p dx)^(1/p), operator norm pointwise; over the strip
/// for product potentials.
double norm_lp(const PotentialSpec& spec, double p);

/// Pointwise polar factorization V = B * A with A = |V|^{1/2} and
/// B = U_V |V|^{1/2}. Factors vanish where V does.
struct PolarFactors {
    PotentialSpec spec;

    MatC A(double x) const;
    MatC B(double x) const;
    MatC A(double x1, double x2) const;
    MatC B(double x1, double x2) const;
};

PolarFactors polar_factorize(const PotentialSpec& spec);

/// Pointwise factors of a single matrix; A = |V|^{1/2}, B = U_V |V|^{1/2}.
std::pair<MatC, MatC> polar_factors_at(const MatC& v);

/// JSON round-trip of the configuration document (External Interfaces).
PotentialSpec potential_from_json(const std::string& json_text);
std::string potential_to_json(const PotentialSpec& spec);

ScalarProfile profile_from_json(const std::string& json_text);
std::string profile_to_json(const ScalarProfile& profile);

}  // namespace diracbs
