#include "diracbs/potential.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "diracbs/quadrature.hpp"

namespace diracbs {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// ScalarProfile

Cplx ScalarProfile::operator()(double x) const {
    switch (kind) {
        case Kind::PiecewiseConstant: {
            if (breakpoints.empty() || x < breakpoints.front() || x >= breakpoints.back())
                return {0.0, 0.0};
            auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
            size_t cell = static_cast<size_t>(it - breakpoints.begin()) - 1;
            if (cell >= values.size()) return {0.0, 0.0};
            return values[cell];
        }
        case Kind::GaussianEnvelope: {
            double t = (x - center) / width;
            if (std::abs(t) > cutoff) return {0.0, 0.0};
            return amplitude * std::exp(-t * t);
        }
        case Kind::SampledTable: {
            if (nodes.empty() || x < nodes.front() || x > nodes.back()) return {0.0, 0.0};
            auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
            if (it == nodes.begin()) return samples.front();
            if (it == nodes.end()) return samples.back();
            size_t hi = static_cast<size_t>(it - nodes.begin());
            size_t lo = hi - 1;
            double t = (x - nodes[lo]) / (nodes[hi] - nodes[lo]);
            return samples[lo] * (1.0 - t) + samples[hi] * t;
        }
    }
    return {0.0, 0.0};
}

std::pair<double, double> ScalarProfile::support() const {
    switch (kind) {
        case Kind::PiecewiseConstant:
            return {breakpoints.front(), breakpoints.back()};
        case Kind::GaussianEnvelope:
            return {center - cutoff * width, center + cutoff * width};
        case Kind::SampledTable:
            return {nodes.front(), nodes.back()};
    }
    return {0.0, 0.0};
}

std::vector<double> ScalarProfile::breaklist() const {
    switch (kind) {
        case Kind::PiecewiseConstant:
            return breakpoints;
        case Kind::GaussianEnvelope: {
            auto [lo, hi] = support();
            return {lo, hi};
        }
        case Kind::SampledTable:
            return nodes;
    }
    return {};
}

ScalarProfile ScalarProfile::constant(Cplx value, double lo, double hi) {
    ScalarProfile p;
    p.kind = Kind::PiecewiseConstant;
    p.breakpoints = {lo, hi};
    p.values = {value};
    p.validate();
    return p;
}

ScalarProfile ScalarProfile::gaussian(Cplx amplitude, double center, double width, double cutoff) {
    ScalarProfile p;
    p.kind = Kind::GaussianEnvelope;
    p.amplitude = amplitude;
    p.center = center;
    p.width = width;
    p.cutoff = cutoff;
    p.validate();
    return p;
}

void ScalarProfile::validate() const {
    switch (kind) {
        case Kind::PiecewiseConstant:
            if (breakpoints.size() < 2 || values.size() + 1 != breakpoints.size())
                throw ConfigError("profile: need n+1 breakpoints for n cells");
            if (!std::is_sorted(breakpoints.begin(), breakpoints.end()))
                throw ConfigError("profile: breakpoints must be ascending");
            break;
        case Kind::GaussianEnvelope:
            if (width <= 0.0 || cutoff <= 0.0)
                throw ConfigError("profile: gaussian width and cutoff must be positive");
            break;
        case Kind::SampledTable:
            if (nodes.size() < 2 || nodes.size() != samples.size())
                throw ConfigError("profile: table needs matching nodes/samples, n >= 2");
            if (!std::is_sorted(nodes.begin(), nodes.end()))
                throw ConfigError("profile: table nodes must be ascending");
            break;
    }
}

// ---------------------------------------------------------------------------
// PotentialSpec

namespace {

void check_square(const MatC& m, int d, const char* what) {
    if (m.rows() != d || m.cols() != d)
        throw ConfigError(std::string(what) + ": matrix entries must be " + std::to_string(d) +
                          "x" + std::to_string(d));
}

}  // namespace

void PotentialSpec::validate() const {
    if (dimension != 2 && dimension != 4)
        throw ConfigError("potential: dimension must be 2 or 4");
    switch (kind) {
        case Kind::Zero:
            if (!(zero_lo <= zero_hi)) throw ConfigError("potential: empty support interval");
            break;
        case Kind::PiecewiseConstant:
            if (breakpoints.size() < 2 || values.size() + 1 != breakpoints.size())
                throw ConfigError("potential: need n+1 breakpoints for n cells");
            if (!std::is_sorted(breakpoints.begin(), breakpoints.end()))
                throw ConfigError("potential: breakpoints must be ascending");
            for (const auto& m : values) check_square(m, dimension, "potential");
            break;
        case Kind::GaussianEnvelope:
            check_square(amplitude, dimension, "potential");
            if (width <= 0.0 || cutoff <= 0.0)
                throw ConfigError("potential: gaussian width and cutoff must be positive");
            break;
        case Kind::SampledTable:
            if (nodes.size() < 2 || nodes.size() != samples.size())
                throw ConfigError("potential: table needs matching nodes/samples, n >= 2");
            if (!std::is_sorted(nodes.begin(), nodes.end()))
                throw ConfigError("potential: table nodes must be ascending");
            for (const auto& m : samples) check_square(m, dimension, "potential");
            break;
        case Kind::Product:
            if (dimension != 4) throw ConfigError("potential: product kind requires dimension 4");
            if (!transverse || longitudinal.size() != 1)
                throw ConfigError("potential: product kind needs transverse and longitudinal parts");
            transverse->validate();
            if (longitudinal[0].kind == Kind::Product)
                throw ConfigError("potential: nested product potentials are not supported");
            if (longitudinal[0].dimension != 4)
                throw ConfigError("potential: longitudinal part must have dimension 4");
            longitudinal[0].validate();
            break;
    }
}

std::pair<double, double> PotentialSpec::support() const {
    switch (kind) {
        case Kind::Zero:
            return {zero_lo, zero_hi};
        case Kind::PiecewiseConstant:
            return {breakpoints.front(), breakpoints.back()};
        case Kind::GaussianEnvelope:
            return {center - cutoff * width, center + cutoff * width};
        case Kind::SampledTable:
            return {nodes.front(), nodes.back()};
        case Kind::Product:
            return longitudinal[0].support();
    }
    return {0.0, 0.0};
}

std::vector<double> PotentialSpec::breaklist() const {
    switch (kind) {
        case Kind::Zero:
            return {zero_lo, zero_hi};
        case Kind::PiecewiseConstant:
            return breakpoints;
        case Kind::GaussianEnvelope: {
            auto [lo, hi] = support();
            return {lo, hi};
        }
        case Kind::SampledTable:
            return nodes;
        case Kind::Product:
            return longitudinal[0].breaklist();
    }
    return {};
}

PotentialSpec PotentialSpec::zero(int dimension, double lo, double hi) {
    PotentialSpec s;
    s.dimension = dimension;
    s.kind = Kind::Zero;
    s.zero_lo = lo;
    s.zero_hi = hi;
    s.validate();
    return s;
}

PotentialSpec PotentialSpec::piecewise(std::vector<double> breakpoints, std::vector<MatC> values) {
    PotentialSpec s;
    s.kind = Kind::PiecewiseConstant;
    s.dimension = values.empty() ? 2 : static_cast<int>(values.front().rows());
    s.breakpoints = std::move(breakpoints);
    s.values = std::move(values);
    s.validate();
    return s;
}

PotentialSpec PotentialSpec::gaussian(MatC amplitude, double center, double width, double cutoff) {
    PotentialSpec s;
    s.kind = Kind::GaussianEnvelope;
    s.dimension = static_cast<int>(amplitude.rows());
    s.amplitude = std::move(amplitude);
    s.center = center;
    s.width = width;
    s.cutoff = cutoff;
    s.validate();
    return s;
}

PotentialSpec PotentialSpec::sampled(std::vector<double> nodes, std::vector<MatC> samples) {
    PotentialSpec s;
    s.kind = Kind::SampledTable;
    s.dimension = samples.empty() ? 2 : static_cast<int>(samples.front().rows());
    s.nodes = std::move(nodes);
    s.samples = std::move(samples);
    s.validate();
    return s;
}

PotentialSpec PotentialSpec::product(ScalarProfile transverse, PotentialSpec longitudinal) {
    PotentialSpec s;
    s.kind = Kind::Product;
    s.dimension = 4;
    s.transverse = std::move(transverse);
    s.longitudinal.push_back(std::move(longitudinal));
    s.validate();
    return s;
}

PotentialSpec PotentialSpec::scaled_matrix(const ScalarProfile& profile, const MatC& coefficient) {
    const int d = static_cast<int>(coefficient.rows());
    PotentialSpec s;
    s.dimension = d;
    switch (profile.kind) {
        case ScalarProfile::Kind::PiecewiseConstant: {
            std::vector<MatC> vals;
            vals.reserve(profile.values.size());
            for (const Cplx& v : profile.values) vals.push_back(v * coefficient);
            return piecewise(profile.breakpoints, std::move(vals));
        }
        case ScalarProfile::Kind::GaussianEnvelope:
            return gaussian(profile.amplitude * coefficient, profile.center, profile.width,
                            profile.cutoff);
        case ScalarProfile::Kind::SampledTable: {
            std::vector<MatC> vals;
            vals.reserve(profile.samples.size());
            for (const Cplx& v : profile.samples) vals.push_back(v * coefficient);
            return sampled(profile.nodes, std::move(vals));
        }
    }
    throw ConfigError("scaled_matrix: unknown profile kind");
}

MatC evaluate(const PotentialSpec& spec, double x) {
    const MatC zero = MatC::Zero(spec.dimension, spec.dimension);
    switch (spec.kind) {
        case PotentialSpec::Kind::Zero:
            return zero;
        case PotentialSpec::Kind::PiecewiseConstant: {
            const auto& bp = spec.breakpoints;
            if (x < bp.front() || x >= bp.back()) return zero;
            auto it = std::upper_bound(bp.begin(), bp.end(), x);
            size_t cell = static_cast<size_t>(it - bp.begin()) - 1;
            if (cell >= spec.values.size()) return zero;
            return spec.values[cell];
        }
        case PotentialSpec::Kind::GaussianEnvelope: {
            double t = (x - spec.center) / spec.width;
            if (std::abs(t) > spec.cutoff) return zero;
            return spec.amplitude * std::exp(-t * t);
        }
        case PotentialSpec::Kind::SampledTable: {
            const auto& nd = spec.nodes;
            if (x < nd.front() || x > nd.back()) return zero;
            auto it = std::upper_bound(nd.begin(), nd.end(), x);
            if (it == nd.begin()) return spec.samples.front();
            if (it == nd.end()) return spec.samples.back();
            size_t hi = static_cast<size_t>(it - nd.begin());
            size_t lo = hi - 1;
            double t = (x - nd[lo]) / (nd[hi] - nd[lo]);
            return spec.samples[lo] * (1.0 - t) + spec.samples[hi] * t;
        }
        case PotentialSpec::Kind::Product:
            throw ConfigError("evaluate: strip potential needs two coordinates");
    }
    return zero;
}

MatC evaluate(const PotentialSpec& spec, double x1, double x2) {
    if (spec.kind != PotentialSpec::Kind::Product)
        throw ConfigError("evaluate: two-coordinate evaluation needs a product potential");
    return (*spec.transverse)(x1)*evaluate(spec.longitudinal[0], x2);
}

namespace {

double op_norm(const MatC& m) {
    if (m.isZero(0.0)) return 0.0;
    Eigen::JacobiSVD<MatC> svd(m);
    return svd.singularValues()(0);
}

double norm_lp_1d(const PotentialSpec& spec, double p) {
    auto breaks = spec.breaklist();
    double acc = 0.0;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] <= breaks[i]) continue;
        acc += adaptive_integrate(
            [&](double x) { return std::pow(op_norm(evaluate(spec, x)), p); }, breaks[i],
            breaks[i + 1], 1e-12);
    }
    return std::pow(acc, 1.0 / p);
}

}  // namespace

double norm_lp(const PotentialSpec& spec, double p) {
    if (p < 1.0) throw ConfigError("norm_lp: p must be >= 1");
    if (spec.kind == PotentialSpec::Kind::Product) {
        // ||t(x1) V_L(x2)|| = |t(x1)| ||V_L(x2)||, so the strip integral splits.
        const ScalarProfile& t = *spec.transverse;
        auto tb = t.breaklist();
        double trans = 0.0;
        for (size_t i = 0; i + 1 < tb.size(); ++i) {
            if (tb[i + 1] <= tb[i]) continue;
            trans += adaptive_integrate([&](double x) { return std::pow(std::abs(t(x)), p); },
                                        tb[i], tb[i + 1], 1e-12);
        }
        double lng = std::pow(norm_lp_1d(spec.longitudinal[0], p), p);
        return std::pow(trans * lng, 1.0 / p);
    }
    return norm_lp_1d(spec, p);
}

std::pair<MatC, MatC> polar_factors_at(const MatC& v) {
    const int d = static_cast<int>(v.rows());
    if (v.isZero(0.0)) return {MatC::Zero(d, d), MatC::Zero(d, d)};
    Eigen::JacobiSVD<MatC> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
    // V = P S W*; |V|^{1/2} = W S^{1/2} W*, U_V |V|^{1/2} = P S^{1/2} W*.
    // For Hermitian PSD V any valid SVD has P = W on the range, so U_V acts
    // as the identity there.
    Eigen::VectorXd sqrt_s = svd.singularValues().cwiseSqrt();
    MatC a = svd.matrixV() * sqrt_s.asDiagonal() * svd.matrixV().adjoint();
    MatC b = svd.matrixU() * sqrt_s.asDiagonal() * svd.matrixV().adjoint();
    return {a, b};
}

MatC PolarFactors::A(double x) const { return polar_factors_at(evaluate(spec, x)).first; }
MatC PolarFactors::B(double x) const { return polar_factors_at(evaluate(spec, x)).second; }
MatC PolarFactors::A(double x1, double x2) const {
    return polar_factors_at(evaluate(spec, x1, x2)).first;
}
MatC PolarFactors::B(double x1, double x2) const {
    return polar_factors_at(evaluate(spec, x1, x2)).second;
}

PolarFactors polar_factorize(const PotentialSpec& spec) {
    spec.validate();
    return PolarFactors{spec};
}

// ---------------------------------------------------------------------------
// JSON round-trip. Complex numbers are stored as [re, im] pairs; doubles keep
// their shortest round-trip representation so parse(serialize(x)) is
// bit-exact.

namespace {

ordered_json cplx_to_json(const Cplx& z) { return ordered_json::array({z.real(), z.imag()}); }

Cplx cplx_from_json(const ordered_json& j) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError("config: complex numbers must be [re, im] arrays");
    return {j[0].get<double>(), j[1].get<double>()};
}

ordered_json mat_to_json(const MatC& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(cplx_to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

MatC mat_from_json(const ordered_json& j, int d) {
    if (!j.is_array() || static_cast<int>(j.size()) != d)
        throw ConfigError("config: matrix rows do not match dimension");
    MatC m(d, d);
    for (int i = 0; i < d; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != d)
            throw ConfigError("config: matrix columns do not match dimension");
        for (int k = 0; k < d; ++k) m(i, k) = cplx_from_json(j[i][k]);
    }
    return m;
}

ordered_json profile_to_json_obj(const ScalarProfile& p) {
    ordered_json j;
    auto [lo, hi] = p.support();
    j["support"] = {lo, hi};
    switch (p.kind) {
        case ScalarProfile::Kind::PiecewiseConstant: {
            j["kind"] = "piecewise-constant";
            j["entries"]["breakpoints"] = p.breakpoints;
            ordered_json vals = ordered_json::array();
            for (const Cplx& v : p.values) vals.push_back(cplx_to_json(v));
            j["entries"]["values"] = vals;
            break;
        }
        case ScalarProfile::Kind::GaussianEnvelope:
            j["kind"] = "gaussian-envelope";
            j["entries"]["amplitude"] = cplx_to_json(p.amplitude);
            j["entries"]["center"] = p.center;
            j["entries"]["width"] = p.width;
            j["entries"]["cutoff"] = p.cutoff;
            break;
        case ScalarProfile::Kind::SampledTable: {
            j["kind"] = "sampled-table";
            j["entries"]["nodes"] = p.nodes;
            ordered_json vals = ordered_json::array();
            for (const Cplx& v : p.samples) vals.push_back(cplx_to_json(v));
            j["entries"]["values"] = vals;
            break;
        }
    }
    return j;
}

ScalarProfile profile_from_json_obj(const ordered_json& j) {
    ScalarProfile p;
    const std::string kind = j.at("kind").get<std::string>();
    const ordered_json& e = j.at("entries");
    if (kind == "piecewise-constant") {
        p.kind = ScalarProfile::Kind::PiecewiseConstant;
        p.breakpoints = e.at("breakpoints").get<std::vector<double>>();
        for (const auto& v : e.at("values")) p.values.push_back(cplx_from_json(v));
    } else if (kind == "gaussian-envelope") {
        p.kind = ScalarProfile::Kind::GaussianEnvelope;
        p.amplitude = cplx_from_json(e.at("amplitude"));
        p.center = e.at("center").get<double>();
        p.width = e.at("width").get<double>();
        p.cutoff = e.at("cutoff").get<double>();
    } else if (kind == "sampled-table") {
        p.kind = ScalarProfile::Kind::SampledTable;
        p.nodes = e.at("nodes").get<std::vector<double>>();
        for (const auto& v : e.at("values")) p.samples.push_back(cplx_from_json(v));
    } else {
        throw ConfigError("config: unknown profile kind '" + kind + "'");
    }
    p.validate();
    return p;
}

ordered_json potential_to_json_obj(const PotentialSpec& spec) {
    ordered_json j;
    j["dimension"] = spec.dimension;
    auto [lo, hi] = spec.support();
    j["support"] = {lo, hi};
    switch (spec.kind) {
        case PotentialSpec::Kind::Zero:
            j["kind"] = "zero";
            j["entries"] = ordered_json::object();
            break;
        case PotentialSpec::Kind::PiecewiseConstant: {
            j["kind"] = "piecewise-constant";
            j["entries"]["breakpoints"] = spec.breakpoints;
            ordered_json vals = ordered_json::array();
            for (const MatC& m : spec.values) vals.push_back(mat_to_json(m));
            j["entries"]["values"] = vals;
            break;
        }
        case PotentialSpec::Kind::GaussianEnvelope:
            j["kind"] = "gaussian-envelope";
            j["entries"]["amplitude"] = mat_to_json(spec.amplitude);
            j["entries"]["center"] = spec.center;
            j["entries"]["width"] = spec.width;
            j["entries"]["cutoff"] = spec.cutoff;
            break;
        case PotentialSpec::Kind::SampledTable: {
            j["kind"] = "sampled-table";
            j["entries"]["nodes"] = spec.nodes;
            ordered_json vals = ordered_json::array();
            for (const MatC& m : spec.samples) vals.push_back(mat_to_json(m));
            j["entries"]["values"] = vals;
            break;
        }
        case PotentialSpec::Kind::Product:
            j["kind"] = "product";
            j["entries"]["transverse"] = profile_to_json_obj(*spec.transverse);
            j["entries"]["longitudinal"] = potential_to_json_obj(spec.longitudinal[0]);
            break;
    }
    return j;
}

PotentialSpec potential_from_json_obj(const ordered_json& j) {
    PotentialSpec spec;
    spec.dimension = j.at("dimension").get<int>();
    const std::string kind = j.at("kind").get<std::string>();
    const ordered_json& e = j.at("entries");
    if (kind == "zero") {
        spec.kind = PotentialSpec::Kind::Zero;
        spec.zero_lo = j.at("support")[0].get<double>();
        spec.zero_hi = j.at("support")[1].get<double>();
    } else if (kind == "piecewise-constant") {
        spec.kind = PotentialSpec::Kind::PiecewiseConstant;
        spec.breakpoints = e.at("breakpoints").get<std::vector<double>>();
        for (const auto& v : e.at("values")) spec.values.push_back(mat_from_json(v, spec.dimension));
    } else if (kind == "gaussian-envelope") {
        spec.kind = PotentialSpec::Kind::GaussianEnvelope;
        spec.amplitude = mat_from_json(e.at("amplitude"), spec.dimension);
        spec.center = e.at("center").get<double>();
        spec.width = e.at("width").get<double>();
        spec.cutoff = e.at("cutoff").get<double>();
    } else if (kind == "sampled-table") {
        spec.kind = PotentialSpec::Kind::SampledTable;
        spec.nodes = e.at("nodes").get<std::vector<double>>();
        for (const auto& v : e.at("values")) spec.samples.push_back(mat_from_json(v, spec.dimension));
    } else if (kind == "product") {
        spec.kind = PotentialSpec::Kind::Product;
        spec.transverse = profile_from_json_obj(e.at("transverse"));
        spec.longitudinal.push_back(potential_from_json_obj(e.at("longitudinal")));
    } else {
        throw ConfigError("config: unknown potential kind '" + kind + "'");
    }
    spec.validate();
    return spec;
}

ordered_json parse_json_text(const std::string& text) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        throw ConfigError(std::string("config: ") + err.what());
    }
}

}  // namespace

PotentialSpec potential_from_json(const std::string& json_text) {
    return potential_from_json_obj(parse_json_text(json_text));
}

std::string potential_to_json(const PotentialSpec& spec) {
    return potential_to_json_obj(spec).dump(2);
}

ScalarProfile profile_from_json(const std::string& json_text) {
    return profile_from_json_obj(parse_json_text(json_text));
}

std::string profile_to_json(const ScalarProfile& profile) {
    return profile_to_json_obj(profile).dump(2);
}

}  // namespace diracbs
