#include "stolfv/means.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "stolfv/errors.hpp"

namespace stolfv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;
constexpr double kSeriesRadius = 0.1;

struct NamedEntry {
    NamedMean mean;
    double alpha;
    double beta;
    const char* label;
};

constexpr std::array<NamedEntry, 8> kNamed{{
    {NamedMean::Max, kInf, 1.0, "max"},
    {NamedMean::Quadratic, 4.0, 2.0, "quadratic"},
    {NamedMean::Arithmetic, 2.0, 1.0, "arithmetic"},
    {NamedMean::Logarithmic, 0.0, 1.0, "logarithmic"},
    {NamedMean::Geometric, -1.0, 1.0, "geometric"},
    {NamedMean::ScharfetterGummel, 0.0, -1.0, "sg"},
    {NamedMean::Harmonic, -2.0, -1.0, "harmonic"},
    {NamedMean::Min, -kInf, 1.0, "min"},
}};

const NamedEntry& entry(NamedMean m) {
    for (const auto& e : kNamed) {
        if (e.mean == m) return e;
    }
    throw InvalidArgument("unknown named mean");
}

// G(z) = log((e^z - 1) / z), G(0) = 0.
double log_expm1_ratio(double z) {
    if (std::abs(z) < kSeriesRadius) {
        const double z2 = z * z;
        return z / 2 + z2 * (1.0 / 24 + z2 * (-1.0 / 2880 + z2 * (1.0 / 181440 + z2 * (-1.0 / 9676800 + z2 / 479001600))));
    }
    if (z > 0) return z + std::log(std::expm1(-z) / -z);
    return std::log(std::expm1(z) / z);
}

// G'(z).
double log_expm1_ratio_deriv(double z) {
    if (std::abs(z) < kSeriesRadius) {
        const double z2 = z * z;
        return 0.5 + z * (1.0 / 12 + z2 * (-1.0 / 720 + z2 * (1.0 / 30240 + z2 * (-1.0 / 1209600 + z2 / 47900160))));
    }
    return -1.0 / std::expm1(-z) - 1.0 / z;
}

constexpr std::array<double, 8> kGaussNodes{
    -0.96028985649753623168, -0.79666647741362673959, -0.52553240991632898582, -0.18343464249564980494,
    0.18343464249564980494,  0.52553240991632898582,  0.79666647741362673959,  0.96028985649753623168};
constexpr std::array<double, 8> kGaussWeights{
    0.10122853629037625915, 0.22238103445337447054, 0.31370664587788728734, 0.36268378337836198297,
    0.36268378337836198297, 0.31370664587788728734, 0.22238103445337447054, 0.10122853629037625915};

// log S(e^t, 1) for t <= 0 and finite alpha, beta.
double log_ratio_general(double alpha, double beta, double t) {
    if (t == 0.0) return 0.0;
    if (std::abs(alpha - beta) * std::abs(t) <= 1.0) {
        // (G(alpha t) - G(beta t)) / (alpha - beta) as the mean of t G'(s t) over s in [beta, alpha].
        const double mid = 0.5 * (alpha + beta);
        const double half = 0.5 * (alpha - beta);
        double acc = 0.0;
        for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
            acc += kGaussWeights[k] * log_expm1_ratio_deriv((mid + half * kGaussNodes[k]) * t);
        }
        return 0.5 * t * acc;
    }
    return (log_expm1_ratio(alpha * t) - log_expm1_ratio(beta * t)) / (alpha - beta);
}

double log_ratio(const MeanSpec& spec, double t) {
    if (!spec.is_named()) return log_ratio_general(spec.alpha(), spec.beta(), t);
    switch (spec.name()) {
        case NamedMean::Max: return 0.0;
        case NamedMean::Min: return t;
        case NamedMean::Arithmetic: return std::log1p(std::exp(t)) - kLn2;
        case NamedMean::Geometric: return 0.5 * t;
        case NamedMean::Harmonic: return kLn2 + t - std::log1p(std::exp(t));
        case NamedMean::Quadratic: return 0.5 * (std::log1p(std::exp(2 * t)) - kLn2);
        case NamedMean::Logarithmic: return log_expm1_ratio(t);
        case NamedMean::ScharfetterGummel: return t - log_expm1_ratio(t);
    }
    throw InvalidArgument("unknown named mean");
}

double parse_double(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw InvalidArgument("malformed number in mean specification: '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

MeanSpec MeanSpec::named(NamedMean m) {
    const NamedEntry& e = entry(m);
    MeanSpec s;
    s.named_ = true;
    s.name_ = m;
    s.alpha_ = e.alpha;
    s.beta_ = e.beta;
    return s;
}

MeanSpec MeanSpec::general(double alpha, double beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
        throw InvalidArgument("general Stolarsky parameters must be finite");
    }
    MeanSpec s;
    s.alpha_ = alpha;
    s.beta_ = beta;
    return s;
}

bool MeanSpec::finite() const { return std::isfinite(alpha_) && std::isfinite(beta_); }

std::string MeanSpec::label() const {
    if (named_) return entry(name_).label;
    char buf[64];
    auto r1 = std::to_chars(buf, buf + sizeof buf, alpha_);
    std::string out = "general:" + std::string(buf, r1.ptr);
    auto r2 = std::to_chars(buf, buf + sizeof buf, beta_);
    return out + "," + std::string(buf, r2.ptr);
}

bool operator==(const MeanSpec& a, const MeanSpec& b) {
    if (a.named_ != b.named_) return false;
    if (a.named_) return a.name_ == b.name_;
    return a.alpha_ == b.alpha_ && a.beta_ == b.beta_;
}

MeanSpec parse_mean(std::string_view text) {
    if (text == "sqra") return MeanSpec::named(NamedMean::Geometric);
    if (text == "scharfetter-gummel") return MeanSpec::named(NamedMean::ScharfetterGummel);
    for (const auto& e : kNamed) {
        if (text == e.label) return MeanSpec::named(e.mean);
    }
    constexpr std::string_view prefix = "general:";
    if (text.substr(0, prefix.size()) == prefix) {
        const std::string_view rest = text.substr(prefix.size());
        const auto comma = rest.find(',');
        if (comma == std::string_view::npos) throw InvalidArgument("general mean needs ALPHA,BETA");
        return MeanSpec::general(parse_double(rest.substr(0, comma)), parse_double(rest.substr(comma + 1)));
    }
    throw InvalidArgument("unknown mean '" + std::string(text) + "'");
}

double log_stolarsky(const MeanSpec& spec, double lx, double ly) {
    if (std::isnan(lx) || std::isnan(ly)) throw DomainError("mean of NaN");
    const double lo = std::min(lx, ly);
    const double hi = std::max(lx, ly);
    if (lo == hi) return lo;
    if (std::isinf(lo) || std::isinf(hi)) throw DomainError("mean argument outside (0, inf)");
    const double r = hi + log_ratio(spec, lo - hi);
    return std::clamp(r, lo, hi);
}

double stolarsky(const MeanSpec& spec, double x, double y) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
        throw DomainError("Stolarsky mean requires positive finite arguments");
    }
    if (x == y) return x;
    if (spec.is_named() && spec.name() == NamedMean::Max) return std::max(x, y);
    if (spec.is_named() && spec.name() == NamedMean::Min) return std::min(x, y);
    const double s = std::exp(log_stolarsky(spec, std::log(x), std::log(y)));
    return std::clamp(s, std::min(x, y), std::max(x, y));
}

double weight_B(const MeanSpec& spec, double x) {
    if (std::isnan(x)) throw DomainError("weight of NaN");
    if (!spec.is_named()) return std::exp(log_stolarsky(spec, 0.0, -x));
    switch (spec.name()) {
        case NamedMean::ScharfetterGummel: return x == 0.0 ? 1.0 : x / std::expm1(x);
        case NamedMean::Geometric: return std::exp(-0.5 * x);
        case NamedMean::Harmonic: return 2.0 / (std::exp(x) + 1.0);
        case NamedMean::Arithmetic: return 0.5 * (1.0 + std::exp(-x));
        case NamedMean::Logarithmic: return x == 0.0 ? 1.0 : -std::expm1(-x) / x;
        case NamedMean::Quadratic: return x < 0 ? std::exp(-x) * std::sqrt(0.5 * (1.0 + std::exp(2 * x)))
                                                : std::sqrt(0.5 * (1.0 + std::exp(-2 * x)));
        case NamedMean::Max: return std::max(1.0, std::exp(-x));
        case NamedMean::Min: return std::min(1.0, std::exp(-x));
    }
    throw InvalidArgument("unknown named mean");
}

double diag_second_derivative(const MeanSpec& spec, double x) {
    if (!spec.finite()) throw Unsupported("second derivative undefined for min/max means");
    if (!(x > 0.0)) throw DomainError("second derivative requires x > 0");
    return (spec.alpha() + spec.beta() - 3.0) / (12.0 * x);
}

double mean_expansion_coefficient(const MeanSpec& spec) {
    if (!spec.finite()) throw Unsupported("expansion coefficient undefined for min/max means");
    return ((spec.alpha() + spec.beta()) / 3.0 - 1.0) / 8.0;
}

}  // namespace stolfv
