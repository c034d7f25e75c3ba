#pragma once

#include <string>
#include <string_view>

namespace stolfv {

enum class NamedMean {
    Max,
    Quadratic,
    Arithmetic,
    Logarithmic,
    Geometric,
    ScharfetterGummel,
    Harmonic,
    Min,
};

/// Interface mean: a named member of the Stolarsky family or a general
/// (alpha, beta) pair.
class MeanSpec {
public:
    static MeanSpec named(NamedMean m);
    static MeanSpec general(double alpha, double beta);

    bool is_named() const { return named_; }
    NamedMean name() const { return name_; }
    /// Parameters; +/-infinity for Max/Min.
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    bool finite() const;

    /// CLI spelling: "sg", "general:3.2,1", ...
    std::string label() const;

    friend bool operator==(const MeanSpec& a, const MeanSpec& b);

private:
    bool named_ = false;
    NamedMean name_ = NamedMean::Geometric;
    double alpha_ = -1.0;
    double beta_ = 1.0;
};

/// Parses max, quadratic, arithmetic, logarithmic, geometric|sqra,
/// scharfetter-gummel|sg, harmonic, min, general:ALPHA,BETA.
MeanSpec parse_mean(std::string_view text);

/// S_{alpha,beta}(x, y) for x, y > 0.
double stolarsky(const MeanSpec& spec, double x, double y);

/// log S(exp(lx), exp(ly)); usable far outside the double range of x and y.
double log_stolarsky(const MeanSpec& spec, double lx, double ly);

/// B(x) = S(1, e^{-x}).
double weight_B(const MeanSpec& spec, double x);

/// d^2/dx^2 S(x, y) at y = x, i.e. (alpha + beta - 3) / (12 x).
double diag_second_derivative(const MeanSpec& spec, double x);

/// Coefficient c in S(x,y) = m + c (x-y)^2 / m + ..., m = (x+y)/2.
double mean_expansion_coefficient(const MeanSpec& spec);

}  // namespace stolfv
