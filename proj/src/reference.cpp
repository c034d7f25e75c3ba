#include "stolfv/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stolfv/errors.hpp"

namespace stolfv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kDerivStep = 1e-6;

double eval_field(const ScalarField& g, const char* name, double x) {
    if (!g) throw ConfigError(std::string("problem field ") + name + " is not set");
    double v = 0.0;
    try {
        v = g(Point{x, 0.0, 0.0});
    } catch (const Error& e) {
        throw ProblemEvaluationError(std::string(name) + " failed at x = " + std::to_string(x) + ": " + e.what());
    }
    if (!std::isfinite(v)) throw ProblemEvaluationError(std::string(name) + " is not finite at x = " + std::to_string(x));
    return v;
}

double interpolate(const std::vector<double>& grid, const std::vector<double>& values, double t) {
    const std::size_t n = grid.size();
    const double a = grid.front();
    const double b = grid.back();
    const double step = (b - a) / static_cast<double>(n - 1);
    if (t < a - 1e-12 * (b - a) || t > b + 1e-12 * (b - a)) {
        throw InvalidArgument("point " + std::to_string(t) + " outside the reference grid");
    }
    const double s = (t - a) / step;
    long k = static_cast<long>(std::floor(s)) - 1;
    k = std::clamp(k, 0L, static_cast<long>(n) - 4);
    double acc = 0.0;
    for (int p = 0; p < 4; ++p) {
        double w = 1.0;
        for (int q = 0; q < 4; ++q) {
            if (q != p) w *= (s - static_cast<double>(k + q)) / static_cast<double>(p - q);
        }
        acc += w * values[k + p];
    }
    return acc;
}

void kahan_add(double& sum, double& comp, double term) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
}

double bernoulli(double z) { return z == 0.0 ? 1.0 : z / std::expm1(z); }

constexpr double kGl4Nodes[4] = {-0.86113631159405257522, -0.33998104358485626480, 0.33998104358485626480,
                                 0.86113631159405257522};
constexpr double kGl4Weights[4] = {0.34785484513745385737, 0.65214515486254614263, 0.65214515486254614263,
                                   0.34785484513745385737};

}  // namespace

double ReferenceSolution::u_at(double t) const { return interpolate(x, u, t); }
double ReferenceSolution::J_at(double t) const { return interpolate(x, J, t); }

BrentResult brent(const std::function<double(double)>& g, double lo, double hi, double ftol, double xtol,
                  int max_iter) {
    double a = lo, b = hi;
    double fa = g(a), fb = g(b);
    if (!std::isfinite(fa) || !std::isfinite(fb)) throw DomainError("function not finite at the bracket ends");
    BrentResult res;
    if (std::abs(fa) <= ftol) return {a, std::abs(fa), 0};
    if (std::abs(fb) <= ftol) return {b, std::abs(fb), 0};
    if ((fa > 0) == (fb > 0)) throw DomainError("bracket does not enclose a sign change");
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0;; ++iter) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || std::abs(fb) <= ftol || fb == 0.0 || iter >= max_iter) {
            res.root = b;
            res.residual = std::abs(fb);
            res.iterations = iter;
            return res;
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // Inverse quadratic interpolation, or secant when only two points are distinct.
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
        fb = g(b);
        if (!std::isfinite(fb)) throw DomainError("function not finite inside the bracket");
    }
}

double brent_root(const std::function<double(double)>& g, double lo, double hi, double tol, int max_iter) {
    return brent(g, lo, hi, tol, tol, max_iter).root;
}

ReferenceSolution shoot_reference(const Problem& problem, int n_grid, double tol) {
    if (problem.domain.dim != 1) throw InvalidArgument("shooting reference needs a 1D problem");
    if (n_grid < 1000) throw InvalidArgument("reference grid needs at least 1000 nodes");
    if (!(tol > 0.0)) throw InvalidArgument("shooting tolerance must be positive");
    const double a = problem.domain.lo[0];
    const double b = problem.domain.hi[0];
    const std::size_t n = static_cast<std::size_t>(n_grid);
    const double step = (b - a) / static_cast<double>(n - 1);
    const double ua = eval_field(problem.dirichlet, "dirichlet", a);
    const double ub = eval_field(problem.dirichlet, "dirichlet", b);

    // Field samples at grid nodes and midpoints: index m <-> a + m step / 2.
    const std::size_t n_half = 2 * (n - 1) + 1;
    std::vector<double> inv_kappa(n_half), dV(n_half), src(n_half);
    double kappa_max = 0.0, v_max = -std::numeric_limits<double>::infinity(), v_min = -v_max;
    for (std::size_t m = 0; m < n_half; ++m) {
        const double t = m + 1 == n_half ? b : a + 0.5 * step * static_cast<double>(m);
        const double k = eval_field(problem.kappa, "kappa", t);
        if (!(k > 0.0)) throw ProblemEvaluationError("kappa is not positive at x = " + std::to_string(t));
        const double v = eval_field(problem.V, "V", t);
        kappa_max = std::max(kappa_max, k);
        v_max = std::max(v_max, v);
        v_min = std::min(v_min, v);
        inv_kappa[m] = 1.0 / k;
        // Divide by the spacing actually represented, not 2 * kDerivStep.
        const double tp = t + kDerivStep, tm = t - kDerivStep;
        dV[m] = (eval_field(problem.V, "V", tp) - eval_field(problem.V, "V", tm)) / (tp - tm);
        src[m] = eval_field(problem.f, "f", t);
    }

    auto integrate = [&](double J0, std::vector<double>* u_out, std::vector<double>* J_out) {
        double u = ua, J = J0;
        double cu = 0.0, cJ = 0.0;  // compensation terms; the grid can have 10^5+ steps
        if (u_out) {
            u_out->assign(n, 0.0);
            J_out->assign(n, 0.0);
            (*u_out)[0] = u;
            (*J_out)[0] = J;
        }
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const std::size_t m = 2 * k;
            const double k1u = -J * inv_kappa[m] - u * dV[m];
            const double k1J = src[m];
            const double u2 = u + 0.5 * step * k1u, J2 = J + 0.5 * step * k1J;
            const double k2u = -J2 * inv_kappa[m + 1] - u2 * dV[m + 1];
            const double k2J = src[m + 1];
            const double u3 = u + 0.5 * step * k2u, J3 = J + 0.5 * step * k2J;
            const double k3u = -J3 * inv_kappa[m + 1] - u3 * dV[m + 1];
            const double k3J = src[m + 1];
            const double u4 = u + step * k3u, J4 = J + step * k3J;
            const double k4u = -J4 * inv_kappa[m + 2] - u4 * dV[m + 2];
            const double k4J = src[m + 2];
            kahan_add(u, cu, step / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u));
            kahan_add(J, cJ, step / 6.0 * (k1J + 2.0 * k2J + 2.0 * k3J + k4J));
            if (u_out) {
                (*u_out)[k + 1] = u;
                (*J_out)[k + 1] = J;
            }
        }
        return u;
    };
    auto mismatch = [&](double J0) { return integrate(J0, nullptr, nullptr) - ub; };

    double M = kappa_max * (std::abs(ua) + std::abs(ub)) / (b - a) * std::exp(v_max - v_min);
    if (!(M > 0.0) || !std::isfinite(M)) M = 1.0;
    double g_lo = mismatch(-M), g_hi = mismatch(M);
    for (int k = 0; k < 60 && (g_lo > 0) == (g_hi > 0) && std::abs(g_lo) > tol && std::abs(g_hi) > tol; ++k) {
        M *= 2.0;
        g_lo = mismatch(-M);
        g_hi = mismatch(M);
    }
    if ((g_lo > 0) == (g_hi > 0) && std::abs(g_lo) > tol && std::abs(g_hi) > tol) {
        throw OracleFailure("no sign change found for the shooting parameter");
    }
    const BrentResult root = brent(mismatch, -M, M, tol, 0.0);

    ReferenceSolution ref;
    ref.x.resize(n);
    for (std::size_t k = 0; k < n; ++k) ref.x[k] = a + step * static_cast<double>(k);
    ref.x.back() = b;
    const double u_end = integrate(root.root, &ref.u, &ref.J);
    ref.shoot_parameter = root.root;
    ref.boundary_residual = std::abs(u_end - ub);
    ref.brent_iterations = root.iterations;
    return ref;
}

double edge_flux_exact(double kappa, double h, double q, double u0, double uh) {
    if (!(h > 0.0) || !(kappa > 0.0)) throw InvalidArgument("edge flux needs h > 0 and kappa > 0");
    return kappa / h * (u0 * bernoulli(-q * h) - uh * bernoulli(q * h));
}

double pi_mean_quadrature(const std::function<double(double)>& V, double h, int n_quad) {
    if (!(h > 0.0)) throw InvalidArgument("edge length must be positive");
    if (n_quad < 8) throw InvalidArgument("pi_mean_quadrature needs at least 8 panels");
    const double w = h / n_quad;
    double acc = 0.0;
    for (int p = 0; p < n_quad; ++p) {
        const double mid = (p + 0.5) * w;
        for (int q = 0; q < 4; ++q) acc += kGl4Weights[q] * std::exp(V(mid + 0.5 * w * kGl4Nodes[q]));
    }
    const double mean = 0.5 * w * acc / h;
    return 1.0 / mean;
}

double SqraPotential::operator()(double x) const {
    if (x <= x1) return x1 > 0.0 ? V0 + (Vc - V0) * x / x1 : Vc;
    if (x <= x2) return Vc;
    return x2 < h ? Vc + (Vh - Vc) * (x - x2) / (h - x2) : Vc;
}

double SqraPotential::gap_to_affine() const {
    auto affine = [&](double x) { return V0 + (Vh - V0) * x / h; };
    return std::max(std::abs(Vc - affine(x1)), std::abs(Vc - affine(x2)));
}

SqraPotential sqra_potential_construct(double V0, double Vh, double h) {
    if (!(h > 0.0)) throw InvalidArgument("edge length must be positive");
    if (!std::isfinite(V0) || !std::isfinite(Vh)) throw InvalidArgument("potential values must be finite");
    const double c = 0.5 * (Vh - V0);
    // beta = (c - 1 + e^{-c}) / (2 sinh(c/2))^2 is the relative length of the
    // right ramp when both ramps meet (alpha + beta = 1).
    double beta;
    if (std::abs(c) < 1e-2) {
        const double c2 = c * c;
        const double num = 0.5 - c / 6 + c2 / 24 - c * c2 / 120 + c2 * c2 / 720 - c2 * c2 * c / 5040;
        const double den = 1.0 + c2 / 12 + c2 * c2 / 360;
        beta = num / den;
    } else {
        const double s = 2.0 * std::sinh(0.5 * c);
        beta = (c + std::expm1(-c)) / (s * s);
    }
    const double alpha = 1.0 - beta;
    SqraPotential pot;
    pot.h = h;
    pot.V0 = V0;
    pot.Vh = Vh;
    pot.Vc = 0.5 * (V0 + Vh);
    pot.x1 = alpha * h;
    pot.x2 = (1.0 - beta) * h;
    pot.lambda = alpha / beta;
    return pot;
}

}  // namespace stolfv
