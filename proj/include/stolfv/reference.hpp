#pragma once

#include <functional>
#include <vector>

#include "stolfv/assembly.hpp"

namespace stolfv {

/// Fine-grid 1D reference solution from shooting. u and J live on a uniform
/// grid; J = -kappa (u' + u V').
struct ReferenceSolution {
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> J;
    double shoot_parameter = 0.0;    // J(a)
    double boundary_residual = 0.0;  // |u(b) - u_b|
    int brent_iterations = 0;

    double a() const { return x.front(); }
    double b() const { return x.back(); }
    /// Cubic (4-point Lagrange) interpolation on the grid.
    double u_at(double t) const;
    double J_at(double t) const;
};

struct BrentResult {
    double root = 0.0;
    double residual = 0.0;  // |g(root)|
    int iterations = 0;
};

/// Brent's zero finder; stops when |g| <= ftol or the bracket is narrower than
/// xtol (plus a few ulps of the iterate).
BrentResult brent(const std::function<double(double)>& g, double lo, double hi, double ftol, double xtol,
                  int max_iter = 200);

/// brent with the same tolerance on |g| and the bracket width.
double brent_root(const std::function<double(double)>& g, double lo, double hi, double tol, int max_iter = 200);

constexpr int kDefaultReferenceNodes = 136474;
constexpr double kDefaultReferenceTol = 1e-12;

/// Shooting with classical RK4 on n_grid nodes and Brent on the initial flux.
ReferenceSolution shoot_reference(const Problem& problem, int n_grid = kDefaultReferenceNodes,
                                  double tol = kDefaultReferenceTol);

/// Exact constant flux of -(kappa (u' - q u))' = 0 on [0,h] with u(0) = u0,
/// u(h) = uh, i.e. the flux for the affine potential V = -q x.
double edge_flux_exact(double kappa, double h, double q, double u0, double uh);

/// ((1/h) int_0^h e^{V})^{-1} by composite 4-point Gauss-Legendre on n_quad panels.
double pi_mean_quadrature(const std::function<double(double)>& V, double h, int n_quad);

/// Continuous piecewise linear potential on [0,h] through V0 and Vh whose
/// edge mean ((1/h) int e^{V})^{-1} equals the geometric mean of e^{-V0}, e^{-Vh}.
struct SqraPotential {
    double h = 1.0;
    double V0 = 0.0;
    double Vh = 0.0;
    double Vc = 0.0;
    double x1 = 0.5;
    double x2 = 0.5;
    double lambda = 1.0;  // x1 / (h - x2)

    double operator()(double x) const;
    /// Sup distance to the affine interpolant of V0, Vh.
    double gap_to_affine() const;
};

SqraPotential sqra_potential_construct(double V0, double Vh, double h);

}  // namespace stolfv
