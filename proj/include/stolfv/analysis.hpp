#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "stolfv/assembly.hpp"
#include "stolfv/reference.hpp"

namespace stolfv {

// Discrete norms. Node vectors have Mesh::num_nodes() entries (boundary
// points carry zero volume), edge vectors one entry per interface.
double norm_L2_P(const Mesh& mesh, const std::vector<double>& v);
double norm_L2pi_P(const Mesh& mesh, const std::vector<double>& pi, const std::vector<double>& v);
double norm_L2_E(const Mesh& mesh, const std::vector<double>& w);
double norm_L2S_E(const Mesh& mesh, const std::vector<double>& S, const std::vector<double>& w);

/// J_ij = -(kappa_ij / h_ij) S_ij (U_j - U_i), oriented along the interface normal.
std::vector<double> discrete_flux(const DiscreteSystem& system, const std::vector<double>& U);

/// Reference flux J_ref . nu at each interface point (1D meshes).
std::vector<double> reference_flux_on_edges(const Mesh& mesh, const ReferenceSolution& ref);

struct ErrorReport {
    double err_u_L2 = 0.0;
    double err_u_L2pi = 0.0;
    double err_flux_L2 = 0.0;
    double err_flux_L2S = 0.0;
    double err_HT = 0.0;
    double h = 0.0;
    std::size_t n = 0;
    MeanSpec mean;
};

/// U is the discrete solution on all nodes. u errors use unknown nodes, flux
/// errors the interfaces between two cells.
ErrorReport error_report(const DiscreteSystem& system, const std::vector<double>& U, const ReferenceSolution& ref);

/// Least-squares slope of log(err) against log(h).
double fit_eoc(const std::vector<double>& h, const std::vector<double>& err);

struct ConvergenceTable {
    std::vector<ErrorReport> rows;  // ordered by decreasing h
    double eoc_u = 0.0;
    double eoc_flux = 0.0;
};

ConvergenceTable make_convergence_table(std::vector<ErrorReport> rows);

struct SchemeComparison {
    double flux_gap = 0.0;   // ||J^S U - J^~S ~U|| in L^2 weighted by the hat mean
    double bound_rhs = 0.0;  // admissible value of flux_gap^2
};

SchemeComparison compare_schemes(const DiscreteSystem& a, const DiscreteSystem& b, const std::vector<double>& U_a,
                                 const std::vector<double>& U_b, const MeanSpec& hat);

struct SmoothField {
    std::function<double(const Point&)> value;
    std::function<Point(const Point&)> gradient;
};

/// Dual-norm bound of the consistency error of U over the interfaces between
/// two cells; face integrals use 2-point Gauss per tangential axis.
double consistency_estimator(const Problem& problem, const Mesh& mesh, const MeanSpec& mean, const SmoothField& U);

/// (diam Omega)^2 h_sup / h_inf with h_inf, h_sup the extreme node distances.
double poincare_constant(const Mesh& mesh);

/// sum over interfaces of m_ij (u_j - u_i)^2 for u on all nodes.
double edge_difference_energy(const Mesh& mesh, const std::vector<double>& u);

struct AprioriCheck {
    double energy = 0.0;  // sum (m/h) kappa S (dU)^2
    double flux = 0.0;    // ||J^S U||^2_{L^2_S} / kappa_max
    double bound = 0.0;   // C ||f_bar||^2_{L^2_pi}
    double constant = 0.0;
};

/// Evaluates the a priori estimate for a system with homogeneous Dirichlet data.
AprioriCheck apriori_check(const DiscreteSystem& system, const std::vector<double>& U);

}  // namespace stolfv
