#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "stolfv/means.hpp"
#include "stolfv/mesh.hpp"

namespace stolfv {

using ScalarField = std::function<double(const Point&)>;

/// Stationary Fokker-Planck problem -div(kappa grad u) - div(kappa u grad V) = f
/// with Dirichlet data u = dirichlet on the boundary.
struct Problem {
    Box domain;
    ScalarField V;
    ScalarField f;
    ScalarField kappa;
    ScalarField dirichlet;
};

/// Compressed sparse row matrix.
struct CsrMatrix {
    std::size_t rows = 0;
    std::vector<std::size_t> row_ptr{0};
    std::vector<std::size_t> col;
    std::vector<double> val;

    std::vector<double> multiply(const std::vector<double>& x) const;
    double at(std::size_t i, std::size_t j) const;
};

constexpr std::size_t kNoUnknown = std::numeric_limits<std::size_t>::max();

/// The assembled scheme in the relative density U = u / pi. Node vectors are
/// indexed like Mesh nodes, interface vectors like Mesh::interfaces().
struct DiscreteSystem {
    std::shared_ptr<const Mesh> mesh;
    MeanSpec mean;
    std::vector<double> V;       // per node
    std::vector<double> log_pi;  // -V
    std::vector<double> pi;
    std::vector<double> kappa_cell;  // cell averages
    std::vector<double> kappa_ij;
    std::vector<double> S;
    std::vector<double> transmissibility;  // (m_ij / h_ij) kappa_ij S_ij
    std::vector<double> source;            // f_i = integral of f over cell i
    std::vector<double> dirichlet_U;       // NaN on unknown nodes
    std::vector<std::size_t> unknown_of_node;
    std::vector<std::size_t> node_of_unknown;
    CsrMatrix matrix;
    std::vector<double> rhs;
    double kappa_min = 0.0;
    double kappa_max = 0.0;

    std::size_t num_unknowns() const { return node_of_unknown.size(); }
};

/// Integral of g over a cell box with 2-point Gauss-Legendre per axis.
double cell_integral(const ScalarField& g, const Cell& cell, int dim);

/// Distance-weighted harmonic mean of two cell averages.
double kappa_edge(double kappa_i, double kappa_j, double d_i, double d_j);
double kappa_edge(const Problem& problem, const Mesh& mesh, const Interface& sigma);

DiscreteSystem assemble(const Problem& problem, std::shared_ptr<const Mesh> mesh, const MeanSpec& mean);

/// Unknown vector extended by the Dirichlet values to all nodes.
std::vector<double> expand_solution(const DiscreteSystem& system, const std::vector<double>& U_unknowns);

/// u_i = U_i pi_i.
std::vector<double> to_density(const DiscreteSystem& system, const std::vector<double>& U);

/// Row action sum_j (m_ij/h_ij) kappa_ij S_ij (U_i - U_j) for every unknown
/// node; U is given on all nodes.
std::vector<double> apply_operator_U_form(const DiscreteSystem& system, const std::vector<double>& U);

/// The same action written in u with the weights B(V_i - V_j); u on all nodes.
std::vector<double> apply_operator_u_form(const DiscreteSystem& system, const std::vector<double>& u);

}  // namespace stolfv
