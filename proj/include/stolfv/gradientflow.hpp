#pragma once

#include <vector>

#include "stolfv/mesh.hpp"

namespace stolfv {

/// E(u) = sum_i m_i (u_i log(u_i / pi_i) - u_i + 1); node vectors, boundary
/// points contribute nothing.
double energy(const Mesh& mesh, const std::vector<double>& u, const std::vector<double>& pi);

/// sum_i sum_{j~i} kappa_ij m_ij h_ij sqrt(u_i u_j) / h_ij^2 * 2 (cosh((xi_i - xi_j)/2) - 1).
/// Every interface is visited from both ends, so it contributes twice.
double cosh_dissipation(const Mesh& mesh, const std::vector<double>& kappa_ij, const std::vector<double>& u,
                        const std::vector<double>& xi);

/// a_ij = sqrt(u_i u_j / (pi_i pi_j)).
double kinetic_coefficient(double u_i, double u_j, double pi_i, double pi_j);

}  // namespace stolfv
