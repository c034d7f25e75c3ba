#include "stolfv/gradientflow.hpp"

#include <cmath>

#include "stolfv/errors.hpp"

namespace stolfv {

namespace {

void check_sizes(const Mesh& mesh, std::size_t n) {
    if (n != mesh.num_nodes()) throw InvalidArgument("node vector length does not match the mesh");
}

}  // namespace

double energy(const Mesh& mesh, const std::vector<double>& u, const std::vector<double>& pi) {
    check_sizes(mesh, u.size());
    check_sizes(mesh, pi.size());
    double e = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double m = mesh.node_volume(k);
        if (m == 0.0) continue;
        if (!(u[k] > 0.0) || !(pi[k] > 0.0)) throw DomainError("energy needs positive u and pi");
        e += m * (u[k] * std::log(u[k] / pi[k]) - u[k] + 1.0);
    }
    return e;
}

double cosh_dissipation(const Mesh& mesh, const std::vector<double>& kappa_ij, const std::vector<double>& u,
                        const std::vector<double>& xi) {
    check_sizes(mesh, u.size());
    check_sizes(mesh, xi.size());
    const auto e = mesh.interfaces();
    if (kappa_ij.size() != e.size()) throw InvalidArgument("kappa_ij length does not match the interfaces");
    double s = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k) {
        const double ui = u[e[k].left], uj = u[e[k].right];
        if (!(ui > 0.0) || !(uj > 0.0)) throw DomainError("dissipation needs positive u");
        const double r = xi[e[k].left] - xi[e[k].right];
        const double c = 4.0 * std::sinh(0.25 * r) * std::sinh(0.25 * r);  // 2 (cosh(r/2) - 1)
        s += 2.0 * kappa_ij[k] * e[k].area / e[k].node_distance * std::sqrt(ui * uj) * c;
    }
    return s;
}

double kinetic_coefficient(double u_i, double u_j, double pi_i, double pi_j) {
    if (!(u_i > 0.0) || !(u_j > 0.0) || !(pi_i > 0.0) || !(pi_j > 0.0)) {
        throw DomainError("kinetic coefficient needs positive arguments");
    }
    return std::sqrt(u_i / pi_i) * std::sqrt(u_j / pi_j);
}

}  // namespace stolfv
