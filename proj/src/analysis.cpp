#include "stolfv/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "stolfv/errors.hpp"

namespace stolfv {

namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw InvalidArgument(std::string(what) + ": expected " + std::to_string(want) + " entries, got " +
                              std::to_string(got));
    }
}

bool is_interior(const Mesh& mesh, const Interface& s) { return !s.boundary && s.right < mesh.num_cells(); }

}  // namespace

double norm_L2_P(const Mesh& mesh, const std::vector<double>& v) {
    require_size(v.size(), mesh.num_nodes(), "node vector");
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) s += mesh.node_volume(k) * v[k] * v[k];
    return std::sqrt(s);
}

double norm_L2pi_P(const Mesh& mesh, const std::vector<double>& pi, const std::vector<double>& v) {
    require_size(v.size(), mesh.num_nodes(), "node vector");
    require_size(pi.size(), mesh.num_nodes(), "pi vector");
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double m = mesh.node_volume(k);
        if (m > 0.0) s += m * v[k] * v[k] / pi[k];
    }
    return std::sqrt(s);
}

double norm_L2_E(const Mesh& mesh, const std::vector<double>& w) {
    const auto e = mesh.interfaces();
    require_size(w.size(), e.size(), "edge vector");
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) s += e[k].area * e[k].node_distance * w[k] * w[k];
    return std::sqrt(s);
}

double norm_L2S_E(const Mesh& mesh, const std::vector<double>& S, const std::vector<double>& w) {
    const auto e = mesh.interfaces();
    require_size(w.size(), e.size(), "edge vector");
    require_size(S.size(), e.size(), "edge weights");
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) s += e[k].area * e[k].node_distance * w[k] * w[k] / S[k];
    return std::sqrt(s);
}

std::vector<double> discrete_flux(const DiscreteSystem& system, const std::vector<double>& U) {
    const Mesh& mesh = *system.mesh;
    require_size(U.size(), mesh.num_nodes(), "node vector");
    const auto e = mesh.interfaces();
    std::vector<double> J(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) {
        J[k] = -system.kappa_ij[k] / e[k].node_distance * system.S[k] * (U[e[k].right] - U[e[k].left]);
    }
    return J;
}

std::vector<double> reference_flux_on_edges(const Mesh& mesh, const ReferenceSolution& ref) {
    if (mesh.dim() != 1) throw InvalidArgument("reference fluxes need a 1D mesh");
    const auto e = mesh.interfaces();
    std::vector<double> J(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) J[k] = ref.J_at(e[k].midpoint[0]) * e[k].normal[0];
    return J;
}

ErrorReport error_report(const DiscreteSystem& system, const std::vector<double>& U, const ReferenceSolution& ref) {
    const Mesh& mesh = *system.mesh;
    require_size(U.size(), mesh.num_nodes(), "node vector");
    const std::size_t n_nodes = mesh.num_nodes();
    const std::vector<double> u = to_density(system, U);

    std::vector<double> du(n_nodes, 0.0), dU(n_nodes, 0.0);
    for (std::size_t k = 0; k < n_nodes; ++k) {
        const double uref = ref.u_at(mesh.node(k)[0]);
        dU[k] = U[k] - uref / system.pi[k];
        if (system.unknown_of_node[k] != kNoUnknown) du[k] = u[k] - uref;
    }

    const auto e = mesh.interfaces();
    const std::vector<double> J = discrete_flux(system, U);
    const std::vector<double> Jref = reference_flux_on_edges(mesh, ref);
    std::vector<double> dJ(e.size(), 0.0);
    double ht = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (is_interior(mesh, e[k])) dJ[k] = J[k] - Jref[k];
        const double d = dU[e[k].right] - dU[e[k].left];
        ht += system.transmissibility[k] * d * d;
    }

    ErrorReport rep;
    rep.err_u_L2 = norm_L2_P(mesh, du);
    rep.err_u_L2pi = norm_L2pi_P(mesh, system.pi, du);
    rep.err_flux_L2 = norm_L2_E(mesh, dJ);
    rep.err_flux_L2S = norm_L2S_E(mesh, system.S, dJ);
    rep.err_HT = std::sqrt(ht);
    rep.h = mesh.diameter();
    rep.n = mesh.num_cells();
    rep.mean = system.mean;
    return rep;
}

double fit_eoc(const std::vector<double>& h, const std::vector<double>& err) {
    if (h.size() != err.size()) throw InvalidArgument("fit_eoc: h and error lists differ in length");
    if (h.size() < 3) throw InvalidArgument("fit_eoc needs at least 3 levels");
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (!(h[k] > 0.0) || !(err[k] > 0.0)) throw InvalidArgument("fit_eoc needs positive h and errors");
        mx += std::log(h[k]);
        my += std::log(err[k]);
    }
    mx /= static_cast<double>(h.size());
    my /= static_cast<double>(h.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        const double dx = std::log(h[k]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(err[k]) - my);
    }
    if (!(sxx > 1e-24)) throw InvalidArgument("fit_eoc: mesh sizes are not distinct");
    return sxy / sxx;
}

ConvergenceTable make_convergence_table(std::vector<ErrorReport> rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const ErrorReport& a, const ErrorReport& b) { return a.h > b.h; });
    ConvergenceTable t;
    t.rows = std::move(rows);
    std::vector<double> h, eu, ej;
    for (const auto& r : t.rows) {
        h.push_back(r.h);
        eu.push_back(r.err_u_L2);
        ej.push_back(r.err_flux_L2);
    }
    t.eoc_u = fit_eoc(h, eu);
    t.eoc_flux = fit_eoc(h, ej);
    return t;
}

SchemeComparison compare_schemes(const DiscreteSystem& a, const DiscreteSystem& b, const std::vector<double>& U_a,
                                 const std::vector<double>& U_b, const MeanSpec& hat) {
    if (a.mesh != b.mesh && (a.mesh->num_nodes() != b.mesh->num_nodes() ||
                             a.mesh->interfaces().size() != b.mesh->interfaces().size())) {
        throw InvalidArgument("compare_schemes: systems live on different meshes");
    }
    const Mesh& mesh = *a.mesh;
    const std::vector<double> Ja = discrete_flux(a, U_a);
    const std::vector<double> Jb = discrete_flux(b, U_b);
    const auto e = mesh.interfaces();
    double gap = 0.0, norm_a = 0.0, norm_b = 0.0, rho_a = 0.0, rho_b = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k) {
        const double w = e[k].area * e[k].node_distance;
        const double Sh = std::exp(log_stolarsky(hat, a.log_pi[e[k].left], a.log_pi[e[k].right]));
        const double d = Ja[k] - Jb[k];
        gap += w * d * d / Sh;
        norm_a += w * Ja[k] * Ja[k] / a.S[k];
        norm_b += w * Jb[k] * Jb[k] / b.S[k];
        rho_a = std::max(rho_a, (Sh - a.S[k]) * (Sh - a.S[k]) / (Sh * a.S[k]));
        rho_b = std::max(rho_b, (Sh - b.S[k]) * (Sh - b.S[k]) / (Sh * b.S[k]));
    }
    const double kmax = std::max(a.kappa_max, b.kappa_max);
    const double kmin = std::min(a.kappa_min, b.kappa_min);
    SchemeComparison out;
    out.flux_gap = std::sqrt(gap);
    out.bound_rhs = 2.0 * kmax / kmin * (rho_a * norm_a + rho_b * norm_b);
    return out;
}

double consistency_estimator(const Problem& problem, const Mesh& mesh, const MeanSpec& mean, const SmoothField& U) {
    if (!U.value || !U.gradient) throw InvalidArgument("consistency_estimator needs value and gradient");
    const int dim = mesh.dim();
    static constexpr double kNode = 0.57735026918962576451;
    std::vector<double> kbar(mesh.num_cells());
    for (std::size_t c = 0; c < kbar.size(); ++c) {
        const Cell& cell = mesh.cells()[c];
        kbar[c] = cell_integral(problem.kappa, cell, dim) / cell.volume;
    }
    auto V = [&](const Point& p) { return problem.V(p); };
    double sum = 0.0;
    for (const Interface& s : mesh.interfaces()) {
        if (!is_interior(mesh, s)) continue;
        const Point& xi = mesh.node(s.left);
        const Point& xj = mesh.node(s.right);
        const double kij = kappa_edge(kbar[s.left], kbar[s.right], s.sub_distances[0], s.sub_distances[1]);
        const double Sij = std::exp(log_stolarsky(mean, -V(xi), -V(xj)));

        int axis = 0;
        for (int k = 1; k < dim; ++k) {
            if (std::abs(s.normal[k]) > std::abs(s.normal[axis])) axis = k;
        }
        const Cell& ci = mesh.cells()[s.left];
        const Cell& cj = mesh.cells()[s.right];
        double face = 0.0;
        const int points = 1 << (dim - 1);
        for (int q = 0; q < points; ++q) {
            Point p = s.midpoint;
            int bit = 0;
            for (int k = 0; k < dim; ++k) {
                if (k == axis) continue;
                const double lo = std::max(ci.lo[k], cj.lo[k]);
                const double hi = std::min(ci.hi[k], cj.hi[k]);
                p[k] = 0.5 * (lo + hi) + ((q >> bit) & 1 ? kNode : -kNode) * 0.5 * (hi - lo);
                ++bit;
            }
            const Point g = U.gradient(p);
            double dn = 0.0;
            for (int k = 0; k < dim; ++k) dn += g[k] * s.normal[k];
            face += problem.kappa(p) * std::exp(-V(p)) * dn;
        }
        face *= s.area / points;
        const double discrete = kij * Sij * s.area / s.node_distance * (U.value(xj) - U.value(xi));
        const double diff = face - discrete;
        sum += s.node_distance / s.area / (kij * Sij) * diff * diff;
    }
    return std::sqrt(sum);
}

double poincare_constant(const Mesh& mesh) {
    const std::size_t n = mesh.num_nodes();
    double h_inf = std::numeric_limits<double>::infinity();
    double h_sup = 0.0;
    if (mesh.dim() == 1) {
        std::vector<double> x(n);
        for (std::size_t k = 0; k < n; ++k) x[k] = mesh.node(k)[0];
        std::sort(x.begin(), x.end());
        for (std::size_t k = 1; k < n; ++k) h_inf = std::min(h_inf, x[k] - x[k - 1]);
        h_sup = x.back() - x.front();
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double d = distance(mesh.node(i), mesh.node(j));
                h_inf = std::min(h_inf, d);
                h_sup = std::max(h_sup, d);
            }
        }
    }
    if (!(h_inf > 0.0)) throw InvalidMesh("coincident nodes");
    const double diam = mesh.domain().diameter();
    return diam * diam * h_sup / h_inf;
}

double edge_difference_energy(const Mesh& mesh, const std::vector<double>& u) {
    require_size(u.size(), mesh.num_nodes(), "node vector");
    double s = 0.0;
    for (const Interface& e : mesh.interfaces()) {
        const double d = u[e.right] - u[e.left];
        s += e.area * d * d;
    }
    return s;
}

AprioriCheck apriori_check(const DiscreteSystem& system, const std::vector<double>& U) {
    const Mesh& mesh = *system.mesh;
    require_size(U.size(), mesh.num_nodes(), "node vector");
    for (std::size_t k = 0; k < U.size(); ++k) {
        if (system.unknown_of_node[k] == kNoUnknown && system.dirichlet_U[k] != 0.0) {
            throw InvalidArgument("a priori estimate needs homogeneous Dirichlet data");
        }
    }
    const auto e = mesh.interfaces();
    AprioriCheck out;
    const std::vector<double> J = discrete_flux(system, U);
    double kmax_edge = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k) {
        const double d = U[e[k].right] - U[e[k].left];
        out.energy += system.transmissibility[k] * d * d;
        out.flux += e[k].area * e[k].node_distance * J[k] * J[k] / system.S[k];
        kmax_edge = std::max(kmax_edge, e[k].node_distance / (system.kappa_ij[k] * system.S[k]));
    }
    out.flux /= system.kappa_max;
    double pi_max = 0.0, f2 = 0.0;
    for (std::size_t r = 0; r < system.num_unknowns(); ++r) {
        const std::size_t i = system.node_of_unknown[r];
        const double m = mesh.node_volume(i);
        const double fbar = system.source[i] / m;
        pi_max = std::max(pi_max, system.pi[i]);
        f2 += m * fbar * fbar / system.pi[i];
    }
    out.constant = pi_max * poincare_constant(mesh) * kmax_edge;
    out.bound = out.constant * f2;
    return out;
}

}  // namespace stolfv
