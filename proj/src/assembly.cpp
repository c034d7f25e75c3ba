#include "stolfv/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stolfv/errors.hpp"

namespace stolfv {

namespace {

std::string point_text(const Point& p, int dim) {
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (int k = 0; k < dim; ++k) os << (k ? ", " : "") << p[k];
    os << ")";
    return os.str();
}

double sample(const ScalarField& g, const char* name, const Point& p, int dim) {
    if (!g) throw ConfigError(std::string("problem field ") + name + " is not set");
    double v = 0.0;
    try {
        v = g(p);
    } catch (const Error& e) {
        throw ProblemEvaluationError(std::string(name) + " failed at " + point_text(p, dim) + ": " + e.what());
    }
    if (!std::isfinite(v)) throw ProblemEvaluationError(std::string(name) + " is not finite at " + point_text(p, dim));
    return v;
}

}  // namespace

std::vector<double> CsrMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        double s = 0.0;
        for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
        y[i] = s;
    }
    return y;
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
        if (col[k] == j) return val[k];
    }
    return 0.0;
}

double cell_integral(const ScalarField& g, const Cell& cell, int dim) {
    static constexpr double kNode = 0.57735026918962576451;  // 1/sqrt(3)
    double acc = 0.0;
    const int points = 1 << dim;
    for (int q = 0; q < points; ++q) {
        Point p{0.0, 0.0, 0.0};
        for (int k = 0; k < dim; ++k) {
            const double mid = 0.5 * (cell.lo[k] + cell.hi[k]);
            const double half = 0.5 * (cell.hi[k] - cell.lo[k]);
            p[k] = mid + ((q >> k) & 1 ? kNode : -kNode) * half;
        }
        acc += g(p);
    }
    return acc * cell.volume / points;
}

double kappa_edge(double kappa_i, double kappa_j, double d_i, double d_j) {
    const double h = d_i + d_j;
    return kappa_i * kappa_j / (kappa_i * d_j / h + kappa_j * d_i / h);
}

double kappa_edge(const Problem& problem, const Mesh& mesh, const Interface& sigma) {
    const int dim = mesh.dim();
    auto avg = [&](std::size_t c) {
        const Cell& cell = mesh.cells()[c];
        auto g = [&](const Point& p) { return sample(problem.kappa, "kappa", p, dim); };
        return cell_integral(g, cell, dim) / cell.volume;
    };
    const double ki = avg(sigma.left);
    if (sigma.boundary) return ki;
    return kappa_edge(ki, avg(sigma.right), sigma.sub_distances[0], sigma.sub_distances[1]);
}

DiscreteSystem assemble(const Problem& problem, std::shared_ptr<const Mesh> mesh_ptr, const MeanSpec& mean) {
    if (!mesh_ptr) throw InvalidArgument("assemble needs a mesh");
    const Mesh& mesh = *mesh_ptr;
    const int dim = mesh.dim();
    const std::size_t n_nodes = mesh.num_nodes();
    const std::size_t n_cells = mesh.num_cells();
    const auto interfaces = mesh.interfaces();

    DiscreteSystem sys;
    sys.mesh = mesh_ptr;
    sys.mean = mean;
    sys.V.resize(n_nodes);
    sys.log_pi.resize(n_nodes);
    sys.pi.resize(n_nodes);
    for (std::size_t k = 0; k < n_nodes; ++k) {
        sys.V[k] = sample(problem.V, "V", mesh.node(k), dim);
        sys.log_pi[k] = -sys.V[k];
        sys.pi[k] = std::exp(-sys.V[k]);
    }

    sys.kappa_cell.resize(n_cells);
    sys.source.resize(n_cells);
    sys.kappa_min = std::numeric_limits<double>::infinity();
    sys.kappa_max = 0.0;
    auto kappa = [&](const Point& p) {
        const double v = sample(problem.kappa, "kappa", p, dim);
        if (!(v > 0.0)) throw ProblemEvaluationError("kappa is not positive at " + point_text(p, dim));
        sys.kappa_min = std::min(sys.kappa_min, v);
        sys.kappa_max = std::max(sys.kappa_max, v);
        return v;
    };
    auto source = [&](const Point& p) { return sample(problem.f, "f", p, dim); };
    for (std::size_t c = 0; c < n_cells; ++c) {
        const Cell& cell = mesh.cells()[c];
        sys.kappa_cell[c] = cell_integral(kappa, cell, dim) / cell.volume;
        sys.source[c] = cell_integral(source, cell, dim);
    }

    sys.kappa_ij.resize(interfaces.size());
    sys.S.resize(interfaces.size());
    sys.transmissibility.resize(interfaces.size());
    for (std::size_t e = 0; e < interfaces.size(); ++e) {
        const Interface& s = interfaces[e];
        sys.kappa_ij[e] = s.boundary ? sys.kappa_cell[s.left]
                                     : kappa_edge(sys.kappa_cell[s.left], sys.kappa_cell[s.right],
                                                  s.sub_distances[0], s.sub_distances[1]);
        sys.S[e] = std::exp(log_stolarsky(mean, sys.log_pi[s.left], sys.log_pi[s.right]));
        sys.transmissibility[e] = s.area / s.node_distance * sys.kappa_ij[e] * sys.S[e];
        if (!(sys.transmissibility[e] > 0.0) || !std::isfinite(sys.transmissibility[e])) {
            throw NumericError("degenerate interface coefficient on interface " + std::to_string(e));
        }
    }

    sys.unknown_of_node.assign(n_nodes, kNoUnknown);
    sys.dirichlet_U.assign(n_nodes, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k < n_nodes; ++k) {
        if (mesh.is_dirichlet(k)) {
            if (!problem.dirichlet) throw ConfigError("Dirichlet data missing for boundary node " + std::to_string(k));
            const double g = sample(problem.dirichlet, "dirichlet", mesh.node(k), dim);
            sys.dirichlet_U[k] = g / sys.pi[k];
        } else {
            sys.unknown_of_node[k] = sys.node_of_unknown.size();
            sys.node_of_unknown.push_back(k);
        }
    }

    const std::size_t n = sys.node_of_unknown.size();
    CsrMatrix& A = sys.matrix;
    A.rows = n;
    A.row_ptr.assign(1, 0);
    sys.rhs.assign(n, 0.0);
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t i = sys.node_of_unknown[r];
        double diag = 0.0;
        row.clear();
        for (std::size_t e : mesh.incident(i)) {
            const Interface& s = interfaces[e];
            const std::size_t j = s.left == i ? s.right : s.left;
            const double w = sys.transmissibility[e];
            diag += w;
            if (sys.unknown_of_node[j] == kNoUnknown) {
                sys.rhs[r] += w * sys.dirichlet_U[j];
            } else {
                row.emplace_back(sys.unknown_of_node[j], -w);
            }
        }
        row.emplace_back(r, diag);
        std::sort(row.begin(), row.end());
        for (const auto& [c, v] : row) {
            A.col.push_back(c);
            A.val.push_back(v);
        }
        A.row_ptr.push_back(A.col.size());
        sys.rhs[r] += sys.source[i];
    }
    return sys;
}

std::vector<double> expand_solution(const DiscreteSystem& system, const std::vector<double>& U_unknowns) {
    if (U_unknowns.size() != system.num_unknowns()) throw InvalidArgument("solution length does not match unknowns");
    std::vector<double> U = system.dirichlet_U;
    for (std::size_t r = 0; r < U_unknowns.size(); ++r) U[system.node_of_unknown[r]] = U_unknowns[r];
    return U;
}

std::vector<double> to_density(const DiscreteSystem& system, const std::vector<double>& U) {
    if (U.size() != system.pi.size()) throw InvalidArgument("field length does not match node count");
    std::vector<double> u(U.size());
    for (std::size_t k = 0; k < U.size(); ++k) u[k] = U[k] * system.pi[k];
    return u;
}

std::vector<double> apply_operator_U_form(const DiscreteSystem& system, const std::vector<double>& U) {
    if (U.size() != system.pi.size()) throw InvalidArgument("field length does not match node count");
    const Mesh& mesh = *system.mesh;
    std::vector<double> out(system.num_unknowns(), 0.0);
    for (std::size_t r = 0; r < out.size(); ++r) {
        const std::size_t i = system.node_of_unknown[r];
        for (std::size_t e : mesh.incident(i)) {
            const Interface& s = mesh.interfaces()[e];
            const std::size_t j = s.left == i ? s.right : s.left;
            out[r] += system.transmissibility[e] * (U[i] - U[j]);
        }
    }
    return out;
}

std::vector<double> apply_operator_u_form(const DiscreteSystem& system, const std::vector<double>& u) {
    if (u.size() != system.pi.size()) throw InvalidArgument("field length does not match node count");
    const Mesh& mesh = *system.mesh;
    std::vector<double> out(system.num_unknowns(), 0.0);
    for (std::size_t r = 0; r < out.size(); ++r) {
        const std::size_t i = system.node_of_unknown[r];
        for (std::size_t e : mesh.incident(i)) {
            const Interface& s = mesh.interfaces()[e];
            const std::size_t j = s.left == i ? s.right : s.left;
            const double dV = system.V[i] - system.V[j];
            const double coef = s.area / s.node_distance * system.kappa_ij[e];
            out[r] += coef * (weight_B(system.mean, -dV) * u[i] - weight_B(system.mean, dV) * u[j]);
        }
    }
    return out;
}

}  // namespace stolfv
