// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stolfv/analysis.hpp"
#include "stolfv/assembly.hpp"
#include "stolfv/errors.hpp"
#include "stolfv/gradientflow.hpp"
#include "stolfv/linsolve.hpp"
#include "stolfv/means.hpp"
#include "stolfv/mesh.hpp"
#include "stolfv/reference.hpp"

using namespace stolfv;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kFineNodes = 1025;  // 2^10 + 1
constexpr int kReferenceNodes = 136474;

struct Outcome {
    bool ok = true;
    std::string detail;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

int max_brent_iterations = 0;

ReferenceSolution reference_for(const Problem& p, int n_grid = kReferenceNodes, double tol = 1e-12) {
    ReferenceSolution ref = shoot_reference(p, n_grid, tol);
    max_brent_iterations = std::max(max_brent_iterations, ref.brent_iterations);
    return ref;
}

Problem example(int which, bool homogeneous = false) {
    Problem p;
    p.domain = Box::interval(0.0, 1.0);
    if (which == 1) {
        p.V = [](const Point& x) { return 2.0 * std::sin(2.0 * kPi * x[0]); };
    } else {
        p.V = [](const Point& x) { return 5.0 * (x[0] + 1.0) * x[0]; };
    }
    p.f = [](const Point& x) { return x[0] * (1.0 - x[0]); };
    p.kappa = [](const Point&) { return 1.0; };
    if (homogeneous) {
        p.dirichlet = [](const Point&) { return 0.0; };
    } else {
        p.dirichlet = [](const Point& x) { return x[0] < 0.5 ? 0.0 : 1.0; };
    }
    return p;
}

std::shared_ptr<const Mesh> vertex_mesh(int nodes) {
    return std::make_shared<const Mesh>(build_vertex_mesh(0.0, 1.0, nodes));
}

struct Solved {
    DiscreteSystem system;
    std::vector<double> U;
};

Solved solve_on(const Problem& p, std::shared_ptr<const Mesh> mesh, const MeanSpec& mean) {
    Solved s;
    s.system = assemble(p, std::move(mesh), mean);
    s.U = expand_solution(s.system, solve(s.system).solution);
    return s;
}

ErrorReport report_for(const Problem& p, int nodes, const MeanSpec& mean, const ReferenceSolution& ref) {
    const Solved s = solve_on(p, vertex_mesh(nodes), mean);
    return error_report(s.system, s.U, ref);
}

std::vector<MeanSpec> table_means() {
    std::vector<MeanSpec> out;
    for (NamedMean m : {NamedMean::Max, NamedMean::Quadratic, NamedMean::Arithmetic, NamedMean::Logarithmic,
                        NamedMean::Geometric, NamedMean::ScharfetterGummel, NamedMean::Harmonic, NamedMean::Min}) {
        out.push_back(MeanSpec::named(m));
    }
    return out;
}

MeanSpec m(const char* text) { return parse_mean(text); }

// 1. f = 0 with Boltzmann boundary data reproduces pi.
Outcome stationarity() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> par(-5.0, 5.0);
    std::vector<MeanSpec> means = table_means();
    for (int k = 0; k < 10; ++k) {
        double a = par(rng), b = par(rng);
        while (std::abs(a - b) < 1e-3) b = par(rng);
        means.push_back(MeanSpec::general(a, b));
    }
    double worst = 0.0;
    for (int which : {1, 2}) {
        Problem p = example(which);
        p.f = [](const Point&) { return 0.0; };
        const ScalarField V = p.V;
        p.dirichlet = [V](const Point& x) { return std::exp(-V(x)); };
        const auto mesh = vertex_mesh(257);
        for (const MeanSpec& mean : means) {
            const Solved s = solve_on(p, mesh, mean);
            const auto u = to_density(s.system, s.U);
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double pi = std::exp(-V(mesh->node(i)));
                worst = std::max(worst, std::abs(u[i] - pi) / pi);
            }
        }
    }
    return {worst <= 1e-11, "max |u-pi|/pi = " + num(worst) + " over " + std::to_string(2 * means.size()) +
                                " runs (limit 1e-11)"};
}

std::vector<int> levels(int lo, int hi) {
    std::vector<int> out;
    for (int k = lo; k <= hi; ++k) out.push_back((1 << k) + 1);
    return out;
}

// 2. Example 1 converges at second order for four means.
Outcome quadratic_convergence(const ReferenceSolution& ref1) {
    const Problem p = example(1);
    Outcome o;
    for (const char* name : {"sg", "sqra", "arithmetic", "harmonic"}) {
        std::vector<ErrorReport> rows;
        for (int n : levels(5, 10)) rows.push_back(report_for(p, n, m(name), ref1));
        const double eoc = make_convergence_table(rows).eoc_u;
        o.ok = o.ok && eoc >= 1.9 && eoc <= 2.1;
        o.detail += std::string(o.detail.empty() ? "" : ", ") + name + " eoc_u " + num(eoc);
    }
    o.detail += " (band [1.9, 2.1])";
    return o;
}

struct GapSeries {
    std::vector<double> h, gap, bound, flux_scale;
};

GapSeries gap_series(const Problem& p, const MeanSpec& a, const MeanSpec& b, const MeanSpec& hat) {
    GapSeries g;
    for (int n : levels(5, 10)) {
        const auto mesh = vertex_mesh(n);
        const Solved sa = solve_on(p, mesh, a);
        const Solved sb = solve_on(p, mesh, b);
        const SchemeComparison c = compare_schemes(sa.system, sb.system, sa.U, sb.U, hat);
        const auto J = discrete_flux(sa.system, sa.U);
        g.h.push_back(mesh->diameter());
        g.gap.push_back(c.flux_gap);
        g.bound.push_back(c.bound_rhs);
        g.flux_scale.push_back(norm_L2S_E(*mesh, sa.system.S, J));
    }
    return g;
}

// 3. Means with equal alpha + beta give nearly identical schemes.
Outcome alpha_beta_invariance() {
    const Problem p = example(1);
    const ReferenceSolution ref = reference_for(p);
    Outcome o;

    double lo = INFINITY, hi = 0.0;
    for (const char* name : {"general:-1,1", "general:-2,2", "general:0.5,-0.5"}) {
        const double e = report_for(p, kFineNodes, m(name), ref).err_u_L2;
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    const double ratio = hi / lo;
    o.ok = ratio <= 1.10;
    o.detail = "err_u_L2 max/min " + num(ratio) + " (limit 1.10)";

    // Every S_{a,-a} is the geometric mean, so this gap is rounding noise and a
    // fitted slope is meaningless; an all-roundoff gap counts as higher order.
    const GapSeries same = gap_series(p, m("general:-1,1"), m("general:0.5,-0.5"), m("general:-1,1"));
    bool roundoff = true;
    for (std::size_t k = 0; k < same.gap.size(); ++k) roundoff = roundoff && same.gap[k] <= 1e-10 * same.flux_scale[k];
    const bool all_positive = std::all_of(same.gap.begin(), same.gap.end(), [](double v) { return v > 0.0; });
    const double slope_same = all_positive ? fit_eoc(same.h, same.gap) : NAN;
    const bool same_ok = roundoff || slope_same >= 2.5;
    o.ok = o.ok && same_ok;
    o.detail += "; (-1,1) vs (0.5,-0.5) gap slope " + num(slope_same) + ", max gap " +
                num(*std::max_element(same.gap.begin(), same.gap.end())) +
                (roundoff ? " (at roundoff, <= 1e-10 * ||J||)" : "") + " (need >= 2.5)";

    const GapSeries diff = gap_series(p, m("sg"), m("sqra"), m("sqra"));
    const double slope = fit_eoc(diff.h, diff.gap);
    bool bound_ok = true;
    for (std::size_t k = 0; k < diff.gap.size(); ++k) bound_ok = bound_ok && diff.gap[k] * diff.gap[k] <= 1.05 * diff.bound[k];
    o.ok = o.ok && slope >= 1.8 && slope <= 2.6 && bound_ok;
    o.detail += "; sg vs sqra gap slope " + num(slope) + " (band [1.8, 2.6]), gap^2 <= 1.05 bound " +
                (bound_ok ? "holds" : "violated");
    return o;
}

// 4. Orderings of the Example 1 errors at the finest level.
Outcome example1_orderings(const ReferenceSolution& ref1) {
    const Problem p = example(1);
    const ErrorReport best_u = report_for(p, kFineNodes, m("general:3.2,1"), ref1);
    const ErrorReport best_j = report_for(p, kFineNodes, m("harmonic"), ref1);
    Outcome o;
    std::string worst_u, worst_j;
    for (const char* name : {"sg", "sqra", "arithmetic", "harmonic", "logarithmic", "quadratic"}) {
        const ErrorReport r = report_for(p, kFineNodes, m(name), ref1);
        if (best_u.err_u_L2 > r.err_u_L2) {
            o.ok = false;
            worst_u += std::string(" ") + name;
        }
        if (std::string(name) != "harmonic" && best_j.err_flux_L2 > r.err_flux_L2) {
            o.ok = false;
            worst_j += std::string(" ") + name;
        }
    }
    o.detail = "general:3.2,1 err_u_L2 " + num(best_u.err_u_L2) + (worst_u.empty() ? " is smallest" : " beaten by" + worst_u) +
               "; harmonic err_flux_L2 " + num(best_j.err_flux_L2) + (worst_j.empty() ? " is smallest" : " beaten by" + worst_j);
    return o;
}

// 5. Scharfetter-Gummel wins on Example 2 at every level.
Outcome example2_sg() {
    const Problem p = example(2);
    const ReferenceSolution ref = reference_for(p);
    Outcome o;
    int checked = 0;
    for (int n : levels(6, 10)) {
        const ErrorReport sg = report_for(p, n, m("sg"), ref);
        for (const char* name : {"sqra", "arithmetic", "harmonic", "logarithmic", "quadratic"}) {
            const ErrorReport r = report_for(p, n, m(name), ref);
            ++checked;
            if (sg.err_u_L2 > r.err_u_L2 || sg.err_flux_L2 > r.err_flux_L2) {
                o.ok = false;
                o.detail += " n=" + std::to_string(n) + " loses to " + name + ";";
            }
        }
        if (n == kFineNodes) {
            o.detail += " at n=1025 sg err_u_L2 " + num(sg.err_u_L2) + ", err_flux_L2 " + num(sg.err_flux_L2) + ";";
        }
    }
    o.detail += " " + std::to_string(checked) + " pairwise comparisons";
    return o;
}

// 6. SG flux against the exact edge flux, and the edge mean quadrature.
Outcome edge_oracle() {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const MeanSpec sg = m("sg");
    double worst_flux = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double kappa = std::exp(-2.0 + 4.0 * unit(rng));
        const double h = std::exp(std::log(1e-3) * unit(rng));
        const double q = (-30.0 + 60.0 * unit(rng)) / h;
        const double u0 = std::exp(-2.0 + 4.0 * unit(rng)), uh = std::exp(-2.0 + 4.0 * unit(rng));
        Problem p;
        p.domain = Box::interval(0.0, 2.0 * h);
        p.V = [q](const Point& x) { return -q * x[0]; };
        p.f = [](const Point&) { return 0.0; };
        p.kappa = [kappa](const Point&) { return kappa; };
        p.dirichlet = [](const Point&) { return 0.0; };
        const auto mesh = std::make_shared<const Mesh>(build_vertex_mesh(0.0, 2.0 * h, 3));
        const DiscreteSystem sys = assemble(p, mesh, sg);
        std::vector<double> U(mesh->num_nodes(), 0.0);
        std::size_t edge = 0;
        for (std::size_t e = 0; e < mesh->interfaces().size(); ++e) {
            const Interface& s = mesh->interfaces()[e];
            const Point& a = mesh->node(s.left);
            const Point& b = mesh->node(s.right);
            if (std::min(a[0], b[0]) == 0.0) edge = e;
        }
        const Interface& s = mesh->interfaces()[edge];
        const bool left_is_origin = mesh->node(s.left)[0] == 0.0;
        const std::size_t i0 = left_is_origin ? s.left : s.right, ih = left_is_origin ? s.right : s.left;
        U[i0] = u0 / sys.pi[i0];
        U[ih] = uh / sys.pi[ih];
        const double J = discrete_flux(sys, U)[edge] * s.normal[0];
        const double exact = edge_flux_exact(kappa, h, q, u0, uh);
        worst_flux = std::max(worst_flux, std::abs(J - exact) / std::abs(exact));
    }
    double worst_mean = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double V0 = -5.0 + 10.0 * unit(rng), Vh = -5.0 + 10.0 * unit(rng), h = 0.1 + unit(rng);
        const auto V = [=](double x) { return V0 + (Vh - V0) * x / h; };
        const double exact = (Vh - V0) / (std::exp(Vh) - std::exp(V0));
        worst_mean = std::max(worst_mean, std::abs(pi_mean_quadrature(V, h, 64) - exact) / exact);
    }
    return {worst_flux <= 1e-12 && worst_mean <= 1e-10,
            "SG flux rel err " + num(worst_flux) + " (limit 1e-12); affine pi_mean rel err " + num(worst_mean) +
                " (limit 1e-10)"};
}

// 7. Randomized Stolarsky identities.
Outcome stolarsky_identities() {
    std::mt19937_64 rng(707);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<MeanSpec> named = table_means();
    double w_sym = 0.0, w_hom = 0.0, w_db = 0.0, w_d2 = 0.0;
    bool diag = true, bounds = true;
    for (int k = 0; k < 10000; ++k) {
        MeanSpec s = (k % 3 == 0) ? named[k / 3 % named.size()]
                                  : MeanSpec::general(-6.0 + 12.0 * unit(rng), -6.0 + 12.0 * unit(rng));
        const double x = std::exp(-20.0 + 40.0 * unit(rng)), y = std::exp(-20.0 + 40.0 * unit(rng));
        const double t = std::exp(-10.0 + 20.0 * unit(rng));
        const double sxy = stolarsky(s, x, y);
        diag = diag && stolarsky(s, x, x) == x;
        w_sym = std::max(w_sym, std::abs(sxy - stolarsky(s, y, x)) / sxy);
        w_hom = std::max(w_hom, std::abs(stolarsky(s, t * x, t * y) - t * sxy) / (t * sxy));
        bounds = bounds && sxy >= std::min(x, y) && sxy <= std::max(x, y);
        const double z = -30.0 + 60.0 * unit(rng);
        w_db = std::max(w_db, std::abs(weight_B(s, -z) - std::exp(z) * weight_B(s, z)) / weight_B(s, -z));
        if (s.finite() && std::abs(s.alpha() + s.beta() - 3.0) > 0.1) {
            // Richardson-extrapolated central second difference in x at y = x.
            const double x0 = std::exp(-5.0 + 10.0 * unit(rng));
            const auto d2 = [&](double d) {
                return (stolarsky(s, x0 + d, x0) - 2.0 * x0 + stolarsky(s, x0 - d, x0)) / (d * d);
            };
            const double d = 0.02 * x0;
            const double fd = (4.0 * d2(0.5 * d) - d2(d)) / 3.0;
            const double exact = diag_second_derivative(s, x0);
            w_d2 = std::max(w_d2, std::abs(fd - exact) / std::abs(exact));
        }
    }
    const bool ok = diag && bounds && w_sym <= 1e-14 && w_hom <= 1e-12 && w_db <= 1e-12 && w_d2 <= 1e-5;
    return {ok, std::string("S(x,x)=x ") + (diag ? "exact" : "violated") + ", bounds " + (bounds ? "hold" : "violated") +
                    ", symmetry " + num(w_sym) + " (1e-14), homogeneity " + num(w_hom) + " (1e-12), B(-x)=e^x B(x) " +
                    num(w_db) + " (1e-12), second derivative " + num(w_d2) + " (1e-5); 10000 samples"};
}

// 8. Consistency estimator decays at second order.
Outcome consistency_order() {
    Outcome o;
    struct Case {
        int dim;
        bool smooth_kappa;
    };
    const SmoothField U1{[](const Point& x) { return std::sin(kPi * x[0]) + x[0] * x[0]; },
                         [](const Point& x) { return Point{kPi * std::cos(kPi * x[0]) + 2.0 * x[0], 0.0, 0.0}; }};
    const SmoothField U2{[](const Point& x) { return std::sin(kPi * x[0]) * std::cos(0.5 * kPi * x[1]) + x[1]; },
                         [](const Point& x) {
                             return Point{kPi * std::cos(kPi * x[0]) * std::cos(0.5 * kPi * x[1]),
                                          -0.5 * kPi * std::sin(kPi * x[0]) * std::sin(0.5 * kPi * x[1]) + 1.0, 0.0};
                         }};
    for (Case c : {Case{1, false}, Case{1, true}, Case{2, false}, Case{2, true}}) {
        Problem p;
        p.domain = Box::unit(c.dim);
        p.V = [](const Point& x) { return std::sin(2.0 * x[0]) + 0.5 * std::cos(3.0 * x[1]); };
        p.f = [](const Point&) { return 0.0; };
        if (c.smooth_kappa) {
            p.kappa = [](const Point& x) { return 1.0 + 0.5 * std::sin(x[0] + 2.0 * x[1]); };
        } else {
            p.kappa = [](const Point&) { return 1.0; };
        }
        p.dirichlet = [](const Point&) { return 0.0; };
        for (const char* name : {"sg", "sqra", "arithmetic"}) {
            std::vector<double> hs, est;
            for (int k = 4; k <= 7; ++k) {
                const double h = 1.0 / (1 << k);
                const Mesh mesh = build_cubic_mesh(p.domain, h);
                hs.push_back(h);
                est.push_back(consistency_estimator(p, mesh, m(name), c.dim == 1 ? U1 : U2));
            }
            const double slope = fit_eoc(hs, est);
            o.ok = o.ok && slope >= 1.9;
            o.detail += std::string(o.detail.empty() ? "" : ", ") + "d=" + std::to_string(c.dim) +
                        (c.smooth_kappa ? " kappa smooth " : " kappa 1 ") + name + " " + num(slope);
        }
    }
    o.detail = "slopes: " + o.detail + " (need >= 1.9)";
    return o;
}

// 9. Matrix structure, integration by parts, Poincare and a priori bounds.
Outcome structure() {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<MeanSpec> means = table_means();
    bool sym = true, sign = true, pd = true;
    double w_ibp = 0.0, w_poinc = 0.0;
    for (int inst = 0; inst < 200; ++inst) {
        const bool cubic = inst % 4 == 3;
        std::shared_ptr<const Mesh> mesh;
        Problem p;
        if (cubic) {
            p.domain = Box::unit(2);
            mesh = std::make_shared<const Mesh>(build_cubic_mesh(p.domain, 1.0 / (4 + inst % 9)));
        } else {
            p.domain = Box::interval(0.0, 1.0);
            std::vector<double> nodes;
            const int n = 5 + static_cast<int>(40 * unit(rng));
            double acc = 0.0;
            for (int k = 0; k < n; ++k) nodes.push_back(acc += 0.2 + unit(rng));
            const double total = acc + 0.2 + unit(rng);
            for (double& v : nodes) v /= total;
            if (inst % 2 == 0) {
                nodes.insert(nodes.begin(), 0.0);
                nodes.push_back(1.0);
            }
            mesh = std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, nodes));
        }
        const double a = 4.0 * unit(rng) - 2.0, b = 4.0 * unit(rng) - 2.0, c = 0.5 + unit(rng);
        p.V = [=](const Point& x) { return a * std::sin(3.0 * x[0]) + b * x[1] * x[1]; };
        p.f = [=](const Point& x) { return c + x[0]; };
        p.kappa = [=](const Point& x) { return c + x[0] * x[0] + 0.5 * x[1]; };
        p.dirichlet = [](const Point&) { return 0.0; };
        const MeanSpec mean = inst % 5 == 4 ? MeanSpec::general(-5.0 + 10.0 * unit(rng), -5.0 + 10.0 * unit(rng))
                                            : means[inst % means.size()];
        const DiscreteSystem sys = assemble(p, mesh, mean);
        const CsrMatrix& A = sys.matrix;
        for (std::size_t i = 0; i < A.rows; ++i) {
            for (std::size_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
                const std::size_t j = A.col[k];
                sym = sym && A.at(j, i) == A.val[k];
                sign = sign && (i == j ? A.val[k] > 0.0 : A.val[k] <= 0.0);
            }
        }
        try {
            solve_cg(A, sys.rhs);
        } catch (const Error&) {
            pd = false;
        }

        // sum_i v_i (A U)_i = sum_edges w (U_i - U_j)(v_i - v_j) for v vanishing on Dirichlet nodes.
        std::vector<double> U(mesh->num_nodes()), v(mesh->num_nodes(), 0.0);
        for (auto& x : U) x = unit(rng) - 0.5;
        for (std::size_t r = 0; r < sys.num_unknowns(); ++r) v[sys.node_of_unknown[r]] = unit(rng) - 0.5;
        const auto AU = apply_operator_U_form(sys, U);
        double lhs = 0.0, rhs = 0.0, scale = 0.0;
        for (std::size_t r = 0; r < AU.size(); ++r) lhs += v[sys.node_of_unknown[r]] * AU[r];
        for (std::size_t e = 0; e < mesh->interfaces().size(); ++e) {
            const Interface& s = mesh->interfaces()[e];
            const double term = sys.transmissibility[e] * (U[s.left] - U[s.right]) * (v[s.left] - v[s.right]);
            rhs += term;
            scale += std::abs(term);
        }
        w_ibp = std::max(w_ibp, std::abs(lhs - rhs) / scale);

        // Poincare: ||u||^2 <= C sum m (du)^2 for u vanishing on Dirichlet nodes.
        std::vector<double> u(mesh->num_nodes(), 0.0);
        for (std::size_t r = 0; r < sys.num_unknowns(); ++r) u[sys.node_of_unknown[r]] = unit(rng) - 0.5;
        const double l2 = norm_L2_P(*mesh, u);
        w_poinc = std::max(w_poinc, l2 * l2 / (poincare_constant(*mesh) * edge_difference_energy(*mesh, u)));
    }

    // A priori flux bound on the homogeneous variants of both examples.
    double w_apriori = 0.0;
    bool energy_ok = true;
    for (int which : {1, 2}) {
        for (const char* name : {"sg", "sqra", "arithmetic", "harmonic", "logarithmic", "quadratic", "general:3.2,1"}) {
            for (int n : {33, 257, kFineNodes}) {
                const Solved s = solve_on(example(which, true), vertex_mesh(n), m(name));
                const AprioriCheck chk = apriori_check(s.system, s.U);
                energy_ok = energy_ok && chk.flux <= chk.energy * (1.0 + 1e-12);
                w_apriori = std::max(w_apriori, chk.energy / chk.bound);
            }
        }
    }
    const bool ok = sym && sign && pd && w_ibp <= 1e-12 && w_poinc <= 1.0 && w_apriori <= 1.0 && energy_ok;
    return {ok, std::string("symmetry ") + (sym ? "exact" : "violated") + ", sign pattern " + (sign ? "ok" : "violated") +
                    ", CG " + (pd ? "converged" : "broke down") + "; 200 instances: summation by parts rel err " +
                    num(w_ibp) + " (1e-12), max Poincare ratio " + num(w_poinc) + " (<= 1); a priori energy/bound " +
                    num(w_apriori) + " (<= 1), flux <= energy " + (energy_ok ? "holds" : "violated")};
}

// 10. Gradient-structure identities and the SQRA-generating potential.
Outcome gradient_structure() {
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const MeanSpec geo = m("sqra");
    double w_fact = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const double ui = std::exp(-10 + 20 * unit(rng)), uj = std::exp(-10 + 20 * unit(rng));
        const double pi = std::exp(-10 + 20 * unit(rng)), pj = std::exp(-10 + 20 * unit(rng));
        const double lhs = stolarsky(geo, pi, pj) * kinetic_coefficient(ui, uj, pi, pj);
        w_fact = std::max(w_fact, std::abs(lhs - std::sqrt(ui * uj)) / std::sqrt(ui * uj));
    }

    const Mesh mesh = build_cubic_mesh(Box::unit(2), 1.0 / 8);
    const std::vector<double> ones(mesh.num_nodes(), 1.0);
    const double e0 = energy(mesh, ones, ones);
    std::vector<double> u(mesh.num_nodes()), xi(mesh.num_nodes(), 0.37), kap(mesh.interfaces().size());
    for (auto& v : u) v = 0.1 + unit(rng);
    for (auto& v : kap) v = 0.1 + unit(rng);
    const double d0 = cosh_dissipation(mesh, kap, u, xi);

    // Integrate e^{V} exactly on each linear piece between the kinks.
    double w_sqra = 0.0;
    for (int a = 0; a <= 24; ++a) {
        for (int b = 0; b <= 24; ++b) {
            const double V0 = -3.0 + 0.25 * a, Vh = -3.0 + 0.25 * b, h = 0.05 + unit(rng);
            const SqraPotential P = sqra_potential_construct(V0, Vh, h);
            const double xs[4] = {0.0, P.x1, P.x2, h};
            double integral = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double len = xs[k + 1] - xs[k];
                if (len <= 0.0) continue;
                const double va = P(xs[k]), vb = P(xs[k + 1]);
                integral += std::abs(vb - va) < 1e-12 ? len * std::exp(0.5 * (va + vb))
                                                      : len * (std::exp(vb) - std::exp(va)) / (vb - va);
            }
            const double target = std::exp(0.5 * (V0 + Vh));
            w_sqra = std::max(w_sqra, std::abs(integral / h - target) / target);
        }
    }
    const bool ok = w_fact <= 1e-12 && e0 == 0.0 && d0 == 0.0 && w_sqra <= 1e-10;
    return {ok, "S_geo a_ij vs sqrt(u_i u_j) " + num(w_fact) + " (1e-12), E(1;1) = " + num(e0) +
                    ", dissipation at constant xi = " + num(d0) + ", SQRA potential mean rel err " + num(w_sqra) +
                    " (1e-10)"};
}

// 11. RK4 order, Brent iteration counts, V = 0 linear solution.
Outcome reference_self_test() {
    // u' + c u = -J, J' = f0 on [0,1]: u = A + B x + K e^{-c x}.
    const double c = 40.0, f0 = 1.0, ua = 0.5, ub = 2.0;
    Problem p;
    p.domain = Box::interval(0.0, 1.0);
    p.V = [c](const Point& x) { return c * x[0]; };
    p.f = [f0](const Point&) { return f0; };
    p.kappa = [](const Point&) { return 1.0; };
    p.dirichlet = [=](const Point& x) { return x[0] < 0.5 ? ua : ub; };
    const double B = -f0 / c;
    // u(0) = A + K = ua and u(1) = A + B + K e^{-c} = ub.
    const double K = (ub - ua - B) / (std::exp(-c) - 1.0);
    const double A = ua - K;
    const auto exact = [=](double x) { return A + B * x + K * std::exp(-c * x); };
    std::vector<double> hs, errs;
    for (int n : {1001, 1501, 2251, 3377}) {
        const ReferenceSolution ref = reference_for(p, n);
        double e = 0.0;
        for (std::size_t k = 0; k < ref.x.size(); ++k) e = std::max(e, std::abs(ref.u[k] - exact(ref.x[k])));
        hs.push_back(1.0 / (n - 1));
        errs.push_back(e);
    }
    const double slope = fit_eoc(hs, errs);

    Problem lin;
    lin.domain = Box::interval(0.0, 1.0);
    lin.V = [](const Point&) { return 0.0; };
    lin.f = [](const Point&) { return 0.0; };
    lin.kappa = [](const Point&) { return 1.0; };
    lin.dirichlet = [](const Point& x) { return x[0] < 0.5 ? 1.0 : 3.0; };
    const ReferenceSolution ref = reference_for(lin);
    double w_lin = 0.0;
    for (std::size_t k = 0; k < ref.x.size(); ++k) w_lin = std::max(w_lin, std::abs(ref.u[k] - (1.0 + 2.0 * ref.x[k])));

    const bool ok = std::abs(slope - 4.0) <= 0.3 && max_brent_iterations <= 5 && w_lin <= 1e-10;
    return {ok, "RK4 slope " + num(slope) + " (4 +- 0.3), max Brent iterations over all shooting runs " +
                    std::to_string(max_brent_iterations) + " (<= 5), V=0 max error " + num(w_lin) + " (1e-10)"};
}

}  // namespace

int main() {
    int failures = 0;
    auto run = [&](int id, const char* name, const std::function<Outcome()>& fn) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << id << " " << name << ": " << o.detail << std::endl;
        if (!o.ok) ++failures;
    };
    const ReferenceSolution ref1 = reference_for(example(1));
    run(1, "stationarity", stationarity);
    run(2, "quadratic convergence", [&] { return quadratic_convergence(ref1); });
    run(3, "alpha+beta invariance", alpha_beta_invariance);
    run(4, "example 1 orderings", [&] { return example1_orderings(ref1); });
    run(5, "example 2 sg superiority", example2_sg);
    run(6, "edge oracle", edge_oracle);
    run(7, "stolarsky identities", stolarsky_identities);
    run(8, "consistency estimator order", consistency_order);
    run(9, "structural properties", structure);
    run(10, "gradient structure", gradient_structure);
    run(11, "reference solver", reference_self_test);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
