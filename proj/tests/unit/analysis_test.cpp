#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "stolfv/analysis.hpp"
#include "stolfv/errors.hpp"
#include "stolfv/linsolve.hpp"
#include "stolfv/reference.hpp"

using namespace stolfv;

namespace {

Problem example1() {
    Problem p;
    p.domain = Box::interval(0.0, 1.0);
    p.V = [](const Point& x) { return 2.0 * std::sin(2.0 * 3.141592653589793 * x[0]); };
    p.f = [](const Point& x) { return x[0] * (1.0 - x[0]); };
    p.kappa = [](const Point&) { return 1.0; };
    p.dirichlet = [](const Point& x) { return x[0] < 0.5 ? 0.0 : 1.0; };
    return p;
}

}  // namespace

TEST(Analysis, FitEoc) {
    const std::vector<double> h = {0.1, 0.05, 0.025, 0.0125};
    std::vector<double> e;
    for (double v : h) e.push_back(3.0 * v * v);
    EXPECT_NEAR(fit_eoc(h, e), 2.0, 1e-12);
    EXPECT_THROW(fit_eoc({0.1, 0.05}, {1.0, 0.5}), InvalidArgument);
    EXPECT_THROW(fit_eoc({0.1, 0.1, 0.1}, {1.0, 0.5, 0.2}), InvalidArgument);
    EXPECT_THROW(fit_eoc({0.1, 0.05, 0.02}, {1.0, 0.0, 0.2}), InvalidArgument);
}

TEST(Analysis, NormsOnUniformMesh) {
    const Mesh m = build_interval_mesh(0.0, 1.0, 4);
    std::vector<double> ones(m.num_nodes(), 1.0);
    EXPECT_NEAR(norm_L2_P(m, ones), 1.0, 1e-15);
    std::vector<double> w(m.interfaces().size(), 2.0);
    double expect = 0.0;
    for (const auto& s : m.interfaces()) expect += s.area * s.node_distance * 4.0;
    EXPECT_NEAR(norm_L2_E(m, w), std::sqrt(expect), 1e-15);
}

TEST(Analysis, PoincareConstantByHand) {
    const std::vector<double> nodes = {0.0, 0.2, 1.0};
    const Mesh m = build_interval_mesh(0.0, 1.0, nodes);
    // Node distances range over {0.2, 0.8, 1.0}.
    EXPECT_NEAR(poincare_constant(m), 1.0 * 1.0 / 0.2, 1e-12);
}

TEST(Analysis, ConvergenceTableSortsByH) {
    std::vector<ErrorReport> rows(3);
    const double hs[3] = {0.01, 0.04, 0.02};
    for (int k = 0; k < 3; ++k) {
        rows[k].h = hs[k];
        rows[k].err_u_L2 = hs[k] * hs[k];
        rows[k].err_flux_L2 = hs[k];
    }
    const ConvergenceTable t = make_convergence_table(rows);
    EXPECT_EQ(t.rows.front().h, 0.04);
    EXPECT_NEAR(t.eoc_u, 2.0, 1e-12);
    EXPECT_NEAR(t.eoc_flux, 1.0, 1e-12);
}

TEST(Analysis, ErrorsShrinkUnderRefinement) {
    const Problem p = example1();
    const ReferenceSolution ref = shoot_reference(p, 20001);
    double prev = INFINITY;
    for (int n : {17, 33, 65}) {
        auto mesh = std::make_shared<const Mesh>(build_vertex_mesh(0.0, 1.0, n));
        const DiscreteSystem s = assemble(p, mesh, parse_mean("sg"));
        const auto U = expand_solution(s, solve(s).solution);
        const ErrorReport r = error_report(s, U, ref);
        EXPECT_LT(r.err_u_L2, prev / 3.0);
        prev = r.err_u_L2;
        EXPECT_EQ(r.n, static_cast<std::size_t>(n));
    }
}

TEST(Analysis, CompareSchemesSelfIsZero) {
    const Problem p = example1();
    auto mesh = std::make_shared<const Mesh>(build_vertex_mesh(0.0, 1.0, 33));
    const DiscreteSystem s = assemble(p, mesh, parse_mean("harmonic"));
    const auto U = expand_solution(s, solve(s).solution);
    const SchemeComparison same = compare_schemes(s, s, U, U, parse_mean("harmonic"));
    EXPECT_EQ(same.flux_gap, 0.0);
    EXPECT_EQ(same.bound_rhs, 0.0);
    // A different hat mean leaves the gap at zero but not the bound.
    const SchemeComparison other = compare_schemes(s, s, U, U, parse_mean("sqra"));
    EXPECT_EQ(other.flux_gap, 0.0);
    EXPECT_GT(other.bound_rhs, 0.0);
}

TEST(Analysis, FluxMatchesTransmissibility) {
    const Problem p = example1();
    auto mesh = std::make_shared<const Mesh>(build_vertex_mesh(0.0, 1.0, 9));
    const DiscreteSystem s = assemble(p, mesh, parse_mean("sg"));
    std::vector<double> U(mesh->num_nodes());
    for (std::size_t k = 0; k < U.size(); ++k) U[k] = std::cos(static_cast<double>(k));
    const auto J = discrete_flux(s, U);
    for (std::size_t e = 0; e < J.size(); ++e) {
        const auto& f = mesh->interfaces()[e];
        const double back = s.transmissibility[e] / f.area * (U[f.right] - U[f.left]);
        EXPECT_NEAR(J[e], -back, 1e-13);
    }
}

TEST(Analysis, AprioriNeedsHomogeneousData) {
    const Problem p = example1();
    auto mesh = std::make_shared<const Mesh>(build_vertex_mesh(0.0, 1.0, 9));
    const DiscreteSystem s = assemble(p, mesh, parse_mean("sg"));
    const auto U = expand_solution(s, solve(s).solution);
    EXPECT_THROW(apriori_check(s, U), InvalidArgument);
}
