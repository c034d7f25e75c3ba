#include "stolfv/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "stolfv/analysis.hpp"
#include "stolfv/errors.hpp"
#include "stolfv/gradientflow.hpp"
#include "stolfv/linsolve.hpp"
#include "stolfv/parallel.hpp"
#include "stolfv/reference.hpp"

namespace stolfv {

namespace {

const std::set<std::string> kKnownKeys = {
    "preset",         "problem.V",     "problem.f",         "problem.kappa",    "problem.domain",
    "problem.u_left", "problem.u_right", "problem.dirichlet", "mesh.kind",        "mesh.n",
    "mesh.h",         "mean",          "means",             "reference.enabled", "reference.n_grid",
    "reference.tol",  "output",        "report",            "seed",             "levels",
    "sweep.alpha",    "sweep.beta",    "compare.a",         "compare.b",        "compare.hat",
    "threads",
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, std::string_view seps) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= s.size(); ++k) {
        if (k == s.size() || seps.find(s[k]) != std::string_view::npos) {
            std::string piece = trim(s.substr(start, k - start));
            if (!piece.empty()) out.push_back(piece);
            start = k + 1;
        }
    }
    return out;
}

double to_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw ConfigError(key + ": expected a number, got '" + text + "'");
    }
    return v;
}

long to_long(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    long v = 0;
    auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size()) {
        throw ConfigError(key + ": expected an integer, got '" + text + "'");
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "on" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "off" || text == "0" || text == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

MeanSpec to_mean(const std::string& key, const std::string& text) {
    try {
        return parse_mean(trim(text));
    } catch (const Error& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

Range to_range(const std::string& key, const std::string& text) {
    const auto parts = split(text, ":");
    Range r;
    if (parts.size() == 1) {
        r.lo = r.hi = to_double(key, parts[0]);
        return r;
    }
    if (parts.size() != 3) throw ConfigError(key + ": expected lo:hi:step");
    r.lo = to_double(key, parts[0]);
    r.hi = to_double(key, parts[1]);
    r.step = to_double(key, parts[2]);
    if (!(r.step > 0.0) || r.hi < r.lo) throw ConfigError(key + ": need lo <= hi and step > 0");
    return r;
}

Expr to_expr(const std::string& key, const std::string& text, int dim) {
    Expr e;
    try {
        e = parse_expr(text);
    } catch (const SyntaxError& err) {
        throw ConfigError(key + ": " + err.what());
    }
    if (e.arity() > dim) throw ConfigError(key + ": uses a coordinate beyond the problem dimension");
    return e;
}

ScalarField field(const Expr& e) {
    return [e](const Point& p) { return e(p); };
}

Config preset_config(const std::string& name) {
    Config c;
    if (name != "example1" && name != "example2") throw ConfigError("unknown preset '" + name + "'");
    c.set("problem.V", name == "example1" ? "2*sin(2*pi*x)" : "5*(x+1)*x");
    c.set("problem.f", "x*(1-x)");
    c.set("problem.kappa", "1");
    c.set("problem.domain", "0,1");
    c.set("problem.u_left", "0");
    c.set("problem.u_right", "1");
    c.set("mesh.kind", "vertex");
    c.set("mesh.n", "1025");
    c.set("reference.enabled", "true");
    c.set("reference.n_grid", "136474");
    c.set("reference.tol", "1e-12");
    c.set("levels", "5,6,7,8,9,10");
    return c;
}

void write_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) os << (k ? "," : "") << cells[k];
    os << '\n';
}

std::vector<std::string> report_cells(const ErrorReport& r) {
    return {format_number(r.err_u_L2), format_number(r.err_u_L2pi), format_number(r.err_flux_L2),
            format_number(r.err_flux_L2S), format_number(r.err_HT)};
}

const std::vector<std::string> kReportHeader = {"mean",        "n",           "h",           "err_u_L2",
                                                "err_u_L2pi",  "err_flux_L2", "err_flux_L2S", "err_HT"};

std::vector<std::string> report_row(const ErrorReport& r) {
    std::vector<std::string> row = {r.mean.label(), std::to_string(r.n), format_number(r.h)};
    for (auto& c : report_cells(r)) row.push_back(c);
    return row;
}

struct SolvedCase {
    DiscreteSystem system;
    std::vector<double> U;
    SolveReport solve;
};

SolvedCase solve_case(const RunConfig& config, std::shared_ptr<const Mesh> mesh, const MeanSpec& mean) {
    SolvedCase out;
    out.system = assemble(config.problem, std::move(mesh), mean);
    out.solve = solve(out.system);
    out.U = expand_solution(out.system, out.solve.solution);
    return out;
}

ReferenceSolution build_reference(const RunConfig& config) {
    if (config.problem.domain.dim != 1) throw ConfigError("the reference solver needs a 1D problem");
    return shoot_reference(config.problem, config.reference_n_grid, config.reference_tol);
}

const char* kUsage =
    "usage: stolfv <solve|sweep|convergence|compare|reference|check> [config-file] [--key=value ...]\n"
    "keys: preset, problem.V, problem.f, problem.kappa, problem.domain, problem.u_left, problem.u_right,\n"
    "      problem.dirichlet, mesh.kind, mesh.n, mesh.h, mean, means, reference.enabled, reference.n_grid,\n"
    "      reference.tol, output, report, seed, levels, sweep.alpha, sweep.beta, compare.a, compare.b,\n"
    "      compare.hat, threads\n";

}  // namespace

Config Config::parse(std::string_view text) {
    Config c;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        std::string value = trim(std::string_view(t).substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
            value = value.substr(1, value.size() - 2);
        }
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        c.set(key, value);
    }
    return c;
}

std::optional<std::string> Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

std::vector<double> Range::points() const {
    std::vector<double> out;
    const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (long k = 0; k < count; ++k) out.push_back(lo + step * static_cast<double>(k));
    return out;
}

RunConfig resolve_config(const Config& explicit_config) {
    for (const auto& [key, value] : explicit_config.values()) {
        if (!kKnownKeys.count(key)) throw ConfigError("unknown key '" + key + "'");
    }
    Config c;
    if (auto preset = explicit_config.get("preset")) c = preset_config(*preset);
    for (const auto& [key, value] : explicit_config.values()) c.set(key, value);

    RunConfig r;
    const auto domain = split(c.get_or("problem.domain", "0,1"), ",");
    if (domain.empty() || domain.size() % 2 != 0 || domain.size() > 6) {
        throw ConfigError("problem.domain: expected 2, 4 or 6 numbers (lo,hi per axis)");
    }
    Box box;
    box.dim = static_cast<int>(domain.size() / 2);
    box.lo = {0.0, 0.0, 0.0};
    box.hi = {0.0, 0.0, 0.0};
    for (int k = 0; k < box.dim; ++k) {
        box.lo[k] = to_double("problem.domain", domain[2 * k]);
        box.hi[k] = to_double("problem.domain", domain[2 * k + 1]);
        if (!(box.hi[k] > box.lo[k])) throw ConfigError("problem.domain: need lo < hi on every axis");
    }
    r.problem.domain = box;
    r.V_text = c.get_or("problem.V", "0");
    r.f_text = c.get_or("problem.f", "0");
    r.kappa_text = c.get_or("problem.kappa", "1");
    r.problem.V = field(to_expr("problem.V", r.V_text, box.dim));
    r.problem.f = field(to_expr("problem.f", r.f_text, box.dim));
    r.problem.kappa = field(to_expr("problem.kappa", r.kappa_text, box.dim));
    if (auto g = c.get("problem.dirichlet")) {
        r.problem.dirichlet = field(to_expr("problem.dirichlet", *g, box.dim));
    } else if (c.has("problem.u_left") || c.has("problem.u_right")) {
        if (box.dim != 1) throw ConfigError("problem.u_left/u_right need a 1D domain; use problem.dirichlet");
        if (!c.has("problem.u_left") || !c.has("problem.u_right")) {
            throw ConfigError("both problem.u_left and problem.u_right are required");
        }
        const double ul = to_double("problem.u_left", *c.get("problem.u_left"));
        const double ur = to_double("problem.u_right", *c.get("problem.u_right"));
        const double a = box.lo[0], b = box.hi[0], tol = 1e-10 * (b - a);
        r.problem.dirichlet = [=](const Point& p) {
            if (std::abs(p[0] - a) <= tol) return ul;
            if (std::abs(p[0] - b) <= tol) return ur;
            throw ConfigError("boundary value requested away from the interval ends");
        };
    }

    const std::string kind = c.get_or("mesh.kind", box.dim == 1 ? "vertex" : "cubic");
    if (kind == "vertex") r.mesh_kind = MeshKind::Vertex;
    else if (kind == "interval") r.mesh_kind = MeshKind::Interval;
    else if (kind == "cubic") r.mesh_kind = MeshKind::Cubic;
    else throw ConfigError("mesh.kind: expected interval, vertex or cubic");
    if (box.dim != 1 && r.mesh_kind != MeshKind::Cubic) throw ConfigError("mesh.kind: multi-dimensional domains need cubic meshes");
    if (auto h = c.get("mesh.h")) {
        r.h = to_double("mesh.h", *h);
        if (!(r.h > 0.0)) throw ConfigError("mesh.h must be positive");
        if (r.mesh_kind != MeshKind::Cubic) throw ConfigError("mesh.h applies to cubic meshes; use mesh.n");
        r.n = static_cast<int>(std::lround(box.extent(0) / r.h));
    } else {
        r.n = static_cast<int>(to_long("mesh.n", c.get_or("mesh.n", r.mesh_kind == MeshKind::Cubic ? "8" : "1025")));
    }
    if (r.n < (r.mesh_kind == MeshKind::Cubic ? 1 : 2) || (r.mesh_kind == MeshKind::Vertex && r.n < 3)) {
        throw ConfigError("mesh.n is too small");
    }

    if (auto list = c.get("means")) {
        for (const auto& m : split(*list, "; \t")) r.means.push_back(to_mean("means", m));
    } else {
        r.means.push_back(to_mean("mean", c.get_or("mean", "sg")));
    }
    if (r.means.empty()) throw ConfigError("means: empty list");

    r.reference = c.has("reference.enabled") ? to_bool("reference.enabled", *c.get("reference.enabled"))
                                             : c.has("reference.n_grid");
    r.reference_n_grid = static_cast<int>(to_long("reference.n_grid", c.get_or("reference.n_grid", "136474")));
    r.reference_tol = to_double("reference.tol", c.get_or("reference.tol", "1e-12"));
    if (r.reference_n_grid < 1000) throw ConfigError("reference.n_grid must be at least 1000");
    if (!(r.reference_tol > 0.0)) throw ConfigError("reference.tol must be positive");
    if (r.reference && box.dim != 1) throw ConfigError("the reference solver needs a 1D problem");

    r.output = c.get_or("output", "");
    r.report = c.get_or("report", "");
    const long seed = to_long("seed", c.get_or("seed", "1"));
    if (seed < 0) throw ConfigError("seed must be non-negative");
    r.seed = static_cast<unsigned long>(seed);
    const long threads = to_long("threads", c.get_or("threads", "0"));
    if (threads < 0) throw ConfigError("threads must be non-negative");
    r.threads = static_cast<unsigned>(threads);

    if (auto levels = c.get("levels")) {
        const auto parts = split(*levels, ":");
        if (parts.size() == 2) {
            for (long k = to_long("levels", parts[0]); k <= to_long("levels", parts[1]); ++k) r.levels.push_back(static_cast<int>(k));
        } else {
            for (const auto& p : split(*levels, ", ")) r.levels.push_back(static_cast<int>(to_long("levels", p)));
        }
        for (int k : r.levels) {
            if (k < 1 || k > 24) throw ConfigError("levels: each level must lie in 1..24");
        }
    }
    if (auto a = c.get("sweep.alpha")) r.sweep_alpha = to_range("sweep.alpha", *a);
    if (auto b = c.get("sweep.beta")) r.sweep_beta = to_range("sweep.beta", *b);
    if (auto m = c.get("compare.a")) r.compare_a = to_mean("compare.a", *m);
    if (auto m = c.get("compare.b")) r.compare_b = to_mean("compare.b", *m);
    if (auto m = c.get("compare.hat")) r.compare_hat = to_mean("compare.hat", *m);
    return r;
}

int level_size(MeshKind kind, int k) { return kind == MeshKind::Cubic ? (1 << k) : (1 << k) + 1; }

std::shared_ptr<const Mesh> build_mesh(const RunConfig& config, int n) {
    const Box& box = config.problem.domain;
    try {
        switch (config.mesh_kind) {
            case MeshKind::Vertex: return std::make_shared<const Mesh>(build_vertex_mesh(box.lo[0], box.hi[0], n));
            case MeshKind::Interval: return std::make_shared<const Mesh>(build_interval_mesh(box.lo[0], box.hi[0], n));
            case MeshKind::Cubic: return std::make_shared<const Mesh>(build_cubic_mesh(box, box.extent(0) / n));
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("mesh: ") + e.what());
    }
    throw ConfigError("unknown mesh kind");
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_solve(const RunConfig& config, std::ostream& csv, std::ostream& report) {
    if (config.means.size() != 1) throw ConfigError("solve takes a single mean");
    auto mesh = build_mesh(config, config.n);
    const SolvedCase sc = solve_case(config, mesh, config.means.front());
    const std::vector<double> u = to_density(sc.system, sc.U);
    const int dim = mesh->dim();

    std::vector<std::size_t> order(mesh->num_nodes());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Point& pa = mesh->node(a);
        const Point& pb = mesh->node(b);
        for (int k = dim - 1; k >= 0; --k) {
            if (pa[k] != pb[k]) return pa[k] < pb[k];
        }
        return false;
    });
    std::vector<std::string> header;
    for (int k = 0; k < dim; ++k) header.push_back(std::string(1, "xyz"[k]));
    header.push_back("u");
    header.push_back("U");
    write_row(csv, header);
    for (std::size_t k : order) {
        std::vector<std::string> row;
        for (int d = 0; d < dim; ++d) row.push_back(format_number(mesh->node(k)[d]));
        row.push_back(format_number(u[k]));
        row.push_back(format_number(sc.U[k]));
        write_row(csv, row);
    }
    if (config.reference) {
        const ReferenceSolution ref = build_reference(config);
        write_row(report, kReportHeader);
        write_row(report, report_row(error_report(sc.system, sc.U, ref)));
    }
    return 0;
}

int cmd_sweep(const RunConfig& config, std::ostream& csv, std::ostream& log) {
    if (!config.reference) throw ConfigError("sweep needs a reference (reference.enabled = true)");
    const auto mesh = build_mesh(config, config.n);
    const ReferenceSolution ref = build_reference(config);
    const std::vector<double> alphas = config.sweep_alpha.points();
    const std::vector<double> betas = config.sweep_beta.points();
    const std::size_t cells = alphas.size() * betas.size();
    std::vector<std::exception_ptr> errors;
    const auto reports = parallel_map<ErrorReport>(
        cells,
        [&](std::size_t k) {
            const MeanSpec m = MeanSpec::general(alphas[k / betas.size()], betas[k % betas.size()]);
            const SolvedCase sc = solve_case(config, mesh, m);
            return error_report(sc.system, sc.U, ref);
        },
        config.threads, &errors);
    write_row(csv, {"alpha", "beta", "err_u_L2", "err_u_L2pi", "err_flux_L2", "err_flux_L2S"});
    int code = 0;
    for (std::size_t k = 0; k < cells; ++k) {
        std::vector<std::string> row = {format_number(alphas[k / betas.size()]), format_number(betas[k % betas.size()])};
        if (errors[k]) {
            code = 2;
            try {
                std::rethrow_exception(errors[k]);
            } catch (const std::exception& e) {
                log << "sweep cell (" << row[0] << ", " << row[1] << ") failed: " << e.what() << '\n';
            }
            for (int c = 0; c < 4; ++c) row.push_back("nan");
        } else {
            auto cells_k = report_cells(reports[k]);
            row.insert(row.end(), cells_k.begin(), cells_k.begin() + 4);
        }
        write_row(csv, row);
    }
    return code;
}

int cmd_convergence(const RunConfig& config, std::ostream& csv, std::ostream& log) {
    if (!config.reference) throw ConfigError("convergence needs a reference (reference.enabled = true)");
    if (config.levels.size() < 3) throw ConfigError("convergence needs at least 3 levels");
    const ReferenceSolution ref = build_reference(config);
    std::vector<std::shared_ptr<const Mesh>> meshes;
    for (int k : config.levels) meshes.push_back(build_mesh(config, level_size(config.mesh_kind, k)));
    const std::size_t L = config.levels.size();
    std::vector<std::exception_ptr> errors;
    const auto reports = parallel_map<ErrorReport>(
        config.means.size() * L,
        [&](std::size_t k) {
            const SolvedCase sc = solve_case(config, meshes[k % L], config.means[k / L]);
            return error_report(sc.system, sc.U, ref);
        },
        config.threads, &errors);

    std::vector<std::string> header = {"record"};
    header.insert(header.end(), kReportHeader.begin(), kReportHeader.end());
    header.push_back("eoc_u");
    header.push_back("eoc_flux");
    write_row(csv, header);
    int code = 0;
    for (std::size_t m = 0; m < config.means.size(); ++m) {
        std::vector<ErrorReport> rows;
        bool ok = true;
        for (std::size_t l = 0; l < L; ++l) {
            const std::size_t k = m * L + l;
            std::vector<std::string> row = {"level"};
            if (errors[k]) {
                ok = false;
                code = 2;
                try {
                    std::rethrow_exception(errors[k]);
                } catch (const std::exception& e) {
                    log << config.means[m].label() << " level " << config.levels[l] << " failed: " << e.what() << '\n';
                }
                row.insert(row.end(), {config.means[m].label(), std::to_string(meshes[l]->num_cells()),
                                       format_number(meshes[l]->diameter()), "nan", "nan", "nan", "nan", "nan"});
            } else {
                rows.push_back(reports[k]);
                auto r = report_row(reports[k]);
                row.insert(row.end(), r.begin(), r.end());
            }
            row.push_back("nan");
            row.push_back("nan");
            write_row(csv, row);
        }
        double eu = std::nan(""), ej = std::nan("");
        if (ok) {
            const ConvergenceTable t = make_convergence_table(rows);
            eu = t.eoc_u;
            ej = t.eoc_flux;
        }
        write_row(csv, {"eoc", config.means[m].label(), "nan", "nan", "nan", "nan", "nan", "nan", "nan",
                        format_number(eu), format_number(ej)});
    }
    return code;
}

int cmd_compare(const RunConfig& config, std::ostream& csv, std::ostream& log) {
    if (config.levels.size() < 3) throw ConfigError("compare needs at least 3 levels");
    struct Row {
        std::size_t n = 0;
        double h = 0.0;
        SchemeComparison cmp;
    };
    std::vector<std::exception_ptr> errors;
    const auto rows = parallel_map<Row>(
        config.levels.size(),
        [&](std::size_t l) {
            const auto mesh = build_mesh(config, level_size(config.mesh_kind, config.levels[l]));
            const SolvedCase a = solve_case(config, mesh, config.compare_a);
            const SolvedCase b = solve_case(config, mesh, config.compare_b);
            return Row{mesh->num_cells(), mesh->diameter(), compare_schemes(a.system, b.system, a.U, b.U, config.compare_hat)};
        },
        config.threads, &errors);
    write_row(csv, {"record", "n", "h", "flux_gap", "bound_rhs", "slope"});
    int code = 0;
    std::vector<double> hs, gaps;
    for (std::size_t l = 0; l < rows.size(); ++l) {
        if (errors[l]) {
            code = 2;
            try {
                std::rethrow_exception(errors[l]);
            } catch (const std::exception& e) {
                log << "compare level " << config.levels[l] << " failed: " << e.what() << '\n';
            }
            write_row(csv, {"level", "nan", "nan", "nan", "nan", "nan"});
            continue;
        }
        hs.push_back(rows[l].h);
        gaps.push_back(rows[l].cmp.flux_gap);
        write_row(csv, {"level", std::to_string(rows[l].n), format_number(rows[l].h), format_number(rows[l].cmp.flux_gap),
                        format_number(rows[l].cmp.bound_rhs), "nan"});
    }
    double slope = std::nan("");
    const bool positive = std::all_of(gaps.begin(), gaps.end(), [](double g) { return g > 0.0; });
    if (code == 0 && positive) slope = fit_eoc(hs, gaps);
    write_row(csv, {"slope", "nan", "nan", "nan", "nan", format_number(slope)});
    return code;
}

int cmd_reference(const RunConfig& config, std::ostream& csv, std::ostream& log) {
    const ReferenceSolution ref = build_reference(config);
    write_row(csv, {"x", "u", "J"});
    for (std::size_t k = 0; k < ref.x.size(); ++k) {
        write_row(csv, {format_number(ref.x[k]), format_number(ref.u[k]), format_number(ref.J[k])});
    }
    log << "shooting parameter J(a) = " << format_number(ref.shoot_parameter) << ", boundary residual "
        << format_number(ref.boundary_residual) << ", Brent iterations " << ref.brent_iterations << '\n';
    return 0;
}

int cmd_check(const RunConfig& config, std::ostream& out) {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        out << (ok ? "PASS " : "FAIL ") << name;
        if (!ok) out << ": " << detail;
        out << '\n';
        if (!ok) ++failures;
    };

    std::vector<MeanSpec> specs;
    for (NamedMean m : {NamedMean::Max, NamedMean::Quadratic, NamedMean::Arithmetic, NamedMean::Logarithmic,
                        NamedMean::Geometric, NamedMean::ScharfetterGummel, NamedMean::Harmonic, NamedMean::Min}) {
        specs.push_back(MeanSpec::named(m));
    }
    for (int k = 0; k < 4; ++k) specs.push_back(MeanSpec::general(-4.0 + 10.0 * unit(rng), -4.0 + 10.0 * unit(rng)));

    // Mean axioms and detailed balance.
    {
        double worst_sym = 0.0, worst_db = 0.0;
        bool bounded = true;
        for (int k = 0; k < 2000; ++k) {
            const MeanSpec& s = specs[k % specs.size()];
            const double x = std::exp(-10.0 + 20.0 * unit(rng)), y = std::exp(-10.0 + 20.0 * unit(rng));
            const double sxy = stolarsky(s, x, y), syx = stolarsky(s, y, x);
            worst_sym = std::max(worst_sym, std::abs(sxy - syx) / sxy);
            bounded = bounded && sxy >= std::min(x, y) && sxy <= std::max(x, y);
            const double z = -30.0 + 60.0 * unit(rng);
            const double lhs = weight_B(s, -z), rhs = std::exp(z) * weight_B(s, z);
            worst_db = std::max(worst_db, std::abs(lhs - rhs) / std::abs(rhs));
        }
        report("mean symmetry", worst_sym <= 1e-14, "relative asymmetry " + format_number(worst_sym));
        report("mean bounds", bounded, "a mean left [min, max]");
        report("detailed balance of weights", worst_db <= 1e-12, "relative defect " + format_number(worst_db));
    }

    // Stationarity and matrix structure on a random non-uniform mesh.
    {
        std::vector<double> nodes;
        double x = 0.0;
        for (int k = 0; k < 40; ++k) {
            x += 0.5 + unit(rng);
            nodes.push_back(x);
        }
        const double total = x + 0.5 + unit(rng);
        for (double& v : nodes) v /= total;
        auto mesh = std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, nodes));
        const double amp = 1.0 + 2.0 * unit(rng);
        Problem p;
        p.domain = Box::interval(0.0, 1.0);
        p.V = [amp](const Point& q) { return amp * std::sin(2.0 * 3.141592653589793 * q[0]); };
        p.f = [](const Point&) { return 0.0; };
        p.kappa = [](const Point& q) { return 1.0 + 0.5 * q[0]; };
        p.dirichlet = [&p](const Point& q) { return std::exp(-p.V(q)); };
        double worst = 0.0;
        bool structure = true;
        for (const MeanSpec& s : specs) {
            const DiscreteSystem sys = assemble(p, mesh, s);
            const auto U = expand_solution(sys, solve(sys).solution);
            const auto u = to_density(sys, U);
            for (std::size_t k = 0; k < u.size(); ++k) worst = std::max(worst, std::abs(u[k] - sys.pi[k]) / sys.pi[k]);
            const CsrMatrix& A = sys.matrix;
            for (std::size_t i = 0; i < A.rows; ++i) {
                for (std::size_t q = A.row_ptr[i]; q < A.row_ptr[i + 1]; ++q) {
                    const std::size_t j = A.col[q];
                    structure = structure && A.at(j, i) == A.val[q] && (i == j ? A.val[q] > 0.0 : A.val[q] <= 0.0);
                }
            }
        }
        report("stationarity", worst <= 1e-11, "max relative deviation " + format_number(worst));
        report("symmetric M-matrix structure", structure, "symmetry or sign pattern violated");
    }

    // Geometric-mean factorization of the kinetic coefficient.
    {
        double worst = 0.0;
        const MeanSpec geo = MeanSpec::named(NamedMean::Geometric);
        for (int k = 0; k < 2000; ++k) {
            const double ui = std::exp(-5 + 10 * unit(rng)), uj = std::exp(-5 + 10 * unit(rng));
            const double pi = std::exp(-5 + 10 * unit(rng)), pj = std::exp(-5 + 10 * unit(rng));
            const double lhs = stolarsky(geo, pi, pj) * kinetic_coefficient(ui, uj, pi, pj);
            worst = std::max(worst, std::abs(lhs - std::sqrt(ui * uj)) / std::sqrt(ui * uj));
        }
        report("geometric mean factorization", worst <= 1e-12, "relative defect " + format_number(worst));
    }
    return failures == 0 ? 0 : 2;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
        (args.empty() ? err : out) << kUsage;
        return args.empty() ? 1 : 0;
    }
    const std::string& command = args[0];
    try {
        Config explicit_config;
        bool have_file = false;
        for (std::size_t k = 1; k < args.size(); ++k) {
            const std::string& a = args[k];
            if (a.rfind("--", 0) == 0) {
                const auto eq = a.find('=');
                if (eq == std::string::npos) throw ConfigError("flag '" + a + "' needs the form --key=value");
                explicit_config.set(a.substr(2, eq - 2), a.substr(eq + 1));
            } else if (!have_file) {
                std::ifstream in(a, std::ios::binary);
                if (!in) throw ConfigError("cannot open config file '" + a + "'");
                std::stringstream ss;
                ss << in.rdbuf();
                Config file = Config::parse(ss.str());
                for (const auto& [key, value] : file.values()) {
                    if (!explicit_config.has(key)) explicit_config.set(key, value);
                }
                have_file = true;
            } else {
                throw ConfigError("unexpected argument '" + a + "'");
            }
        }
        const RunConfig config = resolve_config(explicit_config);

        std::ofstream out_file;
        std::ostream* csv = &out;
        if (!config.output.empty()) {
            out_file.open(config.output, std::ios::binary | std::ios::trunc);
            if (!out_file) throw ConfigError("cannot open output file '" + config.output + "'");
            csv = &out_file;
        }
        std::ofstream report_file;
        std::ostream* report = config.output.empty() ? &err : &out;
        if (!config.report.empty()) {
            report_file.open(config.report, std::ios::binary | std::ios::trunc);
            if (!report_file) throw ConfigError("cannot open report file '" + config.report + "'");
            report = &report_file;
        }

        if (command == "solve") return cmd_solve(config, *csv, *report);
        if (command == "sweep") return cmd_sweep(config, *csv, err);
        if (command == "convergence") return cmd_convergence(config, *csv, err);
        if (command == "compare") return cmd_compare(config, *csv, err);
        if (command == "reference") return cmd_reference(config, *csv, err);
        if (command == "check") return cmd_check(config, *csv);
        throw ConfigError("unknown command '" + command + "'");
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const ProblemEvaluationError& e) {
        err << "problem evaluation error: " << e.what() << '\n';
        return 1;
    } catch (const NonConvergence& e) {
        err << "numerical failure: " << e.what() << " (best residual " << format_number(e.best_residual()) << ")\n";
        return 2;
    } catch (const NumericError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace stolfv
