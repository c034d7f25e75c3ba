#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stolfv/assembly.hpp"
#include "stolfv/expr.hpp"
#include "stolfv/means.hpp"

namespace stolfv {

/// Flat key = value settings. Later assignments override earlier ones.
class Config {
public:
    /// Lines of `key = value`; '#' starts a comment; values may be quoted.
    static Config parse(std::string_view text);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;
    std::vector<double> points() const;
};

enum class MeshKind { Interval, Vertex, Cubic };

/// Fully resolved run settings.
struct RunConfig {
    std::string V_text;
    std::string f_text;
    std::string kappa_text;
    Problem problem;
    MeshKind mesh_kind = MeshKind::Vertex;
    int n = 1025;
    double h = 0.0;
    std::vector<MeanSpec> means;
    bool reference = false;
    int reference_n_grid = 136474;
    double reference_tol = 1e-12;
    std::string output;  // empty = stdout
    std::string report;  // empty = stdout (or stderr when the CSV goes to stdout)
    unsigned long seed = 1;
    std::vector<int> levels;
    Range sweep_alpha{-4.0, 6.0, 0.5};
    Range sweep_beta{-4.0, 6.0, 0.5};
    MeanSpec compare_a = MeanSpec::named(NamedMean::ScharfetterGummel);
    MeanSpec compare_b = MeanSpec::named(NamedMean::Geometric);
    MeanSpec compare_hat = MeanSpec::named(NamedMean::Geometric);
    unsigned threads = 0;
};

/// Applies a preset (if `preset` is set) under the explicit keys and validates.
RunConfig resolve_config(const Config& config);

/// Builds the configured mesh family with size n: nodes for vertex meshes,
/// cells for interval meshes, cells along the first axis for cubic meshes.
std::shared_ptr<const Mesh> build_mesh(const RunConfig& config, int n);

/// Size parameter of refinement level k: 2^k + 1 for 1D meshes, 2^k for cubic.
int level_size(MeshKind kind, int k);

/// Decimal text with 17 significant digits; "nan" for NaN.
std::string format_number(double v);

int cmd_solve(const RunConfig& config, std::ostream& csv, std::ostream& report);
int cmd_sweep(const RunConfig& config, std::ostream& csv, std::ostream& log);
int cmd_convergence(const RunConfig& config, std::ostream& csv, std::ostream& log);
int cmd_compare(const RunConfig& config, std::ostream& csv, std::ostream& log);
int cmd_reference(const RunConfig& config, std::ostream& csv, std::ostream& log);
int cmd_check(const RunConfig& config, std::ostream& out);

/// Entry point: `stolfv <command> [config-file] [--key=value ...]`.
/// Exit codes: 0 ok, 1 configuration error, 2 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stolfv
