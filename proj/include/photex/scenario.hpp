// Declarative scenario configs in, deterministic CSV/JSON out. A config
// holds one or more scenarios; each names an atom, a mode grid, a pulse
// from the state catalog, a propagation window and a list of outputs.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "photex/core.hpp"
#include "photex/optimizer.hpp"
#include "photex/propagator.hpp"

namespace photex {

// Schema or validation failure; `path` is the offending config field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path.empty() ? message : path + ": " + message),
          path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct GridSpec {
    double bandwidth_factor = 400.0;
    int n_modes = 4001;
};

struct PulseSpec {
    // ideal | reflected | gaussian | rising-exponential | decaying-exponential
    // | excited-atom | vacuum
    std::string kind = "ideal";
    double sigma = 1.46;        // gaussian
    double edge_offset = 0.0;   // rising/decaying exponential edge vs t0
};

struct WindowSpec {
    double t_start = 0.0;
    double t_end = 0.0;
    double dt = 0.0015;
    int sample_stride = 1;
    bool present = false;
};

struct OutputSpec {
    // trajectory | spectrum | temporal-profile | variance-map | optimization
    std::string kind;
    std::string file;

    // temporal-profile
    std::optional<double> t_min, t_max;
    int n_t = 2001;

    // variance-map
    std::optional<double> r;
    int theta_count = 19;
    double e_dot_etheta = 1.0;
    bool normalized = true;

    // optimization
    std::string family;
    double min = 0.0, max = 0.0;
    int n_points = 97;
    std::string objective = "analytic-quadrature";
    bool refine = true;
    std::optional<double> seed;
};

struct Scenario {
    std::string name;
    AtomParams atom;
    GridSpec grid;
    PulseSpec pulse;
    WindowSpec window;
    std::vector<OutputSpec> outputs;
};

struct Config {
    int schema_version = 1;
    std::vector<Scenario> scenarios;
    std::string source_path;
    std::uint64_t hash = 0;  // FNV-1a of the config bytes
};

// Parse + fail-fast validation of every scenario. Throws ConfigError with a
// path-qualified message.
Config load_config(const std::filesystem::path& path);
Config parse_config(const std::string& text, const std::string& source_name);

struct RunOptions {
    std::filesystem::path out_dir = ".";
    bool strict = false;  // warnings become errors
};

// Exit statuses: 0 ok, 2 config/schema, 3 physics invariant violation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPhysics = 3;

// Execute every output of every scenario (run) or only the optimization
// outputs (optimize). The returned status aggregates per-scenario statuses.
int run_config(const Config& config, const RunOptions& options, std::ostream& log);
int optimize_config(const Config& config, const RunOptions& options,
                    std::ostream& log);

// One line per *.toml config found in `dir` (sorted by filename).
int list_scenarios(const std::filesystem::path& dir, std::ostream& out);

namespace detail {

std::uint64_t fnv1a64(std::string_view bytes);
// Shortest round-trip decimal representation.
std::string format_double(double v);
std::string header_line(std::uint64_t config_hash);

}  // namespace detail

}  // namespace photex
