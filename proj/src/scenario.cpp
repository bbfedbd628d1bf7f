#include "photex/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "photex/analytic.hpp"
#include "photex/toml.hpp"
#include "photex/version.hpp"

namespace photex {

namespace detail {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string format_double(double v) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, p);
}

std::string header_line(std::uint64_t config_hash) {
    std::ostringstream out;
    out << "# photex " << kVersion << " config-hash=" << std::hex << config_hash;
    return out.str();
}

}  // namespace detail

namespace {

using toml::Value;

// ---------------------------------------------------------------------------
// config reading helpers

[[noreturn]] void config_fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path, msg);
}

double require_number(const Value& table, const std::string& key,
                      const std::string& path) {
    const Value* v = table.find(key);
    if (!v) config_fail(path + "." + key, "missing required field");
    if (v->kind != Value::Kind::kFloat && v->kind != Value::Kind::kInteger) {
        config_fail(path + "." + key, "expected a number");
    }
    return v->number;
}

double number_or(const Value& table, const std::string& key,
                 const std::string& path, double fallback) {
    const Value* v = table.find(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::kFloat && v->kind != Value::Kind::kInteger) {
        config_fail(path + "." + key, "expected a number");
    }
    return v->number;
}

int integer_or(const Value& table, const std::string& key, const std::string& path,
               int fallback) {
    const Value* v = table.find(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::kInteger) {
        config_fail(path + "." + key, "expected an integer");
    }
    return static_cast<int>(v->integer);
}

std::string string_or(const Value& table, const std::string& key,
                      const std::string& path, const std::string& fallback) {
    const Value* v = table.find(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::kString) {
        config_fail(path + "." + key, "expected a string");
    }
    return v->str;
}

bool bool_or(const Value& table, const std::string& key, const std::string& path,
             bool fallback) {
    const Value* v = table.find(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::kBool) {
        config_fail(path + "." + key, "expected true or false");
    }
    return v->boolean;
}

void reject_unknown_keys(const Value& table, const std::string& path,
                         std::initializer_list<std::string_view> known) {
    for (const auto& [key, value] : table.table) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            config_fail(path + "." + key, "unknown field");
        }
    }
}

const std::vector<std::string> kPulseKinds = {
    "ideal",       "reflected",    "gaussian", "rising-exponential",
    "decaying-exponential", "excited-atom", "vacuum"};

OutputSpec parse_output(const Value& v, const std::string& path) {
    reject_unknown_keys(v, path,
                        {"kind", "file", "t_min", "t_max", "n_t", "r", "theta_count",
                         "e_dot_etheta", "normalized", "family", "min", "max",
                         "n_points", "objective", "refine", "seed"});
    OutputSpec out;
    out.kind = string_or(v, "kind", path, "");
    if (out.kind.empty()) config_fail(path + ".kind", "missing required field");
    const std::vector<std::string> kinds = {"trajectory", "spectrum",
                                            "temporal-profile", "variance-map",
                                            "optimization"};
    if (std::find(kinds.begin(), kinds.end(), out.kind) == kinds.end()) {
        config_fail(path + ".kind", "unknown output kind '" + out.kind + "'");
    }
    out.file = string_or(v, "file", path, "");
    if (out.file.empty()) config_fail(path + ".file", "missing required field");

    if (const Value* t = v.find("t_min")) out.t_min = t->as_number();
    if (const Value* t = v.find("t_max")) out.t_max = t->as_number();
    out.n_t = integer_or(v, "n_t", path, out.n_t);
    if (const Value* t = v.find("r")) out.r = t->as_number();
    out.theta_count = integer_or(v, "theta_count", path, out.theta_count);
    out.e_dot_etheta = number_or(v, "e_dot_etheta", path, out.e_dot_etheta);
    out.normalized = bool_or(v, "normalized", path, out.normalized);

    out.family = string_or(v, "family", path, "");
    out.min = number_or(v, "min", path, 0.0);
    out.max = number_or(v, "max", path, 0.0);
    out.n_points = integer_or(v, "n_points", path, out.n_points);
    out.objective = string_or(v, "objective", path, out.objective);
    out.refine = bool_or(v, "refine", path, out.refine);
    if (const Value* s = v.find("seed")) out.seed = s->as_number();

    if (out.kind == "optimization") {
        if (out.family.empty()) config_fail(path + ".family", "missing required field");
        if (!v.find("min")) config_fail(path + ".min", "missing required field");
        if (!v.find("max")) config_fail(path + ".max", "missing required field");
        if (!(out.min <= out.max)) {
            config_fail(path + ".min", "min (" + detail::format_double(out.min) +
                                           ") must be <= max (" +
                                           detail::format_double(out.max) + ")");
        }
        if (out.n_points < 3) config_fail(path + ".n_points", "must be >= 3");
        try {
            objective_mode_from_string(out.objective);
        } catch (const std::exception& e) {
            config_fail(path + ".objective", e.what());
        }
        if (out.seed && !(*out.seed >= out.min && *out.seed <= out.max)) {
            config_fail(path + ".seed", "seed outside [min, max]");
        }
    } else if (out.kind == "temporal-profile") {
        if (out.n_t < 2) config_fail(path + ".n_t", "must be >= 2");
    } else if (out.kind == "variance-map") {
        if (out.theta_count < 2) config_fail(path + ".theta_count", "must be >= 2");
        if (out.n_t < 2) config_fail(path + ".n_t", "must be >= 2");
    }
    return out;
}

Scenario parse_scenario(const Value& v, const std::string& path) {
    reject_unknown_keys(v, path, {"name", "atom", "grid", "pulse", "window", "output"});
    Scenario sc;
    sc.name = string_or(v, "name", path, "");
    if (sc.name.empty()) config_fail(path + ".name", "missing required field");

    if (const Value* atom = v.find("atom")) {
        if (!atom->is_table()) config_fail(path + ".atom", "expected a table");
        reject_unknown_keys(*atom, path + ".atom", {"gamma", "omega0", "t0"});
        sc.atom.gamma = number_or(*atom, "gamma", path + ".atom", sc.atom.gamma);
        sc.atom.omega0 = number_or(*atom, "omega0", path + ".atom",
                                   1e4 * sc.atom.gamma);
        sc.atom.t0 = number_or(*atom, "t0", path + ".atom", sc.atom.t0);
    }
    if (const Value* grid = v.find("grid")) {
        if (!grid->is_table()) config_fail(path + ".grid", "expected a table");
        reject_unknown_keys(*grid, path + ".grid", {"bandwidth_factor", "n_modes"});
        sc.grid.bandwidth_factor = number_or(*grid, "bandwidth_factor",
                                             path + ".grid", sc.grid.bandwidth_factor);
        sc.grid.n_modes = integer_or(*grid, "n_modes", path + ".grid", sc.grid.n_modes);
    }
    if (const Value* pulse = v.find("pulse")) {
        if (!pulse->is_table()) config_fail(path + ".pulse", "expected a table");
        reject_unknown_keys(*pulse, path + ".pulse", {"kind", "sigma", "edge_offset"});
        sc.pulse.kind = string_or(*pulse, "kind", path + ".pulse", sc.pulse.kind);
        sc.pulse.sigma = number_or(*pulse, "sigma", path + ".pulse", sc.pulse.sigma);
        sc.pulse.edge_offset =
            number_or(*pulse, "edge_offset", path + ".pulse", sc.pulse.edge_offset);
    }
    if (const Value* window = v.find("window")) {
        if (!window->is_table()) config_fail(path + ".window", "expected a table");
        reject_unknown_keys(*window, path + ".window",
                            {"t_start", "t_end", "dt", "sample_stride"});
        sc.window.t_start = require_number(*window, "t_start", path + ".window");
        sc.window.t_end = require_number(*window, "t_end", path + ".window");
        sc.window.dt = number_or(*window, "dt", path + ".window", sc.window.dt);
        sc.window.sample_stride =
            integer_or(*window, "sample_stride", path + ".window", sc.window.sample_stride);
        sc.window.present = true;
    }
    if (const Value* outputs = v.find("output")) {
        if (!outputs->is_array()) config_fail(path + ".output", "expected [[output]] tables");
        for (std::size_t i = 0; i < outputs->array.size(); ++i) {
            sc.outputs.push_back(parse_output(outputs->array[i],
                                              path + ".output[" + std::to_string(i) + "]"));
        }
    }
    return sc;
}

bool pulse_kind_valid(const std::string& kind) {
    return std::find(kPulseKinds.begin(), kPulseKinds.end(), kind) != kPulseKinds.end();
}

// Fail-fast physics validation: every referenced parameter must satisfy the
// owning module's invariants before anything runs.
void validate_scenario(const Scenario& sc, const std::string& path,
                       std::vector<std::string>& warnings) {
    try {
        sc.atom.validate();
    } catch (const std::exception& e) {
        config_fail(path + ".atom", e.what());
    }
    if (!sc.atom.rotating_wave_valid()) {
        warnings.push_back(path + ".atom: gamma/omega0 = " +
                           detail::format_double(sc.atom.gamma / sc.atom.omega0) +
                           " >= 1e-3; rotating-wave validity is marginal");
    }
    GridPtr grid;
    try {
        grid = build_mode_grid(sc.atom, sc.grid.bandwidth_factor, sc.grid.n_modes);
    } catch (const std::exception& e) {
        config_fail(path + ".grid", e.what());
    }
    if (!pulse_kind_valid(sc.pulse.kind)) {
        config_fail(path + ".pulse.kind", "unknown pulse kind '" + sc.pulse.kind + "'");
    }
    if (sc.pulse.kind == "gaussian" && !(sc.pulse.sigma > 0.0)) {
        config_fail(path + ".pulse.sigma", "must be > 0");
    }

    bool needs_window = false;
    for (const OutputSpec& out : sc.outputs) {
        if (out.kind == "trajectory" || out.kind == "optimization") needs_window = true;
    }
    if (needs_window && !sc.window.present) {
        config_fail(path + ".window", "required by trajectory/optimization outputs");
    }
    if (sc.window.present) {
        PropagatorConfig cfg;
        cfg.dt = sc.window.dt;
        cfg.t_start = sc.window.t_start;
        cfg.t_end = sc.window.t_end;
        cfg.sample_stride = sc.window.sample_stride;
        try {
            cfg.validate(*grid, sc.atom);
        } catch (const std::exception& e) {
            config_fail(path + ".window", e.what());
        }
    }
    for (std::size_t i = 0; i < sc.outputs.size(); ++i) {
        const OutputSpec& out = sc.outputs[i];
        const std::string opath = path + ".output[" + std::to_string(i) + "]";
        if (out.kind == "variance-map") {
            const double r = out.r.value_or(100.0 / sc.atom.omega0);
            if (!(r >= 10.0 / sc.atom.omega0)) {
                config_fail(opath + ".r", "violates the far-field requirement r >= 10/omega0");
            }
        }
        if (out.kind == "optimization" && out.family != "gaussian-width" &&
            out.family != "truncated-exponential-duration" &&
            out.family != "arrival-offset") {
            config_fail(opath + ".family", "unknown family '" + out.family + "'");
        }
    }
}

// ---------------------------------------------------------------------------
// execution

PhotonState make_pulse(const Scenario& sc, const GridPtr& grid) {
    const PulseSpec& p = sc.pulse;
    if (p.kind == "ideal") return ideal_state(grid, sc.atom);
    if (p.kind == "reflected") return reflected_state(grid, sc.atom);
    if (p.kind == "gaussian") return gaussian_state(grid, sc.atom, p.sigma * sc.atom.gamma);
    if (p.kind == "rising-exponential") {
        return envelope_state(
            grid,
            TemporalEnvelope::rising_exponential(sc.atom.gamma,
                                                 sc.atom.t0 + p.edge_offset),
            sc.atom);
    }
    if (p.kind == "decaying-exponential") {
        return envelope_state(
            grid,
            TemporalEnvelope::decaying_exponential(sc.atom.gamma,
                                                   sc.atom.t0 + p.edge_offset),
            sc.atom);
    }
    if (p.kind == "excited-atom") return PhotonState::excited_atom(grid);
    if (p.kind == "vacuum") return PhotonState::vacuum(grid);
    throw std::invalid_argument("unknown pulse kind '" + p.kind + "'");
}

class ScenarioRunner {
public:
    ScenarioRunner(const Config& config, const RunOptions& options, std::ostream& log)
        : config_(config), options_(options), log_(log) {}

    int run(bool optimization_only) {
        int status = kExitOk;
        for (const Scenario& sc : config_.scenarios) {
            try {
                run_scenario(sc, optimization_only);
            } catch (const ConfigError& e) {
                log_ << "[" << sc.name << "] config error: " << e.what() << "\n";
                status = std::max(status, kExitConfig);
            } catch (const std::exception& e) {
                log_ << "[" << sc.name << "] physics invariant violation: " << e.what()
                     << "\n";
                status = std::max(status, kExitPhysics);
            }
        }
        if (options_.strict && !warnings_.empty() && status == kExitOk) {
            log_ << "strict mode: " << warnings_.size() << " warning(s) escalated to errors\n";
            status = kExitPhysics;
        }
        return status;
    }

private:
    void warn(const std::string& msg) {
        warnings_.push_back(msg);
        log_ << "warning: " << msg << "\n";
    }

    std::filesystem::path target_path(const std::string& file) const {
        return options_.out_dir / file;
    }

    void run_scenario(const Scenario& sc, bool optimization_only) {
        const GridPtr grid = build_mode_grid(sc.atom, sc.grid.bandwidth_factor,
                                             sc.grid.n_modes);
        if (!sc.atom.rotating_wave_valid()) {
            warn("[" + sc.name + "] gamma/omega0 >= 1e-3; rotating-wave validity is marginal");
        }

        std::optional<PhotonState> state;
        std::optional<Trajectory> traj;
        auto ensure_state = [&]() -> const PhotonState& {
            if (!state) {
                state = make_pulse(sc, grid);
                if (state->label.find("[aliasing-warning]") != std::string::npos) {
                    warn("[" + sc.name + "] pulse envelope triggered the aliasing heuristic");
                }
            }
            return *state;
        };
        auto ensure_trajectory = [&]() -> const Trajectory& {
            if (!traj) {
                PropagatorConfig cfg;
                cfg.dt = sc.window.dt;
                cfg.t_start = sc.window.t_start;
                cfg.t_end = sc.window.t_end;
                cfg.sample_stride = sc.window.sample_stride;
                traj = propagate(ensure_state(), sc.atom, cfg);
            }
            return *traj;
        };

        for (const OutputSpec& out : sc.outputs) {
            if (optimization_only && out.kind != "optimization") continue;
            if (out.kind == "trajectory") {
                write_trajectory(sc, out, ensure_trajectory());
            } else if (out.kind == "spectrum") {
                write_spectrum(sc, out, ensure_state());
            } else if (out.kind == "temporal-profile") {
                write_profile(sc, out, ensure_state());
            } else if (out.kind == "variance-map") {
                write_variance_map(sc, out);
            } else if (out.kind == "optimization") {
                write_optimization(sc, out, grid);
            }
        }
    }

    std::ofstream open_output(const std::string& file) {
        std::filesystem::create_directories(options_.out_dir);
        const auto path = target_path(file);
        std::ofstream stream(path, std::ios::binary);
        if (!stream) {
            throw std::runtime_error("cannot open output file '" + path.string() + "'");
        }
        return stream;
    }

    void write_trajectory(const Scenario& sc, const OutputSpec& out,
                          const Trajectory& traj) {
        auto stream = open_output(out.file);
        stream << detail::header_line(config_.hash) << "\n";
        stream << "# scenario=" << sc.name << " output=trajectory pulse=" << traj.state_label
               << " gamma=" << detail::format_double(sc.atom.gamma)
               << " t0=" << detail::format_double(sc.atom.t0)
               << " bandwidth_factor=" << detail::format_double(sc.grid.bandwidth_factor)
               << " n_modes=" << sc.grid.n_modes
               << " dt=" << detail::format_double(traj.config.dt) << "\n";
        stream << "t,re_f0,im_f0,prob,norm\n";
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            stream << detail::format_double(traj.times[i]) << ','
                   << detail::format_double(traj.f0[i].real()) << ','
                   << detail::format_double(traj.f0[i].imag()) << ','
                   << detail::format_double(traj.prob[i]) << ','
                   << detail::format_double(traj.norm[i]) << "\n";
        }
        log_ << "[" << sc.name << "] wrote " << out.file << " (" << traj.times.size()
             << " rows)\n";
    }

    void write_spectrum(const Scenario& sc, const OutputSpec& out,
                        const PhotonState& state) {
        const ModeGrid& grid = *state.grid;
        auto stream = open_output(out.file);
        stream << detail::header_line(config_.hash) << "\n";
        stream << "# scenario=" << sc.name << " output=spectrum pulse=" << state.label
               << " n_modes=" << grid.n_modes()
               << " delta_omega=" << detail::format_double(grid.delta_omega()) << "\n";
        stream << "delta,re_c,im_c,prob_density\n";
        const auto d = grid.detunings();
        for (std::size_t l = 0; l < state.mode_amps.size(); ++l) {
            stream << detail::format_double(d[l]) << ','
                   << detail::format_double(state.mode_amps[l].real()) << ','
                   << detail::format_double(state.mode_amps[l].imag()) << ','
                   << detail::format_double(std::norm(state.mode_amps[l]) /
                                            grid.delta_omega())
                   << "\n";
        }
        log_ << "[" << sc.name << "] wrote " << out.file << " (" << state.mode_amps.size()
             << " rows)\n";
    }

    void write_profile(const Scenario& sc, const OutputSpec& out,
                       const PhotonState& state) {
        const double lo = out.t_min.value_or(sc.atom.t0 - 10.0 / sc.atom.gamma);
        const double hi = out.t_max.value_or(sc.atom.t0 + 10.0 / sc.atom.gamma);
        if (!(hi > lo)) {
            throw ConfigError("output.t_max", "t_max must exceed t_min");
        }
        std::vector<double> times(static_cast<std::size_t>(out.n_t));
        for (int i = 0; i < out.n_t; ++i) {
            times[static_cast<std::size_t>(i)] =
                lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(out.n_t - 1);
        }
        const TemporalEnvelope profile = temporal_profile(state, sc.atom, times);
        auto stream = open_output(out.file);
        stream << detail::header_line(config_.hash) << "\n";
        stream << "# scenario=" << sc.name << " output=temporal-profile pulse="
               << state.label << "\n";
        stream << "t,re_phi,im_phi,abs2\n";
        const auto& tv = profile.sample_times();
        const auto& vv = profile.sample_values();
        for (std::size_t i = 0; i < tv.size(); ++i) {
            stream << detail::format_double(tv[i]) << ','
                   << detail::format_double(vv[i].real()) << ','
                   << detail::format_double(vv[i].imag()) << ','
                   << detail::format_double(std::norm(vv[i])) << "\n";
        }
        log_ << "[" << sc.name << "] wrote " << out.file << " (" << tv.size() << " rows)\n";
    }

    void write_variance_map(const Scenario& sc, const OutputSpec& out) {
        const double r = out.r.value_or(100.0 / sc.atom.omega0);
        const double wavefront = sc.atom.t0 - r;  // c = 1
        const double lo = out.t_min.value_or(wavefront - 6.0 / sc.atom.gamma);
        const double hi = out.t_max.value_or(wavefront + 1.0 / sc.atom.gamma);
        auto stream = open_output(out.file);
        stream << detail::header_line(config_.hash) << "\n";
        stream << "# scenario=" << sc.name << " output=variance-map r="
               << detail::format_double(r)
               << " e_dot_etheta=" << detail::format_double(out.e_dot_etheta)
               << " normalized=" << (out.normalized ? "true" : "false") << "\n";
        stream << "theta,t,value\n";
        for (int a = 0; a < out.theta_count; ++a) {
            const double theta = ModeGrid::kPi * static_cast<double>(a) /
                                 static_cast<double>(out.theta_count - 1);
            for (int i = 0; i < out.n_t; ++i) {
                const double t = lo + (hi - lo) * static_cast<double>(i) /
                                          static_cast<double>(out.n_t - 1);
                const analytic::FarFieldPoint p{r, theta, out.e_dot_etheta, t};
                const double value =
                    analytic::far_field_variance(p, sc.atom, out.normalized);
                stream << detail::format_double(theta) << ',' << detail::format_double(t)
                       << ',' << detail::format_double(value) << "\n";
            }
        }
        log_ << "[" << sc.name << "] wrote " << out.file << " ("
             << out.theta_count * out.n_t << " rows)\n";
    }

    void write_optimization(const Scenario& sc, const OutputSpec& out,
                            const GridPtr& grid) {
        PulseFamily family;
        if (out.family == "gaussian-width") {
            family = PulseFamily::gaussian_width(out.min, out.max);
        } else if (out.family == "truncated-exponential-duration") {
            family = PulseFamily::truncated_exponential_duration(out.min, out.max);
        } else {
            family = PulseFamily::arrival_offset(out.min, out.max);
        }
        ObjectiveContext ctx;
        ctx.atom = sc.atom;
        ctx.grid = grid;
        PropagatorConfig cfg;
        cfg.dt = sc.window.dt;
        cfg.t_start = sc.window.t_start;
        cfg.t_end = sc.window.t_end;
        cfg.sample_stride = sc.window.sample_stride;
        ctx.window = cfg;
        const ObjectiveMode mode = objective_mode_from_string(out.objective);

        OptimizationResult result = scan(family, out.n_points, mode, ctx);
        for (const Evaluation& ev : result.evaluations) {
            if (!ev.ok) {
                warn("[" + sc.name + "] scan point skipped: " + ev.error);
            }
        }
        if (out.refine) {
            const double seed = out.seed.value_or(result.best_param[0]);
            const double seed_arr[1] = {seed};
            OptimizationResult refined =
                refine(family, std::span<const double>(seed_arr, 1), mode, ctx);
            // merge: scan log first, refine log appended
            for (Evaluation& ev : refined.evaluations) {
                result.evaluations.push_back(std::move(ev));
            }
            if (refined.best_value > result.best_value) {
                result.best_param = refined.best_param;
                result.best_value = refined.best_value;
                result.best_t_peak = refined.best_t_peak;
            }
        }

        nlohmann::ordered_json j;
        j["schema_version"] = 1;
        j["artifact"] = std::string("photex ") + kVersion;
        j["config_hash"] = detail::header_line(config_.hash).substr(2);
        j["scenario"] = sc.name;
        j["family"] = result.family;
        j["objective_mode"] = to_string(result.objective_mode);
        j["best_param"] = result.best_param;
        j["best_value"] = result.best_value;
        j["best_t_peak"] = result.best_t_peak;
        nlohmann::ordered_json evals = nlohmann::ordered_json::array();
        for (const Evaluation& ev : result.evaluations) {
            nlohmann::ordered_json e;
            e["param"] = ev.param;
            if (ev.ok) {
                e["value"] = ev.value;
                e["t_peak"] = ev.t_peak;
            } else {
                e["error"] = ev.error;
            }
            evals.push_back(std::move(e));
        }
        j["evaluations"] = std::move(evals);

        auto stream = open_output(out.file);
        stream << j.dump(2) << "\n";
        log_ << "[" << sc.name << "] wrote " << out.file << " ("
             << result.evaluations.size() << " evaluations)\n";
    }

    const Config& config_;
    const RunOptions& options_;
    std::ostream& log_;
    std::vector<std::string> warnings_;
};

}  // namespace

Config parse_config(const std::string& text, const std::string& source_name) {
    toml::Value root;
    try {
        root = toml::parse(text);
    } catch (const toml::ParseError& e) {
        config_fail(source_name + ":" + std::to_string(e.line), e.message);
    }
    reject_unknown_keys(root, source_name, {"schema_version", "scenario"});

    Config config;
    config.source_path = source_name;
    config.hash = detail::fnv1a64(text);
    config.schema_version = integer_or(root, "schema_version", source_name, 1);
    if (config.schema_version != 1) {
        config_fail(source_name + ".schema_version", "unsupported schema version");
    }
    const Value* scenarios = root.find("scenario");
    if (!scenarios || !scenarios->is_array() || scenarios->array.empty()) {
        config_fail(source_name + ".scenario", "config must define at least one [[scenario]]");
    }
    for (std::size_t i = 0; i < scenarios->array.size(); ++i) {
        config.scenarios.push_back(
            parse_scenario(scenarios->array[i], "scenario[" + std::to_string(i) + "]"));
    }
    std::vector<std::string> warnings;  // load-time warnings only surface on run
    for (std::size_t i = 0; i < config.scenarios.size(); ++i) {
        validate_scenario(config.scenarios[i], "scenario[" + std::to_string(i) + "]",
                          warnings);
    }
    return config;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path.string(), "cannot open config file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.filename().string());
}

int run_config(const Config& config, const RunOptions& options, std::ostream& log) {
    ScenarioRunner runner(config, options, log);
    return runner.run(false);
}

int optimize_config(const Config& config, const RunOptions& options,
                    std::ostream& log) {
    bool any = false;
    for (const Scenario& sc : config.scenarios) {
        for (const OutputSpec& out : sc.outputs) {
            if (out.kind == "optimization") any = true;
        }
    }
    if (!any) {
        throw ConfigError(config.source_path, "config has no optimization outputs");
    }
    ScenarioRunner runner(config, options, log);
    return runner.run(true);
}

int list_scenarios(const std::filesystem::path& dir, std::ostream& out) {
    if (!std::filesystem::is_directory(dir)) {
        throw ConfigError(dir.string(), "not a directory");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".toml") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        out << file.filename().string() << ":";
        try {
            const Config config = load_config(file);
            for (const Scenario& sc : config.scenarios) out << " " << sc.name;
        } catch (const std::exception& e) {
            out << " (invalid: " << e.what() << ")";
        }
        out << "\n";
    }
    return kExitOk;
}

}  // namespace photex
