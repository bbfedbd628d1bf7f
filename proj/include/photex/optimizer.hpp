// Derivative-free maximization of the peak excitation probability over
// parametrized pulse families. Two interchangeable objective routes: the
// closed-form driving integral (analytic quadrature) and full numerical
// propagation on the mode grid.
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "photex/core.hpp"
#include "photex/propagator.hpp"

namespace photex {

enum class ObjectiveMode { kAnalyticQuadrature, kNumericPropagation };

std::string to_string(ObjectiveMode mode);
ObjectiveMode objective_mode_from_string(const std::string& s);

enum class FamilyKind {
    kGaussianWidth,
    kTruncatedExponentialDuration,
    kArrivalOffset,
    kCustom,
};

std::string to_string(FamilyKind kind);

// Atom, grid and propagation window shared by all objective evaluations.
// The truncated-exponential family overrides t_start with t0 - T.
struct ObjectiveContext {
    AtomParams atom;
    GridPtr grid;
    PropagatorConfig window;
};

struct ParamBounds {
    double lo = 0.0;
    double hi = 0.0;
};

struct PulseFamily {
    FamilyKind kind = FamilyKind::kCustom;
    std::string name = "custom";
    std::vector<ParamBounds> bounds;
    // numeric route: parameter -> PhotonState
    std::function<PhotonState(std::span<const double>, const ObjectiveContext&)>
        build_state;
    // analytic route: parameter -> unit-norm envelope (empty = numeric only)
    std::function<TemporalEnvelope(std::span<const double>, const ObjectiveContext&)>
        build_envelope;

    void validate() const;
    std::size_t dimension() const { return bounds.size(); }

    // sigma of the spectral Gaussian, bounds in units of Gamma = 1
    static PulseFamily gaussian_width(double sigma_lo, double sigma_hi);
    // interaction duration T of the ideal pulse (window starts at t0 - T)
    static PulseFamily truncated_exponential_duration(double T_lo, double T_hi);
    // shift s of the rising-exponential edge relative to t0
    static PulseFamily arrival_offset(double s_lo, double s_hi);
};

struct Evaluation {
    std::vector<double> param;
    double value = 0.0;
    double t_peak = 0.0;
    bool ok = false;
    std::string error;
};

struct OptimizationResult {
    std::vector<double> best_param;
    double best_value = 0.0;
    double best_t_peak = 0.0;
    std::vector<Evaluation> evaluations;
    ObjectiveMode objective_mode = ObjectiveMode::kAnalyticQuadrature;
    std::string family;
};

// Peak excitation probability for one parameter point; failures are
// reported in the Evaluation rather than thrown.
Evaluation evaluate_objective(const PulseFamily& family,
                              std::span<const double> param, ObjectiveMode mode,
                              const ObjectiveContext& ctx);

// Uniform-grid evaluation over the bounds (tensor grid for multi-parameter
// families). Failed points are recorded and skipped; all points failing is
// an error. Evaluations run in parallel and are logged in grid order.
OptimizationResult scan(const PulseFamily& family, int n_points,
                        ObjectiveMode mode, const ObjectiveContext& ctx);

// Local derivative-free maximization from a seed inside the bounds:
// golden-section in one dimension, Nelder-Mead otherwise, to a parameter
// tolerance of 1e-3 of the bound width.
OptimizationResult refine(const PulseFamily& family,
                          std::span<const double> seed, ObjectiveMode mode,
                          const ObjectiveContext& ctx);

namespace detail {

// Nelder-Mead maximization; exposed for direct testing.
std::vector<double> nelder_mead(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> seed, std::span<const ParamBounds> bounds,
    double tol, int max_iter);

}  // namespace detail

}  // namespace photex
