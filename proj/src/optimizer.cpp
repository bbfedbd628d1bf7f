#include "photex/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "photex/analytic.hpp"

namespace photex {

namespace {

constexpr double kGolden = 0.6180339887498949;  // 1/phi

std::vector<double> to_vec(std::span<const double> s) {
    return {s.begin(), s.end()};
}

// Peak of |f0(t)|^2 over [t_in, t_end] for the analytic driving integral:
// coarse grid, then golden polish inside the bracketing samples.
void analytic_peak(const TemporalEnvelope& env, const AtomParams& atom,
                   double t_in, double t_end, double& p_out, double& t_out) {
    const double span = t_end - t_in;
    const int n_c = std::clamp(static_cast<int>(std::ceil(span / (0.02 / atom.gamma))),
                               40, 4000) + 1;
    const double dt_c = span / static_cast<double>(n_c - 1);
    auto p_of = [&](double t) {
        return std::norm(analytic::f0_from_envelope(env, t, t_in, atom));
    };
    int best = 0;
    std::vector<double> p(static_cast<std::size_t>(n_c));
    for (int i = 0; i < n_c; ++i) {
        p[static_cast<std::size_t>(i)] = p_of(t_in + dt_c * i);
        if (p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(best)]) best = i;
    }
    double a = t_in + dt_c * std::max(best - 1, 0);
    double b = t_in + dt_c * std::min(best + 1, n_c - 1);
    // golden section on the bracket
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = p_of(x1), f2 = p_of(x2);
    while (b - a > 1e-6 / atom.gamma) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = p_of(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = p_of(x1);
        }
    }
    if (f1 >= f2) {
        p_out = f1;
        t_out = x1;
    } else {
        p_out = f2;
        t_out = x2;
    }
}

PropagatorConfig window_for(const PulseFamily& family,
                            std::span<const double> param,
                            const ObjectiveContext& ctx) {
    PropagatorConfig cfg = ctx.window;
    if (family.kind == FamilyKind::kTruncatedExponentialDuration) {
        cfg.t_start = ctx.atom.t0 - param[0];
    }
    return cfg;
}

}  // namespace

std::string to_string(ObjectiveMode mode) {
    return mode == ObjectiveMode::kAnalyticQuadrature ? "analytic-quadrature"
                                                      : "numeric-propagation";
}

ObjectiveMode objective_mode_from_string(const std::string& s) {
    if (s == "analytic-quadrature") return ObjectiveMode::kAnalyticQuadrature;
    if (s == "numeric-propagation") return ObjectiveMode::kNumericPropagation;
    throw std::invalid_argument("unknown objective mode '" + s +
                                "' (expected analytic-quadrature or numeric-propagation)");
}

std::string to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::kGaussianWidth: return "gaussian-width";
        case FamilyKind::kTruncatedExponentialDuration:
            return "truncated-exponential-duration";
        case FamilyKind::kArrivalOffset: return "arrival-offset";
        case FamilyKind::kCustom: return "custom";
    }
    return "custom";
}

void PulseFamily::validate() const {
    if (bounds.empty()) throw std::invalid_argument("PulseFamily: empty bounds");
    for (const auto& b : bounds) {
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi)) {
            throw std::invalid_argument("PulseFamily: bounds must be finite");
        }
        if (!(b.lo <= b.hi)) {
            throw std::invalid_argument("PulseFamily: bound lo must be <= hi");
        }
    }
    if (!build_state && !build_envelope) {
        throw std::invalid_argument("PulseFamily: no builder");
    }
}

PulseFamily PulseFamily::gaussian_width(double sigma_lo, double sigma_hi) {
    PulseFamily fam;
    fam.kind = FamilyKind::kGaussianWidth;
    fam.name = "gaussian-width";
    fam.bounds = {{sigma_lo, sigma_hi}};
    fam.build_state = [](std::span<const double> p, const ObjectiveContext& ctx) {
        return gaussian_state(ctx.grid, ctx.atom, p[0]);
    };
    fam.build_envelope = [](std::span<const double> p, const ObjectiveContext& ctx) {
        return TemporalEnvelope::gaussian(p[0], ctx.atom.t0);
    };
    return fam;
}

PulseFamily PulseFamily::truncated_exponential_duration(double T_lo, double T_hi) {
    PulseFamily fam;
    fam.kind = FamilyKind::kTruncatedExponentialDuration;
    fam.name = "truncated-exponential-duration";
    fam.bounds = {{T_lo, T_hi}};
    fam.build_state = [](std::span<const double>, const ObjectiveContext& ctx) {
        return ideal_state(ctx.grid, ctx.atom);
    };
    fam.build_envelope = [](std::span<const double>, const ObjectiveContext& ctx) {
        return TemporalEnvelope::rising_exponential(ctx.atom.gamma, ctx.atom.t0);
    };
    return fam;
}

PulseFamily PulseFamily::arrival_offset(double s_lo, double s_hi) {
    PulseFamily fam;
    fam.kind = FamilyKind::kArrivalOffset;
    fam.name = "arrival-offset";
    fam.bounds = {{s_lo, s_hi}};
    fam.build_state = [](std::span<const double> p, const ObjectiveContext& ctx) {
        return envelope_state(
            ctx.grid, TemporalEnvelope::rising_exponential(ctx.atom.gamma, ctx.atom.t0 + p[0]),
            ctx.atom);
    };
    fam.build_envelope = [](std::span<const double> p, const ObjectiveContext& ctx) {
        return TemporalEnvelope::rising_exponential(ctx.atom.gamma, ctx.atom.t0 + p[0]);
    };
    return fam;
}

Evaluation evaluate_objective(const PulseFamily& family,
                              std::span<const double> param, ObjectiveMode mode,
                              const ObjectiveContext& ctx) {
    Evaluation ev;
    ev.param = to_vec(param);
    try {
        const PropagatorConfig cfg = window_for(family, param, ctx);
        if (mode == ObjectiveMode::kNumericPropagation) {
            if (!family.build_state) {
                throw std::invalid_argument("family has no state builder");
            }
            const PhotonState st = family.build_state(param, ctx);
            const Trajectory traj = propagate(st, ctx.atom, cfg);
            const PeakEstimate peak = max_excitation(traj);
            ev.value = peak.p_max;
            ev.t_peak = peak.t_max;
        } else {
            if (!family.build_envelope) {
                throw std::invalid_argument("family has no envelope builder");
            }
            const TemporalEnvelope env = family.build_envelope(param, ctx);
            analytic_peak(env, ctx.atom, cfg.t_start, cfg.t_end, ev.value, ev.t_peak);
        }
        ev.ok = true;
    } catch (const std::exception& e) {
        ev.ok = false;
        ev.error = e.what();
        ev.value = std::numeric_limits<double>::quiet_NaN();
        ev.t_peak = std::numeric_limits<double>::quiet_NaN();
    }
    return ev;
}

namespace {

OptimizationResult result_from_log(const PulseFamily& family, ObjectiveMode mode,
                                   std::vector<Evaluation> log) {
    OptimizationResult res;
    res.family = family.name;
    res.objective_mode = mode;
    res.evaluations = std::move(log);
    const Evaluation* best = nullptr;
    for (const Evaluation& ev : res.evaluations) {
        if (ev.ok && (!best || ev.value > best->value)) best = &ev;
    }
    if (!best) {
        throw std::runtime_error("optimizer: every objective evaluation failed" +
                                 (res.evaluations.empty()
                                      ? std::string()
                                      : " (first error: " + res.evaluations.front().error + ")"));
    }
    res.best_param = best->param;
    res.best_value = best->value;
    res.best_t_peak = best->t_peak;
    return res;
}

}  // namespace

OptimizationResult scan(const PulseFamily& family, int n_points,
                        ObjectiveMode mode, const ObjectiveContext& ctx) {
    family.validate();
    if (n_points < 3) {
        throw std::invalid_argument("scan: n_points must be >= 3");
    }
    const std::size_t dim = family.dimension();
    std::size_t total = 1;
    for (std::size_t k = 0; k < dim; ++k) {
        total *= static_cast<std::size_t>(n_points);
        if (total > 100000) {
            throw std::invalid_argument("scan: grid too large (> 1e5 points)");
        }
    }

    std::vector<Evaluation> log(total);
    const long long n_total = static_cast<long long>(total);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long idx = 0; idx < n_total; ++idx) {
        std::vector<double> param(dim);
        std::size_t rem = static_cast<std::size_t>(idx);
        for (std::size_t k = dim; k-- > 0;) {
            const std::size_t i = rem % static_cast<std::size_t>(n_points);
            rem /= static_cast<std::size_t>(n_points);
            const auto& b = family.bounds[k];
            param[k] = b.lo + (b.hi - b.lo) * static_cast<double>(i) /
                                  static_cast<double>(n_points - 1);
        }
        log[static_cast<std::size_t>(idx)] =
            evaluate_objective(family, param, mode, ctx);
    }
    return result_from_log(family, mode, std::move(log));
}

namespace detail {

std::vector<double> nelder_mead(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> seed, std::span<const ParamBounds> bounds,
    double tol, int max_iter) {
    const std::size_t d = seed.size();
    auto clamp = [&](std::vector<double>& x) {
        for (std::size_t k = 0; k < d; ++k) {
            x[k] = std::clamp(x[k], bounds[k].lo, bounds[k].hi);
        }
    };
    struct Vertex {
        std::vector<double> x;
        double fx;
    };
    std::vector<Vertex> simplex;
    simplex.reserve(d + 1);
    {
        std::vector<double> x0 = to_vec(seed);
        clamp(x0);
        simplex.push_back({x0, f(x0)});
        for (std::size_t k = 0; k < d; ++k) {
            std::vector<double> x = x0;
            const double w = bounds[k].hi - bounds[k].lo;
            x[k] += (x[k] + 0.05 * w <= bounds[k].hi ? 0.05 : -0.05) * w;
            clamp(x);
            simplex.push_back({x, f(x)});
        }
    }
    auto order = [&]() {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.fx > b.fx; });
    };
    order();
    for (int it = 0; it < max_iter; ++it) {
        double diam = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            double lo = simplex[0].x[k], hi = simplex[0].x[k];
            for (const auto& v : simplex) {
                lo = std::min(lo, v.x[k]);
                hi = std::max(hi, v.x[k]);
            }
            diam = std::max(diam, (hi - lo) / std::max(bounds[k].hi - bounds[k].lo, 1e-300));
        }
        if (diam < tol) break;

        std::vector<double> centroid(d, 0.0);
        for (std::size_t v = 0; v < d; ++v) {
            for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[v].x[k] / static_cast<double>(d);
        }
        const Vertex& worst = simplex.back();
        auto blend = [&](double c) {
            std::vector<double> x(d);
            for (std::size_t k = 0; k < d; ++k) x[k] = centroid[k] + c * (centroid[k] - worst.x[k]);
            clamp(x);
            return x;
        };
        std::vector<double> xr = blend(1.0);
        const double fr = f(xr);
        if (fr > simplex[0].fx) {
            std::vector<double> xe = blend(2.0);
            const double fe = f(xe);
            simplex.back() = fe > fr ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr > simplex[d - 1].fx) {
            simplex.back() = {xr, fr};
        } else {
            std::vector<double> xc = blend(-0.5);
            const double fc = f(xc);
            if (fc > worst.fx) {
                simplex.back() = {xc, fc};
            } else {
                for (std::size_t v = 1; v <= d; ++v) {
                    for (std::size_t k = 0; k < d; ++k) {
                        simplex[v].x[k] = 0.5 * (simplex[v].x[k] + simplex[0].x[k]);
                    }
                    simplex[v].fx = f(simplex[v].x);
                }
            }
        }
        order();
    }
    return simplex[0].x;
}

}  // namespace detail

OptimizationResult refine(const PulseFamily& family, std::span<const double> seed,
                          ObjectiveMode mode, const ObjectiveContext& ctx) {
    family.validate();
    if (seed.size() != family.dimension()) {
        throw std::invalid_argument("refine: seed dimension mismatch");
    }
    for (std::size_t k = 0; k < seed.size(); ++k) {
        if (!(seed[k] >= family.bounds[k].lo && seed[k] <= family.bounds[k].hi)) {
            std::ostringstream msg;
            msg << "refine: seed[" << k << "] = " << seed[k] << " outside bounds ["
                << family.bounds[k].lo << ", " << family.bounds[k].hi << "]";
            throw std::invalid_argument(msg.str());
        }
    }

    std::vector<Evaluation> log;
    auto eval_logged = [&](std::span<const double> p) {
        log.push_back(evaluate_objective(family, p, mode, ctx));
        const Evaluation& ev = log.back();
        return ev.ok ? ev.value : -std::numeric_limits<double>::infinity();
    };

    if (family.dimension() == 1) {
        const double lo = family.bounds[0].lo, hi = family.bounds[0].hi;
        const double width = hi - lo;
        const double tol = 1e-3 * width;
        auto eval1 = [&](double x) {
            const double p[1] = {x};
            return eval_logged(std::span<const double>(p, 1));
        };

        double xm = seed[0];
        double fm = eval1(xm);
        // uphill walk with doubling steps to bracket a local maximum
        double a = std::max(lo, xm - std::max(tol, 0.05 * width));
        double b = std::min(hi, xm + std::max(tol, 0.05 * width));
        double fa = a < xm ? eval1(a) : fm;
        double fb = b > xm ? eval1(b) : fm;
        while (!(fm >= fa && fm >= fb)) {
            if (fb > fm) {
                const double step = 2.0 * (b - xm);
                a = xm;
                fa = fm;
                xm = b;
                fm = fb;
                b = std::min(hi, xm + step);
                if (b <= xm) break;  // climbed into the upper bound
                fb = eval1(b);
            } else {
                const double step = 2.0 * (xm - a);
                b = xm;
                fb = fm;
                xm = a;
                fm = fa;
                a = std::max(lo, xm - step);
                if (a >= xm) break;  // climbed into the lower bound
                fa = eval1(a);
            }
        }
        // golden section inside [a, b]
        double x1 = b - kGolden * (b - a);
        double x2 = a + kGolden * (b - a);
        double f1 = eval1(x1);
        double f2 = eval1(x2);
        while (b - a > tol) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + kGolden * (b - a);
                f2 = eval1(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - kGolden * (b - a);
                f1 = eval1(x1);
            }
        }
    } else {
        auto f = [&](std::span<const double> x) { return eval_logged(x); };
        detail::nelder_mead(f, seed, family.bounds, 1e-3, 400);
    }

    return result_from_log(family, mode, std::move(log));
}

}  // namespace photex
