#include "photex/propagator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace photex {

namespace {

constexpr double kPi = ModeGrid::kPi;

int step_count(const PropagatorConfig& cfg) {
    const double span = cfg.t_end - cfg.t_start;
    const int steps = static_cast<int>(std::ceil(span / cfg.dt - 1e-9));
    return std::max(steps, 1);
}

void check_grid_matches(const PhotonState& state, const AtomParams& atom) {
    if (!state.grid) throw std::invalid_argument("propagate: state has no grid");
    const double g = state.grid->gamma();
    if (std::abs(g - atom.gamma) > 1e-12 * atom.gamma) {
        throw std::invalid_argument(
            "propagate: grid was built for a different decay rate");
    }
}

[[noreturn]] void norm_abort(double t, double drift) {
    std::ostringstream msg;
    msg << "propagate: norm drift " << drift << " exceeded 1e-4 at t = " << t
        << "; reduce dt (norm stays at the 1e-6 level for dt <= 0.6 Gamma/W)";
    throw std::runtime_error(msg.str());
}

}  // namespace

double PropagatorConfig::max_dt(const ModeGrid& grid, const AtomParams& atom) {
    const double w_max = 0.5 * grid.bandwidth();
    return std::min(0.01 / atom.gamma, 0.5 * kPi / w_max);
}

double PropagatorConfig::norm_safe_dt(const ModeGrid& grid) {
    return 0.3 / (0.5 * grid.bandwidth());
}

void PropagatorConfig::validate(const ModeGrid& grid, const AtomParams& atom) const {
    atom.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("PropagatorConfig: dt must be positive");
    }
    if (!(t_end > t_start)) {
        throw std::invalid_argument("PropagatorConfig: t_end must exceed t_start");
    }
    if (sample_stride < 1) {
        throw std::invalid_argument("PropagatorConfig: sample_stride must be >= 1");
    }
    const double bound = max_dt(grid, atom);
    if (dt > bound * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "PropagatorConfig: dt = " << dt
            << " exceeds the phase-resolution bound min(0.01/Gamma, pi/W) = " << bound;
        throw std::invalid_argument(msg.str());
    }
    const double guard = 0.5 * grid.recurrence_time();
    if (!(t_end - t_start < guard)) {
        std::ostringstream msg;
        msg << "PropagatorConfig: window " << (t_end - t_start)
            << " reaches the discretized-continuum recurrence; must stay below "
            << guard << " (= half of 2 pi / d_omega)";
        throw std::invalid_argument(msg.str());
    }
}

Trajectory propagate(const PhotonState& state, const AtomParams& atom,
                     const PropagatorConfig& cfg) {
    check_grid_matches(state, atom);
    const ModeGrid& grid = *state.grid;
    cfg.validate(grid, atom);

    const int n = grid.n_modes();
    const auto d = grid.detunings();
    const double g = grid.coupling();
    const double h = cfg.dt;
    const cplx mig{0.0, -g};  // -i g
    const int steps = step_count(cfg);

    // per-mode rotors for the half and full step offsets
    std::vector<cplx> rot_half(static_cast<std::size_t>(n));
    std::vector<cplx> rot_full(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) {
        rot_half[static_cast<std::size_t>(l)] = std::polar(1.0, d[static_cast<std::size_t>(l)] * 0.5 * h);
        rot_full[static_cast<std::size_t>(l)] = std::polar(1.0, d[static_cast<std::size_t>(l)] * h);
    }
    const cplx e_half = detail::pairwise_sum(rot_half);

    std::vector<cplx> f(state.mode_amps);
    cplx f0 = state.atom_amp;

    std::vector<cplx> ph(static_cast<std::size_t>(n));
    std::vector<cplx> b0(static_cast<std::size_t>(n));
    std::vector<cplx> b1(static_cast<std::size_t>(n));
    std::vector<cplx> b2(static_cast<std::size_t>(n));
    std::vector<double> pbuf(static_cast<std::size_t>(n));

    Trajectory traj;
    traj.state_label = state.label;
    traj.config = cfg;
    traj.n_modes = n;
    traj.gamma = atom.gamma;
    traj.t0 = atom.t0;

    auto mode_norm = [&]() {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int l = 0; l < n; ++l) {
            pbuf[static_cast<std::size_t>(l)] = std::norm(f[static_cast<std::size_t>(l)]);
        }
        return detail::pairwise_sum(pbuf);
    };

    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.f0.push_back(f0);
        traj.prob.push_back(std::norm(f0));
        traj.norm.push_back(std::norm(f0) + mode_norm());
    };

    record(cfg.t_start);
    const double norm0 = traj.norm.front();

    for (int k = 0; k < steps; ++k) {
        const double tau = (cfg.t_start - atom.t0) + static_cast<double>(k) * h;

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int l = 0; l < n; ++l) {
            const std::size_t i = static_cast<std::size_t>(l);
            const cplx p0 = std::polar(1.0, d[i] * tau);
            ph[i] = p0;
            b0[i] = f[i] * p0;
            b1[i] = f[i] * (p0 * rot_half[i]);
            b2[i] = f[i] * (p0 * rot_full[i]);
        }
        const cplx s0 = detail::pairwise_sum(b0);
        const cplx s1 = detail::pairwise_sum(b1);
        const cplx s2 = detail::pairwise_sum(b2);

        // RK4 atom stages; the mode stages enter through the closed-form
        // sums q0*p1 -> e_half, q1*p1 -> n, q1*p2 -> e_half
        const cplx k1 = mig * s0;
        const cplx f0_2 = f0 + 0.5 * h * k1;
        const cplx k2 = mig * (s1 + 0.5 * h * mig * f0 * e_half);
        const cplx f0_3 = f0 + 0.5 * h * k2;
        const cplx k3 = mig * (s1 + 0.5 * h * mig * f0_2 * static_cast<double>(n));
        const cplx f0_4 = f0 + h * k3;
        const cplx k4 = mig * (s2 + h * mig * f0_3 * e_half);

        const cplx w1 = (h / 6.0) * mig * f0;
        const cplx w2 = (h / 6.0) * mig * 2.0 * (f0_2 + f0_3);
        const cplx w3 = (h / 6.0) * mig * f0_4;

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int l = 0; l < n; ++l) {
            const std::size_t i = static_cast<std::size_t>(l);
            const cplx q0 = std::conj(ph[i]);
            const cplx q1 = std::conj(ph[i] * rot_half[i]);
            const cplx q2 = std::conj(ph[i] * rot_full[i]);
            f[i] += w1 * q0 + w2 * q1 + w3 * q2;
        }
        f0 += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if ((k + 1) % cfg.sample_stride == 0 || k + 1 == steps) {
            const double t = cfg.t_start + static_cast<double>(k + 1) * h;
            record(t);
            const double drift = std::abs(traj.norm.back() - norm0);
            if (drift > 1e-4) norm_abort(t, drift);
        }
    }

    traj.final_modes = std::move(f);
    return traj;
}

PeakEstimate max_excitation(const Trajectory& traj) {
    if (traj.times.empty()) {
        throw std::invalid_argument("max_excitation: empty trajectory");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < traj.prob.size(); ++i) {
        if (traj.prob[i] > traj.prob[best]) best = i;  // ties keep the earliest
    }
    if (best == 0 || best + 1 == traj.prob.size()) {
        return {traj.times[best], traj.prob[best]};
    }
    const auto peak = detail::parabolic_peak(
        traj.times[best - 1], traj.times[best], traj.times[best + 1],
        traj.prob[best - 1], traj.prob[best], traj.prob[best + 1]);
    return {peak.x, peak.y};
}

}  // namespace photex
