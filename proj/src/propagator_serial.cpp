// Reference propagator: textbook RK4 over the full (f0, f_l) vector with
// stage phases evaluated directly and naive ascending mode sums. Slower but
// algebraically independent of the production kernel in propagator.cpp.
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "photex/propagator.hpp"

namespace photex {

namespace {

struct StateVec {
    cplx f0;
    std::vector<cplx> f;
};

StateVec derivative(const StateVec& y, double tau, std::span<const double> d,
                    double g) {
    const cplx mig{0.0, -g};
    StateVec dy;
    dy.f.resize(y.f.size());
    cplx acc{0.0, 0.0};
    for (std::size_t l = 0; l < y.f.size(); ++l) {
        const cplx p = std::polar(1.0, d[l] * tau);
        acc += y.f[l] * p;
        dy.f[l] = mig * y.f0 * std::conj(p);
    }
    dy.f0 = mig * acc;
    return dy;
}

StateVec axpy(const StateVec& y, double a, const StateVec& dy) {
    StateVec out;
    out.f0 = y.f0 + a * dy.f0;
    out.f.resize(y.f.size());
    for (std::size_t l = 0; l < y.f.size(); ++l) out.f[l] = y.f[l] + a * dy.f[l];
    return out;
}

}  // namespace

Trajectory propagate_serial(const PhotonState& state, const AtomParams& atom,
                            const PropagatorConfig& cfg) {
    if (!state.grid) throw std::invalid_argument("propagate_serial: state has no grid");
    const ModeGrid& grid = *state.grid;
    if (std::abs(grid.gamma() - atom.gamma) > 1e-12 * atom.gamma) {
        throw std::invalid_argument(
            "propagate_serial: grid was built for a different decay rate");
    }
    cfg.validate(grid, atom);

    const auto d = grid.detunings();
    const double g = grid.coupling();
    const double h = cfg.dt;
    const double span = cfg.t_end - cfg.t_start;
    const int steps = std::max(static_cast<int>(std::ceil(span / h - 1e-9)), 1);

    StateVec y{state.atom_amp, state.mode_amps};

    Trajectory traj;
    traj.state_label = state.label;
    traj.config = cfg;
    traj.n_modes = grid.n_modes();
    traj.gamma = atom.gamma;
    traj.t0 = atom.t0;

    auto record = [&](double t) {
        double m = std::norm(y.f0);
        for (const cplx& a : y.f) m += std::norm(a);
        traj.times.push_back(t);
        traj.f0.push_back(y.f0);
        traj.prob.push_back(std::norm(y.f0));
        traj.norm.push_back(m);
    };

    record(cfg.t_start);
    const double norm0 = traj.norm.front();

    for (int k = 0; k < steps; ++k) {
        const double tau = (cfg.t_start - atom.t0) + static_cast<double>(k) * h;
        const StateVec k1 = derivative(y, tau, d, g);
        const StateVec k2 = derivative(axpy(y, 0.5 * h, k1), tau + 0.5 * h, d, g);
        const StateVec k3 = derivative(axpy(y, 0.5 * h, k2), tau + 0.5 * h, d, g);
        const StateVec k4 = derivative(axpy(y, h, k3), tau + h, d, g);
        y.f0 += (h / 6.0) * (k1.f0 + 2.0 * k2.f0 + 2.0 * k3.f0 + k4.f0);
        for (std::size_t l = 0; l < y.f.size(); ++l) {
            y.f[l] += (h / 6.0) * (k1.f[l] + 2.0 * k2.f[l] + 2.0 * k3.f[l] + k4.f[l]);
        }
        if ((k + 1) % cfg.sample_stride == 0 || k + 1 == steps) {
            const double t = cfg.t_start + static_cast<double>(k + 1) * h;
            record(t);
            const double drift = std::abs(traj.norm.back() - norm0);
            if (drift > 1e-4) {
                std::ostringstream msg;
                msg << "propagate_serial: norm drift " << drift
                    << " exceeded 1e-4 at t = " << t;
                throw std::runtime_error(msg.str());
            }
        }
    }

    traj.final_modes = std::move(y.f);
    return traj;
}

}  // namespace photex
