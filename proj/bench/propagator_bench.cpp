// Timing comparison between the OpenMP propagation kernel and the serial
// reference implementation, plus a cross-check of their trajectories.
//
//   ./photex_bench [n_modes] [bandwidth_factor]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "photex/propagator.hpp"

namespace {

using photex::AtomParams;
using photex::PropagatorConfig;
using photex::Trajectory;

double seconds(const std::chrono::steady_clock::time_point& a,
               const std::chrono::steady_clock::time_point& b) {
    return std::chrono::duration<double>(b - a).count();
}

template <class F>
double best_of(int reps, F&& run) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        run();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, seconds(t0, t1));
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const int n_modes = argc > 1 ? std::atoi(argv[1]) : 4001;
    const double factor = argc > 2 ? std::atof(argv[2]) : 400.0;

    AtomParams atom;
    const auto grid = photex::build_mode_grid(atom, factor, n_modes);
    const auto state = photex::ideal_state(grid, atom);

    PropagatorConfig cfg;
    cfg.dt = 0.0015;
    cfg.t_start = atom.t0 - 3.0;
    cfg.t_end = atom.t0 + 2.0;
    cfg.sample_stride = 10;

    const long steps = std::lround((cfg.t_end - cfg.t_start) / cfg.dt);
    const double work = static_cast<double>(steps) * n_modes;

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("n_modes=%d bandwidth=%.0f steps=%ld threads=%d\n", n_modes, factor,
                steps, threads);

    Trajectory parallel_traj;
    const double tp = best_of(3, [&] { parallel_traj = photex::propagate(state, atom, cfg); });
    std::printf("parallel kernel : %8.3f ms  (%.1f Mmode-steps/s)\n", 1e3 * tp,
                work / tp / 1e6);

    Trajectory serial_traj;
    const double ts = best_of(3, [&] { serial_traj = photex::propagate_serial(state, atom, cfg); });
    std::printf("serial reference: %8.3f ms  (%.1f Mmode-steps/s)\n", 1e3 * ts,
                work / ts / 1e6);
    std::printf("speedup: %.2fx\n", ts / tp);

    double max_dp = 0.0;
    for (std::size_t i = 0; i < parallel_traj.prob.size(); ++i) {
        max_dp = std::max(max_dp, std::abs(parallel_traj.prob[i] - serial_traj.prob[i]));
    }
    std::printf("max |prob difference| = %.3e\n", max_dp);
    return max_dp < 1e-9 ? 0 : 1;
}
