#include "photex/analytic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace photex::analytic {

namespace {
constexpr double kPi = ModeGrid::kPi;

// Theta(0) = 1 convention fixes sgn(0) = +1.
inline double sgn(double x) { return x >= 0.0 ? 1.0 : -1.0; }
}  // namespace

cplx decay_amplitude(double t, const AtomParams& atom) {
    return {std::exp(-0.5 * atom.gamma * std::abs(t - atom.t0)), 0.0};
}

cplx mode_amplitude_ideal(double delta, double t, const AtomParams& atom,
                          double coupling) {
    const double tau = t - atom.t0;
    const cplx numerator =
        std::exp(-0.5 * atom.gamma * std::abs(tau)) * std::polar(1.0, -delta * tau) -
        1.0;
    const cplx denominator(delta, -0.5 * atom.gamma * sgn(tau));
    return coupling * numerator / denominator;
}

cplx f0_timereversed(double t, double t_in, const AtomParams& atom) {
    if (t < t_in) {
        throw std::domain_error("f0_timereversed: t < t_in");
    }
    if (t_in > atom.t0) return {0.0, 0.0};
    const double g = atom.gamma;
    if (t <= atom.t0) {
        return {std::exp(-0.5 * g * (atom.t0 - t)) * (1.0 - std::exp(-g * (t - t_in))),
                0.0};
    }
    return {std::exp(-0.5 * g * (t - atom.t0)) * (1.0 - std::exp(-g * (atom.t0 - t_in))),
            0.0};
}

cplx f0_reflected(double t, double t_in, const AtomParams& atom) {
    if (t < t_in) {
        throw std::domain_error("f0_reflected: t < t_in");
    }
    const double g = atom.gamma;
    if (t_in > atom.t0) {
        return {-g * (t - t_in) * std::exp(-0.5 * g * (t - atom.t0)), 0.0};
    }
    if (t <= atom.t0) return {0.0, 0.0};
    return {-g * (t - atom.t0) * std::exp(-0.5 * g * (t - atom.t0)), 0.0};
}

double truncated_excitation_prob(double gamma_T) {
    if (gamma_T < 0.0) {
        throw std::domain_error("truncated_excitation_prob: gamma_T < 0");
    }
    const double x = 1.0 - std::exp(-gamma_T);
    return x * x;
}

cplx f0_from_envelope(const TemporalEnvelope& env, double t, double t_in,
                      const AtomParams& atom) {
    if (t < t_in) {
        throw std::domain_error("f0_from_envelope: t < t_in");
    }
    const double env_norm = env.squared_norm();
    if (std::abs(env_norm - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg << "f0_from_envelope: envelope is not normalized (integral |phi|^2 dt = "
            << env_norm << ")";
        throw std::invalid_argument(msg.str());
    }
    const double a = std::max(t_in, env.support_lo());
    const double b = std::min(t, env.support_hi());
    if (!(b > a)) return {0.0, 0.0};
    const double g = atom.gamma;
    const cplx integral = detail::adaptive_simpson(
        [&env, g, t](double tp) -> cplx {
            return std::exp(-0.5 * g * (t - tp)) * env(tp);
        },
        a, b, 1e-8, std::span<const double>(env.breakpoints()));
    return std::sqrt(g) * integral;
}

double far_field_variance(const FarFieldPoint& p, const AtomParams& atom,
                          bool normalized, const PhysicalConstants& consts) {
    atom.validate();
    if (!(p.r >= 10.0 * consts.c / atom.omega0)) {
        std::ostringstream msg;
        msg << "far_field_variance: r = " << p.r
            << " violates the far-field requirement r >= 10 c / omega0 = "
            << 10.0 * consts.c / atom.omega0;
        throw std::invalid_argument(msg.str());
    }
    if (std::abs(p.e_dot_etheta) > 1.0) {
        throw std::invalid_argument("far_field_variance: |e.e_theta| must be <= 1");
    }
    const double retarded = atom.t0 - p.t - p.r / consts.c;
    if (retarded < 0.0) return 0.0;  // ahead of the incoming wavefront
    const double s = std::sin(p.theta);
    double value = s * s * p.e_dot_etheta * p.e_dot_etheta *
                   std::exp(-atom.gamma * retarded);
    if (!normalized) {
        value *= consts.hbar * atom.omega0 * 6.0 * atom.gamma /
                 (16.0 * kPi * consts.eps0 * consts.c * p.r * p.r);
    }
    return value;
}

}  // namespace photex::analytic
