#include "photex/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace photex {

namespace {

constexpr double kPi = ModeGrid::kPi;
constexpr double kTwoPi = 2.0 * kPi;

std::vector<cplx> renormalize(std::vector<cplx> amps, double mass) {
    const double scale = 1.0 / std::sqrt(mass);
    for (cplx& a : amps) a *= scale;
    return amps;
}

double amp_mass(const std::vector<cplx>& amps) {
    std::vector<double> p(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) p[i] = std::norm(amps[i]);
    return detail::pairwise_sum(p);
}

}  // namespace

void AtomParams::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("AtomParams: gamma must be positive and finite");
    }
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
        throw std::invalid_argument("AtomParams: omega0 must be positive and finite");
    }
    if (!std::isfinite(t0)) {
        throw std::invalid_argument("AtomParams: t0 must be finite");
    }
}

ModeGrid::ModeGrid(const AtomParams& atom, double bandwidth_factor, int n_modes,
                   double min_bandwidth_factor) {
    atom.validate();
    if (n_modes < 3 || n_modes % 2 == 0) {
        throw std::invalid_argument(
            "ModeGrid: n_modes must be odd and >= 3 so that Delta = 0 lies on the grid");
    }
    if (!(bandwidth_factor >= min_bandwidth_factor)) {
        std::ostringstream msg;
        msg << "ModeGrid: bandwidth_factor " << bandwidth_factor << " < " << min_bandwidth_factor
            << "; the band would truncate the Lorentzian tails too hard";
        throw std::invalid_argument(msg.str());
    }
    n_modes_ = n_modes;
    gamma_ = atom.gamma;
    bandwidth_ = bandwidth_factor * atom.gamma;
    delta_omega_ = bandwidth_ / static_cast<double>(n_modes - 1);
    coupling_ = std::sqrt(gamma_ * delta_omega_ / kTwoPi);
    detunings_.resize(static_cast<std::size_t>(n_modes));
    const int c = center_index();
    for (int l = 0; l < n_modes; ++l) {
        // integer offset times d_omega keeps the center mode exactly zero
        // and the grid exactly sign-symmetric
        detunings_[static_cast<std::size_t>(l)] =
            static_cast<double>(l - c) * delta_omega_;
    }
}

GridPtr build_mode_grid(const AtomParams& atom, double bandwidth_factor,
                        int n_modes) {
    if (n_modes % 2 == 0) {
        throw std::invalid_argument("build_mode_grid: n_modes must be odd");
    }
    if (n_modes < 101) {
        throw std::invalid_argument("build_mode_grid: n_modes must be >= 101");
    }
    return std::make_shared<const ModeGrid>(atom, bandwidth_factor, n_modes);
}

// ---------------------------------------------------------------------------
// TemporalEnvelope

TemporalEnvelope TemporalEnvelope::analytic(std::string name, Fn fn, double t_lo,
                                            double t_hi,
                                            std::vector<double> breakpoints) {
    if (!(t_hi > t_lo)) {
        throw std::invalid_argument("TemporalEnvelope: empty support");
    }
    TemporalEnvelope env;
    env.name_ = std::move(name);
    env.fn_ = std::move(fn);
    env.t_lo_ = t_lo;
    env.t_hi_ = t_hi;
    env.breakpoints_.push_back(t_lo);
    for (double b : breakpoints) {
        if (b > t_lo && b < t_hi) env.breakpoints_.push_back(b);
    }
    env.breakpoints_.push_back(t_hi);
    std::sort(env.breakpoints_.begin(), env.breakpoints_.end());
    return env;
}

TemporalEnvelope TemporalEnvelope::sampled(std::vector<double> times,
                                           std::vector<cplx> values) {
    if (times.size() != values.size() || times.size() < 2) {
        throw std::invalid_argument("TemporalEnvelope: need >= 2 matching samples");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw std::invalid_argument(
                "TemporalEnvelope: sample times must be strictly increasing");
        }
    }
    TemporalEnvelope env;
    env.name_ = "sampled";
    env.t_lo_ = times.front();
    env.t_hi_ = times.back();
    env.breakpoints_ = {env.t_lo_, env.t_hi_};
    env.samples_t_ = std::move(times);
    env.samples_v_ = std::move(values);
    return env;
}

TemporalEnvelope TemporalEnvelope::rising_exponential(double gamma, double t_edge) {
    if (!(gamma > 0.0)) throw std::invalid_argument("rising_exponential: gamma <= 0");
    const double amp = std::sqrt(gamma);
    // support cut 80 lifetimes before the edge; the missing mass is e^{-80}
    return analytic(
        "rising-exponential",
        [gamma, t_edge, amp](double t) -> cplx {
            if (t > t_edge) return {0.0, 0.0};
            return {amp * std::exp(-0.5 * gamma * (t_edge - t)), 0.0};
        },
        t_edge - 80.0 / gamma, t_edge);
}

TemporalEnvelope TemporalEnvelope::decaying_exponential(double gamma, double t_edge) {
    if (!(gamma > 0.0)) throw std::invalid_argument("decaying_exponential: gamma <= 0");
    const double amp = std::sqrt(gamma);
    return analytic(
        "decaying-exponential",
        [gamma, t_edge, amp](double t) -> cplx {
            if (t < t_edge) return {0.0, 0.0};
            return {amp * std::exp(-0.5 * gamma * (t - t_edge)), 0.0};
        },
        t_edge, t_edge + 80.0 / gamma);
}

TemporalEnvelope TemporalEnvelope::gaussian(double sigma, double t_center) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian envelope: sigma <= 0");
    // phi(t) = (sigma^2 / 2 pi)^{1/4} e^{-sigma^2 (t - t_center)^2 / 4}
    const double amp = std::pow(sigma * sigma / kTwoPi, 0.25);
    const double half_span = 13.0 / sigma;
    return analytic(
        "gaussian",
        [sigma, t_center, amp](double t) -> cplx {
            const double u = t - t_center;
            return {amp * std::exp(-0.25 * sigma * sigma * u * u), 0.0};
        },
        t_center - half_span, t_center + half_span);
}

cplx TemporalEnvelope::operator()(double t) const {
    if (is_sampled()) {
        if (t < t_lo_ || t > t_hi_) return {0.0, 0.0};
        const auto it = std::upper_bound(samples_t_.begin(), samples_t_.end(), t);
        if (it == samples_t_.begin()) return samples_v_.front();
        if (it == samples_t_.end()) return samples_v_.back();
        const std::size_t i = static_cast<std::size_t>(it - samples_t_.begin());
        const double t1 = samples_t_[i - 1], t2 = samples_t_[i];
        const double w = (t - t1) / (t2 - t1);
        return samples_v_[i - 1] * (1.0 - w) + samples_v_[i] * w;
    }
    if (t < t_lo_ || t > t_hi_) return {0.0, 0.0};
    return fn_(t);
}

double TemporalEnvelope::squared_norm() const {
    if (is_sampled()) {
        double acc = 0.0;
        for (std::size_t i = 1; i < samples_t_.size(); ++i) {
            const double h = samples_t_[i] - samples_t_[i - 1];
            acc += 0.5 * h * (std::norm(samples_v_[i - 1]) + std::norm(samples_v_[i]));
        }
        return acc;
    }
    const auto& f = fn_;
    const cplx s = detail::adaptive_simpson(
        [&f](double t) -> cplx { return {std::norm(f(t)), 0.0}; }, t_lo_, t_hi_,
        1e-11, std::span<const double>(breakpoints_));
    return s.real();
}

// ---------------------------------------------------------------------------
// PhotonState

double PhotonState::norm_sq() const {
    return std::norm(atom_amp) + amp_mass(mode_amps);
}

PhotonState PhotonState::with_amplitudes(GridPtr grid, std::vector<cplx> amps,
                                         cplx atom_amp, std::string label) {
    if (!grid) throw std::invalid_argument("PhotonState: null grid");
    if (amps.size() != static_cast<std::size_t>(grid->n_modes())) {
        throw std::invalid_argument("PhotonState: amplitude count != n_modes");
    }
    PhotonState st;
    st.grid = std::move(grid);
    st.mode_amps = std::move(amps);
    st.atom_amp = atom_amp;
    st.label = std::move(label);
    if (std::abs(st.norm_sq() - 1.0) > 1e-12) {
        throw std::invalid_argument(
            "PhotonState: amplitudes are not unit-norm (|norm^2 - 1| > 1e-12)");
    }
    return st;
}

PhotonState PhotonState::excited_atom(GridPtr grid) {
    if (!grid) throw std::invalid_argument("PhotonState: null grid");
    PhotonState st;
    st.mode_amps.assign(static_cast<std::size_t>(grid->n_modes()), cplx{0.0, 0.0});
    st.grid = std::move(grid);
    st.atom_amp = {1.0, 0.0};
    st.label = "excited-atom";
    return st;
}

PhotonState PhotonState::vacuum(GridPtr grid) {
    if (!grid) throw std::invalid_argument("PhotonState: null grid");
    PhotonState st;
    st.mode_amps.assign(static_cast<std::size_t>(grid->n_modes()), cplx{0.0, 0.0});
    st.grid = std::move(grid);
    st.atom_amp = {0.0, 0.0};
    st.label = "vacuum";
    st.prenorm_mass = 0.0;
    return st;
}

PhotonState ideal_state(const GridPtr& grid, const AtomParams& atom) {
    if (!grid) throw std::invalid_argument("ideal_state: null grid");
    const double g = grid->coupling();
    const double hg = 0.5 * atom.gamma;
    std::vector<cplx> amps(static_cast<std::size_t>(grid->n_modes()));
    const auto d = grid->detunings();
    for (std::size_t l = 0; l < amps.size(); ++l) {
        amps[l] = -g / cplx(d[l], hg);
    }
    const double mass = amp_mass(amps);
    PhotonState st;
    st.grid = grid;
    st.mode_amps = renormalize(std::move(amps), mass);
    st.atom_amp = {0.0, 0.0};
    st.label = "ideal";
    st.prenorm_mass = mass;
    return st;
}

PhotonState reflected_state(const GridPtr& grid, const AtomParams& atom) {
    if (!grid) throw std::invalid_argument("reflected_state: null grid");
    const double g = grid->coupling();
    const double hg = 0.5 * atom.gamma;
    std::vector<cplx> amps(static_cast<std::size_t>(grid->n_modes()));
    const auto d = grid->detunings();
    for (std::size_t l = 0; l < amps.size(); ++l) {
        amps[l] = -g / cplx(d[l], -hg);
    }
    const double mass = amp_mass(amps);
    PhotonState st;
    st.grid = grid;
    st.mode_amps = renormalize(std::move(amps), mass);
    st.atom_amp = {0.0, 0.0};
    st.label = "reflected";
    st.prenorm_mass = mass;
    return st;
}

PhotonState gaussian_state(const GridPtr& grid, const AtomParams& atom,
                           double sigma) {
    if (!grid) throw std::invalid_argument("gaussian_state: null grid");
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_state: sigma must be > 0");
    const auto d = grid->detunings();
    int inside = 0;
    for (double delta : d) {
        if (std::abs(delta) <= 3.0 * sigma) ++inside;
    }
    if (inside < 10) {
        std::ostringstream msg;
        msg << "gaussian_state: sigma = " << sigma << " is under-resolved ("
            << inside << " grid points within +-3 sigma, need >= 10)";
        throw std::invalid_argument(msg.str());
    }
    const double g = grid->coupling();
    // continuum normalization N = (8 pi)^{1/4} / sqrt(Gamma sigma)
    const double N = std::pow(8.0 * kPi, 0.25) / std::sqrt(atom.gamma * sigma);
    std::vector<cplx> amps(static_cast<std::size_t>(grid->n_modes()));
    for (std::size_t l = 0; l < amps.size(); ++l) {
        amps[l] = cplx(N * g * std::exp(-d[l] * d[l] / (sigma * sigma)), 0.0);
    }
    const double mass = amp_mass(amps);
    PhotonState st;
    st.grid = grid;
    st.mode_amps = renormalize(std::move(amps), mass);
    st.atom_amp = {0.0, 0.0};
    std::ostringstream label;
    label << "gaussian{sigma=" << sigma << "}";
    st.label = label.str();
    st.prenorm_mass = mass;
    return st;
}

PhotonState envelope_state(const GridPtr& grid, const TemporalEnvelope& env,
                           const AtomParams& atom) {
    if (!grid) throw std::invalid_argument("envelope_state: null grid");
    const double env_norm = env.squared_norm();
    if (std::abs(env_norm - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg << "envelope_state: envelope is not normalized (integral |phi|^2 dt = "
            << env_norm << ")";
        throw std::invalid_argument(msg.str());
    }

    // quadrature nodes: the envelope's own samples, or a uniform grid fine
    // enough to resolve e^{-i Delta t} at the band edge (>= 8 per period)
    std::vector<double> tq;
    std::vector<cplx> vq;
    if (env.is_sampled()) {
        tq = env.sample_times();
        vq = env.sample_values();
    } else {
        const double span = env.support_hi() - env.support_lo();
        const double per_period = span * grid->bandwidth() / (2.0 * kTwoPi) * 8.0;
        const std::size_t n_q = std::clamp<std::size_t>(
            static_cast<std::size_t>(per_period) + 1, 4097, 1 << 19);
        tq.resize(n_q);
        vq.resize(n_q);
        for (std::size_t k = 0; k < n_q; ++k) {
            tq[k] = env.support_lo() +
                    span * static_cast<double>(k) / static_cast<double>(n_q - 1);
            vq[k] = env(tq[k]);
        }
    }

    const std::size_t n_q = tq.size();
    const auto d = grid->detunings();
    const int n = grid->n_modes();
    const double norm_factor = std::sqrt(grid->delta_omega() / kTwoPi);
    std::vector<cplx> amps(static_cast<std::size_t>(n));

    // trapezoid of phi(t) e^{-i Delta_l (t - t0)} per mode
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int l = 0; l < n; ++l) {
        const double delta = d[static_cast<std::size_t>(l)];
        cplx acc{0.0, 0.0};
        cplx prev = vq[0] * std::polar(1.0, -delta * (tq[0] - atom.t0));
        for (std::size_t k = 1; k < n_q; ++k) {
            const cplx cur = vq[k] * std::polar(1.0, -delta * (tq[k] - atom.t0));
            acc += 0.5 * (tq[k] - tq[k - 1]) * (prev + cur);
            prev = cur;
        }
        amps[static_cast<std::size_t>(l)] = norm_factor * acc;
    }

    const double mass = amp_mass(amps);
    if (!(mass > 0.0)) {
        throw std::invalid_argument("envelope_state: envelope has no spectral weight on the grid");
    }

    // aliasing heuristic: 99.9% of the captured mass must sit inside |Delta| <= W/4
    double inner = 0.0;
    for (std::size_t l = 0; l < amps.size(); ++l) {
        if (std::abs(d[l]) <= 0.25 * grid->bandwidth()) inner += std::norm(amps[l]);
    }
    const bool aliasing = inner < 0.999 * mass;

    PhotonState st;
    st.grid = grid;
    st.mode_amps = renormalize(std::move(amps), mass);
    st.atom_amp = {0.0, 0.0};
    st.label = "envelope[" + env.name() + "]" + (aliasing ? "[aliasing-warning]" : "");
    st.prenorm_mass = mass;
    return st;
}

TemporalEnvelope temporal_profile(const PhotonState& state,
                                  const AtomParams& atom,
                                  std::span<const double> times) {
    if (!state.grid) throw std::invalid_argument("temporal_profile: state has no grid");
    if (times.size() < 2) {
        throw std::invalid_argument("temporal_profile: need >= 2 sample times");
    }
    const ModeGrid& grid = *state.grid;
    const double window = 0.25 * grid.recurrence_time();
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (k > 0 && !(times[k] > times[k - 1])) {
            throw std::invalid_argument("temporal_profile: times must be strictly increasing");
        }
        if (std::abs(times[k] - atom.t0) > window) {
            std::ostringstream msg;
            msg << "temporal_profile: t = " << times[k]
                << " is outside the recurrence-free window |t - t0| <= " << window;
            throw std::invalid_argument(msg.str());
        }
    }

    const int n = grid.n_modes();
    const auto d = grid.detunings();
    const double norm_factor = std::sqrt(grid.delta_omega() / kTwoPi);
    std::vector<double> ts(times.begin(), times.end());
    std::vector<cplx> vals(times.size());
    const int n_t = static_cast<int>(times.size());

#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        std::vector<cplx> terms(static_cast<std::size_t>(n));
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (int k = 0; k < n_t; ++k) {
            const double tau = ts[static_cast<std::size_t>(k)] - atom.t0;
            for (int l = 0; l < n; ++l) {
                terms[static_cast<std::size_t>(l)] =
                    state.mode_amps[static_cast<std::size_t>(l)] *
                    std::polar(1.0, d[static_cast<std::size_t>(l)] * tau);
            }
            vals[static_cast<std::size_t>(k)] = norm_factor * detail::pairwise_sum(terms);
        }
    }
    return TemporalEnvelope::sampled(std::move(ts), std::move(vals));
}

}  // namespace photex
