// Physical parameters, the discretized mode continuum and the catalog of
// one-photon states (time-reversed dipole wave, reflected dipole wave,
// Gaussian, arbitrary temporal envelope), plus the spectral <-> temporal
// transforms between mode amplitudes and wavepacket envelopes.
//
// Conventions (natural units hbar = c = eps0 = 1):
//   - detuning Delta_l = omega_0 - omega_l on a uniform symmetric grid,
//   - a single flat coupling g with 2*pi*g^2/d_omega = Gamma exactly,
//   - all stored mode amplitudes are interaction-picture values referenced
//     to the absorption-completion time t0; free-field phases are never
//     stored,
//   - Theta(0) = 1 for every step function.
#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "photex/numeric.hpp"

namespace photex {

struct AtomParams {
    double gamma = 1.0;    // spontaneous decay rate Gamma [1/time]
    double omega0 = 1e4;   // transition frequency [rad/time]; only the
                           // far-field variance prefactor depends on it
    double t0 = 0.0;       // absorption-completion time

    void validate() const;
    // Gamma << omega0 is assumed throughout; flag is informational.
    bool rotating_wave_valid() const { return gamma / omega0 < 1e-3; }
};

// Uniform detuning grid with one flat coupling constant chosen so that the
// discretized continuum reproduces the decay rate Gamma exactly.
class ModeGrid {
public:
    ModeGrid(const AtomParams& atom, double bandwidth_factor, int n_modes,
             double min_bandwidth_factor = kDefaultMinBandwidthFactor);

    int n_modes() const { return n_modes_; }
    double bandwidth() const { return bandwidth_; }
    double delta_omega() const { return delta_omega_; }
    double coupling() const { return coupling_; }
    double gamma() const { return gamma_; }
    std::span<const double> detunings() const { return detunings_; }
    double detuning(int l) const { return detunings_[static_cast<std::size_t>(l)]; }
    int center_index() const { return (n_modes_ - 1) / 2; }
    // Artificial revival time of the discretized continuum.
    double recurrence_time() const { return 2.0 * kPi / delta_omega_; }

    static constexpr double kDefaultMinBandwidthFactor = 20.0;
    static constexpr double kPi = 3.14159265358979323846;

private:
    int n_modes_;
    double bandwidth_;
    double delta_omega_;
    double coupling_;
    double gamma_;
    std::vector<double> detunings_;
};

using GridPtr = std::shared_ptr<const ModeGrid>;

GridPtr build_mode_grid(const AtomParams& atom, double bandwidth_factor,
                        int n_modes);

// Complex wavepacket envelope phi(t), either a named analytic form or a
// sampled curve (linear interpolation between samples, zero outside).
// Catalog factories produce unit-norm envelopes: integral |phi|^2 dt = 1.
class TemporalEnvelope {
public:
    using Fn = std::function<cplx(double)>;

    static TemporalEnvelope analytic(std::string name, Fn fn, double t_lo,
                                     double t_hi,
                                     std::vector<double> breakpoints = {});
    static TemporalEnvelope sampled(std::vector<double> times,
                                    std::vector<cplx> values);

    // sqrt(Gamma) e^{-Gamma (t_edge - t)/2} Theta(t_edge - t): the rising
    // exponential with a sharp edge, the shape of a time-reversed dipole wave.
    static TemporalEnvelope rising_exponential(double gamma, double t_edge);
    // sqrt(Gamma) e^{-Gamma (t - t_edge)/2} Theta(t - t_edge): the envelope
    // of the spontaneously emitted (reflected, not time-reversed) wave.
    static TemporalEnvelope decaying_exponential(double gamma, double t_edge);
    // Temporal pair of the spectral Gaussian e^{-Delta^2/sigma^2}:
    // |phi| has standard deviation sqrt(2)/sigma.
    static TemporalEnvelope gaussian(double sigma, double t_center);

    cplx operator()(double t) const;
    double support_lo() const { return t_lo_; }
    double support_hi() const { return t_hi_; }
    // Support edges plus interior kink locations, for quadrature splitting.
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::string& name() const { return name_; }

    bool is_sampled() const { return !samples_t_.empty(); }
    const std::vector<double>& sample_times() const { return samples_t_; }
    const std::vector<cplx>& sample_values() const { return samples_v_; }

    // integral of |phi|^2 dt: trapezoid on the sample grid, adaptive
    // quadrature for analytic forms.
    double squared_norm() const;
    bool is_normalized(double tol = 1e-9) const {
        return std::abs(squared_norm() - 1.0) <= tol;
    }

private:
    TemporalEnvelope() = default;
    std::string name_;
    Fn fn_;
    double t_lo_ = 0.0;
    double t_hi_ = 0.0;
    std::vector<double> breakpoints_;
    std::vector<double> samples_t_;
    std::vector<cplx> samples_v_;
};

// Full one-excitation state: mode amplitudes c_l over a grid plus the
// atomic excited-state amplitude. Unit norm after construction
// (|atom_amp|^2 + sum |c_l|^2 = 1 within 1e-12), except for the explicit
// vacuum diagnostic state.
struct PhotonState {
    GridPtr grid;
    std::vector<cplx> mode_amps;
    cplx atom_amp{0.0, 0.0};
    std::string label;
    // Norm of the raw (continuum-normalized) amplitudes before grid
    // renormalization; records the spectral mass captured by the band.
    double prenorm_mass = 1.0;

    double norm_sq() const;

    // Validating constructor for externally supplied amplitudes.
    static PhotonState with_amplitudes(GridPtr grid, std::vector<cplx> amps,
                                       cplx atom_amp, std::string label);
    // f0 = 1, all c_l = 0.
    static PhotonState excited_atom(GridPtr grid);
    // Zero-norm diagnostic state (not a physical photon).
    static PhotonState vacuum(GridPtr grid);
};

// c_l ~ -g / (Delta_l + i Gamma/2), renormalized on the grid. The unique
// state achieving complete excitation in the infinite-time limit.
PhotonState ideal_state(const GridPtr& grid, const AtomParams& atom);

// c_l ~ -g / (Delta_l - i Gamma/2): same mode probabilities as the ideal
// state, emission-like phases.
PhotonState reflected_state(const GridPtr& grid, const AtomParams& atom);

// c_l ~ g e^{-Delta_l^2 / sigma^2}. prenorm_mass records the continuum
// normalization sum with N = (8 pi)^{1/4} / sqrt(Gamma sigma).
PhotonState gaussian_state(const GridPtr& grid, const AtomParams& atom,
                           double sigma);

// c_l from the envelope by quadrature of phi(t) e^{-i Delta_l (t - t0)},
// then renormalized. Rejects unnormalized envelopes; an under-resolved
// envelope (spectral mass outside |Delta| <= W/4) gets an aliasing warning
// appended to the state label.
PhotonState envelope_state(const GridPtr& grid, const TemporalEnvelope& env,
                           const AtomParams& atom);

// phi(t_k) = sqrt(d_omega / 2 pi) * sum_l c_l e^{+i Delta_l (t_k - t0)}.
// times must be strictly increasing and stay within a quarter of the
// recurrence time around t0.
TemporalEnvelope temporal_profile(const PhotonState& state,
                                  const AtomParams& atom,
                                  std::span<const double> times);

}  // namespace photex
