// Closed-form amplitudes and probabilities of the reduced atom-photon model
// plus the far-field variance profile. This layer is the reference the
// numerical propagator is tested against.
#pragma once

#include "photex/core.hpp"

namespace photex::analytic {

// f0(t) = e^{-Gamma |t - t0| / 2}: absorption ramp-up for t < t0, decay for
// t > t0.
cplx decay_amplitude(double t, const AtomParams& atom);

// Mode amplitude of the ideal absorption/decay solution,
//   g (e^{-Gamma|t-t0|/2} e^{-i Delta (t-t0)} - 1) / (Delta - i Gamma/2 sgn(t-t0)),
// with real coupling g and sgn(0) = +1.
cplx mode_amplitude_ideal(double delta, double t, const AtomParams& atom,
                          double coupling);

// Excited-state amplitude when the time-reversed dipole wave drives the atom
// from time t_in onward:
//   t <= t0:  e^{-Gamma (t0-t)/2} (1 - e^{-Gamma (t-t_in)})
//   t >  t0:  e^{-Gamma (t-t0)/2} (1 - e^{-Gamma (t0-t_in)})
// and 0 if t_in > t0. Throws std::domain_error for t < t_in.
cplx f0_timereversed(double t, double t_in, const AtomParams& atom);

// Excited-state amplitude for the reflected (not time-reversed) dipole wave.
// For t_in <= t0: -Gamma (t - t0) e^{-Gamma (t - t0)/2} Theta(t - t0), zero
// on [t_in, t0]. The t_in > t0 branch -Gamma (t - t_in) e^{-Gamma (t-t0)/2}
// is exposed as well. Throws std::domain_error for t < t_in.
cplx f0_reflected(double t, double t_in, const AtomParams& atom);

// (1 - e^{-Gamma T})^2: peak excitation probability when the ideal pulse is
// truncated to duration T. Throws std::domain_error for gamma_T < 0.
double truncated_excitation_prob(double gamma_T);

// sqrt(Gamma) * integral_{t_in}^{t} e^{-Gamma (t - t')/2} phi(t') dt' by
// adaptive Simpson quadrature (relative tolerance 1e-8, split at envelope
// kinks). Requires a unit-norm envelope and t >= t_in.
cplx f0_from_envelope(const TemporalEnvelope& env, double t, double t_in,
                      const AtomParams& atom);

// Observation point far from the atom (distance r, polar angle theta against
// the dipole axis, projection e.e_theta of the probe direction).
struct FarFieldPoint {
    double r = 0.0;
    double theta = 0.0;
    double e_dot_etheta = 1.0;
    double t = 0.0;
};

struct PhysicalConstants {
    double hbar = 1.0;
    double eps0 = 1.0;
    double c = 1.0;
};

// Normally ordered variance of the transverse field of the incoming ideal
// wave,
//   hbar w0 * 6 Gamma sin^2(theta) / (16 pi eps0 c r^2) * (e.e_theta)^2
//     * e^{-Gamma (t0 - t - r/c)} Theta(t0 - t - r/c),
// valid for Gamma << omega0 in the far field r >= 10 c / omega0 (rejected
// otherwise). With `normalized` the dimensional prefactor is dropped.
double far_field_variance(const FarFieldPoint& p, const AtomParams& atom,
                          bool normalized,
                          const PhysicalConstants& consts = {});

}  // namespace photex::analytic
