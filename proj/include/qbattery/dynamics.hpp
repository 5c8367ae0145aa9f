#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "qbattery/pulses.hpp"
#include "qbattery/specfun.hpp"

namespace qbattery {

using cplx = std::complex<double>;

/// Battery level spacing omega_b, half carrier frequency omega_d, drive
/// strength zeta and pulse envelope. Immutable once constructed.
class DriveParams {
 public:
  DriveParams(double omega_b, double omega_d, double zeta, PulseShape pulse);

  /// Resonant drive (omega_d = omega_b).
  static DriveParams resonant(double omega_b, double zeta, PulseShape pulse) {
    return DriveParams(omega_b, omega_b, zeta, std::move(pulse));
  }

  double omega_b() const { return omega_b_; }
  double omega_d() const { return omega_d_; }
  double zeta() const { return zeta_; }
  const PulseShape& pulse() const { return pulse_; }

  /// Pulse width tau. Throws UnsupportedPulse for the delta limit.
  double tau() const { return pulse_width(pulse_); }
  bool is_resonant() const;

  DriveParams with_zeta(double zeta) const { return {omega_b_, omega_d_, zeta, pulse_}; }

 private:
  double omega_b_;
  double omega_d_;
  double zeta_;
  PulseShape pulse_;
};

/// Rotating-frame second moments: n = <b'b>, s = <bb>; <b'b'> = conj(s).
struct MomentState {
  double n = 0.0;
  cplx s{};

  cplx s_dagger() const { return std::conj(s); }
  /// (n + 1/2)^2 - |s|^2 - 1/4; zero for every pure Gaussian state reached from vacuum.
  double invariant_residual() const { return (n + 0.5) * (n + 0.5) - std::norm(s) - 0.25; }
};

struct MomentDerivative {
  double dn = 0.0;
  cplx ds{};
};

struct MomentTrajectory {
  std::vector<double> times;
  std::vector<MomentState> states;

  std::size_t size() const { return times.size(); }
  /// Largest |invariant_residual| along the trajectory.
  double max_invariant_drift() const;
  /// CSV with header t,n,re_s,im_s,invariant_residual at 17 significant digits.
  void write_csv(std::ostream& out) const;
};

/// Default tolerances for moment integration.
inline constexpr Accuracy kMomentAccuracy{1e-10, 1e-10};

/// Right-hand side of the resonant rotating-frame moment equations:
///   dn/dt = -2 zeta f(t) Im s,   ds/dt = -i zeta f(t) (2n + 1).
/// Throws UnsupportedPulse for the delta limit and std::invalid_argument off resonance.
MomentDerivative moment_rhs(const MomentState& state, double t, const DriveParams& p);

/// moment_rhs plus zero-temperature single-photon loss at rate kappa:
/// an extra -kappa n and -kappa s.
MomentDerivative dissipative_moment_rhs(const MomentState& state, double t, const DriveParams& p, double kappa);

/// Integrates from vacuum at t_start to t_end, recording every accepted step.
/// Either endpoint may be infinite (closed evolution only); the integration
/// then runs in the compactified variable phi = atan(t / tau).
MomentTrajectory integrate_moments(const DriveParams& p, double t_start, double t_end,
                                   const Accuracy& acc = kMomentAccuracy);

/// Integrates from `initial` at times.front() and records the state at each
/// entry of `times` (strictly increasing, at least two points). kappa > 0
/// adds loss and requires finite times.
MomentTrajectory integrate_moments_on_grid(const DriveParams& p, std::span<const double> times,
                                           const Accuracy& acc = kMomentAccuracy, double kappa = 0.0,
                                           MomentState initial = {});

/// Closed-form solution from vacuum for the Gaussian and delta-limit pulses:
/// n = sinh^2(zeta xi / 2), s = -(i/2) sinh(zeta xi), xi = 1 + erf(t / sqrt2 tau)
/// (xi = 2 Theta(t) for the delta limit).
MomentState analytic_moments(const DriveParams& p, double t);

/// sinh^2(zeta A(t)): the population from vacuum for any unit-area pulse.
double area_law_energy(const DriveParams& p, double t);

}  // namespace qbattery
