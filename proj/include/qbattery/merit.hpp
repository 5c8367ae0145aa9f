#pragma once

#include "qbattery/dynamics.hpp"

// Figures of merit of the battery. Energies are absolute (multiples of
// omega_b), powers are in omega_b per unit time and times in the units of tau.
// Functions documented as Gaussian-only throw UnsupportedPulse otherwise.

namespace qbattery {

struct QuadratureReport {
  double theta = 0.0;
  double var_x = 0.5;
  double var_p = 0.5;
  double std_product = 0.5;  // sqrt(var_x * var_p)
};

struct ChargingReport {
  double t_alpha = 0.0;
  double alpha = 0.0;
  double e_max = 0.0;  // omega_b sinh^2(zeta)
};

/// omega_b sinh^2((zeta/2)[1 + erf(t / sqrt2 tau)]) for the Gaussian, the
/// Heaviside step for the delta limit and omega_b sinh^2(zeta A(t)) otherwise.
double stored_energy(const DriveParams& p, double t);

/// omega_b sinh^2(zeta), approached as t -> infinity.
double max_energy(const DriveParams& p);

/// dE/dt for the Gaussian pulse.
double instantaneous_power(const DriveParams& p, double t);

/// Time at which the stored energy reaches the fraction alpha in (0, 1) of
/// its maximum (Gaussian pulse, zeta > 0).
ChargingReport charging_time(const DriveParams& p, double alpha);

/// zeta << 1 limit: sqrt2 tau erfinv(2 sqrt(alpha) - 1).
double charging_time_small_zeta(double tau, double alpha);

/// zeta >> 1 limit: tau sqrt(ln[x / ln x]), x = 2 zeta^2 / (pi ln^2 alpha).
/// Throws std::domain_error when x <= 1, where the asymptote does not apply.
double charging_time_large_zeta(double tau, double zeta, double alpha);

/// Time of maximum instantaneous power for the Gaussian pulse: the positive
/// root of sqrt(2/pi) tau exp(-t^2/2tau^2) = t tanh(zeta xi(t)) / zeta,
/// bracketed in [0, tau (1 + sqrt(W0(2 zeta^2/pi) + 1))].
double peak_power_time(const DriveParams& p, const Accuracy& acc = {});

/// zeta -> 0 limit of the peak-power time, the root of
/// sqrt(2/pi) tau exp(-t^2/2tau^2) = t (1 + erf(t / sqrt2 tau)); about 0.506 tau.
double peak_power_time_small_zeta(double tau);

/// zeta >> 1 limit tau sqrt(W0(2 zeta^2 / pi)).
double peak_power_time_lambert(double tau, double zeta);

/// The same limit with W0 replaced by its de Bruijn expansion. Requires 2 zeta^2/pi > e.
double peak_power_time_debruijn(double tau, double zeta);

/// (omega_b / tau) exp(2(zeta - 1/3)) / 4 * sqrt(W0(2 zeta^2 / pi)); meaningful for zeta >~ 1.
double peak_power_estimate(const DriveParams& p);

/// [E(t+) - E(t-)] / (t+ - t-) over the pulse FWHM, t+- = +-sqrt(2 ln 2) tau:
/// omega_b sinh(zeta) sinh(zeta erf(sqrt(ln 2))) / (2 sqrt(2 ln 2) tau).
double average_power_fwhm(const DriveParams& p);

/// Large-zeta form omega_b exp(zeta (1 + erf(sqrt(ln 2)))) / (8 sqrt(2 ln 2) tau).
double average_power_fwhm_large_zeta(const DriveParams& p);

/// Half-width sqrt(2 ln 2) tau of the Gaussian envelope at half maximum.
double fwhm_half_width(double tau);

/// Lab-frame quadrature variances from the closed-form moments:
///   var_x = 1/2 + sinh^2(zeta xi / 2) - (1/2) sin(2 omega_b t + theta) sinh(zeta xi)
///   var_p = 1/2 + sinh^2(zeta xi / 2) + (1/2) sin(2 omega_b t + theta) sinh(zeta xi)
/// with xi = 2 A(t) (= 1 + erf(t / sqrt2 tau) for the Gaussian).
QuadratureReport quadrature_variances(const DriveParams& p, double t, double theta);

/// Same quantities from arbitrary rotating-frame moments. The lab-frame pair
/// coherence is s_lab = exp(-2i omega_b t) s and
/// var_x = 1/2 + n + Re(exp(-i theta) s_lab), var_p = 1/2 + n - Re(exp(-i theta) s_lab).
QuadratureReport quadrature_from_moments(const MomentState& rotating, double omega_b, double t, double theta);

/// min over theta of var_x: e^{-zeta xi} / 2 for the closed-form state.
double min_quadrature_variance(const DriveParams& p, double t);

}  // namespace qbattery
