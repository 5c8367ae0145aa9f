#include "qbattery/merit.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qbattery/errors.hpp"

namespace qbattery {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
const double kSqrtTwoOverPi = std::sqrt(2.0 / kPi);

void require_gaussian(const DriveParams& p, const char* fn) {
  if (!std::holds_alternative<Gaussian>(p.pulse()))
    throw UnsupportedPulse(std::string(fn) + ": defined for the gaussian pulse only, got '" +
                           pulse_name(p.pulse()) + "'");
}

void require_fraction(double alpha, const char* fn) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error(std::string(fn) +
                            ": alpha must lie in (0, 1); the full charge is reached only as t -> infinity");
}

// zeta * xi(t) with xi = 2 A(t).
double squeeze_argument(const DriveParams& p, double t) { return 2.0 * p.zeta() * cumulative_area(p.pulse(), t); }

// Root of g on [0, upper] where g(0) > 0 > g(upper).
template <class F>
double bracketed_root(F g, double upper, double scale, const Accuracy& acc, const char* fn) {
  const double g_lo = g(0.0);
  const double g_hi = g(upper);
  if (!(g_lo > 0.0 && g_hi < 0.0)) {
    std::ostringstream msg;
    msg << fn << ": turning point not bracketed in [0, " << upper << "] (g = " << g_lo << ", " << g_hi << ")";
    throw NumericalError(msg.str());
  }
  auto tol = [&](double a, double b) {
    return std::abs(b - a) <= acc.abs_tol * scale + acc.rel_tol * std::min(std::abs(a), std::abs(b));
  };
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(g, 0.0, upper, g_lo, g_hi, tol, max_iter);
  if (max_iter >= 200) throw NumericalError(std::string(fn) + ": root finder did not converge");
  return 0.5 * (a + b);
}

}  // namespace

double stored_energy(const DriveParams& p, double t) { return p.omega_b() * area_law_energy(p, t); }

double max_energy(const DriveParams& p) {
  const double s = std::sinh(p.zeta());
  return p.omega_b() * s * s;
}

double instantaneous_power(const DriveParams& p, double t) {
  require_gaussian(p, "instantaneous_power");
  const double tau = p.tau();
  const double x = t / tau;
  const double zeta = p.zeta();
  if (zeta == 0.0) return 0.0;
  return p.omega_b() / tau * zeta / std::sqrt(2.0 * kPi) * std::sinh(squeeze_argument(p, t)) * std::exp(-0.5 * x * x);
}

ChargingReport charging_time(const DriveParams& p, double alpha) {
  require_gaussian(p, "charging_time");
  require_fraction(alpha, "charging_time");
  const double zeta = p.zeta();
  if (!(zeta > 0.0)) throw std::domain_error("charging_time: requires zeta > 0");

  double arg;
  if (zeta <= 20.0) {
    arg = 2.0 / zeta * std::asinh(std::sqrt(alpha) * std::sinh(zeta)) - 1.0;
  } else {
    // 1 - arg = 2 (zeta - asinh q) / zeta with q = sqrt(alpha) sinh(zeta),
    // expanded in logarithms so that neither sinh nor the difference overflows.
    const double log_q = zeta + 0.5 * std::log(alpha) + std::log1p(-std::exp(-2.0 * zeta)) - std::numbers::ln2;
    const double inv_q2 = std::exp(-2.0 * log_q);
    const double gap = -0.5 * std::log(alpha) - std::log1p(-std::exp(-2.0 * zeta)) -
                       std::log1p(0.5 * (std::sqrt(1.0 + inv_q2) - 1.0));
    arg = 1.0 - 2.0 * gap / zeta;
  }
  return {kSqrt2 * p.tau() * specfun::erfinv(arg), alpha, max_energy(p)};
}

double charging_time_small_zeta(double tau, double alpha) {
  require_fraction(alpha, "charging_time_small_zeta");
  if (!(tau > 0.0)) throw std::domain_error("charging_time_small_zeta: tau must be positive");
  return kSqrt2 * tau * specfun::erfinv(2.0 * std::sqrt(alpha) - 1.0);
}

double charging_time_large_zeta(double tau, double zeta, double alpha) {
  require_fraction(alpha, "charging_time_large_zeta");
  if (!(tau > 0.0)) throw std::domain_error("charging_time_large_zeta: tau must be positive");
  const double la = std::log(alpha);
  const double x = 2.0 * zeta * zeta / (kPi * la * la);
  if (!(x > 1.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << "charging_time_large_zeta: 2 zeta^2 / (pi ln^2 alpha) = " << x
        << " must exceed 1 for the large-zeta asymptote to apply";
    throw std::domain_error(msg.str());
  }
  return tau * std::sqrt(std::log(x / std::log(x)));
}

double peak_power_time(const DriveParams& p, const Accuracy& acc) {
  require_gaussian(p, "peak_power_time");
  acc.validate();
  const double zeta = p.zeta();
  if (!(zeta > 0.0)) throw std::domain_error("peak_power_time: requires zeta > 0");
  const double tau = p.tau();
  auto g = [&](double t) {
    const double x = t / tau;
    return kSqrtTwoOverPi * tau * std::exp(-0.5 * x * x) - t * std::tanh(squeeze_argument(p, t)) / zeta;
  };
  const double upper = tau * (1.0 + std::sqrt(specfun::lambert_w0(2.0 * zeta * zeta / kPi) + 1.0));
  return bracketed_root(g, upper, tau, acc, "peak_power_time");
}

double peak_power_time_small_zeta(double tau) {
  if (!(tau > 0.0)) throw std::domain_error("peak_power_time_small_zeta: tau must be positive");
  auto g = [&](double t) {
    const double x = t / tau;
    return kSqrtTwoOverPi * tau * std::exp(-0.5 * x * x) - t * (1.0 + std::erf(x / kSqrt2));
  };
  return bracketed_root(g, tau, tau, Accuracy{}, "peak_power_time_small_zeta");
}

double peak_power_time_lambert(double tau, double zeta) {
  return tau * std::sqrt(specfun::lambert_w0(2.0 * zeta * zeta / kPi));
}

double peak_power_time_debruijn(double tau, double zeta) {
  return tau * std::sqrt(specfun::debruijn_w_approx(2.0 * zeta * zeta / kPi));
}

double peak_power_estimate(const DriveParams& p) {
  require_gaussian(p, "peak_power_estimate");
  const double zeta = p.zeta();
  return p.omega_b() / p.tau() * std::exp(2.0 * (zeta - 1.0 / 3.0)) / 4.0 *
         std::sqrt(specfun::lambert_w0(2.0 * zeta * zeta / kPi));
}

double fwhm_half_width(double tau) { return std::sqrt(2.0 * std::numbers::ln2) * tau; }

double average_power_fwhm(const DriveParams& p) {
  require_gaussian(p, "average_power_fwhm");
  const double zeta = p.zeta();
  const double e = std::erf(std::sqrt(std::numbers::ln2));
  return p.omega_b() * std::sinh(zeta) * std::sinh(zeta * e) / (2.0 * fwhm_half_width(p.tau()));
}

double average_power_fwhm_large_zeta(const DriveParams& p) {
  require_gaussian(p, "average_power_fwhm_large_zeta");
  const double e = std::erf(std::sqrt(std::numbers::ln2));
  return p.omega_b() * std::exp(p.zeta() * (1.0 + e)) / (4.0 * 2.0 * fwhm_half_width(p.tau()));
}

QuadratureReport quadrature_variances(const DriveParams& p, double t, double theta) {
  const double r = squeeze_argument(p, t);
  const double sp = std::sin(2.0 * p.omega_b() * t + theta);
  // 1/2 + sinh^2(r/2) -+ sinh(r) sin / 2, regrouped into exponentials so the
  // squeezed quadrature does not cancel.
  const double up = std::exp(r), down = std::exp(-r);
  QuadratureReport q;
  q.theta = theta;
  q.var_x = 0.25 * (up * (1.0 - sp) + down * (1.0 + sp));
  q.var_p = 0.25 * (up * (1.0 + sp) + down * (1.0 - sp));
  q.std_product = std::sqrt(q.var_x * q.var_p);
  return q;
}

QuadratureReport quadrature_from_moments(const MomentState& rotating, double omega_b, double t, double theta) {
  const cplx s_lab = std::polar(1.0, -2.0 * omega_b * t) * rotating.s;
  const double c = (std::polar(1.0, -theta) * s_lab).real();
  QuadratureReport q;
  q.theta = theta;
  q.var_x = 0.5 + rotating.n + c;
  q.var_p = 0.5 + rotating.n - c;
  q.std_product = std::sqrt(q.var_x * q.var_p);
  return q;
}

double min_quadrature_variance(const DriveParams& p, double t) { return 0.5 * std::exp(-squeeze_argument(p, t)); }

}  // namespace qbattery
