#include "qbattery/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qbattery {

void Accuracy::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !std::isfinite(abs_tol) || !std::isfinite(rel_tol))
    throw std::domain_error("Accuracy: tolerances must be positive and finite");
}

namespace specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(double x, const char* fn) {
  if (!std::isfinite(x))
    throw std::domain_error(std::string(fn) + ": argument must be finite");
}

// Giles' single-precision approximation; used only as a starting point.
double erfinv_guess(double p) {
  double w = -std::log((1.0 - p) * (1.0 + p));
  double q;
  if (w < 5.0) {
    w -= 2.5;
    q = 2.81022636e-08;
    q = 3.43273939e-07 + q * w;
    q = -3.5233877e-06 + q * w;
    q = -4.39150654e-06 + q * w;
    q = 0.00021858087 + q * w;
    q = -0.00125372503 + q * w;
    q = -0.00417768164 + q * w;
    q = 0.246640727 + q * w;
    q = 1.50140941 + q * w;
  } else {
    w = std::sqrt(w) - 3.0;
    q = -0.000200214257;
    q = 0.000100950558 + q * w;
    q = 0.00134934322 + q * w;
    q = -0.00367342844 + q * w;
    q = 0.00573950773 + q * w;
    q = -0.0076224613 + q * w;
    q = 0.00943887047 + q * w;
    q = 1.00167406 + q * w;
    q = 2.83297682 + q * w;
  }
  return q * p;
}

// erf(x) - p, evaluated through erfc in the tails so that 1 - |p| keeps
// its full precision.
double erf_residual(double x, double p) {
  if (p >= 0.5) return (1.0 - p) - std::erfc(x);
  if (p <= -0.5) return std::erfc(-x) - (1.0 + p);
  return std::erf(x) - p;
}

}  // namespace

double erf(double x) {
  require_finite(x, "erf");
  return std::erf(x);
}

double erfc(double x) {
  require_finite(x, "erfc");
  return std::erfc(x);
}

double erfinv(double p) {
  if (!(p > -1.0 && p < 1.0))
    throw std::domain_error("erfinv: argument must lie in (-1, 1); the target is unreachable in finite time");
  if (p == 0.0) return 0.0;

  // erf(6.5) rounds to 1 with room to spare, so this always brackets the root.
  double lo = -6.5, hi = 6.5;
  double x = erfinv_guess(p);
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);

  constexpr double two_over_sqrt_pi = 2.0 * std::numbers::inv_sqrtpi;
  for (int iter = 0; iter < 200; ++iter) {
    const double g = erf_residual(x, p);
    if (g == 0.0) return x;
    (g < 0.0 ? lo : hi) = x;

    const double slope = two_over_sqrt_pi * std::exp(-x * x);
    double next = slope > 0.0 ? x - g / slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection fallback

    if (std::abs(next - x) <= 2.0 * kEps * std::abs(next) || hi - lo <= 2.0 * kEps * std::abs(next))
      return next;
    x = next;
  }
  return x;
}

double lambert_w0(double x) {
  require_finite(x, "lambert_w0");
  if (x < 0.0) throw std::domain_error("lambert_w0: only x >= 0 is supported");
  if (x == 0.0) return 0.0;

  if (x <= std::numbers::e) {
    // Halley on w e^w - x, seeded by the Taylor series or a log1p estimate.
    double w;
    if (x < 0.25) {
      w = x * (1.0 - x * (1.0 - x * (1.5 - x * 8.0 / 3.0)));
    } else {
      const double l = std::log1p(x);
      w = l * (1.0 - std::log1p(l) / (2.0 + l));
    }
    for (int iter = 0; iter < 50; ++iter) {
      const double ew = std::exp(w);
      const double f = w * ew - x;
      const double fp = ew * (w + 1.0);
      const double step = f / (fp - (w + 2.0) * f / (2.0 * w + 2.0));
      w -= step;
      if (std::abs(step) <= 4.0 * kEps * std::abs(w)) break;
    }
    return w;
  }

  // Halley on w + ln(w) - ln(x), seeded by the de Bruijn expansion.
  const double lx = std::log(x);
  double w = debruijn_w_approx(x);
  for (int iter = 0; iter < 50; ++iter) {
    const double g = w + std::log(w) - lx;
    const double gp = 1.0 + 1.0 / w;
    const double gpp = -1.0 / (w * w);
    const double step = g / (gp - 0.5 * g * gpp / gp);
    w -= step;
    if (std::abs(step) <= 4.0 * kEps * w) break;
  }
  return w;
}

double debruijn_w_approx(double u) {
  require_finite(u, "debruijn_w_approx");
  if (!(u > std::numbers::e))
    throw std::domain_error("debruijn_w_approx: requires u > e");
  const double l1 = std::log(u);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

double arcsinh(double x) {
  require_finite(x, "arcsinh");
  return std::asinh(x);
}

}  // namespace specfun
}  // namespace qbattery
