#include "qbattery/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qbattery/errors.hpp"

namespace qbattery::ode {
namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller exponents (Hairer & Wanner's DOPRI5 defaults).
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - 0.75 * kBeta;
constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2, kFacMax = 10.0;

double weighted_rms(std::span<const double> v, std::span<const double> y0, std::span<const double> y1,
                    const Accuracy& acc) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double scale = acc.abs_tol + acc.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = v[i] / scale;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(std::max<std::size_t>(v.size(), 1)));
}

}  // namespace

Stats integrate(const System& rhs, double t0, std::span<double> y, std::span<const double> stops,
                const Settings& settings, const Observer& on_stop, const Observer& on_step) {
  settings.acc.validate();
  if (!(settings.max_step > 0.0)) throw std::invalid_argument("ode::integrate: max_step must be positive");
  double prev_stop = t0;
  for (double s : stops) {
    if (!(s > prev_stop)) throw std::invalid_argument("ode::integrate: stop times must be strictly increasing after t0");
    prev_stop = s;
  }

  const std::size_t dim = y.size();
  Stats stats;
  if (stops.empty()) return stats;

  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), tmp(dim), ynew(dim),
      err(dim);
  auto eval = [&](double t, std::span<const double> state, std::vector<double>& out) {
    rhs(t, state, out);
    ++stats.evaluations;
  };

  double t = t0;
  eval(t, y, k1);

  const double span_total = stops.back() - t0;
  double h = settings.initial_step;
  if (!(h > 0.0)) {
    // Initial step from the scale of y and y' (Hairer, Norsett & Wanner, II.4).
    const double d0 = weighted_rms(y, y, y, settings.acc);
    const double d1 = weighted_rms(k1, y, y, settings.acc);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span_total : 0.01 * d0 / d1;
    h0 = std::min({h0, span_total, settings.max_step});
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h0 * k1[i];
    eval(t + h0, tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) err[i] = (k2[i] - k1[i]) / h0;
    const double d2 = weighted_rms(err, y, y, settings.acc);
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6 * span_total, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    h = std::min({100.0 * h0, h1, settings.max_step});
  }

  double err_prev = 1e-4;
  bool last_rejected = false;
  std::size_t stop_index = 0;

  while (stop_index < stops.size()) {
    if (stats.accepted + stats.rejected >= settings.max_steps) {
      std::ostringstream msg;
      msg << "ode::integrate: step budget of " << settings.max_steps << " exhausted at t = " << t;
      throw NumericalError(msg.str());
    }
    const double target = stops[stop_index];
    bool hits_stop = false;
    h = std::min(h, settings.max_step);
    const double h_trial = h;
    if (t + h >= target || t + 1.01 * h >= target) {
      h = target - t;
      hits_stop = true;
    }
    if (!(h > 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), std::abs(target)))) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "ode::integrate: step size underflow (h = " << h << ") at t = " << t
          << "; the system is too stiff for the requested tolerance";
      throw StiffnessError(msg.str());
    }

    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    eval(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eval(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    eval(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < dim; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    eval(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < dim; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double t_next = hits_stop ? target : t + h;
    eval(t_next, tmp, k6);
    for (std::size_t i = 0; i < dim; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    eval(t_next, ynew, k7);
    for (std::size_t i = 0; i < dim; ++i)
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

    const double err_norm = weighted_rms(err, y, ynew, settings.acc);
    if (!std::isfinite(err_norm)) {
      // Overflow inside a stage: retreat hard and retry.
      ++stats.rejected;
      h *= kFacMin;
      last_rejected = true;
      continue;
    }

    if (err_norm <= 1.0) {
      ++stats.accepted;
      std::copy(ynew.begin(), ynew.end(), y.begin());
      std::swap(k1, k7);
      t = t_next;
      if (on_step) on_step(t, y);
      if (hits_stop) {
        if (on_stop) on_stop(t, y);
        ++stop_index;
      }
      double fac = err_norm == 0.0 ? kFacMax
                                   : kSafety * std::pow(err_norm, -kExpo) * std::pow(err_prev, kBeta);
      fac = std::clamp(fac, kFacMin, kFacMax);
      if (last_rejected) fac = std::min(fac, 1.0);
      // A step clipped onto a stop says nothing about the natural step size.
      h = hits_stop ? std::max(h * fac, h_trial) : h * fac;
      err_prev = std::max(err_norm, 1e-4);
      last_rejected = false;
    } else {
      ++stats.rejected;
      const double fac = std::max(kFacMin, kSafety * std::pow(err_norm, -kExpo));
      h *= fac;
      last_rejected = true;
    }
  }
  for (double v : y)
    if (!std::isfinite(v)) throw NumericalError("ode::integrate: state became non-finite");
  return stats;
}

}  // namespace qbattery::ode
