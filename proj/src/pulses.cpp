#include "qbattery/pulses.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qbattery/errors.hpp"

namespace qbattery {
namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

constexpr double kPi = std::numbers::pi;

double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace

detail::Width::Width(double tau_) : tau(tau_) {
  if (!(tau_ > 0.0) || !std::isfinite(tau_))
    throw std::domain_error("pulse width tau must be positive and finite");
}

PulseShape make_pulse(std::string_view name, double tau) {
  if (name == "gaussian") return Gaussian{tau};
  if (name == "delta") return DeltaLimit{};
  if (name == "sech") return Sech{tau};
  if (name == "lorentzian") return Lorentzian{tau};
  if (name == "poschl-teller") return PoschlTeller{tau};
  if (name == "algebraic") return Algebraic{tau};
  throw std::invalid_argument("unknown pulse shape '" + std::string(name) +
                              "' (expected gaussian, delta, sech, lorentzian, poschl-teller, algebraic)");
}

std::string pulse_name(const PulseShape& shape) {
  return std::visit(overloaded{
                        [](const Gaussian&) { return "gaussian"; },
                        [](const DeltaLimit&) { return "delta"; },
                        [](const Sech&) { return "sech"; },
                        [](const Lorentzian&) { return "lorentzian"; },
                        [](const PoschlTeller&) { return "poschl-teller"; },
                        [](const Algebraic&) { return "algebraic"; },
                    },
                    shape);
}

double pulse_width(const PulseShape& shape) {
  return std::visit(overloaded{
                        [](const DeltaLimit&) -> double {
                          throw UnsupportedPulse("the delta-limit pulse has no width");
                        },
                        [](const detail::Width& w) { return w.tau; },
                    },
                    shape);
}

double envelope_value(const PulseShape& shape, double t) {
  if (!std::isfinite(t)) throw std::domain_error("envelope_value: t must be finite");
  return std::visit(
      overloaded{
          [](const DeltaLimit&) -> double {
            throw UnsupportedPulse("envelope_value: the delta-limit pulse has no finite-time value");
          },
          [t](const Gaussian& p) {
            const double x = t / p.tau;
            return std::exp(-0.5 * x * x) / (std::sqrt(2.0 * kPi) * p.tau);
          },
          [t](const Sech& p) { return sech(t / p.tau) / (kPi * p.tau); },
          [t](const Lorentzian& p) { return (p.tau / kPi) / (t * t + p.tau * p.tau); },
          [t](const PoschlTeller& p) {
            const double s = sech(t / p.tau);
            return s * s / (2.0 * p.tau);
          },
          [t](const Algebraic& p) {
            const double x = t / p.tau;
            return std::pow(1.0 + x * x, -1.5) / (2.0 * p.tau);
          },
      },
      shape);
}

double cumulative_area(const PulseShape& shape, double t) {
  if (std::isnan(t)) throw std::domain_error("cumulative_area: t is NaN");
  if (t == -INFINITY) return 0.0;
  if (t == INFINITY) return 1.0;
  return std::visit(
      overloaded{
          [t](const DeltaLimit&) { return t > 0.0 ? 1.0 : (t < 0.0 ? 0.0 : 0.5); },
          [t](const Gaussian& p) { return 0.5 * std::erfc(-t / (std::numbers::sqrt2 * p.tau)); },
          [t](const Sech& p) {
            // For t > 0 use the complement so the approach to 1 keeps full precision.
            const double x = t / p.tau;
            if (x <= 0.0) return 2.0 / kPi * std::atan(std::exp(x));
            return 1.0 - 2.0 / kPi * std::atan(std::exp(-x));
          },
          [t](const Lorentzian& p) {
            if (t < 0.0) return std::atan(p.tau / -t) / kPi;
            return 0.5 + std::atan(t / p.tau) / kPi;
          },
          [t](const PoschlTeller& p) {
            const double x = t / p.tau;
            // (1 + tanh x) / 2 = 1 / (1 + exp(-2x))
            return 1.0 / (1.0 + std::exp(-2.0 * x));
          },
          [t](const Algebraic& p) {
            const double x = t / p.tau;
            const double r = std::sqrt(1.0 + x * x);
            // (1 + x/r)/2 written without cancellation for x < 0
            if (x < 0.0) return 0.5 / (r * (r - x));
            return 0.5 * (1.0 + x / r);
          },
      },
      shape);
}

}  // namespace qbattery
