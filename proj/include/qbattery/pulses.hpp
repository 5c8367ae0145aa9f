#pragma once

#include <string>
#include <string_view>
#include <variant>

namespace qbattery {

// Unit-area, even pulse envelopes f(t) peaked at t = 0, and their cumulative
// areas A(t) = int_{-inf}^t f. Each finite-width shape carries a width
// parameter tau > 0 (validated on construction).
//
//   Gaussian      f = exp(-t^2 / 2 tau^2) / sqrt(2 pi tau^2)   A = erfc(-t / sqrt2 tau) / 2
//   Sech          f = sech(t / tau) / (pi tau)                 A = (2/pi) atan(exp(t / tau))
//   Lorentzian    f = (tau / pi) / (t^2 + tau^2)               A = 1/2 + atan(t / tau) / pi
//   PoschlTeller  f = sech^2(t / tau) / (2 tau)                A = (1 + tanh(t / tau)) / 2
//   Algebraic     f = (1 + (t/tau)^2)^(-3/2) / (2 tau)         A = (1 + x / sqrt(1 + x^2)) / 2, x = t / tau
//   DeltaLimit    f = delta(t)                                 A = Theta(t), Theta(0) = 1/2

namespace detail {
struct Width {
  explicit Width(double tau);
  double tau;
};
}  // namespace detail

struct Gaussian : detail::Width { using Width::Width; };
struct Sech : detail::Width { using Width::Width; };
struct Lorentzian : detail::Width { using Width::Width; };
struct PoschlTeller : detail::Width { using Width::Width; };
struct Algebraic : detail::Width { using Width::Width; };
struct DeltaLimit {};

using PulseShape = std::variant<Gaussian, DeltaLimit, Sech, Lorentzian, PoschlTeller, Algebraic>;

/// Parses "gaussian", "delta", "sech", "lorentzian", "poschl-teller" or
/// "algebraic". tau is ignored for "delta".
PulseShape make_pulse(std::string_view name, double tau);

std::string pulse_name(const PulseShape& shape);

/// Width parameter tau; throws UnsupportedPulse for DeltaLimit.
double pulse_width(const PulseShape& shape);

inline bool is_delta(const PulseShape& shape) { return std::holds_alternative<DeltaLimit>(shape); }

/// f(t). Throws UnsupportedPulse for DeltaLimit, std::domain_error for non-finite t.
double envelope_value(const PulseShape& shape, double t);

/// A(t) in [0, 1]; accepts t = +/-infinity.
double cumulative_area(const PulseShape& shape, double t);

}  // namespace qbattery
