#pragma once

// Special functions used across the library. All functions are pure and
// reentrant. Domain violations throw std::domain_error.

namespace qbattery {

/// Absolute and relative tolerances handed to iterative solvers and
/// adaptive integrators.
struct Accuracy {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;

  /// Throws std::domain_error unless both tolerances are positive and finite.
  void validate() const;
};

namespace specfun {

/// Error function, erf(x) = 2/sqrt(pi) * int_0^x exp(-u^2) du.
double erf(double x);

/// Complementary error function 1 - erf(x), accurate in the far tail.
double erfc(double x);

/// Inverse of erf on (-1, 1). Newton iteration on erf from a rational
/// starting guess, with a bisection fallback.
double erfinv(double p);

/// Principal branch W0 of the Lambert W function, restricted to x >= 0.
double lambert_w0(double x);

/// ln(u) - ln(ln u) + ln(ln u)/ln(u), the leading terms of the large-u
/// expansion of W0(u). Requires u > e.
double debruijn_w_approx(double u);

double arcsinh(double x);

}  // namespace specfun
}  // namespace qbattery
