#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qbattery/errors.hpp"
#include "qbattery/pulses.hpp"

using namespace qbattery;

namespace {

const std::vector<const char*> kFinite{"gaussian", "sech", "lorentzian", "poschl-teller", "algebraic"};

double integrate(const PulseShape& s, double a, double b) {
  auto f = [&](double t) { return envelope_value(s, t); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

}  // namespace

TEST_SUITE("pulses") {
  TEST_CASE("gaussian envelope values") {
    const Gaussian g{1.0};
    CHECK(envelope_value(g, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
    CHECK(envelope_value(g, 3.0) == doctest::Approx(std::exp(-4.5) / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
    const Gaussian g2{2.5};
    const double half = std::sqrt(2.0 * std::log(2.0)) * 2.5;
    CHECK(envelope_value(g2, half) == doctest::Approx(envelope_value(g2, 0.0) / 2.0).epsilon(1e-14));
    CHECK(envelope_value(g2, -half) == doctest::Approx(envelope_value(g2, 0.0) / 2.0).epsilon(1e-14));
    CHECK(2.0 * half / 2.5 == doctest::Approx(2.35).epsilon(3e-3));
  }

  TEST_CASE("every finite pulse has unit area") {
    for (const char* name : kFinite) {
      CAPTURE(name);
      const auto s = make_pulse(name, 0.7);
      const double inf = std::numeric_limits<double>::infinity();
      CHECK(integrate(s, -inf, inf) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(envelope_value(s, 0.3) == doctest::Approx(envelope_value(s, -0.3)).epsilon(1e-15));
    }
  }

  TEST_CASE("cumulative area is the running integral of the envelope") {
    const double inf = std::numeric_limits<double>::infinity();
    for (const char* name : kFinite) {
      CAPTURE(name);
      const auto s = make_pulse(name, 1.3);
      CHECK(cumulative_area(s, -inf) == 0.0);
      CHECK(cumulative_area(s, inf) == 1.0);
      CHECK(cumulative_area(s, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
      for (double t = -6.0; t <= 6.0; t += 0.75) {
        CAPTURE(t);
        const double oracle = integrate(s, -inf, t);
        CHECK(cumulative_area(s, t) == doctest::Approx(oracle).epsilon(1e-10));
        const double h = 1e-5;
        const double fd = (cumulative_area(s, t + h) - cumulative_area(s, t - h)) / (2.0 * h);
        CHECK(fd == doctest::Approx(envelope_value(s, t)).epsilon(1e-7));
      }
      // far tails keep relative precision instead of rounding to 0 or 1
      const double tail = cumulative_area(s, -40.0);
      CHECK(tail > 0.0);
      CHECK(tail == doctest::Approx(integrate(s, -inf, -40.0)).epsilon(1e-8));
    }
  }

  TEST_CASE("gaussian and sech area values") {
    const Gaussian g{1.0};
    CHECK(cumulative_area(g, 1.0) == doctest::Approx(0.5 * (1.0 + std::erf(1.0 / std::numbers::sqrt2))).epsilon(1e-15));
    CHECK(cumulative_area(g, 1.0) == doctest::Approx(0.8413).epsilon(1e-4));
    CHECK(cumulative_area(Sech{2.0}, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("delta limit is a step") {
    const PulseShape d = DeltaLimit{};
    CHECK(cumulative_area(d, -1e-300) == 0.0);
    CHECK(cumulative_area(d, 1e-300) == 1.0);
    CHECK(cumulative_area(d, 0.0) == 0.5);
    CHECK_THROWS_AS(envelope_value(d, 0.0), UnsupportedPulse);
    CHECK_THROWS_AS(pulse_width(d), UnsupportedPulse);
    // narrowing gaussians converge to the step
    for (double tau : {1e-1, 1e-3, 1e-6}) {
      CHECK(std::fabs(cumulative_area(Gaussian{tau}, 0.01) - 1.0) < (tau < 1e-2 ? 1e-12 : 0.5));
      CHECK(cumulative_area(Gaussian{tau}, -0.01) < (tau < 1e-2 ? 1e-12 : 0.5));
    }
  }

  TEST_CASE("construction and naming") {
    for (const char* name : {"gaussian", "delta", "sech", "lorentzian", "poschl-teller", "algebraic"}) {
      CHECK(pulse_name(make_pulse(name, 1.0)) == name);
    }
    CHECK(pulse_width(make_pulse("sech", 2.0)) == 2.0);
    CHECK(is_delta(make_pulse("delta", 1.0)));
    CHECK_THROWS_AS(make_pulse("square", 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Gaussian{0.0}, std::domain_error);
    CHECK_THROWS_AS(Gaussian{-1.0}, std::domain_error);
    CHECK_THROWS_AS(Sech{std::numeric_limits<double>::infinity()}, std::domain_error);
    CHECK_THROWS(envelope_value(Gaussian{1.0}, std::nan("")));
  }
}
