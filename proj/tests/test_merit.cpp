#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "qbattery/errors.hpp"
#include "qbattery/merit.hpp"

using namespace qbattery;

namespace {

DriveParams gaussian(double zeta, double tau = 1.0, double omega_b = 1.0) {
  return DriveParams::resonant(omega_b, zeta, Gaussian{tau});
}

// dE/dt for the gaussian pulse, written from scratch: omega_b zeta f(t) sinh(zeta (1 + erf(t / sqrt2 tau)))
double power_oracle(double zeta, double tau, double t) {
  const double f = std::exp(-t * t / (2 * tau * tau)) / (std::sqrt(2 * std::numbers::pi) * tau);
  return zeta * f * std::sinh(zeta * (1 + std::erf(t / (std::numbers::sqrt2 * tau))));
}

// golden-section maximisation of power_oracle on [0, hi]
double argmax_oracle(double zeta, double tau, double hi) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double a = 0, b = hi;
  for (int i = 0; i < 200 && b - a > 1e-13 * tau; ++i) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (power_oracle(zeta, tau, c) > power_oracle(zeta, tau, d)) b = d; else a = c;
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_SUITE("merit") {
  TEST_CASE("stored energy limits") {
    const auto p = gaussian(2.0, 1.0, 3.0);
    CHECK(stored_energy(p, -INFINITY) == 0.0);
    CHECK(stored_energy(p, INFINITY) == doctest::Approx(3.0 * std::pow(std::sinh(2.0), 2)).epsilon(1e-15));
    CHECK(stored_energy(p, 0.0) == doctest::Approx(3.0 * 1.3810978455418157).epsilon(1e-14));
    CHECK(max_energy(p) == doctest::Approx(stored_energy(p, INFINITY)).epsilon(1e-15));
    const auto step = DriveParams::resonant(1.0, 1.0, DeltaLimit{});
    CHECK(stored_energy(step, 1.0) == doctest::Approx(std::pow(std::sinh(1.0), 2)).epsilon(1e-15));
    CHECK(stored_energy(step, -1.0) == 0.0);
  }

  TEST_CASE("power is the derivative of energy") {
    CHECK(instantaneous_power(gaussian(0.0), 0.3) == 0.0);
    for (double zeta : {0.3, 1.0, 2.5}) {
      const auto p = gaussian(zeta, 1.4, 2.0);
      CHECK(instantaneous_power(p, -60.0) == 0.0);
      CHECK(instantaneous_power(p, 60.0) == 0.0);
      for (double x = -3.0; x <= 3.0; x += 0.25) {
        const double t = x * 1.4, h = 1e-5 * 1.4;
        const double fd = (stored_energy(p, t + h) - stored_energy(p, t - h)) / (2 * h);
        CHECK(instantaneous_power(p, t) == doctest::Approx(fd).epsilon(1e-6));
        CHECK(instantaneous_power(p, t) == doctest::Approx(2.0 * power_oracle(zeta, 1.4, t)).epsilon(1e-13));
      }
    }
    CHECK_THROWS_AS(instantaneous_power(DriveParams::resonant(1.0, 1.0, Sech{1.0}), 0.0), UnsupportedPulse);
  }

  TEST_CASE("integrated power equals the stored maximum") {
    for (double zeta : {0.5, 2.0, 5.0}) {
      const auto p = gaussian(zeta);
      auto f = [&](double t) { return instantaneous_power(p, t); };
      const double total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -8.0, 8.0, 25, 1e-15);
      CHECK(total == doctest::Approx(max_energy(p)).epsilon(1e-8));
    }
  }

  TEST_CASE("charging time inverts the stored energy") {
    for (double zeta : {0.5, 2.0, 5.0, 25.0, 60.0}) {
      for (double alpha : {0.1, 0.5, 0.9}) {
        CAPTURE(zeta);
        CAPTURE(alpha);
        const auto p = gaussian(zeta, 1.3);
        const auto rep = charging_time(p, alpha);
        CHECK(rep.alpha == alpha);
        CHECK(stored_energy(p, rep.t_alpha) / rep.e_max == doctest::Approx(alpha).epsilon(1e-9));
      }
    }
    CHECK_THROWS_AS(charging_time(gaussian(1.0), 0.0), std::domain_error);
    CHECK_THROWS_AS(charging_time(gaussian(1.0), 1.0), std::domain_error);
    CHECK_THROWS_AS(charging_time(gaussian(0.0), 0.5), std::domain_error);
  }

  TEST_CASE("charging time limits") {
    CHECK(charging_time_small_zeta(1.0, 0.25) == 0.0);
    CHECK(std::fabs(charging_time(gaussian(1e-4), 0.25).t_alpha) < 1e-6);
    CHECK(charging_time_small_zeta(1.0, 0.9) ==
          doctest::Approx(charging_time(gaussian(0.01), 0.9).t_alpha).epsilon(0.01));
    CHECK(charging_time_large_zeta(1.0, 20.0, 0.9) ==
          doctest::Approx(charging_time(gaussian(20.0), 0.9).t_alpha).epsilon(0.05));
    CHECK(charging_time_large_zeta(2.0, 50.0, 0.5) ==
          doctest::Approx(charging_time(gaussian(50.0, 2.0), 0.5).t_alpha).epsilon(0.02));
    CHECK_THROWS_AS(charging_time_large_zeta(1.0, 0.5, 0.1), std::domain_error);
  }

  TEST_CASE("charging time orderings") {
    for (double zeta : {0.5, 1.0, 3.0, 8.0}) {
      double prev = -INFINITY;
      for (double alpha = 0.05; alpha < 0.99; alpha += 0.05) {
        const double t = charging_time(gaussian(zeta), alpha).t_alpha;
        CHECK(t > prev);
        prev = t;
      }
    }
    for (double alpha : {0.6, 0.8, 0.95}) {
      double prev = -INFINITY;
      for (double zeta = 0.2; zeta < 12.0; zeta += 0.3) {
        const double threshold = std::pow(std::sinh(zeta / 2) / std::sinh(zeta), 2);
        if (alpha <= threshold) continue;
        const double t = charging_time(gaussian(zeta), alpha).t_alpha;
        CHECK(t > prev);
        prev = t;
      }
    }
  }

  TEST_CASE("peak power time") {
    CHECK(peak_power_time_small_zeta(1.0) == doctest::Approx(0.5060544690).epsilon(1e-9));
    CHECK(std::fabs(peak_power_time(gaussian(0.01)) - 0.506) < 1e-3);
    CHECK(peak_power_time(gaussian(30.0)) == doctest::Approx(peak_power_time_lambert(1.0, 30.0)).epsilon(0.03));
    for (double zeta : {0.01, 0.3, 1.0, 4.0, 12.0, 40.0}) {
      CAPTURE(zeta);
      const double tau = 0.8;
      const auto p = gaussian(zeta, tau);
      const double tp = peak_power_time(p);
      CHECK(tp == doctest::Approx(argmax_oracle(zeta, tau, 5.0 * tau)).epsilon(1e-6));
      CHECK(instantaneous_power(p, tp) >= instantaneous_power(p, tp + 1e-3 * tau));
      CHECK(instantaneous_power(p, tp) >= instantaneous_power(p, tp - 1e-3 * tau));
    }
    double prev = 0.0;
    for (double zeta = 0.01; zeta < 200.0; zeta *= 1.3) {
      const double tp = peak_power_time(gaussian(zeta));
      CHECK(tp >= prev);
      prev = tp;
    }
    for (double zeta = 5.0; zeta < 1000.0; zeta *= 1.5) {
      CHECK(peak_power_time_debruijn(1.0, zeta) == doctest::Approx(peak_power_time_lambert(1.0, zeta)).epsilon(0.05));
    }
    CHECK_THROWS_AS(peak_power_time(gaussian(0.0)), std::domain_error);
  }

  TEST_CASE("peak power estimate") {
    auto exact = [](double zeta) {
      const auto p = gaussian(zeta);
      return instantaneous_power(p, peak_power_time(p));
    };
    const double r5 = peak_power_estimate(gaussian(5.0)) / exact(5.0);
    CHECK(r5 < 1.5);
    CHECK(r5 > 1.0 / 1.5);
    CHECK(std::fabs(peak_power_estimate(gaussian(10.0)) / exact(10.0) - 1.0) < 0.3);
    double prev = 0.0;
    for (double zeta = 1.0; zeta <= 20.0; zeta += 0.25) {
      const double e = peak_power_estimate(gaussian(zeta));
      CHECK(e > prev);
      prev = e;
    }
  }

  TEST_CASE("average power over the half-maximum window") {
    CHECK(fwhm_half_width(1.0) == doctest::Approx(1.18).epsilon(3e-3));
    for (double zeta : {0.2, 1.0, 3.0, 7.0}) {
      const auto p = gaussian(zeta, 1.6, 2.0);
      const double tp = fwhm_half_width(1.6);
      const double direct = (stored_energy(p, tp) - stored_energy(p, -tp)) / (2 * tp);
      CHECK(average_power_fwhm(p) == doctest::Approx(direct).epsilon(1e-10));
    }
    const auto big = gaussian(20.0);
    CHECK(average_power_fwhm(big) == doctest::Approx(average_power_fwhm_large_zeta(big)).epsilon(0.05));
    const double formula = std::exp(20.0 * (1 + std::erf(std::sqrt(std::log(2.0))))) / (8 * std::sqrt(2 * std::log(2.0)));
    CHECK(average_power_fwhm_large_zeta(big) == doctest::Approx(formula).epsilon(1e-14));
  }

  TEST_CASE("quadrature variances") {
    const auto vac = quadrature_variances(gaussian(0.0), 0.7, 1.1);
    CHECK(vac.var_x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(vac.var_p == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(vac.std_product == doctest::Approx(0.5).epsilon(1e-15));

    const auto dip = quadrature_variances(gaussian(2.0), 0.0, std::numbers::pi / 2);
    CHECK(dip.var_x == doctest::Approx(std::exp(-2.0) / 2).epsilon(1e-13));
    CHECK(dip.var_x == doctest::Approx(0.0677).epsilon(1e-3));
    CHECK(dip.var_p == doctest::Approx(std::exp(2.0) / 2).epsilon(1e-13));

    // direct transcription of the textbook form
    for (double t : {-1.0, 0.0, 0.4, 2.0}) {
      for (double th = 0.0; th < 6.3; th += 0.3) {
        const auto p = gaussian(1.2);
        const double r = 1.2 * (1 + std::erf(t / std::numbers::sqrt2));
        const double sp = std::sin(2 * t + th);
        const auto q = quadrature_variances(p, t, th);
        CHECK(q.var_x == doctest::Approx(0.5 + std::pow(std::sinh(r / 2), 2) - 0.5 * sp * std::sinh(r)).epsilon(1e-12));
        CHECK(q.var_p == doctest::Approx(0.5 + std::pow(std::sinh(r / 2), 2) + 0.5 * sp * std::sinh(r)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("uncertainty bound on random samples") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> z(0.0, 3.0), t(-4.0, 4.0), th(0.0, 2 * std::numbers::pi);
    for (int i = 0; i < 10000; ++i) {
      const auto q = quadrature_variances(gaussian(z(rng)), t(rng), th(rng));
      CHECK(q.std_product >= 0.5 * (1 - 1e-14));
    }
    const auto p = gaussian(1.5);
    const double t0 = 0.3;
    const double at_min = std::numbers::pi / 2 - 2 * t0;
    CHECK(quadrature_variances(p, t0, at_min).std_product == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(quadrature_variances(p, t0, at_min + 0.4).std_product > 0.5 + 1e-3);
  }

  TEST_CASE("theta scan minimum equals the squeezed variance") {
    const int steps = 10000;
    for (double t : {0.0, std::numbers::pi / 2, std::numbers::pi}) {
      for (double zeta : {0.5, 2.0}) {
        const auto p = gaussian(zeta);
        double best = INFINITY;
        for (int k = 0; k < steps; ++k) best = std::min(best, quadrature_variances(p, t, 2 * std::numbers::pi * k / steps).var_x);
        CHECK(std::fabs(best - min_quadrature_variance(p, t)) < 1e-12);
      }
    }
  }

  TEST_CASE("quadratures from moments agree with the closed form") {
    for (double zeta : {0.3, 1.0, 2.0}) {
      const auto p = gaussian(zeta, 1.0, 1.7);
      for (double t = -3.0; t <= 3.0; t += 0.5) {
        for (double th = 0.0; th < 6.3; th += 0.7) {
          const auto a = quadrature_variances(p, t, th);
          const auto b = quadrature_from_moments(analytic_moments(p, t), 1.7, t, th);
          CHECK(std::fabs(a.var_x - b.var_x) < 1e-10);
          CHECK(std::fabs(a.var_p - b.var_p) < 1e-10);
        }
      }
    }
  }
}
