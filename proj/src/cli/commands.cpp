#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include "qbattery/cli.hpp"
#include "qbattery/errors.hpp"
#include "qbattery/fock.hpp"
#include "qbattery/merit.hpp"
#include "internal.hpp"

namespace qbattery::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Finite-width pulses are started from vacuum no later than this many widths
// before the peak; f(-8 tau) / f(0) < 1e-13 for the Gaussian.
constexpr double kVacuumStartWidths = 8.0;

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class F>
double or_nan(F&& f) {
  try {
    return f();
  } catch (const std::domain_error&) {
    return kNaN;
  }
}

// Integration grid that starts from vacuum: the requested grid, preceded by
// t = -8 tau when it begins later than that. Returns the number of leading
// points to drop from the result.
std::size_t vacuum_padded(const DriveParams& p, std::vector<double>& grid) {
  const double start = -kVacuumStartWidths * p.tau();
  if (grid.front() > start) {
    grid.insert(grid.begin(), start);
    return 1;
  }
  return 0;
}

}  // namespace

std::string column_label(std::string_view prefix, double v) { return std::string(prefix) + shortest(v); }

Table cmd_energy(const RunConfig& cfg) {
  const DriveParams p = cfg.drive();
  const double e_max = max_energy(p);
  Table t{{"t", "E_over_Emax"}, {}};
  for (double time : cfg.time_grid())
    t.rows.push_back({time, e_max > 0.0 ? stored_energy(p, time) / e_max : 0.0});
  return t;
}

Table cmd_power(const RunConfig& cfg) {
  const DriveParams p = cfg.drive();
  Table t{{"t", "P"}, {}};
  for (double time : cfg.time_grid()) t.rows.push_back({time, instantaneous_power(p, time)});
  return t;
}

Table cmd_charge_time(const RunConfig& cfg) {
  const DriveParams p = cfg.drive();
  Table t{{"alpha", "t_alpha", "t_alpha_small_zeta", "t_alpha_large_zeta"}, {}};
  for (double a : cfg.alpha) {
    t.rows.push_back({a, charging_time(p, a).t_alpha, charging_time_small_zeta(p.tau(), a),
                      or_nan([&] { return charging_time_large_zeta(p.tau(), p.zeta(), a); })});
  }
  return t;
}

std::vector<double> peak_power_row(const DriveParams& p) {
  const double tau = p.tau();
  const double z = p.zeta();
  const double tp = z > 0.0 ? peak_power_time(p) : kNaN;
  return {z,
          tp,
          tp / tau,
          z > 0.0 ? instantaneous_power(p, tp) : 0.0,
          peak_power_estimate(p),
          peak_power_time_small_zeta(tau),
          peak_power_time_lambert(tau, z),
          or_nan([&] { return peak_power_time_debruijn(tau, z); }),
          average_power_fwhm(p)};
}

Table cmd_peak_power(const RunConfig& cfg) {
  Table t{{"zeta", "t_P", "t_P_over_tau", "P_max", "P_estimate", "t_P_small_zeta", "t_P_lambert", "t_P_debruijn",
           "P_avg_fwhm"},
          {}};
  t.rows.push_back(peak_power_row(cfg.drive()));
  return t;
}

Table cmd_quadratures(const RunConfig& cfg) {
  const DriveParams p = cfg.drive();
  Table t{{"theta", "var_x", "var_p", "std_product"}, {}};
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < cfg.theta_steps; ++i) {
    const double theta = two_pi * double(i) / double(cfg.theta_steps - 1);
    const auto q = quadrature_variances(p, cfg.time, theta);
    t.rows.push_back({theta, q.var_x, q.var_p, q.std_product});
  }
  return t;
}

Table cmd_moments(const RunConfig& cfg) {
  const DriveParams p = cfg.drive();
  auto grid = cfg.time_grid();
  std::size_t skip = 1;
  if (cfg.kappa == 0.0) {
    // Lossless runs start at the true vacuum boundary so heavy-tailed pulses keep their early area.
    grid.insert(grid.begin(), -std::numeric_limits<double>::infinity());
  } else {
    skip = vacuum_padded(p, grid);
  }
  const auto traj = integrate_moments_on_grid(p, grid, kMomentAccuracy, cfg.kappa);
  Table t{{"t", "n", "re_s", "im_s", "invariant_residual"}, {}};
  for (std::size_t i = skip; i < traj.size(); ++i) {
    const auto& s = traj.states[i];
    t.rows.push_back({traj.times[i], s.n, s.s.real(), s.s.imag(), s.invariant_residual()});
  }
  return t;
}

Table cmd_fock_check(const RunConfig& cfg) {
  const DriveParams p = cfg.drive();
  const std::string engine = cfg.kappa > 0.0 ? "lindblad" : cfg.engine;
  const double tail_tol = cfg.tail_tol.value_or(1e-8);

  fock::FockOptions opts;
  opts.tail_tol = tail_tol;
  if (cfg.fock_dim) {
    opts.dim = *cfg.fock_dim;
  } else if (engine == "lindblad") {
    // Density matrices cost N^2: size the ladder for the squeezing actually reached.
    opts.dim = fock::truncation_for_squeezing(p.zeta(), tail_tol);
  } else {
    opts.dim = fock::choose_truncation(p.zeta(), tail_tol);
  }

  auto grid = cfg.time_grid();
  const std::size_t skip = vacuum_padded(p, grid);

  std::vector<fock::FockSample> samples;
  double ratio = kNaN;
  if (engine == "lindblad") {
    auto run = fock::evolve_lindblad(p, cfg.kappa, grid, opts);
    samples = std::move(run.samples);
    if (samples.back().n > 0.0) ratio = fock::ergotropy(run.final_state, p.omega_b()) / (p.omega_b() * samples.back().n);
  } else {
    auto run = engine == "full" ? fock::evolve_full(p, grid, opts) : fock::evolve_rwa(p, grid, opts);
    samples = std::move(run.samples);
    // Dense eigendecomposition beyond ~10^3 levels costs more than the evolution itself.
    if (opts.dim <= 1024 && samples.back().n > 0.0)
      ratio = fock::ergotropy(fock::FockDensity::pure(run.final_state), p.omega_b()) /
              (p.omega_b() * samples.back().n);
  }

  Table t{{"t", "n", "re_s", "im_s", "var_x_min", "tail_mass", "ergotropy_ratio"}, {}};
  for (std::size_t i = skip; i < samples.size(); ++i) {
    const auto& s = samples[i];
    t.rows.push_back({s.t, s.n, s.s.real(), s.s.imag(), s.var_x_min, s.tail_mass,
                      i + 1 == samples.size() ? ratio : kNaN});
  }
  return t;
}

Table cmd_sweep(const RunConfig& cfg) {
  Table t{{"zeta", "E_max", "t_P", "P_max", "P_estimate", "P_avg_fwhm"}, {}};
  for (double a : cfg.alpha) t.columns.push_back(column_label("t_alpha_", a));

  t.rows = parallel_map(cfg.zeta.size(), cfg.threads, [&](std::size_t i) {
    const DriveParams p = cfg.drive(cfg.zeta[i]);
    const double z = p.zeta();
    const double tp = z > 0.0 ? peak_power_time(p) : kNaN;
    std::vector<double> row{z,
                            max_energy(p),
                            tp,
                            z > 0.0 ? instantaneous_power(p, tp) : 0.0,
                            peak_power_estimate(p),
                            average_power_fwhm(p)};
    for (double a : cfg.alpha) row.push_back(z > 0.0 ? charging_time(p, a).t_alpha : kNaN);
    return row;
  });
  return t;
}

}  // namespace qbattery::cli
