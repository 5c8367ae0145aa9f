#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "internal.hpp"
#include "qbattery/cli.hpp"
#include "qbattery/merit.hpp"

namespace qbattery::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> panel_zetas(const RunConfig& cfg) { return cfg.zeta_given ? cfg.zeta : default_figure_zetas(); }

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::pow(10.0, a + (b - a) * double(i) / double(n - 1));
  return g;
}

// Stored energy in units of omega_b sinh^2(zeta) against t / tau, with the
// delta-limit step as the last column.
Table figure_2a(const RunConfig& cfg) {
  const auto zetas = panel_zetas(cfg);
  Table t{{"t_over_tau"}, {}};
  for (double z : zetas) t.columns.push_back(column_label("zeta_", z));
  t.columns.push_back("delta");
  for (double x : cfg.time_grid()) {
    std::vector<double> row{x};
    for (double z : zetas) {
      const DriveParams p = DriveParams::resonant(cfg.omega_b, z, Gaussian{cfg.tau});
      row.push_back(stored_energy(p, x * cfg.tau) / max_energy(p));
    }
    // omega_b sinh^2(zeta) Theta(t) in units of omega_b sinh^2(zeta)
    row.push_back(cumulative_area(DeltaLimit{}, x));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Charging time t_alpha / tau against alpha, plus both limiting forms; the
// large-zeta form is drawn for the largest zeta of the panel.
Table figure_2b(const RunConfig& cfg) {
  const auto zetas = panel_zetas(cfg);
  double z_large = 0.0;
  for (double z : zetas) z_large = std::max(z_large, z);
  Table t{{"alpha"}, {}};
  for (double z : zetas) t.columns.push_back(column_label("zeta_", z));
  t.columns.push_back("small_zeta_limit");
  t.columns.push_back(column_label("large_zeta_limit_", z_large));
  for (std::size_t i = 0; i < cfg.steps; ++i) {
    const double a = double(i + 1) / double(cfg.steps + 1);
    std::vector<double> row{a};
    for (double z : zetas) {
      const DriveParams p = DriveParams::resonant(cfg.omega_b, z, Gaussian{cfg.tau});
      row.push_back(z > 0.0 ? charging_time(p, a).t_alpha / cfg.tau : kNaN);
    }
    row.push_back(charging_time_small_zeta(1.0, a));
    double large = kNaN;
    try {
      large = charging_time_large_zeta(1.0, z_large, a);
    } catch (const std::domain_error&) {
    }
    row.push_back(large);
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Quadrature variances against the twist angle at a fixed instant (zeta = 2, t = 0 by default).
Table figure_2c(const RunConfig& cfg) {
  const double z = cfg.zeta_given ? cfg.zeta.front() : 2.0;
  const DriveParams p = DriveParams::resonant(cfg.omega_b, z, Gaussian{cfg.tau});
  Table t{{"theta", "var_x", "var_p", "std_product"}, {}};
  for (std::size_t i = 0; i < cfg.theta_steps; ++i) {
    const double theta = 2.0 * std::numbers::pi * double(i) / double(cfg.theta_steps - 1);
    const auto q = quadrature_variances(p, cfg.time, theta);
    t.rows.push_back({theta, q.var_x, q.var_p, q.std_product});
  }
  return t;
}

// Instantaneous power in units of omega_b zeta sinh(2 zeta) / tau against t / tau.
Table figure_3a(const RunConfig& cfg) {
  auto zetas = panel_zetas(cfg);
  std::erase(zetas, 0.0);
  Table t{{"t_over_tau"}, {}};
  for (double z : zetas) t.columns.push_back(column_label("zeta_", z));
  for (double x : cfg.time_grid()) {
    std::vector<double> row{x};
    for (double z : zetas) {
      const DriveParams p = DriveParams::resonant(cfg.omega_b, z, Gaussian{cfg.tau});
      const double unit = cfg.omega_b * z * std::sinh(2.0 * z) / cfg.tau;
      row.push_back(instantaneous_power(p, x * cfg.tau) / unit);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Peak-power time t_P / tau against zeta with the small-zeta constant, the
// Lambert-W asymptote and its de Bruijn approximation.
Table figure_3b(const RunConfig& cfg) {
  const auto zetas = cfg.zeta_given ? cfg.zeta : log_grid(1e-2, 1e2, cfg.steps);
  Table t{{"zeta", "t_P_over_tau", "small_zeta_limit", "lambert_limit", "debruijn_limit"}, {}};
  t.rows = parallel_map(zetas.size(), cfg.threads, [&](std::size_t i) {
    const DriveParams p = DriveParams::resonant(cfg.omega_b, zetas[i], Gaussian{1.0});
    const auto r = peak_power_row(p);
    return std::vector<double>{zetas[i], r[2], r[5], r[6], r[7]};
  });
  return t;
}

// Maximum power in units of omega_b / tau against zeta with the closed-form estimate.
Table figure_3c(const RunConfig& cfg) {
  const auto zetas = cfg.zeta_given ? cfg.zeta : log_grid(1e-1, 2e1, cfg.steps);
  Table t{{"zeta", "P_max", "P_estimate"}, {}};
  t.rows = parallel_map(zetas.size(), cfg.threads, [&](std::size_t i) {
    const DriveParams p = DriveParams::resonant(1.0, zetas[i], Gaussian{1.0});
    const auto r = peak_power_row(p);
    return std::vector<double>{zetas[i], r[3], r[4]};
  });
  return t;
}

}  // namespace

std::vector<double> default_figure_zetas() { return {0.1, 0.5, 1.0, 2.0, 4.0}; }

std::vector<std::string> figure_panels() { return {"2a", "2b", "2c", "3a", "3b", "3c"}; }

Table cmd_figure(std::string_view panel, const RunConfig& cfg) {
  if (panel == "2a") return figure_2a(cfg);
  if (panel == "2b") return figure_2b(cfg);
  if (panel == "2c") return figure_2c(cfg);
  if (panel == "3a") return figure_3a(cfg);
  if (panel == "3b") return figure_3b(cfg);
  if (panel == "3c") return figure_3c(cfg);
  throw std::invalid_argument("unknown figure panel '" + std::string(panel) + "' (expected 2a, 2b, 2c, 3a, 3b, 3c)");
}

}  // namespace qbattery::cli
