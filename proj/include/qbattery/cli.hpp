#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbattery/dynamics.hpp"

namespace qbattery::cli {

enum class Format { csv, json };

/// Column-oriented numeric output of every command.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(std::string_view name) const;  // throws std::out_of_range
  std::vector<double> values(std::string_view name) const;
};

/// CSV: header row, comma separated, 17 significant digits, "nan" for
/// missing values. JSON: {"command", "columns", "rows"} with null for NaN.
void write_table(std::ostream& out, const Table& table, Format format, std::string_view command);
Table read_csv(std::istream& in);

/// Parameters shared by all commands, after config-file and flag merging.
struct RunConfig {
  std::vector<double> zeta{1.0};
  double tau = 1.0;
  double omega_b = 1.0;
  std::optional<double> omega_d;  // defaults to omega_b
  std::string pulse = "gaussian";
  double kappa = 0.0;
  std::vector<double> alpha{0.1, 0.5, 0.9};
  std::size_t theta_steps = 721;
  double t_min = -4.0;
  double t_max = 4.0;
  std::size_t steps = 401;
  double time = 0.0;  // instant for `quadratures`
  std::optional<std::size_t> fock_dim;
  std::optional<double> tail_tol;
  std::string engine = "rwa";
  Format format = Format::csv;
  std::string out;  // empty: standard output
  unsigned threads = 1;
  bool zeta_given = false;  // figure commands fall back to their own zeta lists

  /// Throws std::invalid_argument describing the first invalid field.
  void validate() const;
  /// Single-zeta drive parameters; throws if several zeta values were given.
  DriveParams drive() const;
  DriveParams drive(double zeta) const;
  /// Linearly spaced grid t_min..t_max with `steps` points.
  std::vector<double> time_grid() const;
};

Table cmd_energy(const RunConfig& cfg);
Table cmd_power(const RunConfig& cfg);
Table cmd_charge_time(const RunConfig& cfg);
Table cmd_peak_power(const RunConfig& cfg);
Table cmd_quadratures(const RunConfig& cfg);
Table cmd_moments(const RunConfig& cfg);
Table cmd_fock_check(const RunConfig& cfg);
Table cmd_sweep(const RunConfig& cfg);

/// Figure panels "2a", "2b", "2c", "3a", "3b", "3c".
Table cmd_figure(std::string_view panel, const RunConfig& cfg);
std::vector<std::string> figure_panels();

/// Default zeta values per panel family.
std::vector<double> default_figure_zetas();

/// Entry point behind the `qbattery` binary. Returns 0 on success, 2 on a
/// usage error and 1 on a numerical failure. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qbattery::cli
