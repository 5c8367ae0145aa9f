#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qbattery/cli.hpp"
#include "qbattery/errors.hpp"

namespace qbattery::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-photon charging of a bosonic quantum battery: energies, powers, charging times, "
               "squeezing and Fock-space verification, emitted as CSV or JSON."};
  app.name("qbattery");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Flat key=value file of defaults; flags override it");

  RunConfig cfg;
  std::string format = "csv";
  app.add_option("--zeta", cfg.zeta, "Drive strength(s); comma separated for sweeps and figures")->delimiter(',');
  app.add_option("--tau", cfg.tau, "Pulse width parameter");
  app.add_option("--omega-b", cfg.omega_b, "Battery level spacing");
  app.add_option("--omega-d", cfg.omega_d, "Half carrier frequency (defaults to omega_b)");
  app.add_option("--pulse", cfg.pulse, "gaussian | delta | sech | lorentzian | poschl-teller | algebraic");
  app.add_option("--kappa", cfg.kappa, "Single-photon loss rate");
  app.add_option("--alpha", cfg.alpha, "Charging fraction(s) in (0, 1)")->delimiter(',');
  app.add_option("--theta-steps", cfg.theta_steps, "Quadrature angles sampled on [0, 2 pi]");
  app.add_option("--t-min", cfg.t_min, "First time of the output grid");
  app.add_option("--t-max", cfg.t_max, "Last time of the output grid");
  app.add_option("--steps", cfg.steps, "Number of grid points");
  app.add_option("--time", cfg.time, "Instant for the quadratures command");
  auto* dim_opt = app.add_option("--fock-dim", cfg.fock_dim, "Fock ladder size");
  auto* tail_opt = app.add_option("--tail-tol", cfg.tail_tol, "Tail-mass tolerance used to size the Fock ladder");
  dim_opt->excludes(tail_opt);
  app.add_option("--engine", cfg.engine, "Fock engine: rwa | full | lindblad");
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.out, "Output path (standard output when omitted)");
  app.add_option("--threads", cfg.threads, "Worker threads for sweeps");

  std::string panel;
  std::map<std::string, std::function<Table()>> commands;
  auto add = [&](const std::string& name, const std::string& help, std::function<Table()> fn) {
    app.add_subcommand(name, help);
    commands[name] = std::move(fn);
  };
  add("energy", "Stored energy E_b / E_max on the time grid", [&] { return cmd_energy(cfg); });
  add("power", "Instantaneous power on the time grid (gaussian pulse)", [&] { return cmd_power(cfg); });
  add("charge-time", "Charging time t_alpha for each --alpha, with both limiting forms",
      [&] { return cmd_charge_time(cfg); });
  add("peak-power", "Peak-power time, peak power, estimates and FWHM average power",
      [&] { return cmd_peak_power(cfg); });
  add("quadratures", "Quadrature variances against the twist angle at --time", [&] { return cmd_quadratures(cfg); });
  add("moments", "Moment-equation trajectory (any finite-width pulse, optional --kappa)",
      [&] { return cmd_moments(cfg); });
  add("fock-check", "Truncated Fock-space evolution with tail and ergotropy diagnostics",
      [&] { return cmd_fock_check(cfg); });
  add("sweep", "Figures of merit for every --zeta value (parallel over --threads)", [&] { return cmd_sweep(cfg); });
  auto* fig = app.add_subcommand("fig", "Figure data: 2a 2b 2c 3a 3b 3c");
  fig->add_option("panel", panel, "Figure panel")->required()->check(CLI::IsMember(figure_panels()));
  commands["fig"] = [&] { return cmd_figure(panel, cfg); };
  for (const auto& name : figure_panels()) {
    add("fig" + name, "Same as `fig " + name + "`", [&cfg, name] { return cmd_figure(name, cfg); });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "qbattery: " << e.what() << "\n" << "Run with --help for usage.\n";
    return 2;
  }

  cfg.zeta_given = app.count("--zeta") > 0;
  cfg.format = format == "json" ? Format::json : Format::csv;
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    err << "qbattery: " << e.what() << '\n';
    return 2;
  }

  Table table;
  try {
    table = commands.at(command)();
  } catch (const std::logic_error& e) {
    // invalid_argument, domain_error, UnsupportedPulse: the request itself is at fault
    err << "qbattery " << command << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "qbattery " << command << ": numerical failure: " << e.what() << '\n';
    return 1;
  }

  const std::string label = command == "fig" ? "fig" + panel : command;
  if (cfg.out.empty()) {
    write_table(out, table, cfg.format, label);
    return 0;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) {
    err << "qbattery: cannot open '" << cfg.out << "' for writing\n";
    return 1;
  }
  write_table(file, table, cfg.format, label);
  if (!file) {
    err << "qbattery: write to '" << cfg.out << "' failed\n";
    return 1;
  }
  return 0;
}

}  // namespace qbattery::cli
