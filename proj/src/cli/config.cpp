#include <cmath>
#include <stdexcept>

#include "qbattery/cli.hpp"

namespace qbattery::cli {

void RunConfig::validate() const {
  if (zeta.empty()) throw std::invalid_argument("--zeta: at least one value required");
  for (double z : zeta)
    if (!(z >= 0.0) || !std::isfinite(z)) throw std::invalid_argument("--zeta: values must be non-negative");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("--tau must be positive");
  if (!(omega_b > 0.0) || !std::isfinite(omega_b)) throw std::invalid_argument("--omega-b must be positive");
  if (omega_d && (!(*omega_d > 0.0) || !std::isfinite(*omega_d)))
    throw std::invalid_argument("--omega-d must be positive");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("--kappa must be non-negative");
  for (double a : alpha)
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("--alpha: values must lie in (0, 1)");
  if (theta_steps < 2) throw std::invalid_argument("--theta-steps must be at least 2");
  if (steps < 2) throw std::invalid_argument("--steps must be at least 2");
  if (!(t_max > t_min) || !std::isfinite(t_min) || !std::isfinite(t_max))
    throw std::invalid_argument("time grid must satisfy --t-min < --t-max");
  if (!std::isfinite(time)) throw std::invalid_argument("--time must be finite");
  if (fock_dim && tail_tol) throw std::invalid_argument("--fock-dim and --tail-tol are mutually exclusive");
  if (tail_tol && !(*tail_tol > 0.0 && *tail_tol < 1.0)) throw std::invalid_argument("--tail-tol must lie in (0, 1)");
  if (engine != "rwa" && engine != "full" && engine != "lindblad")
    throw std::invalid_argument("--engine must be rwa, full or lindblad");
  if (threads == 0) throw std::invalid_argument("--threads must be at least 1");
  (void)make_pulse(pulse, tau);
}

DriveParams RunConfig::drive() const {
  if (zeta.size() != 1) throw std::invalid_argument("this command takes a single --zeta value");
  return drive(zeta.front());
}

DriveParams RunConfig::drive(double z) const {
  return DriveParams(omega_b, omega_d.value_or(omega_b), z, make_pulse(pulse, tau));
}

std::vector<double> RunConfig::time_grid() const {
  std::vector<double> t(steps);
  const double h = (t_max - t_min) / double(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) t[i] = t_min + h * double(i);
  t.back() = t_max;
  return t;
}

}  // namespace qbattery::cli
