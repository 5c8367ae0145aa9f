#include "qbattery/dynamics.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "qbattery/errors.hpp"
#include "qbattery/ode.hpp"

namespace qbattery {

DriveParams::DriveParams(double omega_b, double omega_d, double zeta, PulseShape pulse)
    : omega_b_(omega_b), omega_d_(omega_d), zeta_(zeta), pulse_(std::move(pulse)) {
  if (!(omega_b > 0.0) || !std::isfinite(omega_b)) throw std::domain_error("omega_b must be positive and finite");
  if (!(omega_d > 0.0) || !std::isfinite(omega_d)) throw std::domain_error("omega_d must be positive and finite");
  if (!(zeta >= 0.0) || !std::isfinite(zeta)) throw std::domain_error("zeta must be non-negative and finite");
}

bool DriveParams::is_resonant() const { return std::abs(omega_d_ - omega_b_) <= 1e-12 * omega_b_; }

double MomentTrajectory::max_invariant_drift() const {
  double worst = 0.0;
  for (const auto& s : states) worst = std::max(worst, std::abs(s.invariant_residual()));
  return worst;
}

void MomentTrajectory::write_csv(std::ostream& out) const {
  const auto old_precision = out.precision(17);
  out << "t,n,re_s,im_s,invariant_residual\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto& st = states[i];
    out << times[i] << ',' << st.n << ',' << st.s.real() << ',' << st.s.imag() << ','
        << st.invariant_residual() << '\n';
  }
  out.precision(old_precision);
}

namespace {

void require_rotating_frame_form(const DriveParams& p, const char* fn) {
  if (is_delta(p.pulse()))
    throw UnsupportedPulse(std::string(fn) + ": the delta-limit pulse has no finite-time envelope; use analytic_moments");
  if (!p.is_resonant())
    throw std::invalid_argument(std::string(fn) +
                                ": the rotating-frame moment equations hold only at resonance (omega_d == omega_b); "
                                "use the Fock-space full-Hamiltonian engine instead");
}

MomentDerivative derivative(const MomentState& st, double drive, double kappa) {
  // drive = zeta f(t), already multiplied by any change-of-variable Jacobian.
  return {-2.0 * drive * st.s.imag() - kappa * st.n, cplx(0.0, -drive * (2.0 * st.n + 1.0)) - kappa * st.s};
}

MomentTrajectory run(const DriveParams& p, std::span<const double> times, const Accuracy& acc, double kappa,
                     MomentState initial, bool record_steps) {
  require_rotating_frame_form(p, "integrate_moments");
  acc.validate();
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::domain_error("kappa must be non-negative and finite");
  if (times.size() < 2) throw std::invalid_argument("integrate_moments: need at least two time points");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("integrate_moments: times must be strictly increasing");
  for (std::size_t i = 1; i + 1 < times.size(); ++i)
    if (!std::isfinite(times[i])) throw std::invalid_argument("integrate_moments: interior times must be finite");

  const bool compact = !std::isfinite(times.front()) || !std::isfinite(times.back());
  if (compact && kappa > 0.0)
    throw std::invalid_argument("integrate_moments: infinite time windows are only supported without loss");

  const double tau = p.tau();
  const double zeta = p.zeta();
  const PulseShape& pulse = p.pulse();

  // Independent variable: t itself, or phi with t = tau tan(phi).
  auto to_var = [&](double t) { return compact ? std::atan(t / tau) : t; };
  auto to_time = [&](double v) { return compact ? tau * std::tan(v) : v; };

  std::vector<double> stops;
  stops.reserve(times.size() - 1);
  for (std::size_t i = 1; i < times.size(); ++i) stops.push_back(to_var(times[i]));

  ode::System rhs = [&](double v, std::span<const double> y, std::span<double> dy) {
    double drive;
    if (compact) {
      const double c = std::cos(v);
      const double f = envelope_value(pulse, tau * std::tan(v));
      drive = f == 0.0 ? 0.0 : zeta * f * tau / (c * c);
    } else {
      drive = zeta * envelope_value(pulse, v);
    }
    const auto d = derivative({y[0], cplx(y[1], y[2])}, drive, compact ? 0.0 : kappa);
    dy[0] = d.dn;
    dy[1] = d.ds.real();
    dy[2] = d.ds.imag();
  };

  MomentTrajectory traj;
  traj.times.push_back(times.front());
  traj.states.push_back(initial);

  std::size_t next_stop = 1;
  auto record = [&](double v, std::span<const double> y) {
    double t = to_time(v);
    if (next_stop < times.size() && v == stops[next_stop - 1]) t = times[next_stop];
    if (!(t > traj.times.back())) return;
    traj.times.push_back(t);
    traj.states.push_back({y[0], cplx(y[1], y[2])});
  };

  std::vector<double> y{initial.n, initial.s.real(), initial.s.imag()};
  ode::Settings settings;
  settings.acc = acc;
  // on_step fires before on_stop, so a step landing on a stop is recorded
  // once, with the exact stop time.
  ode::Observer on_step;
  if (record_steps) on_step = [&](double v, std::span<const double> yy) { record(v, yy); };
  ode::Observer on_stop = [&](double v, std::span<const double> yy) {
    if (!record_steps) record(v, yy);
    ++next_stop;
  };
  ode::integrate(rhs, to_var(times.front()), y, stops, settings, on_stop, on_step);
  return traj;
}

}  // namespace

MomentDerivative moment_rhs(const MomentState& state, double t, const DriveParams& p) {
  require_rotating_frame_form(p, "moment_rhs");
  return derivative(state, p.zeta() * envelope_value(p.pulse(), t), 0.0);
}

MomentDerivative dissipative_moment_rhs(const MomentState& state, double t, const DriveParams& p, double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::domain_error("kappa must be non-negative and finite");
  require_rotating_frame_form(p, "dissipative_moment_rhs");
  return derivative(state, p.zeta() * envelope_value(p.pulse(), t), kappa);
}

MomentTrajectory integrate_moments(const DriveParams& p, double t_start, double t_end, const Accuracy& acc) {
  if (!(t_start < t_end)) throw std::invalid_argument("integrate_moments: t_start must be < t_end");
  const double window[] = {t_start, t_end};
  return run(p, window, acc, 0.0, {}, true);
}

MomentTrajectory integrate_moments_on_grid(const DriveParams& p, std::span<const double> times, const Accuracy& acc,
                                           double kappa, MomentState initial) {
  return run(p, times, acc, kappa, initial, false);
}

MomentState analytic_moments(const DriveParams& p, double t) {
  if (!p.is_resonant())
    throw std::invalid_argument("analytic_moments: the closed form holds only at resonance (omega_d == omega_b)");
  const bool closed_form = std::holds_alternative<Gaussian>(p.pulse()) || is_delta(p.pulse());
  if (!closed_form)
    throw UnsupportedPulse("analytic_moments: closed form available for gaussian and delta pulses only; "
                           "use integrate_moments or area_law_energy for '" + pulse_name(p.pulse()) + "'");
  const double r = 2.0 * p.zeta() * cumulative_area(p.pulse(), t);  // zeta * xi
  const double half = std::sinh(0.5 * r);
  return {half * half, cplx(0.0, -0.5 * std::sinh(r))};
}

double area_law_energy(const DriveParams& p, double t) {
  const double v = std::sinh(p.zeta() * cumulative_area(p.pulse(), t));
  return v * v;
}

}  // namespace qbattery
