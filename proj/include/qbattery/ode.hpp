#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>

#include "qbattery/specfun.hpp"

namespace qbattery::ode {

/// dy/dt = rhs(t, y), written into the output span.
using System = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
using Observer = std::function<void(double t, std::span<const double> y)>;

struct Settings {
  Accuracy acc{1e-10, 1e-10};
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 picks a step from the local derivatives
  std::size_t max_steps = 50'000'000;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

/// Dormand-Prince 5(4) with PI step-size control.
///
/// Integrates `y` in place from t0 through each time in `stops` (strictly
/// increasing, all > t0). Steps are shortened to land exactly on every stop,
/// where `on_stop` is invoked. `on_step` (optional) sees every accepted step.
/// Throws StiffnessError when the step size underflows and NumericalError when
/// max_steps is exhausted or the state becomes non-finite.
Stats integrate(const System& rhs, double t0, std::span<double> y, std::span<const double> stops,
                const Settings& settings, const Observer& on_stop, const Observer& on_step = {});

}  // namespace qbattery::ode
