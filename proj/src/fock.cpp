#include "qbattery/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qbattery/errors.hpp"
#include "qbattery/ode.hpp"

namespace qbattery::fock {
namespace {

constexpr double kTraceTol = 1e-10;
constexpr double kHermiticityTol = 1e-12;
constexpr double kPositivityTol = 1e-10;

void require_dim(std::size_t dim) {
  if (dim < kHeadroom + 2)
    throw std::invalid_argument("Fock ladder needs at least " + std::to_string(kHeadroom + 2) + " levels");
}

// sqrt((k+1)(k+2)): matrix element <k+2| b'b' |k> = <k| bb |k+2>.
std::vector<double> pair_couplings(std::size_t dim) {
  std::vector<double> c(dim);
  for (std::size_t k = 0; k < dim; ++k) c[k] = std::sqrt(double(k + 1) * double(k + 2));
  return c;
}

std::span<const cplx> as_complex(std::span<const double> y) {
  return {reinterpret_cast<const cplx*>(y.data()), y.size() / 2};
}
std::span<cplx> as_complex(std::span<double> y) { return {reinterpret_cast<cplx*>(y.data()), y.size() / 2}; }

void check_times(std::span<const double> times) {
  if (times.size() < 2) throw std::invalid_argument("Fock evolution needs at least two time points");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("Fock evolution times must be strictly increasing");
  for (double t : times)
    if (!std::isfinite(t)) throw std::invalid_argument("Fock evolution times must be finite");
}

FockSample sample_of(double t, std::span<const cplx> psi, std::span<const double> c) {
  FockSample s;
  s.t = t;
  s.norm = 0.0;
  const std::size_t dim = psi.size();
  for (std::size_t k = 0; k < dim; ++k) {
    const double pk = std::norm(psi[k]);
    s.norm += pk;
    s.n += double(k) * pk;
    if (k % 2 == 1) s.odd_mass += pk;
    if (k >= dim - kHeadroom) s.tail_mass += pk;
    if (k + 2 < dim) s.s += std::conj(psi[k]) * c[k] * psi[k + 2];
  }
  s.var_x_min = 0.5 + s.n - std::abs(s.s);
  return s;
}

[[noreturn]] void throw_truncation(double t, double tail, const FockOptions& opts) {
  std::ostringstream msg;
  msg << "truncation breach at t = " << t << ": tail mass " << tail << " on the top " << kHeadroom
      << " of " << opts.dim << " levels exceeds " << opts.tail_tol << "; increase the Fock dimension";
  throw TruncationError(msg.str());
}

// Pure-state evolution under H = up(t) b'b' + down(t) bb.
template <class Coefficients>
FockRun evolve_pure(std::span<const double> times, const FockOptions& opts, std::optional<FockVector> initial,
                    Coefficients coefficients, double max_step) {
  require_dim(opts.dim);
  check_times(times);
  opts.acc.validate();
  FockVector psi0 = initial ? std::move(*initial) : FockVector(opts.dim);
  if (psi0.dim() != opts.dim) throw std::invalid_argument("initial state dimension does not match FockOptions::dim");

  const std::size_t dim = opts.dim;
  const auto c = pair_couplings(dim);
  std::vector<double> y(2 * dim);
  std::copy(psi0.amplitudes().begin(), psi0.amplitudes().end(), as_complex(std::span<double>(y)).begin());

  ode::System rhs = [&](double t, std::span<const double> yv, std::span<double> dyv) {
    const auto psi = as_complex(yv);
    const auto dpsi = as_complex(dyv);
    const auto [up, down] = coefficients(t);
    // d psi_n = -i (up c_{n-2} psi_{n-2} + down c_n psi_{n+2})
    const cplx mi_up = cplx(0.0, -1.0) * up;
    const cplx mi_down = cplx(0.0, -1.0) * down;
    for (std::size_t n = 0; n < dim; ++n) {
      cplx acc = 0.0;
      if (n >= 2) acc += mi_up * c[n - 2] * psi[n - 2];
      if (n + 2 < dim) acc += mi_down * c[n] * psi[n + 2];
      dpsi[n] = acc;
    }
  };

  FockRun run{{}, FockVector(dim)};
  run.samples.push_back(sample_of(times.front(), psi0.amplitudes(), c));
  if (run.samples.back().tail_mass > opts.tail_tol) throw_truncation(times.front(), run.samples.back().tail_mass, opts);

  ode::Settings settings;
  settings.acc = opts.acc;
  settings.max_step = max_step;
  ode::Observer on_step = [&](double t, std::span<const double> yv) {
    const auto psi = as_complex(yv);
    double tail = 0.0;
    for (std::size_t k = dim - kHeadroom; k < dim; ++k) tail += std::norm(psi[k]);
    if (tail > opts.tail_tol) throw_truncation(t, tail, opts);
  };
  ode::Observer on_stop = [&](double t, std::span<const double> yv) {
    run.samples.push_back(sample_of(t, as_complex(yv), c));
  };
  ode::integrate(rhs, times.front(), y, times.subspan(1), settings, on_stop, on_step);

  const auto psi = as_complex(std::span<const double>(y));
  run.final_state = FockVector::from_amplitudes(std::vector<cplx>(psi.begin(), psi.end()));
  return run;
}

}  // namespace

// ---------------------------------------------------------------- FockVector

FockVector::FockVector(std::size_t dim) : amp_(dim, cplx{}) {
  require_dim(dim);
  amp_[0] = 1.0;
}

FockVector FockVector::basis_state(std::size_t dim, std::size_t level) {
  if (level >= dim) throw std::out_of_range("basis_state: level outside the ladder");
  FockVector v(dim);
  v.amp_[0] = 0.0;
  v.amp_[level] = 1.0;
  return v;
}

FockVector FockVector::from_amplitudes(std::vector<cplx> amplitudes) {
  require_dim(amplitudes.size());
  FockVector v(amplitudes.size());
  v.amp_ = std::move(amplitudes);
  if (std::abs(v.norm_squared() - 1.0) > 1e-10) throw std::domain_error("FockVector: amplitudes are not normalised");
  return v;
}

double FockVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return s;
}

double FockVector::tail_mass() const {
  double s = 0.0;
  for (std::size_t k = dim() - kHeadroom; k < dim(); ++k) s += std::norm(amp_[k]);
  return s;
}

double FockVector::odd_mass() const {
  double s = 0.0;
  for (std::size_t k = 1; k < dim(); k += 2) s += std::norm(amp_[k]);
  return s;
}

double FockVector::mean_population() const {
  double s = 0.0;
  for (std::size_t k = 0; k < dim(); ++k) s += double(k) * std::norm(amp_[k]);
  return s;
}

cplx FockVector::pair_coherence() const {
  cplx s = 0.0;
  for (std::size_t k = 0; k + 2 < dim(); ++k)
    s += std::conj(amp_[k]) * std::sqrt(double(k + 1) * double(k + 2)) * amp_[k + 2];
  return s;
}

// --------------------------------------------------------------- FockDensity

FockDensity::FockDensity(Eigen::MatrixXcd matrix) : rho_(std::move(matrix)) {
  if (rho_.rows() != rho_.cols()) throw std::domain_error("FockDensity: matrix must be square");
  require_dim(static_cast<std::size_t>(rho_.rows()));
  if (!rho_.allFinite()) throw std::domain_error("FockDensity: matrix has non-finite entries");
  if (std::abs(trace() - 1.0) > kTraceTol) throw std::domain_error("FockDensity: trace differs from 1");
  if (hermiticity_residual() > kHermiticityTol) throw std::domain_error("FockDensity: matrix is not Hermitian");
  const Eigen::MatrixXcd sym = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("FockDensity: eigenvalue solver failed");
  eigenvalues_ = solver.eigenvalues();
  if (eigenvalues_(0) < -kPositivityTol) {
    std::ostringstream msg;
    msg << "FockDensity: not positive semidefinite (min eigenvalue " << eigenvalues_(0) << ")";
    throw std::domain_error(msg.str());
  }
}

FockDensity FockDensity::pure(const FockVector& psi) {
  Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(), static_cast<Eigen::Index>(psi.dim()));
  return FockDensity(v * v.adjoint());
}

FockDensity FockDensity::basis_state(std::size_t dim, std::size_t level) {
  return pure(FockVector::basis_state(dim, level));
}

double FockDensity::trace() const { return rho_.trace().real(); }

double FockDensity::hermiticity_residual() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

double FockDensity::tail_mass() const {
  double s = 0.0;
  for (Eigen::Index k = rho_.rows() - Eigen::Index(kHeadroom); k < rho_.rows(); ++k) s += rho_(k, k).real();
  return s;
}

double FockDensity::mean_population() const {
  double s = 0.0;
  for (Eigen::Index k = 0; k < rho_.rows(); ++k) s += double(k) * rho_(k, k).real();
  return s;
}

cplx FockDensity::pair_coherence() const {
  cplx s = 0.0;
  for (Eigen::Index k = 0; k + 2 < rho_.rows(); ++k) s += std::sqrt(double(k + 1) * double(k + 2)) * rho_(k + 2, k);
  return s;
}

// ---------------------------------------------------------------- truncation

std::vector<double> squeezed_vacuum_distribution(double r, std::size_t levels) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::domain_error("squeeze parameter must be non-negative and finite");
  std::vector<double> p(levels, 0.0);
  if (levels == 0) return p;
  const double t2 = std::tanh(r) * std::tanh(r);
  double term = 1.0 / std::cosh(r);
  for (std::size_t m = 0; 2 * m < levels; ++m) {
    p[2 * m] = term;
    term *= (2.0 * double(m) + 1.0) / (2.0 * double(m) + 2.0) * t2;
  }
  return p;
}

std::size_t truncation_for_squeezing(double r, double tail_tol) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::domain_error("squeeze parameter must be non-negative and finite");
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw std::domain_error("tail_tol must lie in (0, 1)");

  // Generate P(2m) until the geometric bound on everything further out is
  // negligible next to tail_tol; the ratio P(2m+2)/P(2m) stays below tanh^2 r.
  const double t2 = std::tanh(r) * std::tanh(r);
  std::vector<double> even;
  double term = 1.0 / std::cosh(r);
  for (std::size_t m = 0;; ++m) {
    even.push_back(term);
    const double next = term * (2.0 * double(m) + 1.0) / (2.0 * double(m) + 2.0) * t2;
    if (next == 0.0 || next / (1.0 - t2) < 1e-6 * tail_tol) break;
    term = next;
  }
  // tail[m] = sum_{j >= m} P(2j)
  std::vector<double> tail(even.size() + 1, 0.0);
  for (std::size_t m = even.size(); m-- > 0;) tail[m] = tail[m + 1] + even[m];

  for (std::size_t dim = kHeadroom + 2;; dim += 2) {
    const std::size_t first = dim - kHeadroom;  // even, so level `first` is 2 * (first / 2)
    const std::size_t m = first / 2;
    const double mass = m < tail.size() ? tail[m] : 0.0;
    if (mass < tail_tol) return dim;
  }
}

std::size_t choose_truncation(double zeta, double tail_tol) {
  if (!(zeta >= 0.0)) throw std::domain_error("choose_truncation: zeta must be non-negative");
  return truncation_for_squeezing(2.0 * zeta, tail_tol);
}

// ----------------------------------------------------------------- evolution

FockRun evolve_rwa(const DriveParams& p, std::span<const double> times, const FockOptions& opts,
                   std::optional<FockVector> initial) {
  if (!p.is_resonant()) throw std::invalid_argument("evolve_rwa: requires resonance (omega_d == omega_b)");
  if (is_delta(p.pulse())) throw UnsupportedPulse("evolve_rwa: the delta-limit pulse cannot be time stepped");
  const double zeta = p.zeta();
  const PulseShape& pulse = p.pulse();
  auto coefficients = [&](double t) {
    const double g = 0.5 * zeta * envelope_value(pulse, t);
    return std::pair<cplx, cplx>{g, g};
  };
  return evolve_pure(times, opts, std::move(initial), coefficients, std::numeric_limits<double>::infinity());
}

FockRun evolve_full(const DriveParams& p, std::span<const double> times, const FockOptions& opts,
                    std::optional<FockVector> initial) {
  if (is_delta(p.pulse())) throw UnsupportedPulse("evolve_full: the delta-limit pulse cannot be time stepped");
  const double zeta = p.zeta();
  const double wb = p.omega_b();
  const double wd = p.omega_d();
  const PulseShape& pulse = p.pulse();
  // exp(i omega_b t b'b) b' exp(-i omega_b t b'b) = exp(i omega_b t) b'
  auto coefficients = [&](double t) {
    const double g = zeta * std::cos(2.0 * wd * t) * envelope_value(pulse, t);
    const cplx phase = std::polar(1.0, 2.0 * wb * t);
    return std::pair<cplx, cplx>{g * phase, g * std::conj(phase)};
  };
  const double max_step = 2.0 * std::numbers::pi / (40.0 * wd);
  return evolve_pure(times, opts, std::move(initial), coefficients, max_step);
}

LindbladRun evolve_lindblad(const DriveParams& p, double kappa, std::span<const double> times,
                            const FockOptions& opts, std::optional<FockDensity> initial) {
  if (!p.is_resonant()) throw std::invalid_argument("evolve_lindblad: requires resonance (omega_d == omega_b)");
  if (is_delta(p.pulse())) throw UnsupportedPulse("evolve_lindblad: the delta-limit pulse cannot be time stepped");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::domain_error("evolve_lindblad: kappa must be non-negative");
  require_dim(opts.dim);
  check_times(times);
  opts.acc.validate();

  const std::size_t dim = opts.dim;
  const auto N = static_cast<Eigen::Index>(dim);
  FockDensity rho0 = initial ? std::move(*initial) : FockDensity::basis_state(dim, 0);
  if (rho0.dim() != dim) throw std::invalid_argument("initial density dimension does not match FockOptions::dim");

  const auto c = pair_couplings(dim);
  std::vector<double> sq(dim + 1);
  for (std::size_t k = 0; k <= dim; ++k) sq[k] = std::sqrt(double(k));

  std::vector<double> y(2 * dim * dim);
  {
    const cplx* src = rho0.matrix().data();
    std::copy(src, src + dim * dim, as_complex(std::span<double>(y)).begin());
  }

  const double zeta = p.zeta();
  const PulseShape& pulse = p.pulse();
  // Column-major rho(m, n) = r[m + n * dim]. The generator preserves Hermiticity,
  // so only the upper triangle is computed and mirrored.
  ode::System rhs = [&](double t, std::span<const double> yv, std::span<double> dyv) {
    const cplx* r = as_complex(yv).data();
    cplx* dr = as_complex(dyv).data();
    const double g = 0.5 * zeta * envelope_value(pulse, t);
    const cplx mig(0.0, -g);
    for (std::size_t n = 0; n < dim; ++n) {
      const cplx* col = r + n * dim;
      const cplx* col_m2 = n >= 2 ? r + (n - 2) * dim : nullptr;
      const cplx* col_p2 = n + 2 < dim ? r + (n + 2) * dim : nullptr;
      const cplx* col_p1 = n + 1 < dim ? r + (n + 1) * dim : nullptr;
      cplx* out = dr + n * dim;
      for (std::size_t m = 0; m <= n; ++m) {
        // (H rho)(m, n) - (rho H)(m, n), H = g (b'b' + bb)
        cplx comm = 0.0;
        if (m >= 2) comm += c[m - 2] * col[m - 2];
        if (m + 2 < dim) comm += c[m] * col[m + 2];
        if (col_m2) comm -= c[n - 2] * col_m2[m];
        if (col_p2) comm -= c[n] * col_p2[m];
        cplx v = mig * comm;
        if (kappa > 0.0) {
          if (col_p1 && m + 1 < dim) v += kappa * sq[m + 1] * sq[n + 1] * col_p1[m + 1];
          v -= 0.5 * kappa * double(m + n) * col[m];
        }
        out[m] = v;
        dr[n + m * dim] = std::conj(v);
      }
    }
  };

  auto sample = [&](double t, std::span<const double> yv) {
    const cplx* r = as_complex(yv).data();
    FockSample s;
    s.t = t;
    s.norm = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double pk = r[k + k * dim].real();
      s.norm += pk;
      s.n += double(k) * pk;
      if (k % 2 == 1) s.odd_mass += pk;
      if (k >= dim - kHeadroom) s.tail_mass += pk;
      if (k + 2 < dim) s.s += c[k] * r[(k + 2) + k * dim];
    }
    s.var_x_min = 0.5 + s.n - std::abs(s.s);
    return s;
  };
  auto min_eigenvalue = [&](std::span<const double> yv) {
    Eigen::Map<const Eigen::MatrixXcd> m(as_complex(yv).data(), N, N);
    const Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
  };
  auto check_positivity = [&](double t, std::span<const double> yv) {
    const double lo = min_eigenvalue(yv);
    if (lo < -kPositivityTol) {
      std::ostringstream msg;
      msg << "evolve_lindblad: density matrix lost positivity at t = " << t << " (min eigenvalue " << lo << ")";
      throw NumericalError(msg.str());
    }
  };

  std::vector<FockSample> samples;
  samples.push_back(sample(times.front(), y));

  ode::Settings settings;
  settings.acc = opts.acc;
  ode::Observer on_step = [&](double t, std::span<const double> yv) {
    const cplx* r = as_complex(yv).data();
    double tail = 0.0;
    for (std::size_t k = dim - kHeadroom; k < dim; ++k) tail += r[k + k * dim].real();
    if (tail > opts.tail_tol) throw_truncation(t, tail, opts);
  };
  ode::Observer on_stop = [&](double t, std::span<const double> yv) {
    samples.push_back(sample(t, yv));
    if (opts.check_positivity_each_sample) check_positivity(t, yv);
  };
  ode::integrate(rhs, times.front(), y, times.subspan(1), settings, on_stop, on_step);

  check_positivity(times.back(), y);
  Eigen::MatrixXcd final_rho = Eigen::Map<const Eigen::MatrixXcd>(as_complex(std::span<const double>(y)).data(), N, N);
  // Remove roundoff asymmetry before validation.
  final_rho = (0.5 * (final_rho + final_rho.adjoint())).eval();
  return {std::move(samples), FockDensity(std::move(final_rho))};
}

// ------------------------------------------------------------- diagnostics

double ergotropy(const FockDensity& rho, double omega_b) {
  if (!(omega_b > 0.0)) throw std::domain_error("ergotropy: omega_b must be positive");
  const double energy = omega_b * rho.mean_population();
  const auto& ev = rho.eigenvalues();  // ascending
  double passive = 0.0;
  const Eigen::Index n = ev.size();
  for (Eigen::Index k = 0; k < n; ++k) passive += double(k) * ev(n - 1 - k);
  return energy - omega_b * passive;
}

QuadratureReport quadrature_variances(const FockVector& rotating, double omega_b, double t, double theta) {
  const std::size_t dim = rotating.dim();
  std::vector<cplx> lab(dim + 1, cplx{});
  for (std::size_t k = 0; k < dim; ++k) lab[k] = std::polar(1.0, -omega_b * double(k) * t) * rotating.amplitudes()[k];

  const cplx up = std::polar(1.0, 0.5 * theta);  // multiplies b'
  const cplx down = std::conj(up);              // multiplies b
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  double x_mean = 0.0, x_sq = 0.0, p_mean = 0.0, p_sq = 0.0;
  for (std::size_t k = 0; k <= dim; ++k) {
    const cplx raise = k >= 1 ? up * std::sqrt(double(k)) * lab[k - 1] : cplx{};
    const cplx lower = k + 1 < lab.size() ? down * std::sqrt(double(k + 1)) * lab[k + 1] : cplx{};
    const cplx xk = inv_sqrt2 * (raise + lower);
    const cplx pk = cplx(0.0, inv_sqrt2) * (raise - lower);
    x_mean += (std::conj(lab[k]) * xk).real();
    p_mean += (std::conj(lab[k]) * pk).real();
    x_sq += std::norm(xk);
    p_sq += std::norm(pk);
  }
  QuadratureReport q;
  q.theta = theta;
  q.var_x = x_sq - x_mean * x_mean;
  q.var_p = p_sq - p_mean * p_mean;
  q.std_product = std::sqrt(q.var_x * q.var_p);
  return q;
}

void write_csv(std::ostream& out, std::span<const FockSample> samples, std::optional<double> ergotropy_ratio) {
  const auto old_precision = out.precision(17);
  out << "t,n,re_s,im_s,var_x_min,tail_mass";
  if (ergotropy_ratio) out << ",ergotropy_ratio";
  out << '\n';
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    out << s.t << ',' << s.n << ',' << s.s.real() << ',' << s.s.imag() << ',' << s.var_x_min << ',' << s.tail_mass;
    if (ergotropy_ratio) {
      out << ',';
      if (i + 1 == samples.size()) out << *ergotropy_ratio;
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace qbattery::fock
