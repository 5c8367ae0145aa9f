#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "qbattery/dynamics.hpp"
#include "qbattery/merit.hpp"

// Truncated Fock-ladder engines. States live on |0>..|N-1>; the head-room
// block |N-4>..|N-1> is watched for probability leaking out of the ladder.
// All evolutions run in the frame rotating at omega_b, where the two-photon
// drive is (zeta/2) f(t) (b'b' + bb) under the RWA.

namespace qbattery::fock {

/// Number of top levels whose population counts as tail mass.
inline constexpr std::size_t kHeadroom = 4;

class FockVector {
 public:
  /// Vacuum |0> in a ladder of `dim` levels (dim >= kHeadroom + 1).
  explicit FockVector(std::size_t dim);
  static FockVector basis_state(std::size_t dim, std::size_t level);
  static FockVector from_amplitudes(std::vector<cplx> amplitudes);

  std::size_t dim() const { return amp_.size(); }
  std::span<const cplx> amplitudes() const { return amp_; }
  std::span<cplx> amplitudes() { return amp_; }

  double norm_squared() const;
  double tail_mass() const;
  double odd_mass() const;
  double mean_population() const;
  /// <bb>
  cplx pair_coherence() const;

 private:
  std::vector<cplx> amp_;
};

class FockDensity {
 public:
  /// Validates trace, Hermiticity and positivity; throws std::domain_error.
  explicit FockDensity(Eigen::MatrixXcd matrix);
  static FockDensity pure(const FockVector& psi);
  static FockDensity basis_state(std::size_t dim, std::size_t level);

  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return rho_; }

  double trace() const;
  double hermiticity_residual() const;
  /// Eigenvalues in ascending order, computed once on construction.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  double min_eigenvalue() const { return eigenvalues_(0); }
  double tail_mass() const;
  double mean_population() const;
  cplx pair_coherence() const;

 private:
  Eigen::MatrixXcd rho_;
  Eigen::VectorXd eigenvalues_;  // ascending
};

/// Photon-number distribution of a squeezed vacuum with squeeze parameter r:
/// P(2m) = (2m)! / (2^{2m} (m!)^2) tanh^{2m}(r) / cosh(r), P(odd) = 0.
std::vector<double> squeezed_vacuum_distribution(double r, std::size_t levels);

/// Smallest even N >= 6 for which a squeezed vacuum with parameter r keeps
/// less than tail_tol of its population on levels >= N - kHeadroom.
std::size_t truncation_for_squeezing(double r, double tail_tol);

/// truncation_for_squeezing(2 zeta, tail_tol).
std::size_t choose_truncation(double zeta, double tail_tol);

struct FockOptions {
  std::size_t dim = 0;
  double tail_tol = 1e-8;
  /// Tight enough that the squared norm stays within 1e-9 of one over a full pulse.
  Accuracy acc{1e-13, 1e-13};
  /// Lindblad only: check the smallest eigenvalue at every sample instead of
  /// only at the final state.
  bool check_positivity_each_sample = false;
};

struct FockSample {
  double t = 0.0;
  double n = 0.0;
  cplx s{};              // rotating-frame <bb>
  double var_x_min = 0.5;  // 1/2 + n - |s|, min over theta of the quadrature variance
  double tail_mass = 0.0;
  double odd_mass = 0.0;
  double norm = 1.0;       // squared norm or trace
};

struct FockRun {
  std::vector<FockSample> samples;
  FockVector final_state;
};

struct LindbladRun {
  std::vector<FockSample> samples;
  FockDensity final_state;
};

/// i d/dt psi = (zeta/2) f(t) (b'b' + bb) psi from `initial` (vacuum by
/// default) at times.front(), sampled at every entry of `times`. Requires
/// resonance. Throws TruncationError when the tail mass exceeds tail_tol.
FockRun evolve_rwa(const DriveParams& p, std::span<const double> times, const FockOptions& opts,
                   std::optional<FockVector> initial = std::nullopt);

/// Full carrier Hamiltonian omega_b b'b + zeta cos(2 omega_d t) f(t) (b'b' + bb)
/// without the RWA, integrated exactly in the interaction picture of omega_b b'b
/// so samples are directly comparable with evolve_rwa. The step is capped at
/// 2 pi / (40 omega_d) to resolve the carrier.
FockRun evolve_full(const DriveParams& p, std::span<const double> times, const FockOptions& opts,
                    std::optional<FockVector> initial = std::nullopt);

/// Lindblad evolution with the RWA Hamiltonian and zero-temperature loss
/// kappa (b rho b' - {b'b, rho}/2), from `initial` (vacuum by default).
/// Throws NumericalError if the density matrix loses positivity beyond -1e-10.
LindbladRun evolve_lindblad(const DriveParams& p, double kappa, std::span<const double> times,
                            const FockOptions& opts, std::optional<FockDensity> initial = std::nullopt);

/// Extractable work: Tr(rho H_b) minus the energy of the passive state
/// (eigenvalues in decreasing order placed on levels 0, omega_b, 2 omega_b, ...).
double ergotropy(const FockDensity& rho, double omega_b);

/// Quadrature variances computed by applying X_theta and P_theta to the
/// lab-frame state exp(-i omega_b t b'b) psi, where psi is a rotating-frame state.
QuadratureReport quadrature_variances(const FockVector& rotating, double omega_b, double t, double theta);

/// CSV: t,n,re_s,im_s,var_x_min,tail_mass[,ergotropy_ratio on the last row].
void write_csv(std::ostream& out, std::span<const FockSample> samples, std::optional<double> ergotropy_ratio);

}  // namespace qbattery::fock
