#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "qhdyson/linalg.hpp"

namespace qhdyson {

/// Real energies with biorthonormal right kets |psi_n> (eigenvectors of H)
/// and left kets |psi_n>> (eigenvectors of H^dagger), stored as matrix
/// columns and satisfying left^dagger * right = I.
struct BiorthogonalSystem {
  RealVector energies;
  ComplexMatrix right_kets;
  ComplexMatrix left_kets;

  Eigen::Index dimension() const { return energies.size(); }
};

/// Classification of a Dyson map: the eigenvector concatenation (I), its
/// diagonal rescaling (K), or a unitary rotation of either (KU).
enum class DysonFamily { I, K, KU };

std::string_view to_string(DysonFamily family) noexcept;

/// An invertible map Omega with Omega * H * Omega^{-1} Hermitian.
///
/// The factors are kept so that Omega = U * K^dagger * Omega_I can be replayed
/// term by term.
struct DysonMap {
  ComplexMatrix omega;
  ComplexMatrix omega_inv;
  DysonFamily family = DysonFamily::I;
  ComplexMatrix base_omega;      // Omega_I
  ComplexMatrix base_omega_inv;  // Omega_I^{-1}
  std::optional<ComplexVector> k_diag;
  std::optional<ComplexMatrix> u_matrix;
};

/// Hermitian positive-definite inner-product metric with its cached root.
struct Metric {
  ComplexMatrix theta;
  ComplexMatrix sqrt_theta;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;

  Eigen::Index dimension() const { return theta.rows(); }
  double condition() const { return max_eigenvalue / min_eigenvalue; }
};

struct HermitizationReport {
  std::vector<double> energies;
  DysonFamily family = DysonFamily::I;
  double residual_quasi_herm = 0.0;
  double residual_avatar_herm = 0.0;
  double residual_isospectral = 0.0;
  double metric_condition = 1.0;
  bool passed = false;
};

/// Solves H|psi> = E|psi> together with H^dagger|psi>> = E|psi>>.
/// Throws ComplexSpectrum if any |Im E_n| > reality_rel * ||H||, and
/// DefectiveMatrix near exceptional points.
BiorthogonalSystem solve_schrodinger_pair(const ComplexMatrix& h, const Tolerances& tol = {});

/// Omega_I = (left kets)^dagger, so row n of Omega_I is <<psi_n|.
DysonMap build_omega_I(const BiorthogonalSystem& sys);

/// Omega_K = K^dagger * Omega_I with K = diag(k). Throws SingularScaling when
/// some |k_n| <= positivity_rel.
DysonMap build_omega_K(const DysonMap& base, const ComplexVector& k, const Tolerances& tol = {});

/// Omega_{K,U} = U * Omega_K. Throws NotUnitary when ||U^dagger U - I|| > residual_rel.
DysonMap build_omega_KU(const DysonMap& base, const ComplexMatrix& u, const Tolerances& tol = {});

/// Certifies an arbitrary matrix as a metric (Hermitian and positive definite).
Metric make_metric(const ComplexMatrix& theta, const Tolerances& tol = {});

/// Theta = Omega^dagger * Omega.
Metric metric_of(const DysonMap& map, const Tolerances& tol = {});

/// h = Omega * H * Omega^{-1}, certified Hermitian within residual_rel * ||h||.
ComplexMatrix hermitian_avatar(const ComplexMatrix& h, const DysonMap& map,
                               const Tolerances& tol = {});

/// ||H^dagger Theta - Theta H|| / (||H|| ||Theta||).
double quasi_hermiticity_residual(const ComplexMatrix& h, const Metric& metric);

struct HermitianDyson {
  ComplexMatrix u;           // unitary solving U * Omega_K * U = Omega_K^dagger
  ComplexMatrix omega_herm;  // U * Omega_K = Theta_K^{1/2}
};

/// Rotates a Dyson map into its Hermitian positive-definite representative
/// using the right polar factorization Omega_K = W * P (U = W^dagger).
HermitianDyson hermitian_dyson(const DysonMap& map, const Tolerances& tol = {});

/// <psi| Theta |phi>.
Complex phys_inner(const Metric& metric, const ComplexVector& psi, const ComplexVector& phi);

/// psi(t) = exp(-i H t) psi0 for each t, through the eigendecomposition of H.
std::vector<ComplexVector> propagate(const ComplexMatrix& h, const ComplexVector& psi0,
                                     const std::vector<double>& times,
                                     const Tolerances& tol = {});

/// Returns (psi(t), Theta psi(t)) for every t. Throws NotQuasiHermitian unless
/// H is quasi-Hermitian with respect to Theta.
std::vector<double> evolve_norm_check(const ComplexMatrix& h, const Metric& metric,
                                      const ComplexVector& psi0, const std::vector<double>& times,
                                      const Tolerances& tol = {});

struct HermitizeOptions {
  std::optional<ComplexVector> k_diag;
  bool hermitian_omega = false;
  Tolerances tol{};
};

struct HermitizationResult {
  HermitizationReport report;
  DysonMap map;
  Metric metric;
  ComplexMatrix avatar;
};

/// Full pipeline: biorthogonal solve, Omega_I, optional K rescaling and
/// Hermitian rotation, metric, avatar, and all invariant residuals.
HermitizationResult hermitize(const ComplexMatrix& h, const HermitizeOptions& options = {});

}  // namespace qhdyson
