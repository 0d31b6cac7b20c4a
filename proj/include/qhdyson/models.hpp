#pragma once

#include <vector>

#include "qhdyson/dyson.hpp"

namespace qhdyson {

ComplexMatrix sigma_x();
ComplexMatrix sigma_y();  // [[0, -i], [i, 0]]
ComplexMatrix sigma_z();

// ---------------------------------------------------------------------------
// PT-symmetric dimer: h = omega sigma_x, Omega = exp(alpha/2 sigma_y),
// H = kappa sigma_x + i gamma sigma_z, Theta = exp(alpha sigma_y).
// ---------------------------------------------------------------------------

struct DimerParams {
  double omega = 1.0;
  double alpha = 0.0;
  double kappa = 1.0;  // omega cosh(alpha)
  double gamma = 0.0;  // omega sinh(alpha)
};

/// Parameters from the Hermitian side: kappa = omega cosh(alpha), gamma = omega sinh(alpha).
DimerParams dimer_from_rapidity(double omega, double alpha);

/// Parameters from the non-Hermitian side. Throws EPRegion when |gamma| >= kappa.
DimerParams dimer_from_coupling(double kappa, double gamma);

struct DimerModel {
  ComplexMatrix h;
  ComplexMatrix omega;
  ComplexMatrix omega_inv;
  ComplexMatrix hamiltonian;
  ComplexMatrix theta;
};

/// Closed-form matrices of the dimer; no eigensolver involved.
DimerModel dimer_build(const DimerParams& p, const Tolerances& tol = {});

/// Dimer Hamiltonian for arbitrary (kappa, gamma), including the broken phase.
ComplexMatrix dimer_hamiltonian(double kappa, double gamma);

struct ConjugationResiduals {
  double residual_x = 0.0;
  double residual_z = 0.0;
};

/// Relative Frobenius residuals of
///   Omega^{-1} sigma_x Omega = sigma_x cosh(alpha) + i sigma_z sinh(alpha)
///   Omega^{-1} sigma_z Omega = sigma_z cosh(alpha) - i sigma_x sinh(alpha)
/// with Omega built by Hermitian exponentiation of sigma_y.
ConjugationResiduals bch_conjugation_check(double alpha);

struct EPScanReport {
  std::vector<double> parameter_grid;
  std::vector<double> min_gap;
  std::vector<double> eigvec_cond;
  std::vector<bool> is_ep;
  std::vector<double> ep_locations;
};

/// Sweeps gamma over a sorted grid, recording the eigenvalue gap and the
/// eigenbasis condition number of H(kappa, gamma). A point is flagged when the
/// gap is below 1e-6 ||H|| and the condition number exceeds defective_cond;
/// each run of flagged points contributes its smallest-gap location.
EPScanReport ep_scan(double kappa, const std::vector<double>& gamma_grid,
                     const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Two-mode fermionic oscillator
//   H = w c1^+ c1 + (1 - w) c2^+ c2 + beta c1^+ c2^+ + alpha c2 c1
// in the basis |0>, c1^+|0>, c2^+|0>, c1^+ c2^+|0>.
// ---------------------------------------------------------------------------

struct FermionicParams {
  double alpha = 1.0;
  double beta = 1.0;
  double omega = 0.5;
  double sqrt_ab = 1.0;
  double det_D = 1.0;  // det(Omega^{-1}) = 2 alpha beta - (alpha + beta) sqrt(alpha beta) + 1
};

/// Validates and completes the parameter set. Throws InvalidCoupling when
/// alpha beta <= 0 and SingularDysonMap when |det_D| <= positivity_rel.
FermionicParams fermionic_params(double alpha, double beta, double omega,
                                 const Tolerances& tol = {});

struct FermionicModel {
  ComplexMatrix hamiltonian;
  ComplexMatrix h;
  ComplexMatrix omega_inv;
  ComplexMatrix omega;
  ComplexMatrix theta;
};

FermionicModel fermionic_build(const FermionicParams& p, const Tolerances& tol = {});

struct FermionOperators {
  ComplexMatrix c1;
  ComplexMatrix c2;
};

/// Annihilation operators on the four-dimensional Fock space.
FermionOperators fermion_operators();

/// Assembles H from the second-quantized expression.
ComplexMatrix fermionic_from_fock(const FermionicParams& p, const Tolerances& tol = {});

}  // namespace qhdyson
