#pragma once

#include <complex>

#include <Eigen/Dense>

#include "qhdyson/errors.hpp"

namespace qhdyson {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Numerical thresholds shared by every check in the library. All residuals are
// relative to Frobenius norms.
struct Tolerances {
  double residual_rel = 1e-10;
  double reality_rel = 1e-9;
  double positivity_rel = 1e-12;
  double defective_cond = 1e8;

  // Throws InvalidArgument unless every field is strictly positive.
  void validate() const;
};

/// Result of a general (non-Hermitian) eigendecomposition.
///
/// Column n of `right` is a right eigenvector of M for `eigenvalues[n]`;
/// column n of `left` is an eigenvector of M^dagger for conj(eigenvalues[n]).
/// The pair is biorthonormal: left^dagger * right = I.
struct EigenSystem {
  ComplexVector eigenvalues;
  ComplexMatrix right;
  ComplexMatrix left;
  double condition = 1.0;  // 2-norm condition number of `right`
};

double frobenius(const ComplexMatrix& m);

// Throws NonFiniteEntry if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, const char* what);
void require_square(const ComplexMatrix& m, const char* what);

/// ||M - M^dagger||_F.
double hermiticity_defect(const ComplexMatrix& m);

/// Frobenius mass of the off-diagonal part.
double off_diagonal_norm(const ComplexMatrix& m);

/// 2-norm condition number via singular values; +inf for a singular matrix.
double condition_number(const ComplexMatrix& m);

/// Eigendecomposition without the defectiveness check. Eigenvalues are sorted
/// ascending by real part, ties by imaginary part. Each right vector has unit
/// norm with its largest-magnitude component real and positive; the left
/// vectors are the rows of right^{-1}, conjugated. When `right` is exactly
/// singular the left block is left empty.
EigenSystem eig_general_unchecked(const ComplexMatrix& m);

/// As eig_general_unchecked, but throws DefectiveMatrix when the condition
/// number of the right-eigenvector matrix exceeds tol.defective_cond.
EigenSystem eig_general(const ComplexMatrix& m, const Tolerances& tol = {});

struct HermitianRoot {
  ComplexMatrix root;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// Principal square root of a Hermitian positive-definite matrix together
/// with the extreme eigenvalues of the input.
HermitianRoot herm_sqrt_certified(const ComplexMatrix& p, const Tolerances& tol = {});

ComplexMatrix herm_sqrt(const ComplexMatrix& p, const Tolerances& tol = {});

struct PolarFactors {
  ComplexMatrix unitary;   // W
  ComplexMatrix positive;  // P = (M^dagger M)^{1/2}
};

/// Right polar decomposition M = W * P.
PolarFactors polar_decompose(const ComplexMatrix& m, const Tolerances& tol = {});

/// exp(scale * S) for Hermitian S, through its eigendecomposition.
ComplexMatrix herm_exp(const ComplexMatrix& s, double scale, const Tolerances& tol = {});

}  // namespace qhdyson
