#include "qhdyson/linalg.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace qhdyson {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorKind::DefectiveMatrix: return "DefectiveMatrix";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::SingularInput: return "SingularInput";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorKind::SingularScaling: return "SingularScaling";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::AvatarNotHermitian: return "AvatarNotHermitian";
    case ErrorKind::NotQuasiHermitian: return "NotQuasiHermitian";
    case ErrorKind::NotHermitianGenerator: return "NotHermitianGenerator";
    case ErrorKind::EPRegion: return "EPRegion";
    case ErrorKind::InvalidCoupling: return "InvalidCoupling";
    case ErrorKind::SingularDysonMap: return "SingularDysonMap";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

void Tolerances::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(residual_rel) || !positive(reality_rel) || !positive(positivity_rel) ||
      !positive(defective_cond)) {
    throw Error(ErrorKind::InvalidArgument, "all tolerances must be strictly positive");
  }
}

double frobenius(const ComplexMatrix& m) { return m.norm(); }

void require_finite(const ComplexMatrix& m, const char* what) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorKind::NonFiniteEntry, std::string(what) + " contains NaN or Inf");
      }
    }
  }
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " must be a non-empty square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

double hermiticity_defect(const ComplexMatrix& m) { return (m - m.adjoint()).norm(); }

double off_diagonal_norm(const ComplexMatrix& m) {
  ComplexMatrix off = m;
  off.diagonal().setZero();
  return off.norm();
}

double condition_number(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smallest = s(s.size() - 1);
  if (smallest <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smallest;
}

namespace {

// Ordering: ascending real part, then ascending imaginary part. Real parts
// closer than `tie` are treated as equal so that rounding noise does not
// decide the order of conjugate pairs.
bool precedes(const Complex& a, const Complex& b, double tie) {
  if (std::abs(a.real() - b.real()) > tie) return a.real() < b.real();
  return a.imag() < b.imag();
}

std::vector<Eigen::Index> sorted_order(const ComplexVector& values) {
  const double scale = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  const double tie = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  // insertion sort: the tolerant comparator is not a strict weak ordering
  for (std::size_t i = 1; i < order.size(); ++i) {
    const Eigen::Index key = order[i];
    std::size_t j = i;
    while (j > 0 && precedes(values(key), values(order[j - 1]), tie)) {
      order[j] = order[j - 1];
      --j;
    }
    order[j] = key;
  }
  return order;
}

// Unit norm, largest-magnitude component real positive. Components within a
// relative 1e-8 of the maximum count as tied and the first one wins.
void normalize_column(Eigen::Ref<ComplexVector> v) {
  const double n = v.norm();
  if (n == 0.0) return;
  v /= n;
  const double peak = v.cwiseAbs().maxCoeff();
  Eigen::Index pivot = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= peak * (1.0 - 1e-8)) {
      pivot = i;
      break;
    }
  }
  const Complex phase = v(pivot) / std::abs(v(pivot));
  v *= std::conj(phase);
  v(pivot) = Complex(v(pivot).real(), 0.0);
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

void require_hermitian(const ComplexMatrix& m, const Tolerances& tol, ErrorKind kind,
                       const char* what) {
  const double defect = hermiticity_defect(m);
  if (defect > tol.residual_rel * m.norm()) {
    throw Error(kind, std::string(what) + " is not Hermitian (||M - M^dagger|| = " +
                          std::to_string(defect) + ")");
  }
}

}  // namespace

EigenSystem eig_general_unchecked(const ComplexMatrix& m) {
  require_square(m, "matrix");
  require_finite(m, "matrix");
  const Eigen::Index n = m.rows();

  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::DefectiveMatrix, "eigenvalue iteration did not converge");
  }

  const auto order = sorted_order(solver.eigenvalues());
  EigenSystem out;
  out.eigenvalues.resize(n);
  out.right.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = solver.eigenvalues()(src);
    out.right.col(k) = solver.eigenvectors().col(src);
    normalize_column(out.right.col(k));
  }

  out.condition = condition_number(out.right);
  if (std::isfinite(out.condition)) {
    Eigen::PartialPivLU<ComplexMatrix> lu(out.right);
    out.left = lu.inverse().adjoint();
  }
  return out;
}

EigenSystem eig_general(const ComplexMatrix& m, const Tolerances& tol) {
  EigenSystem sys = eig_general_unchecked(m);
  if (!(sys.condition <= tol.defective_cond)) {
    throw Error(ErrorKind::DefectiveMatrix,
                "eigenvector matrix condition number " + std::to_string(sys.condition) +
                    " exceeds " + std::to_string(tol.defective_cond) +
                    " (close to an exceptional point)");
  }
  return sys;
}

HermitianRoot herm_sqrt_certified(const ComplexMatrix& p, const Tolerances& tol) {
  require_square(p, "matrix");
  require_finite(p, "matrix");
  require_hermitian(p, tol, ErrorKind::NotHermitian, "matrix");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(p));
  const RealVector& lambda = solver.eigenvalues();
  HermitianRoot out;
  out.min_eigenvalue = lambda(0);
  out.max_eigenvalue = lambda(lambda.size() - 1);
  if (out.min_eigenvalue <= tol.positivity_rel * p.norm()) {
    throw Error(ErrorKind::NotPositiveDefinite,
                "smallest eigenvalue " + std::to_string(out.min_eigenvalue) +
                    " is not positive relative to the matrix norm");
  }
  const ComplexMatrix& v = solver.eigenvectors();
  out.root = hermitian_part(v * lambda.cwiseSqrt().asDiagonal() * v.adjoint());
  return out;
}

ComplexMatrix herm_sqrt(const ComplexMatrix& p, const Tolerances& tol) {
  return herm_sqrt_certified(p, tol).root;
}

PolarFactors polar_decompose(const ComplexMatrix& m, const Tolerances& tol) {
  require_square(m, "matrix");
  require_finite(m, "matrix");

  const ComplexMatrix gram = hermitian_part(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram);
  const RealVector& lambda = solver.eigenvalues();
  if (!(lambda(0) > tol.positivity_rel * gram.norm())) {
    throw Error(ErrorKind::SingularInput, "polar decomposition of a numerically singular matrix");
  }
  const ComplexMatrix& v = solver.eigenvectors();
  const RealVector root = lambda.cwiseSqrt();
  PolarFactors out;
  out.positive = hermitian_part(v * root.asDiagonal() * v.adjoint());
  out.unitary = m * (v * root.cwiseInverse().asDiagonal() * v.adjoint());
  return out;
}

ComplexMatrix herm_exp(const ComplexMatrix& s, double scale, const Tolerances& tol) {
  require_square(s, "generator");
  require_finite(s, "generator");
  require_hermitian(s, tol, ErrorKind::NotHermitian, "generator");
  if (scale == 0.0) return ComplexMatrix::Identity(s.rows(), s.cols());

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(s));
  const RealVector growth = (scale * solver.eigenvalues()).array().exp();
  const ComplexMatrix& v = solver.eigenvectors();
  return hermitian_part(v * growth.asDiagonal() * v.adjoint());
}

}  // namespace qhdyson
