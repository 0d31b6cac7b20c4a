#include "qhdyson/observables.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace qhdyson {

std::string_view to_string(SharedMetricStatus status) noexcept {
  switch (status) {
    case SharedMetricStatus::Found: return "Found";
    case SharedMetricStatus::NoSharedMetric: return "NoSharedMetric";
    case SharedMetricStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

ObservableCandidate observable_from_M(const Metric& theta, const ComplexMatrix& m,
                                      const Tolerances& tol) {
  require_square(m, "generator");
  require_finite(m, "generator");
  if (m.rows() != theta.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "generator and metric dimensions differ");
  }
  const double defect = hermiticity_defect(m);
  if (defect > tol.residual_rel * m.norm()) {
    throw Error(ErrorKind::NotHermitianGenerator,
                "M is not Hermitian (||M - M^dagger|| = " + std::to_string(defect) + ")");
  }

  ObservableCandidate out;
  out.m_matrix = m;
  out.a_matrix = theta.theta.llt().solve(m);
  out.residual = is_quasi_hermitian(out.a_matrix, theta);
  return out;
}

double is_quasi_hermitian(const ComplexMatrix& a, const Metric& theta) {
  if (a.rows() != theta.dimension() || a.cols() != theta.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "observable and metric dimensions differ");
  }
  const double defect = (a.adjoint() * theta.theta - theta.theta * a).norm();
  const double scale = a.norm() * theta.theta.norm();
  return scale > 0.0 ? defect / scale : defect;
}

ComplexMatrix avatar_of_observable(const ComplexMatrix& a, const DysonMap& map) {
  if (a.rows() != map.omega.rows() || a.cols() != map.omega.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "observable and Dyson map dimensions differ");
  }
  ComplexMatrix center = map.base_omega * a * map.base_omega_inv;
  if (map.k_diag) {
    const ComplexVector k_adj = map.k_diag->conjugate();
    center = k_adj.asDiagonal() * center * k_adj.cwiseInverse().asDiagonal();
  }
  if (map.u_matrix) center = *map.u_matrix * center * map.u_matrix->adjoint();
  return center;
}

bool check_diagonal_center(const ComplexMatrix& a, const DysonMap& map_i, const Tolerances& tol) {
  if (map_i.family != DysonFamily::I) {
    throw Error(ErrorKind::InvalidArgument, "diagonal-center test needs an Omega_I map");
  }
  const ComplexMatrix center = map_i.omega * a * map_i.omega_inv;
  return off_diagonal_norm(center) <= tol.residual_rel * a.norm();
}

namespace {

// Orthonormal basis (Frobenius inner product) of the N^2-dimensional real
// space of Hermitian N x N matrices.
std::vector<ComplexMatrix> hermitian_basis(Eigen::Index n) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n * n));
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      ComplexMatrix re = ComplexMatrix::Zero(n, n);
      re(i, j) = r;
      re(j, i) = r;
      basis.push_back(re);
      ComplexMatrix im = ComplexMatrix::Zero(n, n);
      im(i, j) = Complex(0.0, r);
      im(j, i) = Complex(0.0, -r);
      basis.push_back(im);
    }
  }
  return basis;
}

ComplexMatrix assemble(const std::vector<ComplexMatrix>& basis, const RealVector& coords) {
  ComplexMatrix out = ComplexMatrix::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t k = 0; k < basis.size(); ++k) out += coords(static_cast<Eigen::Index>(k)) * basis[k];
  return out;
}

// Returns the candidate scaled to trace N if it is definite (either sign).
std::optional<ComplexMatrix> definite_candidate(const ComplexMatrix& candidate,
                                                const Tolerances& tol) {
  const ComplexMatrix sym = 0.5 * (candidate + candidate.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  const RealVector& lambda = solver.eigenvalues();
  const double floor = tol.positivity_rel * sym.norm();
  const double n = static_cast<double>(sym.rows());
  if (lambda(0) > floor) return sym * (n / sym.trace().real());
  if (lambda(lambda.size() - 1) < -floor) return sym * (n / sym.trace().real());
  return std::nullopt;
}

}  // namespace

SharedMetricResult shared_metric(const ComplexMatrix& h1, const ComplexMatrix& h2,
                                 const Tolerances& tol, std::uint64_t seed) {
  require_square(h1, "first operator");
  require_square(h2, "second operator");
  require_finite(h1, "first operator");
  require_finite(h2, "second operator");
  if (h1.rows() != h2.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "operators have different dimensions");
  }
  const Eigen::Index n = h1.rows();
  const ComplexMatrix a = h1.norm() > 0.0 ? ComplexMatrix(h1 / h1.norm()) : h1;
  const ComplexMatrix b = h2.norm() > 0.0 ? ComplexMatrix(h2 / h2.norm()) : h2;

  // Column k holds the real and imaginary parts of both commutator-like
  // constraints evaluated on basis element k.
  const std::vector<ComplexMatrix> basis = hermitian_basis(n);
  const Eigen::Index dim = static_cast<Eigen::Index>(basis.size());
  const Eigen::Index block = n * n;
  Eigen::MatrixXd constraints(4 * block, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const ComplexMatrix& t = basis[static_cast<std::size_t>(k)];
    const ComplexMatrix c1 = a.adjoint() * t - t * a;
    const ComplexMatrix c2 = b.adjoint() * t - t * b;
    const auto v1 = c1.reshaped();
    const auto v2 = c2.reshaped();
    constraints.col(k) << v1.real(), v1.imag(), v2.real(), v2.imag();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraints, Eigen::ComputeFullV);
  const RealVector& sigma = svd.singularValues();
  const double cutoff = 1e-10 * (sigma.size() ? sigma(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) ++rank;
  }
  // an all-zero constraint matrix leaves the whole space free
  if (sigma.size() && sigma(0) == 0.0) rank = 0;

  SharedMetricResult result;
  result.solution_space_dim = static_cast<int>(dim - rank);
  if (result.solution_space_dim == 0) {
    result.status = SharedMetricStatus::NoSharedMetric;
    return result;
  }
  const Eigen::MatrixXd null_space = svd.matrixV().rightCols(result.solution_space_dim);

  auto accept = [&](const ComplexMatrix& theta) {
    Metric metric = make_metric(theta, tol);
    if (quasi_hermiticity_residual(h1, metric) > tol.residual_rel ||
        quasi_hermiticity_residual(h2, metric) > tol.residual_rel) {
      return false;
    }
    result.status = SharedMetricStatus::Found;
    result.theta = std::move(metric);
    return true;
  };

  // identity projected onto the solution space
  RealVector identity = RealVector::Zero(dim);
  identity.head(n).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  const RealVector projected = null_space * (null_space.transpose() * identity);
  if (projected.norm() > 0.0) {
    if (auto theta = definite_candidate(assemble(basis, projected), tol); theta && accept(*theta)) {
      return result;
    }
  }

  // each basis direction of the space
  for (Eigen::Index k = 0; k < null_space.cols(); ++k) {
    if (auto theta = definite_candidate(assemble(basis, null_space.col(k)), tol);
        theta && accept(*theta)) {
      return result;
    }
  }

  if (result.solution_space_dim == 1) {
    result.status = SharedMetricStatus::NoSharedMetric;
    return result;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    RealVector weights(null_space.cols());
    for (Eigen::Index k = 0; k < weights.size(); ++k) weights(k) = gauss(rng);
    weights.normalize();
    if (auto theta = definite_candidate(assemble(basis, null_space * weights), tol);
        theta && accept(*theta)) {
      return result;
    }
  }

  result.status = SharedMetricStatus::Inconclusive;
  return result;
}

}  // namespace qhdyson
