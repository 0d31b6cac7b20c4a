#include "qhdyson/dyson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qhdyson {

std::string_view to_string(DysonFamily family) noexcept {
  switch (family) {
    case DysonFamily::I: return "I";
    case DysonFamily::K: return "K";
    case DysonFamily::KU: return "KU";
  }
  return "?";
}

namespace {

void require_same_dimension(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": dimensions differ");
  }
}

double relative(double numerator, double denominator) {
  return denominator > 0.0 ? numerator / denominator : numerator;
}

}  // namespace

BiorthogonalSystem solve_schrodinger_pair(const ComplexMatrix& h, const Tolerances& tol) {
  tol.validate();
  EigenSystem eig = eig_general(h, tol);

  const double bound = tol.reality_rel * h.norm();
  for (Eigen::Index n = 0; n < eig.eigenvalues.size(); ++n) {
    const double im = eig.eigenvalues(n).imag();
    if (std::abs(im) > bound) {
      throw Error(ErrorKind::ComplexSpectrum,
                  "eigenvalue " + std::to_string(n) + " has imaginary part " + std::to_string(im));
    }
  }

  BiorthogonalSystem sys;
  sys.energies = eig.eigenvalues.real();
  sys.right_kets = std::move(eig.right);
  sys.left_kets = std::move(eig.left);
  return sys;
}

DysonMap build_omega_I(const BiorthogonalSystem& sys) {
  DysonMap map;
  map.omega = sys.left_kets.adjoint();
  map.omega_inv = sys.right_kets;
  map.family = DysonFamily::I;
  map.base_omega = map.omega;
  map.base_omega_inv = map.omega_inv;
  return map;
}

DysonMap build_omega_K(const DysonMap& base, const ComplexVector& k, const Tolerances& tol) {
  if (base.family != DysonFamily::I) {
    throw Error(ErrorKind::InvalidArgument, "K rescaling applies to an Omega_I map only");
  }
  if (k.size() != base.omega.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "K diagonal has " + std::to_string(k.size()) +
                                                  " entries, map has dimension " +
                                                  std::to_string(base.omega.rows()));
  }
  for (Eigen::Index n = 0; n < k.size(); ++n) {
    if (!(std::abs(k(n)) > tol.positivity_rel)) {
      throw Error(ErrorKind::SingularScaling, "K entry " + std::to_string(n) + " vanishes");
    }
  }

  const ComplexVector k_adj = k.conjugate();
  DysonMap map = base;
  map.omega = k_adj.asDiagonal() * base.omega;
  map.omega_inv = base.omega_inv * k_adj.cwiseInverse().asDiagonal();
  map.family = DysonFamily::K;
  map.k_diag = k;
  return map;
}

DysonMap build_omega_KU(const DysonMap& base, const ComplexMatrix& u, const Tolerances& tol) {
  if (base.family == DysonFamily::KU) {
    throw Error(ErrorKind::InvalidArgument, "base map is already rotated");
  }
  require_same_dimension(base.omega, u, "unitary factor");
  const Eigen::Index n = u.rows();
  const double defect = (u.adjoint() * u - ComplexMatrix::Identity(n, n)).norm();
  if (defect > tol.residual_rel) {
    throw Error(ErrorKind::NotUnitary, "||U^dagger U - I|| = " + std::to_string(defect));
  }

  DysonMap map = base;
  map.omega = u * base.omega;
  map.omega_inv = base.omega_inv * u.adjoint();
  map.family = DysonFamily::KU;
  map.u_matrix = u;
  return map;
}

Metric make_metric(const ComplexMatrix& theta, const Tolerances& tol) {
  const HermitianRoot root = herm_sqrt_certified(theta, tol);
  Metric metric;
  metric.theta = theta;
  metric.sqrt_theta = root.root;
  metric.min_eigenvalue = root.min_eigenvalue;
  metric.max_eigenvalue = root.max_eigenvalue;
  return metric;
}

Metric metric_of(const DysonMap& map, const Tolerances& tol) {
  ComplexMatrix theta = map.omega.adjoint() * map.omega;
  // exact Hermitian up to rounding; drop the rounding
  theta = 0.5 * (theta + theta.adjoint()).eval();
  return make_metric(theta, tol);
}

ComplexMatrix hermitian_avatar(const ComplexMatrix& h, const DysonMap& map, const Tolerances& tol) {
  require_same_dimension(h, map.omega, "Hamiltonian and Dyson map");
  ComplexMatrix avatar = map.omega * h * map.omega_inv;
  const double defect = hermiticity_defect(avatar);
  if (defect > tol.residual_rel * avatar.norm()) {
    throw Error(ErrorKind::AvatarNotHermitian,
                "Omega H Omega^{-1} has Hermiticity defect " + std::to_string(defect));
  }
  return avatar;
}

double quasi_hermiticity_residual(const ComplexMatrix& h, const Metric& metric) {
  require_same_dimension(h, metric.theta, "Hamiltonian and metric");
  const double defect = (h.adjoint() * metric.theta - metric.theta * h).norm();
  return relative(defect, h.norm() * metric.theta.norm());
}

HermitianDyson hermitian_dyson(const DysonMap& map, const Tolerances& tol) {
  const PolarFactors polar = polar_decompose(map.omega, tol);
  HermitianDyson out;
  out.u = polar.unitary.adjoint();
  out.omega_herm = out.u * map.omega;
  return out;
}

Complex phys_inner(const Metric& metric, const ComplexVector& psi, const ComplexVector& phi) {
  if (psi.size() != metric.dimension() || phi.size() != metric.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "state and metric dimensions differ");
  }
  return psi.dot(metric.theta * phi);
}

std::vector<ComplexVector> propagate(const ComplexMatrix& h, const ComplexVector& psi0,
                                     const std::vector<double>& times, const Tolerances& tol) {
  if (psi0.size() != h.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "initial state and Hamiltonian dimensions differ");
  }
  const EigenSystem eig = eig_general(h, tol);
  const ComplexVector coefficients = eig.left.adjoint() * psi0;

  std::vector<ComplexVector> states;
  states.reserve(times.size());
  for (double t : times) {
    ComplexVector phases(coefficients.size());
    for (Eigen::Index n = 0; n < phases.size(); ++n) {
      phases(n) = std::exp(Complex(0.0, -t) * eig.eigenvalues(n)) * coefficients(n);
    }
    states.push_back(eig.right * phases);
  }
  return states;
}

std::vector<double> evolve_norm_check(const ComplexMatrix& h, const Metric& metric,
                                      const ComplexVector& psi0, const std::vector<double>& times,
                                      const Tolerances& tol) {
  const double residual = quasi_hermiticity_residual(h, metric);
  if (residual > tol.residual_rel) {
    throw Error(ErrorKind::NotQuasiHermitian,
                "H^dagger Theta != Theta H (relative residual " + std::to_string(residual) + ")");
  }
  std::vector<double> norms;
  norms.reserve(times.size());
  for (const ComplexVector& psi : propagate(h, psi0, times, tol)) {
    norms.push_back(phys_inner(metric, psi, psi).real());
  }
  return norms;
}

HermitizationResult hermitize(const ComplexMatrix& h, const HermitizeOptions& options) {
  const Tolerances& tol = options.tol;
  const BiorthogonalSystem sys = solve_schrodinger_pair(h, tol);

  DysonMap map = build_omega_I(sys);
  if (options.k_diag) map = build_omega_K(map, *options.k_diag, tol);
  if (options.hermitian_omega) map = build_omega_KU(map, hermitian_dyson(map, tol).u, tol);

  HermitizationResult out{.report = {}, .map = map, .metric = metric_of(map, tol),
                          .avatar = hermitian_avatar(h, map, tol)};

  HermitizationReport& report = out.report;
  report.energies.assign(sys.energies.data(), sys.energies.data() + sys.energies.size());
  report.family = map.family;
  report.residual_quasi_herm = quasi_hermiticity_residual(h, out.metric);
  report.residual_avatar_herm = relative(hermiticity_defect(out.avatar), out.avatar.norm());

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> avatar_spectrum(
      0.5 * (out.avatar + out.avatar.adjoint()), Eigen::EigenvaluesOnly);
  const RealVector& twin = avatar_spectrum.eigenvalues();
  double worst = 0.0;
  for (Eigen::Index n = 0; n < twin.size(); ++n) {
    worst = std::max(worst, std::abs(twin(n) - sys.energies(n)));
  }
  report.residual_isospectral = relative(worst, h.norm());
  report.metric_condition = out.metric.condition();
  report.passed = report.residual_quasi_herm <= tol.residual_rel &&
                  report.residual_avatar_herm <= tol.residual_rel &&
                  report.residual_isospectral <= tol.reality_rel;
  return out;
}

}  // namespace qhdyson
