#include "qhdyson/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace qhdyson {

namespace {

constexpr Complex kI{0.0, 1.0};

ComplexMatrix identity2() { return ComplexMatrix::Identity(2, 2); }

void require_finite_param(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::InvalidArgument, std::string(name) + " must be finite");
  }
}

}  // namespace

ComplexMatrix sigma_x() {
  ComplexMatrix s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

ComplexMatrix sigma_y() {
  ComplexMatrix s(2, 2);
  s << 0.0, -kI, kI, 0.0;
  return s;
}

ComplexMatrix sigma_z() {
  ComplexMatrix s(2, 2);
  s << 1.0, 0.0, 0.0, -1.0;
  return s;
}

DimerParams dimer_from_rapidity(double omega, double alpha) {
  require_finite_param(omega, "omega");
  require_finite_param(alpha, "alpha");
  if (!(omega > 0.0)) throw Error(ErrorKind::InvalidArgument, "omega must be positive");
  return {.omega = omega,
          .alpha = alpha,
          .kappa = omega * std::cosh(alpha),
          .gamma = omega * std::sinh(alpha)};
}

DimerParams dimer_from_coupling(double kappa, double gamma) {
  require_finite_param(kappa, "kappa");
  require_finite_param(gamma, "gamma");
  if (!(kappa > 0.0)) throw Error(ErrorKind::InvalidArgument, "kappa must be positive");
  if (std::abs(gamma) >= kappa) {
    throw Error(ErrorKind::EPRegion, "|gamma| >= kappa: spectrum is not real (exceptional point at "
                                     "|gamma| = kappa)");
  }
  return {.omega = std::sqrt((kappa - gamma) * (kappa + gamma)),
          .alpha = std::atanh(gamma / kappa),
          .kappa = kappa,
          .gamma = gamma};
}

ComplexMatrix dimer_hamiltonian(double kappa, double gamma) {
  return kappa * sigma_x() + kI * gamma * sigma_z();
}

DimerModel dimer_build(const DimerParams& p, const Tolerances& tol) {
  require_finite_param(p.omega, "omega");
  require_finite_param(p.alpha, "alpha");
  require_finite_param(p.kappa, "kappa");
  require_finite_param(p.gamma, "gamma");
  if (!(p.kappa > 0.0) || std::abs(p.gamma) >= p.kappa) {
    throw Error(ErrorKind::EPRegion, "dimer parameters must satisfy |gamma| < kappa");
  }
  if (!(p.omega > 0.0)) throw Error(ErrorKind::InvalidArgument, "omega must be positive");
  const double scale = p.kappa * p.kappa;
  if (std::abs(p.kappa * p.kappa - p.gamma * p.gamma - p.omega * p.omega) > tol.residual_rel * scale ||
      std::abs(std::tanh(p.alpha) - p.gamma / p.kappa) > tol.residual_rel) {
    throw Error(ErrorKind::InvalidArgument,
                "inconsistent dimer parameters: need kappa^2 - gamma^2 = omega^2 and "
                "tanh(alpha) = gamma/kappa");
  }

  const double half = 0.5 * p.alpha;
  DimerModel m;
  m.h = p.omega * sigma_x();
  m.omega = std::cosh(half) * identity2() + std::sinh(half) * sigma_y();
  m.omega_inv = std::cosh(half) * identity2() - std::sinh(half) * sigma_y();
  m.hamiltonian = dimer_hamiltonian(p.kappa, p.gamma);
  m.theta = std::cosh(p.alpha) * identity2() + std::sinh(p.alpha) * sigma_y();
  return m;
}

ConjugationResiduals bch_conjugation_check(double alpha) {
  require_finite_param(alpha, "alpha");
  const ComplexMatrix omega = herm_exp(sigma_y(), 0.5 * alpha);
  const ComplexMatrix omega_inv = herm_exp(sigma_y(), -0.5 * alpha);
  const double ch = std::cosh(alpha);
  const double sh = std::sinh(alpha);

  const ComplexMatrix rhs_x = ch * sigma_x() + kI * sh * sigma_z();
  const ComplexMatrix rhs_z = ch * sigma_z() - kI * sh * sigma_x();
  return {.residual_x = (omega_inv * sigma_x() * omega - rhs_x).norm() / rhs_x.norm(),
          .residual_z = (omega_inv * sigma_z() * omega - rhs_z).norm() / rhs_z.norm()};
}

EPScanReport ep_scan(double kappa, const std::vector<double>& gamma_grid, const Tolerances& tol) {
  require_finite_param(kappa, "kappa");
  if (!(kappa > 0.0)) throw Error(ErrorKind::InvalidArgument, "kappa must be positive");
  if (!std::is_sorted(gamma_grid.begin(), gamma_grid.end())) {
    throw Error(ErrorKind::InvalidArgument, "gamma grid must be sorted ascending");
  }

  EPScanReport report;
  report.parameter_grid = gamma_grid;
  for (double gamma : gamma_grid) {
    require_finite_param(gamma, "gamma");
    const ComplexMatrix h = dimer_hamiltonian(kappa, gamma);
    const EigenSystem eig = eig_general_unchecked(h);
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
      for (Eigen::Index j = i + 1; j < eig.eigenvalues.size(); ++j) {
        gap = std::min(gap, std::abs(eig.eigenvalues(i) - eig.eigenvalues(j)));
      }
    }
    report.min_gap.push_back(gap);
    report.eigvec_cond.push_back(eig.condition);
    report.is_ep.push_back(gap < 1e-6 * h.norm() && eig.condition > tol.defective_cond);
  }

  for (std::size_t i = 0; i < report.is_ep.size();) {
    if (!report.is_ep[i]) {
      ++i;
      continue;
    }
    std::size_t best = i;
    std::size_t j = i;
    for (; j < report.is_ep.size() && report.is_ep[j]; ++j) {
      if (report.min_gap[j] < report.min_gap[best]) best = j;
    }
    report.ep_locations.push_back(gamma_grid[best]);
    i = j;
  }
  return report;
}

FermionicParams fermionic_params(double alpha, double beta, double omega, const Tolerances& tol) {
  require_finite_param(alpha, "alpha");
  require_finite_param(beta, "beta");
  require_finite_param(omega, "omega");
  if (!(alpha * beta > 0.0)) {
    throw Error(ErrorKind::InvalidCoupling, "alpha * beta must be positive");
  }
  if (!(omega > 0.0 && omega < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "omega must lie in (0, 1)");
  }
  FermionicParams p{.alpha = alpha, .beta = beta, .omega = omega};
  p.sqrt_ab = std::sqrt(alpha * beta);
  p.det_D = 2.0 * alpha * beta - (alpha + beta) * p.sqrt_ab + 1.0;
  if (!(std::abs(p.det_D) > tol.positivity_rel)) {
    throw Error(ErrorKind::SingularDysonMap,
                "det(Omega^{-1}) = 2 alpha beta - (alpha + beta) sqrt(alpha beta) + 1 vanishes");
  }
  return p;
}

FermionicModel fermionic_build(const FermionicParams& p, const Tolerances& tol) {
  // re-validate; a hand-filled struct may be inconsistent
  const FermionicParams q = fermionic_params(p.alpha, p.beta, p.omega, tol);
  const double s = q.sqrt_ab;
  const double d = q.det_D;
  const double upper = q.alpha - s;  // Omega^{-1}_{14}
  const double lower = s - q.beta;   // Omega^{-1}_{41}

  FermionicModel m;
  m.hamiltonian = ComplexMatrix::Zero(4, 4);
  m.hamiltonian(0, 3) = q.alpha;
  m.hamiltonian(1, 1) = q.omega;
  m.hamiltonian(2, 2) = 1.0 - q.omega;
  m.hamiltonian(3, 0) = q.beta;
  m.hamiltonian(3, 3) = 1.0;

  m.h = m.hamiltonian;
  m.h(0, 3) = s;
  m.h(3, 0) = s;

  m.omega_inv = ComplexMatrix::Identity(4, 4);
  m.omega_inv(0, 3) = upper;
  m.omega_inv(3, 0) = lower;

  // inverse of the {1,4} block [[1, upper], [lower, 1]] with determinant d
  m.omega = ComplexMatrix::Identity(4, 4);
  m.omega(0, 0) = 1.0 / d;
  m.omega(0, 3) = -upper / d;
  m.omega(3, 0) = -lower / d;
  m.omega(3, 3) = 1.0 / d;

  const double d2 = d * d;
  m.theta = ComplexMatrix::Identity(4, 4);
  m.theta(0, 0) = ((q.beta - s) * (q.beta - s) + 1.0) / d2;
  m.theta(0, 3) = (q.beta - q.alpha) / d2;
  m.theta(3, 0) = (q.beta - q.alpha) / d2;
  m.theta(3, 3) = ((q.alpha - s) * (q.alpha - s) + 1.0) / d2;
  return m;
}

FermionOperators fermion_operators() {
  // basis index -> occupations (n1, n2), with |n1 n2> = (c1^+)^n1 (c2^+)^n2 |0>
  constexpr std::array<std::array<int, 2>, 4> occupations{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
  auto index_of = [&](std::array<int, 2> occ) {
    for (Eigen::Index i = 0; i < 4; ++i) {
      if (occupations[static_cast<std::size_t>(i)] == occ) return i;
    }
    return Eigen::Index{-1};
  };

  auto creation = [&](std::size_t mode) {
    ComplexMatrix c = ComplexMatrix::Zero(4, 4);
    for (Eigen::Index src = 0; src < 4; ++src) {
      std::array<int, 2> occ = occupations[static_cast<std::size_t>(src)];
      if (occ[mode] == 1) continue;
      // anticommute past the operators of lower modes
      int passed = 0;
      for (std::size_t m = 0; m < mode; ++m) passed += occ[m];
      occ[mode] = 1;
      c(index_of(occ), src) = (passed % 2 == 0) ? 1.0 : -1.0;
    }
    return c;
  };

  return {.c1 = creation(0).adjoint(), .c2 = creation(1).adjoint()};
}

ComplexMatrix fermionic_from_fock(const FermionicParams& p, const Tolerances& tol) {
  const FermionicParams q = fermionic_params(p.alpha, p.beta, p.omega, tol);
  const FermionOperators ops = fermion_operators();
  const ComplexMatrix c1_dag = ops.c1.adjoint();
  const ComplexMatrix c2_dag = ops.c2.adjoint();
  return q.omega * c1_dag * ops.c1 + (1.0 - q.omega) * c2_dag * ops.c2 +
         q.beta * c1_dag * c2_dag + q.alpha * ops.c2 * ops.c1;
}

}  // namespace qhdyson
