#include <doctest.h>

#include <cmath>
#include <random>

#include "qhdyson/models.hpp"
#include "qhdyson/observables.hpp"
#include "support.hpp"

using namespace qhdyson;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected qhdyson::Error");
  return ErrorKind::InvalidArgument;
}

const ComplexMatrix kDimer = dimer_hamiltonian(1.25, 0.75);

Metric dimer_metric() { return make_metric(dimer_build(dimer_from_rapidity(1.0, std::log(2.0))).theta); }

}  // namespace

TEST_CASE("observable_from_M") {
  const Metric theta = dimer_metric();
  SUBCASE("M = Theta gives the identity") {
    const ObservableCandidate c = observable_from_M(theta, theta.theta);
    CHECK((c.a_matrix - ComplexMatrix::Identity(2, 2)).norm() < 1e-14);
  }
  SUBCASE("M = sigma_z: quasi-Hermitian with spectrum of Theta^{-1/2} sigma_z Theta^{-1/2}") {
    const ObservableCandidate c = observable_from_M(theta, sigma_z());
    CHECK(c.residual <= 1e-12);
    // oracle: Theta^{-1/2} from Eigen's own routine, spectrum of the Hermitian sandwich
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(theta.theta);
    const ComplexMatrix inv_root = es.operatorInverseSqrt();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> sandwich(inv_root * sigma_z() * inv_root);
    Eigen::ComplexEigenSolver<ComplexMatrix> direct(c.a_matrix);
    std::vector<double> got{direct.eigenvalues()(0).real(), direct.eigenvalues()(1).real()};
    std::sort(got.begin(), got.end());
    CHECK(got[0] == doctest::Approx(sandwich.eigenvalues()(0)).epsilon(1e-12));
    CHECK(got[1] == doctest::Approx(sandwich.eigenvalues()(1)).epsilon(1e-12));
    CHECK(std::abs(direct.eigenvalues()(0).imag()) < 1e-12);
    // sigma_y anticommutes with sigma_z, so the sandwich collapses to sigma_z itself
    CHECK(got[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(got[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("non-Hermitian generator") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK(kind_of([&] { observable_from_M(theta, m); }) == ErrorKind::NotHermitianGenerator);
  }
  SUBCASE("random generators and random metrics") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Index n = 2 + trial % 5;
      const auto sample = qhtest::random_quasi_hermitian(n, rng);
      const Metric t = metric_of(build_omega_I(solve_schrodinger_pair(sample.h)));
      const ObservableCandidate c = observable_from_M(t, qhtest::random_hermitian(n, rng));
      CHECK(c.residual <= 1e-10);
      Eigen::ComplexEigenSolver<ComplexMatrix> es(c.a_matrix);
      const double scale = c.a_matrix.norm();
      for (Eigen::Index k = 0; k < n; ++k) CHECK(std::abs(es.eigenvalues()(k).imag()) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("is_quasi_hermitian") {
  const Metric theta = dimer_metric();
  CHECK(is_quasi_hermitian(ComplexMatrix::Identity(2, 2), theta) == 0.0);
  CHECK(is_quasi_hermitian(kDimer, theta) <= 1e-12);
  // [sigma_z, Theta] = -2i sinh(alpha) sigma_x, ||.|| = 2 sqrt(2) * 0.75; ||sigma_z|| = sqrt(2);
  // ||Theta|| = sqrt(2 * 1.25^2 + 2 * 0.75^2) = sqrt(4.25)
  const double expected = 1.5 / std::sqrt(4.25);
  CHECK(is_quasi_hermitian(sigma_z(), theta) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(is_quasi_hermitian(sigma_z(), theta) > 0.1);
}

TEST_CASE("avatar_of_observable") {
  std::mt19937_64 rng(41);
  const DysonMap mi = build_omega_I(solve_schrodinger_pair(kDimer));
  const DysonMap mk = build_omega_K(mi, qhtest::random_k(2, rng));
  const DysonMap mku = build_omega_KU(mk, qhtest::random_unitary(2, rng));
  SUBCASE("A = H reproduces the Hamiltonian avatar") {
    for (const DysonMap* map : {&mi, &mk, &mku}) {
      CHECK((avatar_of_observable(kDimer, *map) - hermitian_avatar(kDimer, *map)).norm() < 1e-12);
    }
  }
  SUBCASE("identity stays identity") {
    for (const DysonMap* map : {&mi, &mk, &mku}) {
      CHECK((avatar_of_observable(ComplexMatrix::Identity(2, 2), *map) -
             ComplexMatrix::Identity(2, 2)).norm() < 1e-13);
    }
  }
  SUBCASE("factored form equals Omega A Omega^{-1}") {
    const ComplexMatrix a = qhtest::gaussian_matrix(2, rng);
    CHECK((avatar_of_observable(a, mku) - mku.omega * a * mku.omega_inv).norm() < 1e-12 * a.norm());
  }
  SUBCASE("Theta^{-1} sigma_z under Omega_I is Hermitian") {
    const Metric theta_i = metric_of(mi);
    const ObservableCandidate c = observable_from_M(theta_i, sigma_z());
    const ComplexMatrix avatar = avatar_of_observable(c.a_matrix, mi);
    CHECK(hermiticity_defect(avatar) <= 1e-12 * avatar.norm());
  }
}

TEST_CASE("check_diagonal_center") {
  std::mt19937_64 rng(51);
  const auto sample = qhtest::random_quasi_hermitian(5, rng);
  const DysonMap mi = build_omega_I(solve_schrodinger_pair(sample.h));
  CHECK(check_diagonal_center(sample.h, mi));
  CHECK(check_diagonal_center(sample.h * sample.h + 3.0 * sample.h, mi));
  CHECK_FALSE(check_diagonal_center(qhtest::gaussian_matrix(5, rng), mi));

  // a diagonal center survives every K
  const ComplexMatrix poly = sample.h * sample.h - sample.h;
  for (int trial = 0; trial < 10; ++trial) {
    const DysonMap mk = build_omega_K(mi, qhtest::random_k(5, rng));
    CHECK(off_diagonal_norm(avatar_of_observable(poly, mk)) <= 1e-10 * poly.norm());
  }

  const DysonMap mk = build_omega_K(mi, qhtest::random_k(5, rng));
  CHECK(kind_of([&] { check_diagonal_center(sample.h, mk); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("shared_metric") {
  SUBCASE("two Hermitian matrices share the identity") {
    const SharedMetricResult r = shared_metric(sigma_x(), sigma_z());
    REQUIRE(r.status == SharedMetricStatus::Found);
    CHECK((r.theta->theta - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
    CHECK(r.solution_space_dim == qhtest::brute_force_metric_space_dim(sigma_x(), sigma_z()));
  }
  SUBCASE("dimer with itself") {
    const SharedMetricResult r = shared_metric(kDimer, kDimer);
    REQUIRE(r.status == SharedMetricStatus::Found);
    CHECK(r.solution_space_dim >= 2);
    CHECK(r.solution_space_dim == qhtest::brute_force_metric_space_dim(kDimer, kDimer));
    CHECK(quasi_hermiticity_residual(kDimer, *r.theta) <= 1e-10);
    CHECK(r.theta->min_eigenvalue > 0.0);
  }
  SUBCASE("dimer against sigma_z has no common metric") {
    CHECK(qhtest::brute_force_metric_space_dim(kDimer, sigma_z()) == 0);
    const SharedMetricResult r = shared_metric(kDimer, sigma_z());
    CHECK(r.status == SharedMetricStatus::NoSharedMetric);
    CHECK(r.solution_space_dim == 0);
    CHECK_FALSE(r.theta.has_value());
  }
  SUBCASE("one-dimensional space spanned by an indefinite sigma_z") {
    // sigma_z forces Theta diagonal; the rotation generator then forces Theta ~ sigma_z
    ComplexMatrix rot(2, 2);
    rot << 0.0, 1.0, -1.0, 0.0;
    const SharedMetricResult r = shared_metric(sigma_z(), rot);
    CHECK(r.solution_space_dim == 1);
    CHECK(qhtest::brute_force_metric_space_dim(sigma_z(), rot) == 1);
    CHECK(r.status == SharedMetricStatus::NoSharedMetric);
  }
  SUBCASE("self-compatibility of random quasi-Hermitian matrices") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::Index n = 2 + trial % 4;
      const auto sample = qhtest::random_quasi_hermitian(n, rng);
      const SharedMetricResult r = shared_metric(sample.h, sample.h);
      REQUIRE(r.status == SharedMetricStatus::Found);
      CHECK(r.solution_space_dim == n);
      CHECK(r.solution_space_dim == qhtest::brute_force_metric_space_dim(sample.h, sample.h));
      CHECK(quasi_hermiticity_residual(sample.h, *r.theta) <= 1e-10);
      // the found metric lies in the Theta_K family: diagonal in the left-ket basis
      const BiorthogonalSystem sys = solve_schrodinger_pair(sample.h);
      const ComplexMatrix k_form = sys.right_kets.adjoint() * r.theta->theta * sys.right_kets;
      CHECK(off_diagonal_norm(k_form) <= 1e-9 * k_form.norm());
      for (Eigen::Index i = 0; i < n; ++i) CHECK(k_form(i, i).real() > 0.0);
    }
  }
  SUBCASE("a non-Hermitian partner built from the same metric") {
    std::mt19937_64 rng(71);
    const auto sample = qhtest::random_quasi_hermitian(3, rng);
    const Metric t = metric_of(build_omega_I(solve_schrodinger_pair(sample.h)));
    const ObservableCandidate partner = observable_from_M(t, qhtest::random_hermitian(3, rng));
    const SharedMetricResult r = shared_metric(sample.h, partner.a_matrix);
    REQUIRE(r.status == SharedMetricStatus::Found);
    CHECK(quasi_hermiticity_residual(partner.a_matrix, *r.theta) <= 1e-10);
  }
  SUBCASE("same seed, same answer") {
    std::mt19937_64 rng(81);
    const auto sample = qhtest::random_quasi_hermitian(4, rng);
    const SharedMetricResult a = shared_metric(sample.h, sample.h, {}, 7);
    const SharedMetricResult b = shared_metric(sample.h, sample.h, {}, 7);
    REQUIRE(a.theta.has_value());
    CHECK((a.theta->theta - b.theta->theta).norm() == 0.0);
  }
  SUBCASE("dimension mismatch") {
    CHECK(kind_of([] { shared_metric(sigma_x(), ComplexMatrix::Identity(3, 3)); }) ==
          ErrorKind::DimensionMismatch);
  }
}
