#pragma once

// Test-only generators and independent oracles. Nothing here calls into the
// library's eigen/sqrt/polar paths.

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "qhdyson/linalg.hpp"

namespace qhtest {

using qhdyson::Complex;
using qhdyson::ComplexMatrix;
using qhdyson::ComplexVector;
using qhdyson::RealVector;

inline ComplexMatrix gaussian_matrix(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

// Haar-distributed unitary: QR of a complex Ginibre matrix with R's diagonal
// phases removed.
inline ComplexMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian_matrix(n, rng));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    q.col(k) *= d / std::abs(d);
  }
  return q;
}

inline ComplexMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const ComplexMatrix g = gaussian_matrix(n, rng);
  return 0.5 * (g + g.adjoint());
}

struct RandomQuasiHermitian {
  ComplexMatrix h;
  RealVector energies;   // ascending
  ComplexMatrix similarity;  // h = S diag(E) S^{-1}
};

// H = S diag(E) S^{-1} with S = U1 diag(s) U2, singular values s log-uniform
// in [0.5, 2] and energies spaced at least 0.2 apart.
inline RandomQuasiHermitian random_quasi_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> log_s(std::log(0.5), std::log(2.0));
  std::uniform_real_distribution<double> gap(0.2, 1.0);
  std::uniform_real_distribution<double> shift(-2.0, 0.0);

  RealVector s(n);
  for (Eigen::Index k = 0; k < n; ++k) s(k) = std::exp(log_s(rng));
  const ComplexMatrix similarity =
      random_unitary(n, rng) * s.cast<Complex>().asDiagonal() * random_unitary(n, rng);

  RealVector e(n);
  double level = shift(rng);
  for (Eigen::Index k = 0; k < n; ++k) {
    e(k) = level;
    level += gap(rng);
  }
  const ComplexMatrix h = similarity * e.cast<Complex>().asDiagonal() * similarity.inverse();
  return {h, e, similarity};
}

// Nonzero diagonal with magnitudes in [0.5, 2] and uniform phases.
inline ComplexVector random_k(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  ComplexVector k(n);
  for (Eigen::Index i = 0; i < n; ++i) k(i) = std::polar(mag(rng), phase(rng));
  return k;
}

// exp(A) by scaling and squaring with a 30-term Taylor series.
inline ComplexMatrix taylor_expm(const ComplexMatrix& a) {
  const double norm = a.norm();
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const ComplexMatrix scaled = a / std::ldexp(1.0, squarings);
  ComplexMatrix term = ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

// Polar factors from a singular value decomposition M = U S V^dagger:
// W = U V^dagger, P = V S V^dagger.
struct SvdPolar {
  ComplexMatrix w;
  ComplexMatrix p;
};

inline SvdPolar svd_polar(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const ComplexMatrix& u = svd.matrixU();
  const ComplexMatrix& v = svd.matrixV();
  return {u * v.adjoint(), v * svd.singularValues().cast<Complex>().asDiagonal() * v.adjoint()};
}

// Dimension of the real solution space of {Theta = Theta^dagger,
// A^dagger Theta = Theta A, B^dagger Theta = Theta B}, by enumerating the raw
// real parameters of Theta (real and imaginary parts of every entry) and
// taking the rank of the resulting real linear system with full-pivot LU.
inline int brute_force_metric_space_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index n = a.rows();
  const Eigen::Index params = 2 * n * n;
  const Eigen::Index eqs = 2 * n * n * 3;  // Hermiticity + two intertwining conditions
  Eigen::MatrixXd system(eqs, params);
  for (Eigen::Index p = 0; p < params; ++p) {
    ComplexMatrix t = ComplexMatrix::Zero(n, n);
    const Eigen::Index entry = p / 2;
    t(entry % n, entry / n) = (p % 2 == 0) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
    const ComplexMatrix herm = t - t.adjoint();
    const ComplexMatrix c1 = a.adjoint() * t - t * a;
    const ComplexMatrix c2 = b.adjoint() * t - t * b;
    Eigen::Index row = 0;
    for (const ComplexMatrix* c : {&herm, &c1, &c2}) {
      for (Eigen::Index i = 0; i < n * n; ++i) {
        const Complex z = (*c)(i % n, i / n);
        system(row++, p) = z.real();
        system(row++, p) = z.imag();
      }
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  lu.setThreshold(1e-10);
  return static_cast<int>(params - lu.rank());
}

}  // namespace qhtest
