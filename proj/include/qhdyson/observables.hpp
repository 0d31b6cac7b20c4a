#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "qhdyson/dyson.hpp"

namespace qhdyson {

/// A = Theta^{-1} M for a Hermitian generator M.
struct ObservableCandidate {
  ComplexMatrix a_matrix;
  ComplexMatrix m_matrix;
  double residual = 0.0;  // quasi-Hermiticity residual of A under Theta
};

enum class SharedMetricStatus { Found, NoSharedMetric, Inconclusive };

std::string_view to_string(SharedMetricStatus status) noexcept;

struct SharedMetricResult {
  SharedMetricStatus status = SharedMetricStatus::Inconclusive;
  std::optional<Metric> theta;
  int solution_space_dim = 0;
};

/// Throws NotHermitianGenerator when M is not Hermitian within residual_rel.
ObservableCandidate observable_from_M(const Metric& theta, const ComplexMatrix& m,
                                      const Tolerances& tol = {});

/// ||A^dagger Theta - Theta A|| / (||A|| ||Theta||).
double is_quasi_hermitian(const ComplexMatrix& a, const Metric& theta);

/// U K^dagger Omega_I A Omega_I^{-1} (K^dagger)^{-1} U^dagger, applied factor
/// by factor. Hermiticity of the result is not enforced.
ComplexMatrix avatar_of_observable(const ComplexMatrix& a, const DysonMap& map);

/// True when Omega_I A Omega_I^{-1} is diagonal (off-diagonal mass at most
/// residual_rel * ||A||). Requires an Omega_I map.
bool check_diagonal_center(const ComplexMatrix& a, const DysonMap& map_i,
                           const Tolerances& tol = {});

/// Searches for one Hermitian positive-definite Theta making both inputs
/// quasi-Hermitian at once. The random stage draws from a generator seeded
/// with `seed`; identical inputs give identical results.
SharedMetricResult shared_metric(const ComplexMatrix& h1, const ComplexMatrix& h2,
                                 const Tolerances& tol = {}, std::uint64_t seed = 0);

}  // namespace qhdyson
