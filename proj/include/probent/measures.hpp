#pragma once

// Entanglement quantifiers for three-qubit pure states and their two-qubit
// marginals: Wootters concurrence and tangle, entanglement of formation, and
// the residual three-tangle through three independent routes.

#include "probent/linalg.hpp"
#include "probent/states.hpp"

#include <array>
#include <stdexcept>

namespace probent {

class MeasureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// 4x4 Hermitian, positive semidefinite, unit-trace operator on two qubits.
class DensityMatrix2 {
 public:
  /// Validates Hermiticity, trace and positivity within `tolerance`.
  static DensityMatrix2 from_matrix(const CMatrix& m, double tolerance = tol::spectral);
  static DensityMatrix2 from_pure(const CVector& pair_state);

  const CMatrix& matrix() const { return m_; }
  double purity() const;

 private:
  explicit DensityMatrix2(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

/// Two-qubit marginal obtained by tracing out `traced_qubit` (1..3).
DensityMatrix2 reduced_pair(const PureState3& psi, int traced_qubit);

/// Single-qubit marginal of `qubit` (1..3) as a 2x2 matrix.
CMatrix reduced_single(const PureState3& psi, int qubit);

/// (sy (x) sy) rho^* (sy (x) sy)
CMatrix spin_flip(const CMatrix& rho);

/// Square roots of the eigenvalues of rho rho~, descending.
std::array<double, 4> wootters_lambdas(const DensityMatrix2& rho);

double concurrence(const DensityMatrix2& rho);
double tangle(const DensityMatrix2& rho);

/// 4|a00 a11 - a01 a10|^2 for a normalized pure two-qubit state.
double pure_state_tangle(const CVector& pair_state);

/// h(x) = -x log2 x - (1-x) log2 (1-x), with h(0) = h(1) = 0.
double binary_entropy(double x);
double eof_from_tangle(double tau);

/// 2 (l1 l2 of rho_12 + l1 l2 of rho_13).
double residual_tangle_lambda(const PureState3& psi);

struct HyperdeterminantTerms {
  cplx d1;
  cplx d2;
  cplx d3;
};

HyperdeterminantTerms hyperdeterminant_terms(const PureState3& psi);

/// 4 |d1 - 2 d2 + 4 d3| from logical-basis amplitudes.
double residual_tangle_poly(const PureState3& psi);

/// 4 det(rho_1) - tau_12 - tau_13.
double residual_tangle_ckw_oracle(const PureState3& psi);

struct EntanglementReport {
  double tangle_12 = 0.0;
  double concurrence_12 = 0.0;
  double eof_12 = 0.0;
  double residual_tangle = 0.0;
  double purity_12 = 1.0;
};

EntanglementReport report(const PureState3& psi);

}  // namespace probent
