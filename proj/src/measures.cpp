#include "probent/measures.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace probent {

DensityMatrix2 DensityMatrix2::from_matrix(const CMatrix& m, double tolerance) {
  if (m.rows() != 4 || m.cols() != 4) throw MeasureError("two-qubit density matrix must be 4x4");
  if (!m.allFinite()) throw MeasureError("density matrix entries must be finite");
  const double herm = hermiticity_defect(m);
  if (herm > tolerance) {
    std::ostringstream msg;
    msg << "density matrix is not Hermitian (defect " << herm << ")";
    throw MeasureError(msg.str());
  }
  const cplx tr = m.trace();
  if (std::abs(tr - 1.0) > tolerance) {
    std::ostringstream msg;
    msg << "density matrix trace is " << tr << ", expected 1";
    throw MeasureError(msg.str());
  }
  const CMatrix h = 0.5 * (m + m.adjoint());
  const double min_eig = hermitian_eig(h).values.minCoeff();
  if (min_eig < -tolerance) {
    std::ostringstream msg;
    msg << "density matrix is not positive semidefinite (eigenvalue " << min_eig << ")";
    throw MeasureError(msg.str());
  }
  return DensityMatrix2(h);
}

DensityMatrix2 DensityMatrix2::from_pure(const CVector& pair_state) {
  if (pair_state.size() != 4) throw MeasureError("two-qubit pure state needs 4 amplitudes");
  return from_matrix(pair_state * pair_state.adjoint());
}

double DensityMatrix2::purity() const { return (m_ * m_).trace().real(); }

DensityMatrix2 reduced_pair(const PureState3& psi, int traced_qubit) {
  return DensityMatrix2::from_matrix(partial_trace_qubit(psi.density(), traced_qubit));
}

CMatrix reduced_single(const PureState3& psi, int qubit) {
  if (qubit < 1 || qubit > 3) throw MeasureError("qubit index must be in 1..3");
  // Trace a neighbour, then the remaining partner.
  if (qubit == 3) return partial_trace_pair(partial_trace_qubit(psi.density(), 1), 1);
  const CMatrix pair = partial_trace_qubit(psi.density(), 3);
  return partial_trace_pair(pair, qubit == 1 ? 2 : 1);
}

CMatrix spin_flip(const CMatrix& rho) {
  const CMatrix yy = kron(pauli(2), pauli(2));
  return yy * rho.conjugate() * yy;
}

std::array<double, 4> wootters_lambdas(const DensityMatrix2& rho) {
  // lambda_i^2 are the eigenvalues of sqrt(rho) rho~ sqrt(rho) = N N^dag with
  // N = sqrt(rho) (sy x sy) sqrt(rho)^*, so the lambdas are the singular
  // values of N. This avoids square roots of near-zero eigenvalues.
  const Eigensystem es = hermitian_eig(rho.matrix());
  Eigen::VectorXd roots(4);
  for (int k = 0; k < 4; ++k) roots(k) = std::sqrt(std::max(0.0, es.values(k)));
  const CMatrix sqrt_rho = es.vectors * roots.cast<cplx>().asDiagonal() * es.vectors.adjoint();
  const CMatrix yy = kron(pauli(2), pauli(2));
  const CMatrix n = sqrt_rho * yy * sqrt_rho.conjugate();
  Eigen::JacobiSVD<CMatrix> svd(n);
  const Eigen::VectorXd sv = svd.singularValues();  // descending
  return {sv(0), sv(1), sv(2), sv(3)};
}

double concurrence(const DensityMatrix2& rho) {
  const auto l = wootters_lambdas(rho);
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

double tangle(const DensityMatrix2& rho) {
  const double c = concurrence(rho);
  return c * c;
}

double pure_state_tangle(const CVector& pair_state) {
  if (pair_state.size() != 4) throw MeasureError("two-qubit pure state needs 4 amplitudes");
  const double c = 2.0 * std::abs(pair_state(0) * pair_state(3) - pair_state(1) * pair_state(2));
  return c * c;
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double eof_from_tangle(double tau) {
  if (!(tau >= -tol::physics && tau <= 1.0 + tol::physics)) {
    std::ostringstream msg;
    msg << "tangle " << tau << " outside [0, 1]";
    throw MeasureError(msg.str());
  }
  const double clipped = std::clamp(tau, 0.0, 1.0);
  return binary_entropy(0.5 + 0.5 * std::sqrt(1.0 - clipped));
}

double residual_tangle_lambda(const PureState3& psi) {
  const auto l12 = wootters_lambdas(reduced_pair(psi, 3));
  const auto l13 = wootters_lambdas(reduced_pair(psi, 2));
  return 2.0 * (l12[0] * l12[1] + l13[0] * l13[1]);
}

HyperdeterminantTerms hyperdeterminant_terms(const PureState3& psi) {
  auto a = [&](int bits) { return psi[bits]; };
  HyperdeterminantTerms d;
  d.d1 = a(0b000) * a(0b000) * a(0b111) * a(0b111) + a(0b001) * a(0b001) * a(0b110) * a(0b110) +
         a(0b010) * a(0b010) * a(0b101) * a(0b101) + a(0b100) * a(0b100) * a(0b011) * a(0b011);
  d.d2 = a(0b000) * a(0b111) * a(0b011) * a(0b100) + a(0b000) * a(0b111) * a(0b101) * a(0b010) +
         a(0b000) * a(0b111) * a(0b110) * a(0b001) + a(0b011) * a(0b100) * a(0b101) * a(0b010) +
         a(0b011) * a(0b100) * a(0b110) * a(0b001) + a(0b101) * a(0b010) * a(0b110) * a(0b001);
  d.d3 = a(0b000) * a(0b110) * a(0b101) * a(0b011) + a(0b111) * a(0b001) * a(0b010) * a(0b100);
  return d;
}

double residual_tangle_poly(const PureState3& psi) {
  const auto d = hyperdeterminant_terms(psi);
  return 4.0 * std::abs(d.d1 - 2.0 * d.d2 + 4.0 * d.d3);
}

double residual_tangle_ckw_oracle(const PureState3& psi) {
  const CMatrix rho1 = reduced_single(psi, 1);
  const double det = (rho1(0, 0) * rho1(1, 1) - rho1(0, 1) * rho1(1, 0)).real();
  return 4.0 * det - tangle(reduced_pair(psi, 3)) - tangle(reduced_pair(psi, 2));
}

EntanglementReport report(const PureState3& psi) {
  const DensityMatrix2 rho12 = reduced_pair(psi, 3);
  EntanglementReport r;
  r.concurrence_12 = concurrence(rho12);
  r.tangle_12 = r.concurrence_12 * r.concurrence_12;
  r.eof_12 = eof_from_tangle(r.tangle_12);
  r.residual_tangle = residual_tangle_lambda(psi);
  r.purity_12 = rho12.purity();
  return r;
}

}  // namespace probent
