#pragma once

// Brute-force reference implementations, written independently of the
// library code paths they check.

#include "probent/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <complex>
#include <array>
#include <cmath>
#include <random>

namespace oracle {

using probent::cplx;
using probent::CMatrix;
using probent::CVector;

inline CMatrix sigma(int k) {
  CMatrix s(2, 2);
  switch (k) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: s << 1, 0, 0, 1; break;
  }
  return s;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline CMatrix kron3(const CMatrix& a, const CMatrix& b, const CMatrix& c) {
  return kron(kron(a, b), c);
}

inline int bit(int index, int qubit) { return (index >> (3 - qubit)) & 1; }

// Reduced density matrix of the two qubits other than `traced`, by summing
// |psi><psi| over the traced index.
inline CMatrix reduce(const CVector& psi, int traced) {
  CMatrix r = CMatrix::Zero(4, 4);
  auto keep_index = [&](int idx) {
    int out = 0;
    for (int q = 1; q <= 3; ++q) {
      if (q == traced) continue;
      out = 2 * out + bit(idx, q);
    }
    return out;
  };
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y)
      if (bit(x, traced) == bit(y, traced)) r(keep_index(x), keep_index(y)) += psi(x) * std::conj(psi(y));
  return r;
}

// Concurrence from the eigenvalues of rho (sy sy) rho^* (sy sy), a
// non-Hermitian product.
inline double concurrence(const CMatrix& rho) {
  const CMatrix yy = kron(sigma(2), sigma(2));
  const CMatrix r = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<CMatrix> es(r);
  std::array<double, 4> l{};
  for (int k = 0; k < 4; ++k) l[k] = std::sqrt(std::max(0.0, es.eigenvalues()(k).real()));
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

// Same procedure in extended precision, for rank-deficient states where the
// square roots of near-zero eigenvalues would dominate the error.
inline double concurrence_ld(const CMatrix& rho) {
  using lcplx = std::complex<long double>;
  using LMatrix = Eigen::Matrix<lcplx, 4, 4>;
  const LMatrix r = rho.cast<lcplx>();
  const LMatrix yy = kron(sigma(2), sigma(2)).cast<lcplx>();
  const LMatrix prod = r * yy * r.conjugate() * yy;
  Eigen::ComplexEigenSolver<LMatrix> es(prod);
  std::array<long double, 4> l{};
  for (int k = 0; k < 4; ++k) l[k] = std::sqrt(std::max(0.0L, es.eigenvalues()(k).real()));
  std::sort(l.begin(), l.end(), std::greater<>());
  return static_cast<double>(std::max(0.0L, l[0] - l[1] - l[2] - l[3]));
}

inline double tangle(const CMatrix& rho) {
  const double c = concurrence(rho);
  return c * c;
}

// 4 |Cayley hyperdeterminant|
inline double three_tangle(const CVector& psi) {
  auto a = [&](int i, int j, int k) { return psi(4 * i + 2 * j + k); };
  const cplx det =
      a(0, 0, 0) * a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 1) + a(0, 0, 1) * a(0, 0, 1) * a(1, 1, 0) * a(1, 1, 0) +
      a(0, 1, 0) * a(0, 1, 0) * a(1, 0, 1) * a(1, 0, 1) + a(1, 0, 0) * a(1, 0, 0) * a(0, 1, 1) * a(0, 1, 1) -
      2.0 * (a(0, 0, 0) * a(1, 1, 1) * a(0, 1, 1) * a(1, 0, 0) + a(0, 0, 0) * a(1, 1, 1) * a(1, 0, 1) * a(0, 1, 0) +
             a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 0) * a(0, 0, 1) + a(0, 1, 1) * a(1, 0, 0) * a(1, 0, 1) * a(0, 1, 0) +
             a(0, 1, 1) * a(1, 0, 0) * a(1, 1, 0) * a(0, 0, 1) + a(1, 0, 1) * a(0, 1, 0) * a(1, 1, 0) * a(0, 0, 1)) +
      4.0 * (a(0, 0, 0) * a(1, 1, 0) * a(1, 0, 1) * a(0, 1, 1) + a(1, 1, 1) * a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 0));
  return 4.0 * std::abs(det);
}

// exp(-i h t) by scaling and squaring (Pade), no eigendecomposition.
inline CMatrix expm(const CMatrix& h, double t) {
  const CMatrix arg = (cplx(0, -t) * h).eval();
  return arg.exp();
}

// sum_ij c_ij s_i (x) s_j on qubits (q, 3) plus local fields.
inline CMatrix pair_matrix(const Eigen::Matrix3d& c, const Eigen::Vector3d& self,
                           const Eigen::Vector3d& probe, int q) {
  const CMatrix id = sigma(0);
  CMatrix h = CMatrix::Zero(8, 8);
  for (int i = 0; i < 3; ++i) {
    const CMatrix si = sigma(i + 1);
    const CMatrix s1 = q == 1 ? kron3(si, id, id) : kron3(id, si, id);
    h += self(i) * s1 + probe(i) * kron3(id, id, sigma(i + 1));
    for (int j = 0; j < 3; ++j) {
      const CMatrix sj = sigma(j + 1);
      h += c(i, j) * (q == 1 ? kron3(si, id, sj) : kron3(id, si, sj));
    }
  }
  return h;
}

inline CVector random_state(std::mt19937_64& rng, int dim = 8) {
  std::normal_distribution<double> n;
  CVector v(dim);
  for (int k = 0; k < dim; ++k) v(k) = cplx(n(rng), n(rng));
  return v.normalized();
}

}  // namespace oracle
