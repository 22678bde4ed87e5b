#pragma once

// Dense complex kernel for 2-, 4- and 8-dimensional Hilbert spaces.
//
// Three-qubit operators use the basis index b = 4*b1 + 2*b2 + b3, i.e.
// qubit 1 is the most significant bit, matching kets written |q1 q2 q3>.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace probent {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;

inline constexpr cplx kI{0.0, 1.0};

namespace tol {
inline constexpr double structural = 1e-12;
inline constexpr double spectral = 1e-10;
inline constexpr double physics = 1e-9;
}  // namespace tol

class LinalgError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Pauli matrix by index: 0 = identity, 1 = x, 2 = y, 3 = z.
CMatrix pauli(int index);

/// n.sigma for an arbitrary real 3-vector (not normalized).
CMatrix pauli_along(const Vec3& n);

/// Lifts a 2x2 operator onto qubit `qubit` (1, 2 or 3) of the 8-dim space.
CMatrix embed_single(const CMatrix& op, int qubit);

/// Lifts a two-qubit product a (x) b acting on qubits (first, second) of the
/// three-qubit register; identity on the remaining qubit.
CMatrix embed_pair(const CMatrix& a, int first, const CMatrix& b, int second);

/// Traces qubit `which` (1..3) out of an 8x8 operator. The remaining two
/// qubits keep their relative order.
CMatrix partial_trace_qubit(const CMatrix& m, int which);

/// Traces one qubit out of a 4x4 operator, `which` in {1, 2}.
CMatrix partial_trace_pair(const CMatrix& m, int which);

struct Eigensystem {
  Eigen::VectorXd values;  // descending
  CMatrix vectors;         // columns, matching `values`
};

/// Deterministic Hermitian eigendecomposition. Throws LinalgError when the
/// largest entry of |M - M^dag| exceeds `tolerance`.
Eigensystem hermitian_eig(const CMatrix& m, double tolerance = tol::structural);

/// exp(-i h t) for Hermitian h.
CMatrix unitary_exp(const CMatrix& h, double t);

double hermiticity_defect(const CMatrix& m);
double unitarity_defect(const CMatrix& u);

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

}  // namespace probent
