#include "probent/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <limits>
#include <string>

namespace probent {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix pauli(int index) {
  CMatrix p = CMatrix::Zero(2, 2);
  switch (index) {
    case 0:
      p(0, 0) = 1.0;
      p(1, 1) = 1.0;
      break;
    case 1:
      p(0, 1) = 1.0;
      p(1, 0) = 1.0;
      break;
    case 2:
      p(0, 1) = -kI;
      p(1, 0) = kI;
      break;
    case 3:
      p(0, 0) = 1.0;
      p(1, 1) = -1.0;
      break;
    default:
      throw LinalgError("pauli index must be in 0..3, got " + std::to_string(index));
  }
  return p;
}

CMatrix pauli_along(const Vec3& n) {
  return n.x() * pauli(1) + n.y() * pauli(2) + n.z() * pauli(3);
}

namespace {

void check_qubit(int qubit, int count) {
  if (qubit < 1 || qubit > count) {
    throw LinalgError("qubit index must be in 1.." + std::to_string(count) + ", got " +
                      std::to_string(qubit));
  }
}

void check_square(const CMatrix& m, Eigen::Index dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw LinalgError(std::string(what) + ": expected " + std::to_string(dim) + "x" +
                      std::to_string(dim) + " matrix, got " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()));
  }
}

}  // namespace

CMatrix embed_single(const CMatrix& op, int qubit) {
  check_qubit(qubit, 3);
  check_square(op, 2, "embed_single");
  const CMatrix id = pauli(0);
  return kron(kron(qubit == 1 ? op : id, qubit == 2 ? op : id), qubit == 3 ? op : id);
}

CMatrix embed_pair(const CMatrix& a, int first, const CMatrix& b, int second) {
  check_qubit(first, 3);
  check_qubit(second, 3);
  if (first == second) throw LinalgError("embed_pair: qubits must differ");
  return embed_single(a, first) * embed_single(b, second);
}

CMatrix partial_trace_qubit(const CMatrix& m, int which) {
  check_qubit(which, 3);
  check_square(m, 8, "partial_trace_qubit");
  const int shift = 3 - which;  // bit position of the traced qubit
  const int low_mask = (1 << shift) - 1;
  auto lift = [&](int reduced, int traced_bit) {
    return ((reduced & ~low_mask) << 1) | (traced_bit << shift) | (reduced & low_mask);
  };
  CMatrix out = CMatrix::Zero(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      out(r, c) = m(lift(r, 0), lift(c, 0)) + m(lift(r, 1), lift(c, 1));
    }
  }
  return out;
}

CMatrix partial_trace_pair(const CMatrix& m, int which) {
  check_qubit(which, 2);
  check_square(m, 4, "partial_trace_pair");
  CMatrix out = CMatrix::Zero(2, 2);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      for (int k = 0; k < 2; ++k) {
        const int ri = which == 1 ? 2 * k + r : 2 * r + k;
        const int ci = which == 1 ? 2 * k + c : 2 * c + k;
        out(r, c) += m(ri, ci);
      }
    }
  }
  return out;
}

double hermiticity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const CMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

Eigensystem hermitian_eig(const CMatrix& m, double tolerance) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw LinalgError("hermitian_eig: matrix must be square and non-empty");
  }
  const double defect = hermiticity_defect(m);
  if (defect > tolerance) {
    throw LinalgError("hermitian_eig: matrix is not Hermitian (defect " +
                      std::to_string(defect) + ")");
  }
  // Symmetrize so that sub-tolerance noise cannot leak into the solver.
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw LinalgError("hermitian_eig: eigensolver did not converge");
  }
  const Eigen::Index n = h.rows();
  Eigensystem out{Eigen::VectorXd(n), CMatrix(n, n)};
  // Eigen returns ascending order.
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

CMatrix unitary_exp(const CMatrix& h, double t) {
  const Eigensystem es = hermitian_eig(h);
  CVector phases(es.values.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::exp(-kI * es.values(k) * t);
  }
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

}  // namespace probent
