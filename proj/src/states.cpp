#include "probent/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace probent {

PureState3 PureState3::from_amplitudes(const CVector& amplitudes, double tolerance) {
  if (amplitudes.size() != 8) {
    throw StateError("three-qubit state needs 8 amplitudes, got " +
                     std::to_string(amplitudes.size()));
  }
  if (!amplitudes.allFinite()) throw StateError("state amplitudes must be finite");
  const double norm_sq = amplitudes.squaredNorm();
  if (std::abs(norm_sq - 1.0) > tolerance) {
    std::ostringstream msg;
    msg << "state is not normalized: |psi|^2 = " << norm_sq;
    throw StateError(msg.str());
  }
  return PureState3(amplitudes);
}

PureState3 PureState3::normalized(const CVector& amplitudes) {
  if (amplitudes.size() != 8) {
    throw StateError("three-qubit state needs 8 amplitudes, got " +
                     std::to_string(amplitudes.size()));
  }
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw StateError("cannot normalize a zero state");
  return PureState3(amplitudes / n);
}

CVector ket(int bits, int dim) {
  if (bits < 0 || bits >= dim) {
    throw StateError("basis index " + std::to_string(bits) + " out of range for dimension " +
                     std::to_string(dim));
  }
  CVector v = CVector::Zero(dim);
  v(bits) = 1.0;
  return v;
}

void LocalRotation::validate() const {
  if (qubit < 1 || qubit > 3) {
    throw StateError("rotation qubit must be 1, 2 or 3, got " + std::to_string(qubit));
  }
  if (!std::isfinite(angle)) throw StateError("rotation angle must be finite");
  if (std::abs(axis.norm() - 1.0) > tol::structural) {
    throw StateError("rotation axis must be a unit vector");
  }
}

CMatrix LocalRotation::matrix() const {
  return std::cos(angle) * pauli(0) - kI * std::sin(angle) * pauli_along(axis);
}

CMatrix AxisBasis::matrix() const {
  CMatrix m(2, 2);
  m.col(0) = plus;
  m.col(1) = minus;
  return m;
}

AxisBasis axis_eigenbasis(const Vec3& axis) {
  const double n = axis.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw StateError("axis must be a nonzero finite vector");
  const Vec3 u = axis / n;
  const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  // atan2(-0, -0) is -pi; on the z axis the azimuth is taken as 0.
  const double phi = (u.x() == 0.0 && u.y() == 0.0) ? 0.0 : std::atan2(u.y(), u.x());
  const cplx phase = std::exp(kI * phi);
  AxisBasis b;
  b.plus = CVector(2);
  b.plus << std::cos(theta / 2.0), phase * std::sin(theta / 2.0);
  b.minus = CVector(2);
  b.minus << std::sin(theta / 2.0), -phase * std::cos(theta / 2.0);
  if (std::abs(b.minus(0)) < tol::structural) {
    // At the north pole the first component vanishes; fix the phase on the
    // second instead.
    b.minus *= std::conj(b.minus(1)) / std::abs(b.minus(1));
    b.minus(0) = 0.0;
  }
  return b;
}

CMatrix InteractionBasis::matrix() const {
  return kron(kron(axis_eigenbasis(axes[0]).matrix(), axis_eigenbasis(axes[1]).matrix()),
              axis_eigenbasis(axes[2]).matrix());
}

CVector to_eigenbasis(const PureState3& psi, const InteractionBasis& basis) {
  return basis.matrix().adjoint() * psi.amplitudes();
}

PureState3 from_eigenbasis(const CVector& coefficients, const InteractionBasis& basis) {
  return PureState3::from_amplitudes(basis.matrix() * coefficients, tol::spectral);
}

PureState3 fully_separable(const LocalRotation& r1, const LocalRotation& r2,
                           const LocalRotation& r3, const std::array<Vec3, 3>& reference) {
  const std::array<const LocalRotation*, 3> rs{&r1, &r2, &r3};
  CVector state = CVector::Ones(1);
  for (int k = 0; k < 3; ++k) {
    rs[k]->validate();
    if (rs[k]->qubit != k + 1) {
      throw StateError("fully_separable expects rotations for qubits 1, 2, 3 in order");
    }
    const CVector local = rs[k]->matrix() * axis_eigenbasis(reference[k]).plus;
    state = kron(state, local);
  }
  return PureState3::from_amplitudes(state, tol::spectral);
}

PureState3 fully_separable(const LocalRotation& r1, const LocalRotation& r2,
                           const LocalRotation& r3, const Vec3& reference) {
  return fully_separable(r1, r2, r3, {reference, reference, reference});
}

namespace {

void check_schmidt(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) {
    throw StateError("Schmidt coefficients must be real and nonnegative");
  }
  const double s = a * a + b * b;
  if (std::abs(s - 1.0) > tol::structural) {
    std::ostringstream msg;
    msg << "Schmidt coefficients not normalized: a^2 + b^2 = " << s;
    throw StateError(msg.str());
  }
}

void check_qubit_state(const CVector& v, const char* what) {
  if (v.size() != 2) throw StateError(std::string(what) + " must have 2 components");
  if (std::abs(v.squaredNorm() - 1.0) > tol::structural) {
    throw StateError(std::string(what) + " is not normalized");
  }
}

void check_norm(double s) {
  if (std::abs(s - 1.0) > tol::structural) {
    std::ostringstream msg;
    msg << "amplitudes not normalized: sum |.|^2 = " << s;
    throw StateError(msg.str());
  }
}

}  // namespace

PureState3 bipartite_12(double a, double b, const CVector& probe) {
  check_schmidt(a, b);
  check_qubit_state(probe, "probe state");
  CVector pair = a * ket(0b00, 4) + b * ket(0b11, 4);
  return PureState3::from_amplitudes(kron(pair, probe), tol::spectral);
}

PureState3 bipartite_23(double a, double b, const CVector& spectator) {
  check_schmidt(a, b);
  check_qubit_state(spectator, "spectator state");
  CVector pair = a * ket(0b00, 4) + b * ket(0b11, 4);
  return PureState3::from_amplitudes(kron(spectator, pair), tol::spectral);
}

PureState3 bipartite_13(double a, double b, const CVector& spectator) {
  check_schmidt(a, b);
  check_qubit_state(spectator, "spectator state");
  CVector amps = CVector::Zero(8);
  for (int q2 = 0; q2 < 2; ++q2) {
    amps(0b000 | (q2 << 1)) = a * spectator(q2);
    amps(0b101 | (q2 << 1)) = b * spectator(q2);
  }
  return PureState3::from_amplitudes(amps, tol::spectral);
}

PureState3 ghz_general(double a, double b) {
  check_schmidt(a, b);
  return PureState3::from_amplitudes(a * ket(0b000) + b * ket(0b111));
}

PureState3 zrt(cplx a, cplx b, cplx c, cplx d) {
  check_norm(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
  return PureState3::from_amplitudes(a * ket(0b000) + b * ket(0b001) + c * ket(0b010) +
                                     d * ket(0b100));
}

PureState3 triple(cplx f, cplx g, cplx h) {
  check_norm(std::norm(f) + std::norm(g) + std::norm(h));
  return PureState3::from_amplitudes(f * ket(0b001) + g * ket(0b010) + h * ket(0b100));
}

PureState3 apply_single(const CMatrix& op, int qubit, const PureState3& psi) {
  return PureState3::from_amplitudes(embed_single(op, qubit) * psi.amplitudes(), tol::spectral);
}

PureState3 apply_local(const LocalRotation& rotation, const PureState3& psi) {
  rotation.validate();
  return apply_single(rotation.matrix(), rotation.qubit, psi);
}

}  // namespace probent
