#pragma once

// Three-qubit pure states and the initial-state families studied with the
// probe model: product states, Schmidt pairs, generalized GHZ, zero residual
// tangle (ZRT) and triple states.

#include "probent/linalg.hpp"

#include <array>
#include <stdexcept>

namespace probent {

class StateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Normalized amplitudes over |q1 q2 q3>, index 4*q1 + 2*q2 + q3.
class PureState3 {
 public:
  /// Throws StateError unless `amplitudes` has 8 entries with unit norm
  /// (within `tolerance`).
  static PureState3 from_amplitudes(const CVector& amplitudes,
                                    double tolerance = tol::structural);
  /// Rescales to unit norm; throws on a zero vector.
  static PureState3 normalized(const CVector& amplitudes);

  const CVector& amplitudes() const { return amps_; }
  cplx operator[](int index) const { return amps_(index); }
  CMatrix density() const { return amps_ * amps_.adjoint(); }

 private:
  explicit PureState3(CVector amps) : amps_(std::move(amps)) {}
  CVector amps_;
};

struct LocalRotation {
  int qubit = 1;
  double angle = 0.0;
  Vec3 axis = Vec3::UnitZ();

  /// exp(-i angle axis.sigma) = cos(angle) 1 - i sin(angle) axis.sigma
  CMatrix matrix() const;
  void validate() const;
};

struct AxisBasis {
  CVector plus;
  CVector minus;
  /// Columns (|+>, |->).
  CMatrix matrix() const;
};

/// Eigenvectors of axis.sigma. |+> = (cos th/2, e^{i ph} sin th/2); |-> is
/// orthogonal with its first nonzero component real and positive.
AxisBasis axis_eigenbasis(const Vec3& axis);

/// Product eigenbasis of s_a (x) s_b (x) s_j. Index m1 m2 m3 with bit 0 for
/// the +1 eigenvector of each axis.
struct InteractionBasis {
  std::array<Vec3, 3> axes{Vec3::UnitZ(), Vec3::UnitZ(), Vec3::UnitZ()};
  CMatrix matrix() const;
};

CVector to_eigenbasis(const PureState3& psi, const InteractionBasis& basis);
PureState3 from_eigenbasis(const CVector& coefficients, const InteractionBasis& basis);

/// R1 (x) R2 (x) R3 |+ + +>, where |+> on qubit k is the +1 eigenvector of
/// reference[k-1].
PureState3 fully_separable(const LocalRotation& r1, const LocalRotation& r2,
                           const LocalRotation& r3, const std::array<Vec3, 3>& reference);
PureState3 fully_separable(const LocalRotation& r1, const LocalRotation& r2,
                           const LocalRotation& r3, const Vec3& reference = Vec3::UnitZ());

/// (a|00> + b|11>)_12 (x) |probe>_3
PureState3 bipartite_12(double a, double b, const CVector& probe);
/// |spectator>_1 (x) (a|00> + b|11>)_23
PureState3 bipartite_23(double a, double b, const CVector& spectator);
/// (a|0>_1|0>_3 + b|1>_1|1>_3) with |spectator> on qubit 2
PureState3 bipartite_13(double a, double b, const CVector& spectator);
/// a|000> + b|111>
PureState3 ghz_general(double a, double b);
/// a|000> + b|001> + c|010> + d|100>
PureState3 zrt(cplx a, cplx b, cplx c, cplx d);
/// f|001> + g|010> + h|100>
PureState3 triple(cplx f, cplx g, cplx h);

PureState3 apply_local(const LocalRotation& rotation, const PureState3& psi);

/// Applies a 2x2 unitary to one qubit.
PureState3 apply_single(const CMatrix& op, int qubit, const PureState3& psi);

CVector ket(int bits, int dim = 8);

}  // namespace probent
