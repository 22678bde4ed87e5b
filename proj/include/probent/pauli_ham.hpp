#pragma once

// Pairwise Pauli Hamiltonians between a system qubit (1 or 2) and the probe
// qubit 3, plus detection of the commuting structure
//
//   H_k3 = |a| s_a (x) s_j  +  |a'| s_a' (x) 1  +  a'' 1 (x) s_j
//
// where both pair Hamiltonians share the probe axis j.

#include "probent/linalg.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace probent {

enum class Pair { k13, k23 };

/// Index (1 or 2) of the non-probe qubit of a pair.
constexpr int system_qubit(Pair p) { return p == Pair::k13 ? 1 : 2; }
std::string to_string(Pair p);

struct PauliPairHamiltonian {
  Pair pair = Pair::k13;
  /// coupling(i, j) multiplies sigma_i on the system qubit times sigma_j on
  /// the probe; i, j in {x, y, z}.
  Eigen::Matrix3d coupling = Eigen::Matrix3d::Zero();
  Vec3 local_self = Vec3::Zero();
  Vec3 local_probe = Vec3::Zero();

  bool is_finite() const;
  double frobenius_norm() const;
};

struct CommutingForm {
  Pair pair = Pair::k13;
  Vec3 self_axis = Vec3::UnitZ();
  double strength = 0.0;
  Vec3 probe_axis = Vec3::UnitZ();
  Vec3 local_self_axis = Vec3::UnitZ();
  double local_self_strength = 0.0;
  double local_probe_strength = 0.0;

  PauliPairHamiltonian reconstruct() const;
};

class HamiltonianError : public std::runtime_error {
 public:
  enum class Kind { kNotCommuting, kNotRankOne, kInvalidPair };
  HamiltonianError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

CMatrix to_matrix(const PauliPairHamiltonian& h);

/// ||[H13, H23]||_F evaluated in the Pauli coefficient algebra; agrees with
/// the 8x8 commutator norm.
double commutator_norm(const PauliPairHamiltonian& h13, const PauliPairHamiltonian& h23);

/// Scale-aware threshold: ||[H13,H23]||_F <= rel_tol * max(1, ||H13||_F ||H23||_F).
double commutation_threshold(const PauliPairHamiltonian& h13, const PauliPairHamiltonian& h23,
                             double rel_tol = tol::spectral);

bool commutes(const PauliPairHamiltonian& h13, const PauliPairHamiltonian& h23,
              double rel_tol = tol::spectral);

/// Canonical forms sharing one probe axis. Throws HamiltonianError with
/// kNotCommuting or kNotRankOne.
std::pair<CommutingForm, CommutingForm> canonical_commuting_form(
    const PauliPairHamiltonian& h13, const PauliPairHamiltonian& h23);

struct SplitHamiltonian {
  CMatrix entangling;
  CMatrix local;
};

SplitHamiltonian split_local_and_entangling(const CommutingForm& cf);

/// H = g J_z S_z for two atoms and one polarization qubit, with J_z = sz/2
/// and S_z = (sz1 + sz2)/2, i.e. (g/4) sz (x) sz per pair.
std::pair<PauliPairHamiltonian, PauliPairHamiltonian> qnd_zz(double g);

/// g s1.s3 + g s2.s3 (chain ordered 1-3-2).
std::pair<PauliPairHamiltonian, PauliPairHamiltonian> heisenberg_chain(double g);

}  // namespace probent
