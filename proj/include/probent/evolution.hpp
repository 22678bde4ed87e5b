#pragma once

// Unitary evolution of the three-qubit register under H13 + H23, the closed
// form available when the pair Hamiltonians commute, Kraus operators for the
// reduced dynamics of qubits 1 and 2, and projective probe measurement.

#include "probent/measures.hpp"
#include "probent/pauli_ham.hpp"
#include "probent/states.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace probent {

class EvolutionError : public std::runtime_error {
 public:
  enum class Kind { kNoFastpath, kNonFactorizedInitialState, kInvalidBasis, kDegenerateOutcome };
  EvolutionError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Phases of the commuting evolution: qubit k (1, 2) couples along its own
/// axis with `strength`, qubit 3 along the shared probe axis.
struct Fastpath {
  CommutingForm form13;
  CommutingForm form23;

  double alpha_strength() const { return form13.strength; }
  double beta_strength() const { return form23.strength; }
  const Vec3& probe_axis() const { return form13.probe_axis; }
  InteractionBasis basis() const;
};

struct EvolutionPlan {
  PauliPairHamiltonian h13;
  PauliPairHamiltonian h23;
  CMatrix hamiltonian_total;
  double commutator_norm = 0.0;
  bool commuting = false;
  /// Present when the pair commutes, both couplings are rank one and the
  /// local terms commute with the entangling terms.
  std::optional<Fastpath> fastpath;
  /// Why `fastpath` is absent, empty otherwise.
  std::string fastpath_note;
};

EvolutionPlan make_plan(const PauliPairHamiltonian& h13, const PauliPairHamiltonian& h23);

enum class FastpathMode { kAuto, kOn, kOff };

/// exp(-i H t) |psi> via Hermitian eigendecomposition.
PureState3 evolve_exact(const EvolutionPlan& plan, const PureState3& psi0, double t);

/// Entangling part only: amplitudes in the interaction eigenbasis pick up
/// exp(-i (m1 m3 |a| + m2 m3 |b|) t).
PureState3 evolve_commuting_closed_form(const Fastpath& fastpath, const PureState3& psi0,
                                        double t);

/// Closed form followed by the local single-qubit factors; equals
/// evolve_exact whenever the plan carries a fastpath.
PureState3 evolve_fastpath(const EvolutionPlan& plan, const PureState3& psi0, double t);

/// Dispatches on `mode`; kOn without a fastpath throws kNoFastpath.
PureState3 evolve(const EvolutionPlan& plan, const PureState3& psi0, double t,
                  FastpathMode mode = FastpathMode::kAuto);

/// Tr_3 |psi><psi|
DensityMatrix2 reduced_state_12(const PureState3& psi);

struct KrausPair {
  CMatrix a_plus;
  CMatrix a_minus;

  CMatrix apply(const CMatrix& rho12) const;
  /// A+^dag A+ + A-^dag A-
  CMatrix completeness() const;
};

/// A_k = <e_k|_3 U(t) |phi>_3 for the probe basis {e_+, e_-}. The basis
/// defaults to the fastpath probe axis, or to the computational basis when
/// the plan has no fastpath.
KrausPair kraus_pair(const EvolutionPlan& plan, const CVector& probe_state, double t,
                     const std::optional<AxisBasis>& basis = std::nullopt);

struct FactorizedKraus {
  KrausPair kraus;
  CVector chi;  // qubits 1, 2
  CVector phi;  // qubit 3
};

/// Splits psi0 = |chi>_12 |phi>_3 and returns the Kraus pair; throws
/// kNonFactorizedInitialState when qubits 1,2 are entangled with qubit 3.
FactorizedKraus kraus_pair(const EvolutionPlan& plan, const PureState3& psi0, double t,
                           const std::optional<AxisBasis>& basis = std::nullopt);

/// V_+- = exp(-+i strength t s_axis) R for one system qubit.
std::pair<CMatrix, CMatrix> v_operators(const CommutingForm& cf, const LocalRotation& rotation,
                                        double t);

struct ProbeOutcome {
  std::string label;
  double probability = 0.0;
  /// Normalized post-measurement state of qubits 1, 2; absent when the
  /// outcome probability is below 1e-14.
  std::optional<CVector> conditional;

  /// Throws kDegenerateOutcome when `conditional` is absent.
  const CVector& state() const;
};

inline constexpr double kMinOutcomeProbability = 1e-14;

/// Projective measurement of qubit 3 in {basis.plus, basis.minus}.
std::vector<ProbeOutcome> measure_probe(const PureState3& psi, const AxisBasis& basis);

}  // namespace probent
