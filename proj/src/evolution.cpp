#include "probent/evolution.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace probent {

InteractionBasis Fastpath::basis() const {
  return InteractionBasis{{form13.self_axis, form23.self_axis, form13.probe_axis}};
}

EvolutionPlan make_plan(const PauliPairHamiltonian& h13, const PauliPairHamiltonian& h23) {
  EvolutionPlan plan;
  plan.h13 = h13;
  plan.h23 = h23;
  plan.hamiltonian_total = to_matrix(h13) + to_matrix(h23);
  plan.commutator_norm = commutator_norm(h13, h23);
  plan.commuting = plan.commutator_norm <= commutation_threshold(h13, h23);
  if (!plan.commuting) {
    std::ostringstream msg;
    msg << "Hamiltonians do not commute (||[H13,H23]||_F = " << plan.commutator_norm << ")";
    plan.fastpath_note = msg.str();
    return plan;
  }
  try {
    auto [f13, f23] = canonical_commuting_form(h13, h23);
    const SplitHamiltonian s13 = split_local_and_entangling(f13);
    const SplitHamiltonian s23 = split_local_and_entangling(f23);
    const CMatrix entangling = s13.entangling + s23.entangling;
    const CMatrix local = s13.local + s23.local;
    const double defect = commutator(entangling, local).norm();
    const double scale = std::max(1.0, entangling.norm() * local.norm());
    if (defect > tol::spectral * scale) {
      std::ostringstream msg;
      msg << "local terms do not commute with the entangling terms (||[H',H_loc]||_F = "
          << defect << ")";
      plan.fastpath_note = msg.str();
      return plan;
    }
    plan.fastpath = Fastpath{f13, f23};
  } catch (const HamiltonianError& e) {
    plan.fastpath_note = e.what();
  }
  return plan;
}

PureState3 evolve_exact(const EvolutionPlan& plan, const PureState3& psi0, double t) {
  const CMatrix u = unitary_exp(plan.hamiltonian_total, t);
  return PureState3::from_amplitudes(u * psi0.amplitudes(), tol::spectral);
}

PureState3 evolve_commuting_closed_form(const Fastpath& fastpath, const PureState3& psi0,
                                        double t) {
  const InteractionBasis basis = fastpath.basis();
  CVector c = to_eigenbasis(psi0, basis);
  for (int index = 0; index < 8; ++index) {
    const double m1 = (index & 0b100) ? -1.0 : 1.0;
    const double m2 = (index & 0b010) ? -1.0 : 1.0;
    const double m3 = (index & 0b001) ? -1.0 : 1.0;
    const double phase =
        (m1 * m3 * fastpath.alpha_strength() + m2 * m3 * fastpath.beta_strength()) * t;
    c(index) *= std::exp(-kI * phase);
  }
  return from_eigenbasis(c, basis);
}

namespace {

// exp(-i theta n.sigma) for unit n.
CMatrix axis_rotation(const Vec3& axis, double theta) {
  return std::cos(theta) * pauli(0) - kI * std::sin(theta) * pauli_along(axis);
}

}  // namespace

PureState3 evolve_fastpath(const EvolutionPlan& plan, const PureState3& psi0, double t) {
  if (!plan.fastpath) {
    throw EvolutionError(EvolutionError::Kind::kNoFastpath,
                         "no closed-form evolution: " + plan.fastpath_note);
  }
  const Fastpath& fp = *plan.fastpath;
  const CVector entangled = evolve_commuting_closed_form(fp, psi0, t).amplitudes();
  const CMatrix local = kron(
      kron(axis_rotation(fp.form13.local_self_axis, fp.form13.local_self_strength * t),
           axis_rotation(fp.form23.local_self_axis, fp.form23.local_self_strength * t)),
      axis_rotation(fp.probe_axis(),
                    (fp.form13.local_probe_strength + fp.form23.local_probe_strength) * t));
  return PureState3::from_amplitudes(local * entangled, tol::spectral);
}

PureState3 evolve(const EvolutionPlan& plan, const PureState3& psi0, double t,
                  FastpathMode mode) {
  switch (mode) {
    case FastpathMode::kOff:
      return evolve_exact(plan, psi0, t);
    case FastpathMode::kOn:
      return evolve_fastpath(plan, psi0, t);
    case FastpathMode::kAuto:
      break;
  }
  return plan.fastpath ? evolve_fastpath(plan, psi0, t) : evolve_exact(plan, psi0, t);
}

DensityMatrix2 reduced_state_12(const PureState3& psi) { return reduced_pair(psi, 3); }

CMatrix KrausPair::apply(const CMatrix& rho12) const {
  return a_plus * rho12 * a_plus.adjoint() + a_minus * rho12 * a_minus.adjoint();
}

CMatrix KrausPair::completeness() const {
  return a_plus.adjoint() * a_plus + a_minus.adjoint() * a_minus;
}

namespace {

void check_basis(const AxisBasis& basis) {
  if (basis.plus.size() != 2 || basis.minus.size() != 2) {
    throw EvolutionError(EvolutionError::Kind::kInvalidBasis, "probe basis vectors need 2 entries");
  }
  const double defect = unitarity_defect(basis.matrix());
  if (defect > tol::structural) {
    std::ostringstream msg;
    msg << "probe basis is not orthonormal (defect " << defect << ")";
    throw EvolutionError(EvolutionError::Kind::kInvalidBasis, msg.str());
  }
}

AxisBasis default_probe_basis(const EvolutionPlan& plan) {
  if (plan.fastpath) return axis_eigenbasis(plan.fastpath->probe_axis());
  return AxisBasis{ket(0, 2), ket(1, 2)};
}

// <bra|_3 M |ket>_3 for an 8x8 operator M.
CMatrix probe_block(const CMatrix& m, const CVector& bra, const CVector& ket_state) {
  CMatrix out = CMatrix::Zero(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      for (int s = 0; s < 2; ++s) {
        for (int sp = 0; sp < 2; ++sp) {
          out(r, c) += std::conj(bra(s)) * m(2 * r + s, 2 * c + sp) * ket_state(sp);
        }
      }
    }
  }
  return out;
}

}  // namespace

KrausPair kraus_pair(const EvolutionPlan& plan, const CVector& probe_state, double t,
                     const std::optional<AxisBasis>& basis) {
  if (probe_state.size() != 2 || std::abs(probe_state.squaredNorm() - 1.0) > tol::structural) {
    throw StateError("probe state must be a normalized 2-vector");
  }
  const AxisBasis b = basis ? *basis : default_probe_basis(plan);
  check_basis(b);
  const CMatrix u = unitary_exp(plan.hamiltonian_total, t);
  return KrausPair{probe_block(u, b.plus, probe_state), probe_block(u, b.minus, probe_state)};
}

FactorizedKraus kraus_pair(const EvolutionPlan& plan, const PureState3& psi0, double t,
                           const std::optional<AxisBasis>& basis) {
  CMatrix split(4, 2);
  for (int r = 0; r < 4; ++r) {
    for (int s = 0; s < 2; ++s) split(r, s) = psi0[2 * r + s];
  }
  Eigen::JacobiSVD<CMatrix> svd(split, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv(1) > tol::spectral) {
    std::ostringstream msg;
    msg << "initial state is entangled across (1,2)|3 (second Schmidt coefficient " << sv(1)
        << "); a Kraus form needs |chi>_12 |phi>_3";
    throw EvolutionError(EvolutionError::Kind::kNonFactorizedInitialState, msg.str());
  }
  FactorizedKraus out;
  out.chi = sv(0) * svd.matrixU().col(0);
  out.phi = svd.matrixV().col(0).conjugate();
  out.phi.normalize();
  out.chi.normalize();
  // Fold the residual global phase into chi so that chi (x) phi == psi0.
  const CVector product = kron(out.chi, out.phi);
  Eigen::Index pivot = 0;
  psi0.amplitudes().cwiseAbs().maxCoeff(&pivot);
  const cplx ratio = psi0[static_cast<int>(pivot)] / product(pivot);
  out.chi *= ratio / std::abs(ratio);
  out.kraus = kraus_pair(plan, out.phi, t, basis);
  return out;
}

std::pair<CMatrix, CMatrix> v_operators(const CommutingForm& cf, const LocalRotation& rotation,
                                        double t) {
  const CMatrix r = rotation.matrix();
  const double theta = cf.strength * t;
  return {axis_rotation(cf.self_axis, theta) * r, axis_rotation(cf.self_axis, -theta) * r};
}

const CVector& ProbeOutcome::state() const {
  if (!conditional) {
    std::ostringstream msg;
    msg << "outcome '" << label << "' has probability " << probability
        << "; conditional state undefined";
    throw EvolutionError(EvolutionError::Kind::kDegenerateOutcome, msg.str());
  }
  return *conditional;
}

std::vector<ProbeOutcome> measure_probe(const PureState3& psi, const AxisBasis& basis) {
  check_basis(basis);
  std::vector<ProbeOutcome> outcomes;
  const std::pair<const char*, const CVector*> elements[] = {{"+", &basis.plus},
                                                             {"-", &basis.minus}};
  for (const auto& [label, e] : elements) {
    CVector v(4);
    for (int r = 0; r < 4; ++r) {
      v(r) = std::conj((*e)(0)) * psi[2 * r] + std::conj((*e)(1)) * psi[2 * r + 1];
    }
    ProbeOutcome o;
    o.label = label;
    o.probability = v.squaredNorm();
    if (o.probability >= kMinOutcomeProbability) o.conditional = v / std::sqrt(o.probability);
    outcomes.push_back(std::move(o));
  }
  return outcomes;
}

}  // namespace probent
