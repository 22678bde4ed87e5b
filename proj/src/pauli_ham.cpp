#include "probent/pauli_ham.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace probent {

std::string to_string(Pair p) { return p == Pair::k13 ? "(1,3)" : "(2,3)"; }

bool PauliPairHamiltonian::is_finite() const {
  return coupling.allFinite() && local_self.allFinite() && local_probe.allFinite();
}

double PauliPairHamiltonian::frobenius_norm() const {
  // Pauli strings on three qubits are orthogonal with squared norm 8.
  const double sum_sq =
      coupling.squaredNorm() + local_self.squaredNorm() + local_probe.squaredNorm();
  return std::sqrt(8.0 * sum_sq);
}

CMatrix to_matrix(const PauliPairHamiltonian& h) {
  const int self = system_qubit(h.pair);
  CMatrix m = CMatrix::Zero(8, 8);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (h.coupling(i, j) != 0.0) {
        m += h.coupling(i, j) * embed_pair(pauli(i + 1), self, pauli(j + 1), 3);
      }
    }
    if (h.local_self(i) != 0.0) m += h.local_self(i) * embed_single(pauli(i + 1), self);
    if (h.local_probe(i) != 0.0) m += h.local_probe(i) * embed_single(pauli(i + 1), 3);
  }
  return m;
}

namespace {

void check_pairs(const PauliPairHamiltonian& h13, const PauliPairHamiltonian& h23) {
  if (h13.pair != Pair::k13 || h23.pair != Pair::k23) {
    throw HamiltonianError(HamiltonianError::Kind::kInvalidPair,
                           "expected Hamiltonians for pairs (1,3) and (2,3), got " +
                               to_string(h13.pair) + " and " + to_string(h23.pair));
  }
}

// Rows indexed by the Pauli label on the system qubit (0 = identity), columns
// by the probe Pauli label x, y, z. Terms without a probe Pauli commute with
// the other pair and are dropped.
Eigen::Matrix<double, 4, 3> probe_coefficients(const PauliPairHamiltonian& h) {
  Eigen::Matrix<double, 4, 3> c;
  c.row(0) = h.local_probe.transpose();
  c.bottomRows<3>() = h.coupling;
  return c;
}

}  // namespace

double commutator_norm(const PauliPairHamiltonian& h13, const PauliPairHamiltonian& h23) {
  check_pairs(h13, h23);
  // [A_j s_j, B_k s_k] = 2i eps_jkl A_j B_k s_l, so the commutator expands in
  // Pauli strings with coefficients 2i (a_row x b_row)_l.
  const auto a = probe_coefficients(h13);
  const auto b = probe_coefficients(h23);
  double sum_sq = 0.0;
  for (int r = 0; r < 4; ++r) {
    for (int s = 0; s < 4; ++s) {
      const Vec3 ar = a.row(r).transpose();
      const Vec3 bs = b.row(s).transpose();
      sum_sq += ar.cross(bs).squaredNorm();
    }
  }
  return std::sqrt(4.0 * 8.0 * sum_sq);
}

double commutation_threshold(const PauliPairHamiltonian& h13, const PauliPairHamiltonian& h23,
                             double rel_tol) {
  return rel_tol * std::max(1.0, h13.frobenius_norm() * h23.frobenius_norm());
}

bool commutes(const PauliPairHamiltonian& h13, const PauliPairHamiltonian& h23, double rel_tol) {
  return commutator_norm(h13, h23) <= commutation_threshold(h13, h23, rel_tol);
}

PauliPairHamiltonian CommutingForm::reconstruct() const {
  PauliPairHamiltonian h;
  h.pair = pair;
  h.coupling = strength * self_axis * probe_axis.transpose();
  h.local_self = local_self_strength * local_self_axis;
  h.local_probe = local_probe_strength * probe_axis;
  return h;
}

namespace {

struct RankOne {
  double strength = 0.0;
  Vec3 left = Vec3::UnitZ();
  Vec3 right = Vec3::UnitZ();
};

RankOne rank_one_factor(const Eigen::Matrix3d& coupling, Pair pair) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(coupling, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();
  RankOne out;
  if (sv(0) == 0.0) return out;
  if (sv(1) > tol::spectral * sv(0)) {
    std::ostringstream msg;
    msg << "coupling tensor of pair " << to_string(pair)
        << " is not rank one (singular values " << sv(0) << ", " << sv(1) << ", " << sv(2)
        << ")";
    throw HamiltonianError(HamiltonianError::Kind::kNotRankOne, msg.str());
  }
  out.strength = sv(0);
  out.left = svd.matrixU().col(0);
  out.right = svd.matrixV().col(0);
  return out;
}

Vec3 canonical_sign(Vec3 axis) {
  for (int k = 0; k < 3; ++k) {
    if (std::abs(axis(k)) > tol::structural) {
      if (axis(k) < 0.0) axis = -axis;
      break;
    }
  }
  return axis;
}

CommutingForm build_form(const PauliPairHamiltonian& h, const RankOne& factor,
                         const Vec3& probe_axis, double scale) {
  CommutingForm cf;
  cf.pair = h.pair;
  cf.probe_axis = probe_axis;
  if (factor.strength > 0.0) {
    const double alignment = factor.right.dot(probe_axis);
    if (std::abs(std::abs(alignment) - 1.0) > tol::spectral) {
      throw HamiltonianError(HamiltonianError::Kind::kNotCommuting,
                             "pair " + to_string(h.pair) +
                                 " couples to a probe axis different from the shared one");
    }
    cf.strength = factor.strength;
    cf.self_axis = alignment < 0.0 ? Vec3(-factor.left) : factor.left;
  }
  cf.local_probe_strength = h.local_probe.dot(probe_axis);
  const Vec3 off_axis = h.local_probe - cf.local_probe_strength * probe_axis;
  if (off_axis.norm() > tol::spectral * scale) {
    throw HamiltonianError(HamiltonianError::Kind::kNotCommuting,
                           "local probe field of pair " + to_string(h.pair) +
                               " is not along the shared probe axis");
  }
  cf.local_self_strength = h.local_self.norm();
  if (cf.local_self_strength > 0.0) cf.local_self_axis = h.local_self / cf.local_self_strength;
  return cf;
}

}  // namespace

std::pair<CommutingForm, CommutingForm> canonical_commuting_form(
    const PauliPairHamiltonian& h13, const PauliPairHamiltonian& h23) {
  check_pairs(h13, h23);
  const double norm = commutator_norm(h13, h23);
  const double threshold = commutation_threshold(h13, h23);
  if (norm > threshold) {
    std::ostringstream msg;
    msg << "Hamiltonians do not commute: ||[H13,H23]||_F = " << norm << " > " << threshold;
    throw HamiltonianError(HamiltonianError::Kind::kNotCommuting, msg.str());
  }
  const RankOne f13 = rank_one_factor(h13.coupling, Pair::k13);
  const RankOne f23 = rank_one_factor(h23.coupling, Pair::k23);

  // Shared probe axis: first available direction, otherwise z.
  Vec3 probe = Vec3::UnitZ();
  const std::array<Vec3, 4> candidates{
      f13.strength > 0.0 ? f13.right : Vec3::Zero(),
      f23.strength > 0.0 ? f23.right : Vec3::Zero(),
      h13.local_probe,
      h23.local_probe,
  };
  for (const Vec3& c : candidates) {
    if (c.norm() > 0.0) {
      probe = c.normalized();
      break;
    }
  }
  probe = canonical_sign(probe);

  const double scale = std::max(1.0, std::max(h13.frobenius_norm(), h23.frobenius_norm()));
  auto forms = std::make_pair(build_form(h13, f13, probe, scale),
                              build_form(h23, f23, probe, scale));

  for (const auto* pair : {&forms.first, &forms.second}) {
    const PauliPairHamiltonian& source = pair->pair == Pair::k13 ? h13 : h23;
    const double err = (to_matrix(pair->reconstruct()) - to_matrix(source)).norm();
    if (err > tol::spectral * scale) {
      std::ostringstream msg;
      msg << "canonical form of pair " << to_string(pair->pair)
          << " does not reproduce the Hamiltonian (error " << err << ")";
      throw HamiltonianError(HamiltonianError::Kind::kNotCommuting, msg.str());
    }
  }
  return forms;
}

SplitHamiltonian split_local_and_entangling(const CommutingForm& cf) {
  const int self = system_qubit(cf.pair);
  SplitHamiltonian out;
  out.entangling =
      cf.strength * embed_pair(pauli_along(cf.self_axis), self, pauli_along(cf.probe_axis), 3);
  out.local = cf.local_self_strength * embed_single(pauli_along(cf.local_self_axis), self) +
              cf.local_probe_strength * embed_single(pauli_along(cf.probe_axis), 3);
  return out;
}

std::pair<PauliPairHamiltonian, PauliPairHamiltonian> qnd_zz(double g) {
  PauliPairHamiltonian h13;
  h13.pair = Pair::k13;
  h13.coupling(2, 2) = g / 4.0;
  PauliPairHamiltonian h23 = h13;
  h23.pair = Pair::k23;
  return {h13, h23};
}

std::pair<PauliPairHamiltonian, PauliPairHamiltonian> heisenberg_chain(double g) {
  PauliPairHamiltonian h13;
  h13.pair = Pair::k13;
  h13.coupling = g * Eigen::Matrix3d::Identity();
  PauliPairHamiltonian h23 = h13;
  h23.pair = Pair::k23;
  return {h13, h23};
}

}  // namespace probent
