#include "doctest.h"
#include "oracles.hpp"

#include "probent/pauli_ham.hpp"

#include <random>

using namespace probent;

namespace {

PauliPairHamiltonian random_general(std::mt19937_64& rng, Pair pair) {
  std::normal_distribution<double> n;
  PauliPairHamiltonian h;
  h.pair = pair;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) h.coupling(i, j) = n(rng);
    h.local_self(i) = n(rng);
    h.local_probe(i) = n(rng);
  }
  return h;
}

CMatrix oracle_matrix(const PauliPairHamiltonian& h) {
  return oracle::pair_matrix(h.coupling, h.local_self, h.local_probe, system_qubit(h.pair));
}

}  // namespace

TEST_CASE("to_matrix matches explicit Pauli sums") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto h13 = random_general(rng, Pair::k13);
    const auto h23 = random_general(rng, Pair::k23);
    CHECK((to_matrix(h13) - oracle_matrix(h13)).norm() < 1e-13);
    CHECK((to_matrix(h23) - oracle_matrix(h23)).norm() < 1e-13);
    CHECK(h13.frobenius_norm() == doctest::Approx(oracle_matrix(h13).norm()).epsilon(1e-12));
  }
}

TEST_CASE("algebraic commutator norm equals the dense 8x8 commutator") {
  std::mt19937_64 rng(17);
  std::bernoulli_distribution coin(0.5);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto h13 = random_general(rng, Pair::k13);
    auto h23 = random_general(rng, Pair::k23);
    if (coin(rng)) h13.coupling.row(1).setZero();  // exercise sparse patterns too
    const CMatrix a = oracle_matrix(h13);
    const CMatrix b = oracle_matrix(h23);
    const double dense = (a * b - b * a).norm();
    const double algebraic = commutator_norm(h13, h23);
    worst = std::max(worst, std::abs(dense - algebraic) / std::max(1.0, dense));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("QND preset commutes with a shared z probe axis") {
  const auto [h13, h23] = qnd_zz(2.0);
  CHECK(commutes(h13, h23));
  CHECK(commutator_norm(h13, h23) == 0.0);
  const auto [f13, f23] = canonical_commuting_form(h13, h23);
  CHECK((f13.probe_axis - Vec3::UnitZ()).norm() < 1e-12);
  CHECK((f23.probe_axis - Vec3::UnitZ()).norm() < 1e-12);
  CHECK(f13.strength == doctest::Approx(0.5));
  CHECK(f23.strength == doctest::Approx(0.5));
  CHECK(std::abs(std::abs(f13.self_axis.z()) - 1.0) < 1e-12);
}

TEST_CASE("Heisenberg chain does not commute") {
  const auto [h13, h23] = heisenberg_chain(1.0);
  CHECK_FALSE(commutes(h13, h23));
  // [s1.s3, s2.s3] = 2i s3.(s1 x s2)-type terms, Frobenius norm sqrt(8*24)
  CHECK(commutator_norm(h13, h23) == doctest::Approx(std::sqrt(192.0)).epsilon(1e-12));
  try {
    canonical_commuting_form(h13, h23);
    FAIL("expected NotCommuting");
  } catch (const HamiltonianError& e) {
    CHECK(e.kind() == HamiltonianError::Kind::kNotCommuting);
  }
}

TEST_CASE("canonical form reconstructs random commuting pairs") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 a = Vec3(n(rng), n(rng), n(rng)).normalized();
    const Vec3 b = Vec3(n(rng), n(rng), n(rng)).normalized();
    const Vec3 j = Vec3(n(rng), n(rng), n(rng)).normalized();
    PauliPairHamiltonian h13{Pair::k13, 1.3 * a * j.transpose(), 0.4 * a, -0.2 * j};
    PauliPairHamiltonian h23{Pair::k23, -0.7 * b * j.transpose(), Vec3(n(rng), n(rng), n(rng)),
                             0.9 * j};
    REQUIRE(commutes(h13, h23));
    const auto [f13, f23] = canonical_commuting_form(h13, h23);
    CHECK((to_matrix(f13.reconstruct()) - to_matrix(h13)).norm() < 1e-10);
    CHECK((to_matrix(f23.reconstruct()) - to_matrix(h23)).norm() < 1e-10);
    CHECK(f13.strength > 0.0);
    CHECK(f23.strength > 0.0);
    CHECK((f13.probe_axis - f23.probe_axis).norm() < 1e-12);
    // first nonzero component of the shared axis is positive
    const Vec3& p = f13.probe_axis;
    const double lead = std::abs(p.x()) > 1e-12 ? p.x() : (std::abs(p.y()) > 1e-12 ? p.y() : p.z());
    CHECK(lead > 0.0);
  }
}

TEST_CASE("rank-two coupling commutes trivially but has no canonical form") {
  PauliPairHamiltonian h13{Pair::k13, Eigen::Matrix3d::Zero(), Vec3::Zero(), Vec3::Zero()};
  h13.coupling(0, 0) = 1.0;
  h13.coupling(1, 1) = 1.0;
  PauliPairHamiltonian h23{Pair::k23, Eigen::Matrix3d::Zero(), Vec3::UnitX(), Vec3::Zero()};
  CHECK(commutes(h13, h23));
  try {
    canonical_commuting_form(h13, h23);
    FAIL("expected NotRankOne");
  } catch (const HamiltonianError& e) {
    CHECK(e.kind() == HamiltonianError::Kind::kNotRankOne);
  }
}

TEST_CASE("a transverse probe field breaks commutation") {
  auto [h13, h23] = qnd_zz(1.0);
  h13.local_probe = Vec3(0.3, 0.0, 0.0);
  CHECK_FALSE(commutes(h13, h23));
  CHECK(commutator_norm(h13, h23) > 0.1);
}

TEST_CASE("commutation threshold scales with the Hamiltonian norm") {
  auto [h13, h23] = qnd_zz(4e6);
  h23.coupling(0, 0) = 1e-9;  // tiny relative to the 1e6 couplings
  CHECK(commutes(h13, h23));
  auto [s13, s23] = qnd_zz(4.0);
  s23.coupling(0, 0) = 1e-6;
  CHECK_FALSE(commutes(s13, s23));
}

TEST_CASE("pair labels are validated") {
  auto [h13, h23] = qnd_zz(1.0);
  h13.pair = Pair::k23;
  CHECK_THROWS_AS(canonical_commuting_form(h13, h23), HamiltonianError);
  CHECK(to_string(Pair::k13) == "(1,3)");
}

TEST_CASE("split separates entangling and local parts") {
  CommutingForm cf;
  cf.pair = Pair::k23;
  cf.self_axis = Vec3::UnitX();
  cf.strength = 0.5;
  cf.local_self_axis = Vec3::UnitX();
  cf.local_self_strength = 0.25;
  cf.local_probe_strength = -1.0;
  const SplitHamiltonian s = split_local_and_entangling(cf);
  const CMatrix id = pauli(0);
  CHECK((s.entangling - 0.5 * oracle::kron3(id, pauli(1), pauli(3))).norm() < 1e-14);
  CHECK((s.local - 0.25 * oracle::kron3(id, pauli(1), id) + oracle::kron3(id, id, pauli(3))).norm() <
        1e-14);
}
