#include "doctest.h"
#include "oracles.hpp"

#include "probent/measures.hpp"
#include "probent/states.hpp"

#include <numbers>
#include <random>

using namespace probent;

TEST_CASE("basis ordering puts qubit 1 in the most significant bit") {
  const CVector k = ket(0b100);
  CHECK(k(4) == cplx(1, 0));
  const CVector z = CVector::Zero(2);
  CHECK_THROWS_AS(ket(8), StateError);
}

TEST_CASE("PureState3 validation") {
  CVector v = CVector::Zero(8);
  CHECK_THROWS_AS(PureState3::from_amplitudes(v), StateError);
  CHECK_THROWS_AS(PureState3::normalized(v), StateError);
  v(3) = 2.0;
  CHECK_THROWS_AS(PureState3::from_amplitudes(v), StateError);
  CHECK(std::abs(PureState3::normalized(v)[3] - cplx(1, 0)) < 1e-15);
  CHECK_THROWS_AS(PureState3::from_amplitudes(CVector::Ones(4) / 2.0), StateError);
  CVector nan = ket(0);
  nan(1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(PureState3::from_amplitudes(nan), StateError);
}

TEST_CASE("axis eigenbasis") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 axis = Vec3(n(rng), n(rng), n(rng)).normalized();
    const AxisBasis b = axis_eigenbasis(axis);
    const CMatrix s = pauli_along(axis);
    CHECK((s * b.plus - b.plus).norm() < 1e-14);
    CHECK((s * b.minus + b.minus).norm() < 1e-14);
    CHECK(unitarity_defect(b.matrix()) < 1e-14);
  }
  const AxisBasis z = axis_eigenbasis(Vec3::UnitZ());
  CHECK((z.plus - ket(0, 2)).norm() < 1e-15);
  CHECK((z.minus - ket(1, 2)).norm() < 1e-15);
  const AxisBasis mz = axis_eigenbasis(-Vec3::UnitZ());
  CHECK((mz.plus - ket(1, 2)).norm() < 1e-15);
  CHECK_THROWS_AS(axis_eigenbasis(Vec3::Zero()), StateError);
}

TEST_CASE("local rotation is exp(-i angle n.sigma)") {
  const LocalRotation r{2, 0.7, Vec3(1, 1, 0).normalized()};
  const CMatrix expected = oracle::expm(pauli_along(r.axis), 0.7);
  CHECK((r.matrix() - expected).norm() < 1e-14);
  CHECK_THROWS_AS((LocalRotation{4, 0.1, Vec3::UnitZ()}.validate()), StateError);
  CHECK_THROWS_AS((LocalRotation{1, 0.1, Vec3::Zero()}.validate()), StateError);
}

TEST_CASE("state class constructors") {
  const double a = 0.6, b = 0.8;
  const CVector probe = ket(1, 2);
  const PureState3 b12 = bipartite_12(a, b, probe);
  CHECK(std::abs(b12[0b001] - a) < 1e-15);
  CHECK(std::abs(b12[0b111] - b) < 1e-15);
  const PureState3 b23 = bipartite_23(a, b, ket(0, 2));
  CHECK(std::abs(b23[0b000] - a) < 1e-15);
  CHECK(std::abs(b23[0b011] - b) < 1e-15);
  const PureState3 b13 = bipartite_13(a, b, ket(1, 2));
  CHECK(std::abs(b13[0b010] - a) < 1e-15);
  CHECK(std::abs(b13[0b111] - b) < 1e-15);
  const PureState3 ghz = ghz_general(a, b);
  CHECK(std::abs(ghz[0] - a) < 1e-15);
  CHECK(std::abs(ghz[7] - b) < 1e-15);
  const double w = 1.0 / std::sqrt(3.0);
  const PureState3 wst = triple(w, w, w);
  CHECK(std::abs(wst[0b001] - w) < 1e-15);
  CHECK(std::abs(wst[0b010] - w) < 1e-15);
  CHECK(std::abs(wst[0b100] - w) < 1e-15);
  const PureState3 z = zrt(0.5, 0.5, 0.5, 0.5);
  CHECK(std::abs(z[0] - 0.5) < 1e-15);
  CHECK(std::abs(z[0b100] - 0.5) < 1e-15);

  CHECK_THROWS_AS(bipartite_12(0.6, 0.7, probe), StateError);
  CHECK_THROWS_AS(bipartite_12(-0.6, 0.8, probe), StateError);
  CHECK_THROWS_AS(ghz_general(1.0, 1.0), StateError);
  CHECK_THROWS_AS(triple(1.0, 1.0, 0.0), StateError);
  CHECK_THROWS_AS(bipartite_23(a, b, CVector::Ones(2)), StateError);
}

TEST_CASE("fully separable states are products of rotated reference states") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 20; ++trial) {
    const LocalRotation r1{1, n(rng), Vec3(n(rng), n(rng), n(rng)).normalized()};
    const LocalRotation r2{2, n(rng), Vec3(n(rng), n(rng), n(rng)).normalized()};
    const LocalRotation r3{3, n(rng), Vec3(n(rng), n(rng), n(rng)).normalized()};
    const PureState3 psi = fully_separable(r1, r2, r3);
    const CVector expected = oracle::kron3(r1.matrix() * ket(0, 2), r2.matrix() * ket(0, 2),
                                           r3.matrix() * ket(0, 2));
    CHECK((psi.amplitudes() - expected).norm() < 1e-14);
    for (int q = 1; q <= 3; ++q) {
      const CMatrix rho = reduced_single(psi, q);
      CHECK(std::abs((rho * rho).trace() - 1.0) < 1e-12);
    }
  }
  const PureState3 plus = fully_separable({1, 0, Vec3::UnitZ()}, {2, 0, Vec3::UnitZ()},
                                          {3, 0, Vec3::UnitZ()}, Vec3::UnitX());
  for (int k = 0; k < 8; ++k) CHECK(std::abs(plus[k] - 1.0 / std::sqrt(8.0)) < 1e-15);
}

TEST_CASE("interaction eigenbasis round trip") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  const InteractionBasis basis{{Vec3(1, 0, 0), Vec3(n(rng), n(rng), n(rng)).normalized(),
                                Vec3(0, 1, 1).normalized()}};
  const PureState3 psi = PureState3::normalized(oracle::random_state(rng));
  const CVector c = to_eigenbasis(psi, basis);
  CHECK((from_eigenbasis(c, basis).amplitudes() - psi.amplitudes()).norm() < 1e-14);
  // index 0 is the +++ eigenvector of s_a (x) s_b (x) s_j
  const CVector e0 = from_eigenbasis(ket(0), basis).amplitudes();
  const CMatrix op = oracle::kron3(pauli_along(basis.axes[0]), pauli_along(basis.axes[1]),
                                   pauli_along(basis.axes[2]));
  CHECK((op * e0 - e0).norm() < 1e-14);
}

TEST_CASE("apply_single and apply_local") {
  const PureState3 psi = PureState3::from_amplitudes(ket(0));
  const PureState3 flipped = apply_single(pauli(1), 2, psi);
  CHECK(std::abs(flipped[0b010] - 1.0) < 1e-15);
  const LocalRotation r{3, std::numbers::pi / 2, Vec3::UnitX()};
  const PureState3 rotated = apply_local(r, psi);
  CHECK(std::abs(rotated[0b001] - cplx(0, -1)) < 1e-15);
}
