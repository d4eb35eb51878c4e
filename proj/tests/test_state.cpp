#include "doctest.h"

#include <random>

#include "nsq/code.hpp"
#include "nsq/schedule.hpp"
#include "nsq/state.hpp"

using namespace nsq;

namespace {

RegisterLayout one_particle() { return RegisterLayout{{{"P", Role::physical}}}; }

RegisterLayout two_particles() {
  return RegisterLayout{{{"A", Role::physical}, {"B", Role::physical}}};
}

StateVector random_state(const RegisterLayout& lay, std::mt19937_64& rng) {
  StateVector s(lay);
  std::normal_distribution<double> g;
  for (auto& a : s.amps) a = cplx(g(rng), g(rng));
  s.normalize();
  return s;
}

Eigen::Matrix2cd random_u2(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Matrix2cd m;
  m << cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(m);
  Eigen::Matrix2cd q = qr.householderQ();
  return q;
}

}  // namespace

TEST_CASE("H on spin gives the even superposition") {
  auto lay = one_particle();
  StateVector s(lay);
  apply_1q(s, Conditioned1Q{mat_h(), lay.qubit("P", Slot::c), {}, {}, {}});
  CHECK(std::abs(s.amps[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(s.amps[1] - 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("vertex-conditioned spin flip acts as identity off its vertices") {
  auto lay = one_particle();
  // |1>_c |01>_xy : c=1, x=0, y=1 -> index 0b101 = 5
  StateVector s(lay);
  s.amps[0] = 0;
  s.amps[0b101] = 1;
  auto g = vertex_spin_gate(lay, "P", mat_x(), 0b1001, "X_c[00,11]");
  apply_1q(s, g.op);
  CHECK(std::abs(s.amps[0b101] - 1.0) < 1e-15);

  // on vertex 00 it flips
  StateVector t(lay);
  apply_1q(t, g.op);
  CHECK(std::abs(t.amps[1] - 1.0) < 1e-15);
}

TEST_CASE("conditional spin flip between particles respects shared position") {
  auto lay = two_particles();
  auto gate = cnot_c(lay, "A", "B", Locality::nearest_neighbor);

  // |1>_c|00>_xy (x) |0>_c|00>_xy : control spin set, same vertex -> flips B
  StateVector s(lay);
  s.amps[0] = 0;
  s.amps[0b000001] = 1;  // A.c = 1
  apply_1q(s, gate.op);
  CHECK(std::abs(s.amps[0b001001] - 1.0) < 1e-15);

  // positions differ -> identity
  StateVector t(lay);
  t.amps[0] = 0;
  // A at vertex 00, spin 1; B at vertex 11: B.x=1 (bit 4), B.y=1 (bit 5)
  t.amps[0b110001] = 1;
  apply_1q(t, gate.op);
  CHECK(std::abs(t.amps[0b110001] - 1.0) < 1e-15);
}

TEST_CASE("kernel path matches the dense reference path") {
  std::mt19937_64 rng(31);
  auto lay = two_particles();
  for (int it = 0; it < 100; ++it) {
    StateVector s = random_state(lay, rng);
    Conditioned1Q g;
    g.u = random_u2(rng);
    g.target = static_cast<int>(rng() % 6);
    int other = static_cast<int>(rng() % 6);
    if (other != g.target) g.bit_conds.push_back({other, static_cast<int>(rng() % 2)});
    int e1 = static_cast<int>(rng() % 6), e2 = static_cast<int>(rng() % 6);
    if (e1 != g.target && e2 != g.target && e1 != e2) g.eq_conds.push_back({e1, e2});

    StateVector via_kernel = s;
    apply_1q(via_kernel, g);
    Eigen::MatrixXcd full = dense_of_conditioned(g, 6);
    Eigen::Map<const Eigen::VectorXcd> v(s.amps.data(), 64);
    Eigen::VectorXcd ref = full * v;
    for (int i = 0; i < 64; ++i) CHECK(std::abs(via_kernel.amps[i] - ref(i)) < 1e-12);
  }
}

TEST_CASE("unitary application preserves the norm at width 18") {
  std::mt19937_64 rng(37);
  RegisterLayout lay;
  for (int i = 0; i < 6; ++i) lay.particles.push_back({"Q" + std::to_string(i), Role::physical});
  REQUIRE(lay.num_qubits() == 18);
  StateVector s = random_state(lay, rng);
  for (int it = 0; it < 10000; ++it) {
    Conditioned1Q g;
    g.u = random_u2(rng);
    g.target = static_cast<int>(rng() % 18);
    if (rng() % 2) {
      int q = static_cast<int>(rng() % 18);
      if (q != g.target) g.bit_conds.push_back({q, static_cast<int>(rng() % 2)});
    }
    apply_1q(s, g);
    if (it % 1000 == 999) CHECK(std::abs(s.norm() - 1.0) < 1e-12);
  }
  CHECK(std::abs(s.norm() - 1.0) < 1e-12);
}

TEST_CASE("statevector and density-matrix paths agree") {
  std::mt19937_64 rng(41);
  auto lay = two_particles();
  StateVector s = random_state(lay, rng);
  DensityMatrix d = DensityMatrix::from_state(s);
  for (int it = 0; it < 25; ++it) {
    Conditioned1Q g;
    g.u = random_u2(rng);
    g.target = static_cast<int>(rng() % 6);
    int q = static_cast<int>(rng() % 6);
    if (q != g.target) g.eq_conds.push_back({q, (q + 1) % 6 == g.target ? (q + 2) % 6 : (q + 1) % 6});
    if (!g.eq_conds.empty() && (g.eq_conds[0].first == g.eq_conds[0].second)) g.eq_conds.clear();
    apply_1q(s, g);
    apply_1q(d, g);
  }
  DensityMatrix ref = DensityMatrix::from_state(s);
  CHECK((ref.rho - d.rho).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("pauli application equals its dense matrix") {
  std::mt19937_64 rng(43);
  auto lay = two_particles();
  for (int it = 0; it < 50; ++it) {
    StateVector s = random_state(lay, rng);
    PauliOperator p(6, rng() & 63, rng() & 63, static_cast<unsigned>(rng() & 3));
    StateVector t = s;
    apply_pauli(t, p);
    Eigen::MatrixXcd m = p.dense_matrix();
    Eigen::Map<const Eigen::VectorXcd> v(s.amps.data(), 64);
    Eigen::VectorXcd ref = m * v;
    for (int i = 0; i < 64; ++i) CHECK(std::abs(t.amps[i] - ref(i)) < 1e-12);

    DensityMatrix d = DensityMatrix::from_state(s);
    apply_pauli(d, p);
    Eigen::MatrixXcd dref = m * (v * v.adjoint()) * m.adjoint();
    CHECK((d.rho - dref).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("measurement of |+> is unbiased and branches renormalize") {
  auto lay = one_particle();
  StateVector s(lay);
  apply_1q(s, Conditioned1Q{mat_h(), 0, {}, {}, {}});
  StateVector b0 = s, b1 = s;
  auto o0 = measure_qubit_forced(b0, 0, 0);
  auto o1 = measure_qubit_forced(b1, 0, 1);
  CHECK(std::abs(o0.probability - 0.5) < 1e-12);
  CHECK(std::abs(o1.probability - 0.5) < 1e-12);
  CHECK(std::abs(b0.norm() - 1.0) < 1e-12);
  CHECK(std::abs(b1.norm() - 1.0) < 1e-12);
}

TEST_CASE("projective measurement branch probabilities sum to one") {
  std::mt19937_64 rng(47);
  auto lay = one_particle();
  StateVector s = random_state(lay, rng);
  std::vector<Eigen::MatrixXcd> projs;
  Eigen::MatrixXcd p0 = Eigen::MatrixXcd::Zero(8, 8), p1 = Eigen::MatrixXcd::Zero(8, 8);
  for (int i = 0; i < 8; ++i) (i % 2 ? p1 : p0)(i, i) = 1.0;
  projs = {p0, p1};
  auto branches = enumerate_projectors(s, projs);
  double total = 0;
  for (const auto& b : branches) total += b.probability;
  CHECK(std::abs(total - 1.0) < 1e-10);

  std::vector<Eigen::MatrixXcd> incomplete = {p0};
  CHECK_THROWS_AS(enumerate_projectors(s, incomplete), std::invalid_argument);
}

TEST_CASE("pauli measurement projects onto eigenspaces") {
  auto lay = one_particle();
  StateVector s(lay);
  apply_1q(s, Conditioned1Q{mat_h(), 0, {}, {}, {}});
  // Z measurement of |+>: both outcomes at probability 1/2
  StateVector b = s;
  auto out = measure_pauli_forced(b, PauliOperator::z(3, 0), 0);
  CHECK(std::abs(out.probability - 0.5) < 1e-12);
  CHECK(std::abs(b.amps[0] - 1.0) < 1e-12);
}

TEST_CASE("partial trace basics") {
  // Bell pair on two qubits out of a 2-qubit register
  RegisterLayout lay{{{"A", Role::physical}}};  // 3 qubits, use first two
  StateVector s(lay);
  s.amps.assign(8, 0);
  s.amps[0b00] = 1 / std::sqrt(2.0);
  s.amps[0b11] = 1 / std::sqrt(2.0);
  Eigen::MatrixXcd red = partial_trace_state(s, {0});
  CHECK((red - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  std::mt19937_64 rng(53);
  StateVector r = random_state(lay, rng);
  DensityMatrix d = DensityMatrix::from_state(r);
  Eigen::MatrixXcd red2 = partial_trace(d, {1, 2});
  CHECK(std::abs(red2.trace().real() - 1.0) < 1e-12);
  CHECK((red2 - partial_trace_state(r, {1, 2})).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(partial_trace(d, {}), std::invalid_argument);
}

TEST_CASE("reduced particle state of the logical zero") {
  // The logical zero is a product over particles, so the reduced state is
  // the pure one-particle factor (|000> + |111>)/sqrt(2).
  const auto& code = the_code();
  StateVector zero = code.logical_state(1.0, 0.0);
  Eigen::MatrixXcd red = particle_state(zero, "P0");
  Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd expect = ghz * ghz.adjoint();
  CHECK((red - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(red.trace().real() - 1.0) < 1e-12);
}

TEST_CASE("expectation values") {
  auto lay = one_particle();
  StateVector plus(lay);
  apply_1q(plus, Conditioned1Q{mat_h(), 0, {}, {}, {}});
  CHECK(std::abs(expectation(plus, PauliOperator::z(3, 0))) < 1e-12);
  CHECK(std::abs(expectation(plus, PauliOperator::x(3, 0)) - 1.0) < 1e-12);
  CHECK_THROWS_AS(expectation(plus, PauliOperator::z(2, 0)), std::invalid_argument);
}

TEST_CASE("state snapshot export lists nonzero amplitudes") {
  auto lay = one_particle();
  StateVector s(lay);
  std::string js = state_snapshot_json(s, 1e-12);
  CHECK(js.find("\"qubits\":3") != std::string::npos);
  CHECK(js.find("[0,1,0]") != std::string::npos);
}

TEST_CASE("dense apply rejects non-unitary input and bad targets") {
  auto lay = one_particle();
  StateVector s(lay);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
  CHECK_THROWS_AS(apply_dense(s, bad, {0}), std::invalid_argument);
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(apply_dense(s, id, {5}), std::invalid_argument);
}
