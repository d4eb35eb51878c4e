#include "doctest.h"

#include <random>

#include "nsq/code.hpp"
#include "nsq/pauli.hpp"
#include "nsq/state.hpp"

using namespace nsq;

namespace {

PauliOperator random_pauli(int width, std::mt19937_64& rng, bool random_phase = true) {
  std::uniform_int_distribution<uint64_t> bits;
  const uint64_t mask = width == 64 ? ~0ull : (1ull << width) - 1;
  return PauliOperator(width, bits(rng) & mask, bits(rng) & mask,
                       random_phase ? static_cast<unsigned>(bits(rng) & 3) : 0);
}

double commutator_action_norm(const PauliOperator& a, const PauliOperator& b,
                              std::mt19937_64& rng) {
  // ||(AB-BA)v|| on a random vector; exact zero for commuting Paulis.
  const size_t dim = 1ull << a.width();
  std::vector<cplx> v(dim);
  std::normal_distribution<double> g;
  for (auto& x : v) x = cplx(g(rng), g(rng));
  std::vector<cplx> ab = v, ba = v;
  b.apply(ab);
  a.apply(ab);
  a.apply(ba);
  b.apply(ba);
  double n2 = 0;
  for (size_t i = 0; i < dim; ++i) n2 += std::norm(ab[i] - ba[i]);
  return std::sqrt(n2);
}

}  // namespace

TEST_CASE("single-qubit products and dense forms") {
  auto X = PauliOperator::x(1, 0), Y = PauliOperator::y(1, 0), Z = PauliOperator::z(1, 0);

  // X Z = -iY
  CHECK(multiply(X, Z) == Y.times_phase(3));
  CHECK(multiply(Z, X) == Y.times_phase(1));  // ZX = iY

  Eigen::MatrixXcd dz = Z.dense_matrix();
  CHECK(dz(0, 0) == cplx(1, 0));
  CHECK(dz(1, 1) == cplx(-1, 0));
  CHECK(dz(0, 1) == cplx(0, 0));

  Eigen::MatrixXcd dy = Y.dense_matrix();
  CHECK(std::abs(dy(0, 1) - cplx(0, -1)) < 1e-15);
  CHECK(std::abs(dy(1, 0) - cplx(0, 1)) < 1e-15);

  CHECK(Y.is_hermitian());
  CHECK(!Y.times_phase(1).is_hermitian());
  CHECK(commutes(X, X));
  CHECK(!commutes(X, Z));
}

TEST_CASE("multiply matches dense matrix products") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 200; ++it) {
    auto a = random_pauli(4, rng);
    auto b = random_pauli(4, rng);
    Eigen::MatrixXcd lhs = multiply(a, b).dense_matrix();
    Eigen::MatrixXcd rhs = a.dense_matrix() * b.dense_matrix();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("identity and code-operator products") {
  const auto& code = the_code();
  const auto reg = code.layout().names();
  auto id = PauliOperator::identity(9);
  CHECK(multiply(id, code.stabilizer(0)) == code.stabilizer(0));

  // s0 s1 leaves Zc Zx on P0 and P4 only; the P2 factors cancel.
  auto prod = multiply(code.stabilizer(0), code.stabilizer(1));
  CHECK(prod == parse_pauli("+Zc.Zx.Iy@P0 * Zc.Zx.Iy@P4", reg));
  Eigen::MatrixXcd lhs = prod.dense_matrix();
  Eigen::MatrixXcd rhs = code.stabilizer(0).dense_matrix() * code.stabilizer(1).dense_matrix();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("commutation over the code operator table") {
  const auto& code = the_code();
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      CHECK(commutes(code.stabilizer(i), code.stabilizer(j)));
    }
  }
  CHECK(!commutes(code.logical_z(), code.logical_x()));
  for (int i = 0; i < 6; ++i) {
    CHECK(commutes(code.logical_z(), code.stabilizer(i)));
    CHECK(commutes(code.logical_x(), code.stabilizer(i)));
  }
  for (int k = 0; k < 2; ++k) {
    CHECK(commutes(code.logical_z(), code.gauge_z(k)));
    CHECK(commutes(code.logical_z(), code.gauge_x(k)));
    CHECK(commutes(code.logical_x(), code.gauge_z(k)));
    CHECK(commutes(code.logical_x(), code.gauge_x(k)));
  }
  CHECK(!commutes(code.gauge_z(0), code.gauge_x(0)));
  CHECK(!commutes(code.gauge_z(1), code.gauge_x(1)));
  CHECK(commutes(code.gauge_z(0), code.gauge_x(1)));
  CHECK(commutes(code.gauge_z(1), code.gauge_x(0)));
}

TEST_CASE("commutes agrees with dense commutator, exhaustive to width 4") {
  for (int w = 1; w <= 4; ++w) {
    const uint64_t strings = 1ull << (2 * w);
    std::vector<Eigen::MatrixXcd> dense(strings);
    std::vector<PauliOperator> ops(strings);
    for (uint64_t s = 0; s < strings; ++s) {
      ops[s] = PauliOperator(w, s & ((1ull << w) - 1), s >> w);
      dense[s] = ops[s].dense_matrix();
    }
    for (uint64_t i = 0; i < strings; ++i) {
      for (uint64_t j = i; j < strings; ++j) {
        double norm = (dense[i] * dense[j] - dense[j] * dense[i]).cwiseAbs().maxCoeff();
        CHECK(commutes(ops[i], ops[j]) == (norm < 1e-12));
      }
    }
  }
}

TEST_CASE("commutes agrees with commutator action on width 9") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 1000; ++it) {
    auto a = random_pauli(9, rng);
    auto b = random_pauli(9, rng);
    double nrm = commutator_action_norm(a, b, rng);
    if (commutes(a, b)) {
      CHECK(nrm < 1e-10);
    } else {
      CHECK(nrm > 1e-6);
    }
  }
}

TEST_CASE("multiply is associative and squares are scalar") {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 500; ++it) {
    int w = 1 + static_cast<int>(rng() % 18);
    auto a = random_pauli(w, rng), b = random_pauli(w, rng), c = random_pauli(w, rng);
    CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
    auto sq = multiply(a, a);
    CHECK(sq.is_identity_mask());
    CHECK((sq.phase_exp() % 2) == 0);
  }
}

TEST_CASE("group membership and decomposition") {
  const auto& code = the_code();
  const auto& G = code.gauge_group();

  CHECK(G.rank() == 10);
  CHECK(G.contains(code.stabilizer(0)).contained);
  CHECK(!G.contains(code.logical_x()).contained);
  CHECK(!G.contains(code.logical_z()).contained);

  // product of all three spin flips equals Xg0 Xg1 s4 times the X-type
  // string on the outer particle
  auto flip_all = multiply(
      multiply(PauliOperator::x(9, 0), PauliOperator::x(9, 3)), PauliOperator::x(9, 6));
  auto q = multiply(flip_all, code.logical_z());
  auto mem = G.contains(q);
  REQUIRE(mem.contained);
  // generator order: s0..s5, Zg0, Xg0, Zg1, Xg1
  std::vector<int> expect = {4, 7, 9};
  CHECK(mem.decomposition == expect);

  // adding the logicals raises the rank
  auto gens = G.generators();
  gens.push_back(code.logical_z());
  CHECK(PauliGroup(9, gens).rank() == 11);
  gens.push_back(code.logical_x());
  CHECK(PauliGroup(9, gens).rank() == 12);
}

TEST_CASE("membership is stable under generator reordering") {
  const auto& code = the_code();
  std::vector<PauliOperator> gens = code.gauge_group().generators();
  std::mt19937_64 rng(17);
  std::vector<PauliOperator> probes;
  for (int i = 0; i < 40; ++i) probes.push_back(random_pauli(9, rng, false));
  probes.push_back(code.logical_x());
  probes.push_back(code.stabilizer(3));
  PauliGroup g1(9, gens);
  std::shuffle(gens.begin(), gens.end(), rng);
  PauliGroup g2(9, gens);
  for (const auto& p : probes) {
    CHECK(g1.contains(p).contained == g2.contains(p).contained);
  }
}

TEST_CASE("exact-phase membership") {
  const auto& code = the_code();
  const auto& G = code.gauge_group();
  CHECK(G.contains(code.stabilizer(2), false).contained);
  auto minus_s2 = code.stabilizer(2).times_phase(2);
  CHECK(!G.contains(minus_s2, false).contained);
  CHECK(G.contains(minus_s2, true).contained);
}

TEST_CASE("dense s4 is a unit-entry permutation and unitary") {
  const auto& code = the_code();
  Eigen::MatrixXcd m = code.stabilizer(4).dense_matrix();
  CHECK((m * m.adjoint() - Eigen::MatrixXcd::Identity(512, 512)).cwiseAbs().maxCoeff() < 1e-13);
  int nonzero = 0;
  for (int r = 0; r < 512; ++r) {
    for (int c = 0; c < 512; ++c) {
      if (std::abs(m(r, c)) > 1e-15) {
        ++nonzero;
        CHECK(std::abs(std::abs(m(r, c)) - 1.0) < 1e-15);
      }
    }
  }
  CHECK(nonzero == 512);
  CHECK_THROWS_AS(random_pauli(9, *(new std::mt19937_64(1))).dense_matrix(8),
                  std::invalid_argument);
}

TEST_CASE("parser and printer round-trip") {
  const auto reg = code_layout().names();
  const auto& code = the_code();
  CHECK(print_pauli(code.stabilizer(0), reg) == "+Zc.Zx.Iy@P0 * Zc.Zx.Iy@P2");
  CHECK(parse_pauli("+Zc.Zx.Iy@P0 * Zc.Zx.Iy@P2", reg) == code.stabilizer(0));
  CHECK(parse_pauli("-iYc.Ix.Iy@P2", reg) ==
        PauliOperator::y(9, 3).times_phase(3));

  std::mt19937_64 rng(23);
  for (int it = 0; it < 300; ++it) {
    auto p = random_pauli(9, rng);
    CHECK(parse_pauli(print_pauli(p, reg), reg) == p);
  }
  CHECK(parse_pauli("I", reg) == PauliOperator::identity(9));
  CHECK_THROWS_AS(parse_pauli("Qc.Ix.Iy@P0", reg), std::invalid_argument);
  CHECK_THROWS_AS(parse_pauli("Xc.Ix.Iy@P9", reg), std::invalid_argument);
}

TEST_CASE("width mismatch is rejected") {
  CHECK_THROWS_AS(multiply(PauliOperator::x(2, 0), PauliOperator::x(3, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(commutes(PauliOperator::x(2, 0), PauliOperator::x(3, 0)),
                  std::invalid_argument);
}
