#include "doctest.h"

#include <random>

#include "nsq/frame.hpp"
#include "nsq/noise.hpp"

using namespace nsq;

namespace {

std::pair<cplx, cplx> random_logical_coeffs(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  cplx a(g(rng), g(rng)), b(g(rng), g(rng));
  double n = std::sqrt(std::norm(a) + std::norm(b));
  return {a / n, b / n};
}

KrausChannel random_correctable(uint64_t seed) {
  auto lay = code_layout();
  switch (seed % 4) {
    case 0: return build_correctable_mixture(seed, 4);
    case 1: return build_spin_noise(random_spin_spec(seed), lay);
    case 2: return build_position_noise(random_position_spec(seed), lay);
    default: return build_dephasing_vanish(seed % 3 == 0 ? "P0" : "P2", lay);
  }
}

// Runs N rounds with the given channels, measuring each round. Deferred
// mode records increments in a frame and corrects once at the end;
// immediate mode corrects per round.
Eigen::MatrixXcd run_pipeline(const std::vector<KrausChannel>& channels, cplx a, cplx b,
                              uint64_t seed, bool deferred) {
  Rng rng(seed);
  DensityMatrix rho = DensityMatrix::from_state(the_code().logical_state(a, b));
  PauliFrame frame;
  int previous_sector = 0;
  for (const auto& ch : channels) {
    rho = apply_kraus(rho, ch);
    int sector = measure_syndrome(rho, rng);
    if (deferred) {
      frame.push(sector ^ previous_sector);
      previous_sector = sector;
    } else {
      correct_now(rho, sector);
    }
  }
  if (deferred) apply_frame(rho, frame);
  return the_frame().extract_logical(rho);
}

}  // namespace

TEST_CASE("frame composition tracks exact signs") {
  const auto& code = the_code();
  PauliFrame empty;
  CHECK(empty.accumulated() == PauliOperator::identity(9));

  PauliFrame twice;
  twice.push(0b000001);
  twice.push(0b000001);
  CHECK(twice.accumulated().is_identity_mask());
  CHECK((twice.accumulated().phase_exp() % 2) == 0);

  PauliFrame mixed;
  mixed.push(0b000001);  // spin flip on P0
  mixed.push(0b010000);  // spin phase on P0
  PauliOperator expect =
      multiply(code.recovery_operator(0b010000), code.recovery_operator(0b000001));
  CHECK(mixed.accumulated() == expect);
  // Z then X on the same qubit anticommute; the product is the exact
  // signed string, not just the mask.
  CHECK(!commutes(code.recovery_operator(0b010000), code.recovery_operator(0b000001)));

  std::string log = mixed.log_lines();
  CHECK(log.find("round,0,000001") != std::string::npos);
  CHECK(log.find("round,1,010000") != std::string::npos);
}

TEST_CASE("frames never accumulate a logical part") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    PauliFrame f;
    for (int k = 0; k < 8; ++k) f.push(static_cast<int>(rng() % 64));
    auto ec = the_code().classify(f.accumulated());
    CHECK(ec.logical == LogicalPart::I);
  }
}

TEST_CASE("correct_now undoes every tabulated flip") {
  const auto& code = the_code();
  std::mt19937_64 rng(5);
  auto [a, b] = random_logical_coeffs(rng);

  StateVector psi = code.logical_state(a, b);
  StateVector same = psi;
  correct_now(same, 0);
  CHECK(fidelity(psi, same) > 1.0 - 1e-12);

  for (int m = 0; m < 64; ++m) {
    StateVector corrupted = code.logical_state(a, b);
    apply_pauli(corrupted, code.recovery_operator(m));
    correct_now(corrupted, m);
    CHECK(fidelity(psi, corrupted) > 1.0 - 1e-12);
  }
}

TEST_CASE("recovery branch operators return to the trivial sector") {
  const auto& code = the_code();
  std::mt19937_64 rng(7);
  for (int m = 0; m < 64; ++m) {
    // any operator in sector m, corrected by sigma_m^dag, lands in sector 0
    PauliOperator q(9, rng() & 0x1FF, rng() & 0x1FF);
    PauliOperator in_sector = multiply(code.recovery_operator(m),
                                       multiply(q, code.recovery_operator(code.classify(q).syndrome).adjoint()));
    PauliOperator branch = multiply(code.recovery_operator(m).adjoint(), in_sector);
    CHECK(code.classify(branch).syndrome == 0);
  }
}

TEST_CASE("syndrome measurement on density matrices is projective") {
  const auto& code = the_code();
  std::mt19937_64 rng(9);
  auto [a, b] = random_logical_coeffs(rng);
  StateVector psi = code.logical_state(a, b);
  apply_pauli(psi, PauliOperator::x(9, 3));  // spin flip on P2
  int expected = code.classify(PauliOperator::x(9, 3)).syndrome;

  DensityMatrix rho = DensityMatrix::from_state(psi);
  Rng mrng(11);
  double p = 0;
  int m = measure_syndrome(rho, mrng, &p);
  CHECK(m == expected);
  CHECK(std::abs(p - 1.0) < 1e-10);

  // repeatability
  int m2 = measure_syndrome(rho, mrng, &p);
  CHECK(m2 == m);
}

TEST_CASE("recovery map restores logical content after correctable noise") {
  std::mt19937_64 rng(13);
  for (uint64_t seed : {401ull, 402ull, 403ull, 404ull}) {
    auto [a, b] = random_logical_coeffs(rng);
    DensityMatrix rho = DensityMatrix::from_state(the_code().logical_state(a, b));
    Eigen::MatrixXcd before = the_frame().extract_logical(rho);
    DensityMatrix noisy = apply_kraus(rho, random_correctable(seed));
    DensityMatrix rec = recovery_map(noisy);
    CHECK(std::abs(rec.rho.trace().real() - 1.0) < 1e-9);
    CHECK(trace_distance(before, the_frame().extract_logical(rec)) < 1e-9);
  }
}

TEST_CASE("deferred correction matches immediate correction") {
  std::mt19937_64 rng(17);
  for (int n_rounds : {2, 3}) {
    for (uint64_t seed : {501ull, 502ull, 503ull}) {
      auto [a, b] = random_logical_coeffs(rng);
      std::vector<KrausChannel> channels;
      for (int r = 0; r < n_rounds; ++r) {
        channels.push_back(random_correctable(seed * 10 + r));
      }
      Eigen::MatrixXcd ideal(2, 2);
      ideal << std::norm(a), a * std::conj(b), std::conj(a) * b, std::norm(b);

      Eigen::MatrixXcd def = run_pipeline(channels, a, b, seed, true);
      Eigen::MatrixXcd imm = run_pipeline(channels, a, b, seed + 1, false);
      CHECK(trace_distance(def, ideal) < 1e-9);
      CHECK(trace_distance(imm, ideal) < 1e-9);
      CHECK(trace_distance(def, imm) < 1e-9);
    }
  }
}

TEST_CASE("three rounds of vanish noise with a deferred frame") {
  std::mt19937_64 rng(19);
  auto [a, b] = random_logical_coeffs(rng);
  auto lay = code_layout();
  std::vector<KrausChannel> channels = {build_dephasing_vanish("P0", lay),
                                        build_dephasing_vanish("P2", lay),
                                        build_dephasing_vanish("P4", lay)};
  Eigen::MatrixXcd ideal(2, 2);
  ideal << std::norm(a), a * std::conj(b), std::conj(a) * b, std::norm(b);
  Eigen::MatrixXcd out = run_pipeline(channels, a, b, 21, true);
  CHECK(trace_distance(out, ideal) < 1e-9);
}
