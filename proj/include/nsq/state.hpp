#pragma once

#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nsq/layout.hpp"
#include "nsq/pauli.hpp"

namespace nsq {

inline constexpr int kMaxStateQubits = 24;
inline constexpr int kMaxDensityQubits = 12;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kKrausTol = 1e-10;
inline constexpr double kBranchPruneTol = 1e-14;

using Rng = std::mt19937_64;

struct StateVector {
  RegisterLayout layout;
  std::vector<cplx> amps;

  StateVector() = default;
  explicit StateVector(RegisterLayout lay);

  int num_qubits() const { return layout.num_qubits(); }
  double norm() const;
  void normalize();
};

struct DensityMatrix {
  RegisterLayout layout;
  Eigen::MatrixXcd rho;

  DensityMatrix() = default;
  explicit DensityMatrix(RegisterLayout lay);
  static DensityMatrix from_state(const StateVector& psi);

  int num_qubits() const { return layout.num_qubits(); }
  double trace_error() const { return std::abs(rho.trace() - cplx(1, 0)); }
};

// Sets |0...0>.
void reset_state(StateVector& s);

// --- gate kernels ------------------------------------------------------

/// Single-qubit gate, optionally conditioned on other qubits carrying
/// fixed bit values and/or on pairs of qubits being equal. Conditions
/// must not involve the target.
struct Conditioned1Q {
  Eigen::Matrix2cd u;
  int target = 0;
  std::vector<std::pair<int, int>> bit_conds;  // (qubit, value)
  std::vector<std::pair<int, int>> eq_conds;   // (qubit, qubit)
  std::vector<std::pair<int, int>> neq_conds;  // (qubit, qubit)
};

void apply_1q(StateVector& s, const Conditioned1Q& g);
void apply_1q(DensityMatrix& d, const Conditioned1Q& g);  // conjugation

// Generic k-qubit unitary on arbitrary targets (matrix indexed with
// targets[0] as the least-significant bit). Reference-quality path.
void apply_dense(StateVector& s, const Eigen::MatrixXcd& u, const std::vector<int>& targets);
void apply_dense(DensityMatrix& d, const Eigen::MatrixXcd& u, const std::vector<int>& targets);
// Non-unitary variant used by Kraus application: out = (U embedded) * in.
void apply_dense_unchecked(std::vector<cplx>& amps, int n, const Eigen::MatrixXcd& u,
                           const std::vector<int>& targets);

void apply_pauli(StateVector& s, const PauliOperator& p);
void apply_pauli(DensityMatrix& d, const PauliOperator& p);  // P rho P^dag

// Full-matrix embedding, for test oracles and small-width work.
Eigen::MatrixXcd embed_matrix(const Eigen::MatrixXcd& u, const std::vector<int>& targets, int n);
Eigen::MatrixXcd dense_of_conditioned(const Conditioned1Q& g, int n);

// --- inner products and distances --------------------------------------

cplx inner(const StateVector& a, const StateVector& b);
double expectation(const StateVector& s, const PauliOperator& p);
double expectation(const DensityMatrix& d, const PauliOperator& p);
double fidelity(const StateVector& a, const StateVector& b);  // |<a|b>|^2
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// --- measurement --------------------------------------------------------

struct MeasureOutcome {
  int outcome = 0;
  double probability = 1.0;
};

// Z-basis measurement of one qubit. `force` picks the branch (for
// enumeration); otherwise the seeded generator draws it.
MeasureOutcome measure_qubit(StateVector& s, int qubit, Rng& rng);
MeasureOutcome measure_qubit_forced(StateVector& s, int qubit, int outcome);

// +/-1-eigenvalue measurement of a Hermitian Pauli. Outcome bit m means
// eigenvalue (-1)^m.
MeasureOutcome measure_pauli(StateVector& s, const PauliOperator& p, Rng& rng);
MeasureOutcome measure_pauli_forced(StateVector& s, const PauliOperator& p, int outcome);

// Generic projective measurement. Projectors must be Hermitian,
// idempotent and complete within kKrausTol.
struct ProjectorBranch {
  int index;
  double probability;
  StateVector state;
};
int measure_projectors(StateVector& s, const std::vector<Eigen::MatrixXcd>& projectors, Rng& rng,
                       double* probability = nullptr);
std::vector<ProjectorBranch> enumerate_projectors(const StateVector& s,
                                                  const std::vector<Eigen::MatrixXcd>& projectors);

// --- partial trace ------------------------------------------------------

Eigen::MatrixXcd partial_trace_matrix(const Eigen::MatrixXcd& rho, int n,
                                      const std::vector<int>& keep_qubits);
Eigen::MatrixXcd partial_trace(const DensityMatrix& d, const std::vector<int>& keep_qubits);
Eigen::MatrixXcd partial_trace_state(const StateVector& s, const std::vector<int>& keep_qubits);

// Reduced state of one particle (3 qubits, slot order c,x,y).
Eigen::MatrixXcd particle_state(const DensityMatrix& d, const std::string& particle);
Eigen::MatrixXcd particle_state(const StateVector& s, const std::string& particle);

// --- snapshot export ----------------------------------------------------

std::string state_snapshot_json(const StateVector& s, double amplitude_floor = 0.0);

}  // namespace nsq
