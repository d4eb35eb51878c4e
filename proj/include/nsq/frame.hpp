#pragma once

#include "nsq/code.hpp"
#include "nsq/kraus.hpp"

namespace nsq {

/// Accumulated pending recovery with exact sign tracking. Pushing a
/// syndrome composes sigma_m onto the product, newest on the left, so the
/// stored operator equals the composition of the per-round corrections.
class PauliFrame {
 public:
  PauliFrame() : acc_(PauliOperator::identity(9)) {}

  const PauliOperator& accumulated() const { return acc_; }
  const std::vector<int>& history() const { return history_; }

  void push(int syndrome);
  // Extra detected Pauli folded into the frame (shuttle residuals,
  // ancilla kickbacks).
  void push_operator(const PauliOperator& p, const std::string& reason);

  // Serialized audit lines: round,i,m_bits,accumulated_string
  std::string log_lines() const;

 private:
  PauliOperator acc_;
  std::vector<int> history_;
  std::vector<std::string> notes_;
};

// Immediate recovery: applies sigma_m^dag for the given syndrome.
void correct_now(StateVector& s, int syndrome);
void correct_now(DensityMatrix& rho, int syndrome);

// Applies the accumulated adjoint once.
void apply_frame(StateVector& s, const PauliFrame& frame);
void apply_frame(DensityMatrix& rho, const PauliFrame& frame);

// Non-selective syndrome measurement plus conditioned recovery,
// R(rho) = sum_m sigma_m^dag P_m rho P_m sigma_m, on the nine-qubit
// register.
DensityMatrix recovery_map(const DensityMatrix& rho);

// One projective syndrome measurement on a density matrix: samples (or
// forces) an outcome, returns it, and collapses rho to the branch.
int measure_syndrome(DensityMatrix& rho, Rng& rng, double* probability = nullptr);
void measure_syndrome_forced(DensityMatrix& rho, int syndrome, double* probability);

}  // namespace nsq
