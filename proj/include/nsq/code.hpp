#pragma once

#include <array>
#include <string>

#include "nsq/state.hpp"

namespace nsq {

enum class LogicalPart { I, X, Y, Z };
const char* logical_part_name(LogicalPart p);

struct ErrorClass {
  int syndrome = 0;  // bit i = m_i
  LogicalPart logical = LogicalPart::I;
  std::vector<int> gauge_witness;  // gauge-group generator indices, logical-I case
};

/// The nested-squares subsystem code on particles [P0, P2, P4].
///
/// Syndrome bits follow the staged-readout convention: the two ancillas
/// are read three times each without an intermediate spin reset, so bit
/// m_i reports the eigenvalue of a product of row generators rather than
/// of row i alone. syndrome_from_raw/raw_from_syndrome convert between
/// that readout numbering and per-generator anticommutation bits. The
/// recovery table is stated in readout numbering.
class NestedSquaresCode {
 public:
  NestedSquaresCode();

  const RegisterLayout& layout() const { return layout_; }
  const PauliOperator& stabilizer(int i) const { return s_.at(i); }
  const PauliOperator& logical_z() const { return zbar_; }
  const PauliOperator& logical_x() const { return xbar_; }
  PauliOperator logical_y() const;
  const PauliOperator& gauge_z(int k) const { return zg_.at(k); }
  const PauliOperator& gauge_x(int k) const { return xg_.at(k); }
  const PauliGroup& gauge_group() const { return gauge_; }

  // Readout-bit generator: the Pauli whose eigenvalue bit m_i reports.
  PauliOperator syndrome_generator(int i) const;

  static int syndrome_from_raw(int raw_bits);
  static int raw_from_syndrome(int m);

  int raw_anticommute_pattern(const PauliOperator& p) const;  // bit i vs stabilizer(i)
  ErrorClass classify(const PauliOperator& p) const;

  PauliOperator recovery_operator(int m) const;  // sigma_m
  bool recovery_listed(int m) const;             // false for the composite fallback rows

  Eigen::MatrixXcd projector(int m) const;                 // 512x512 P_m
  void project_syndrome(StateVector& s, int m) const;      // s -> P_m s (unnormalized)
  void project_syndrome(Eigen::MatrixXcd& rho, int m) const;  // rho -> P_m rho P_m

  StateVector logical_state(cplx alpha, cplx beta) const;

  // JSON dump of the operator table in the textual Pauli notation.
  std::string definition_json() const;

 private:
  RegisterLayout layout_;
  std::array<PauliOperator, 6> s_;
  PauliOperator zbar_, xbar_;
  std::array<PauliOperator, 2> zg_, xg_;
  PauliGroup gauge_;
};

const NestedSquaresCode& the_code();  // shared immutable instance

/// Basis change splitting the nine physical qubits into
/// syndrome (qubits 0-5) x gauge (6-7) x logical (8) factors.
class SubsystemFrame {
 public:
  explicit SubsystemFrame(const NestedSquaresCode& code);

  const Eigen::MatrixXcd& unitary() const { return u_; }

  // Conjugates into the frame and traces everything but the logical factor.
  Eigen::MatrixXcd extract_logical(const Eigen::MatrixXcd& rho9) const;
  Eigen::MatrixXcd extract_logical(const DensityMatrix& d) const;
  Eigen::MatrixXcd extract_logical(const StateVector& s9) const;

 private:
  Eigen::MatrixXcd u_;
};

const SubsystemFrame& the_frame();

// Logical single-qubit state from expectations of the logical Paulis,
// valid on any register containing particles P0, P2, P4 (suffix picks a
// named copy, "" for the plain names). Agrees with SubsystemFrame
// extraction; useful where the register is too wide to conjugate.
Eigen::MatrixXcd logical_qubit_from_expectations(const StateVector& s,
                                                 const std::string& suffix = "");
// Two-system version: 4x4 logical density matrix over (system A, system B).
Eigen::MatrixXcd logical_pair_from_expectations(const StateVector& s, const std::string& suffix_a,
                                                const std::string& suffix_b);

}  // namespace nsq
