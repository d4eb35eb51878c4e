#pragma once

#include <string>
#include <vector>

#include "nsq/code.hpp"
#include "nsq/state.hpp"

namespace nsq {

/// Operator-sum map on a qubit subset of a register. Elements are
/// matrices over the target qubits (targets[0] least significant), or,
/// for wide Pauli mixtures, weighted Pauli strings (element
/// sqrt(weight) * P). Channels must pass validate_completeness before
/// application.
struct KrausChannel {
  std::string family;
  std::vector<int> targets;
  std::vector<Eigen::MatrixXcd> elements;
  std::vector<std::pair<PauliOperator, double>> pauli_elements;
  bool validated = false;

  int arity() const { return static_cast<int>(targets.size()); }
  long dim() const { return 1l << arity(); }
  bool pauli_form() const { return !pauli_elements.empty(); }
};

// ||sum E^dag E - I|| in the spectral norm.
double completeness_residual(const KrausChannel& ch);
// Minimum eigenvalue of the Choi matrix (nonnegative up to roundoff for
// any operator-sum map; guards element-assembly mistakes).
double choi_min_eigenvalue(const KrausChannel& ch);

void validate_completeness(KrausChannel& ch, double tol = kKrausTol);

struct CorrectabilityReport {
  double completeness_residual = 0;
  double choi_min_eigenvalue = 0;
  bool correctable = true;
  // One entry per offending Pauli term: element index, term, logical part.
  std::vector<std::string> offenders;
};

// Expands every element over the Pauli basis of its qubit support and
// classifies each term against the code. Correctable means every term
// above the coefficient floor carries logical part I. Elements on more
// than 6 qubits must be Pauli multiples (detected structurally).
CorrectabilityReport validate_channel(const KrausChannel& ch, double coeff_floor = 1e-12);

DensityMatrix apply_kraus(const DensityMatrix& rho, const KrausChannel& ch);

// Test oracle: explicit embed-multiply-accumulate with dense matrices.
Eigen::MatrixXcd apply_kraus_reference(const Eigen::MatrixXcd& rho, int n, const KrausChannel& ch);

// Targets helper: the three qubits of one particle.
std::vector<int> particle_targets(const RegisterLayout& lay, const std::string& particle);

}  // namespace nsq
