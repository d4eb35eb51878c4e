#include "nsq/frame.hpp"

#include <sstream>
#include <stdexcept>

namespace nsq {

void PauliFrame::push(int syndrome) {
  const auto& code = the_code();
  acc_ = multiply(code.recovery_operator(syndrome), acc_);
  history_.push_back(syndrome);
  notes_.push_back("");
  // a frame must never hold a logical action
  auto ec = code.classify(acc_);
  if (ec.logical != LogicalPart::I) {
    throw std::runtime_error("PauliFrame: accumulated operator acquired a logical part");
  }
}

void PauliFrame::push_operator(const PauliOperator& p, const std::string& reason) {
  acc_ = multiply(p, acc_);
  history_.push_back(-1);
  notes_.push_back(reason);
}

std::string PauliFrame::log_lines() const {
  const auto& code = the_code();
  const ParticleNames reg = code.layout().names();
  PauliOperator running = PauliOperator::identity(9);
  std::ostringstream out;
  for (size_t i = 0; i < history_.size(); ++i) {
    if (history_[i] >= 0) {
      running = multiply(code.recovery_operator(history_[i]), running);
      out << "round," << i << ",";
      for (int b = 5; b >= 0; --b) out << (history_[i] >> b & 1);
    } else {
      out << "extra," << i << "," << notes_[i];
    }
    out << "," << print_pauli(running, reg) << "\n";
  }
  return out.str();
}

void correct_now(StateVector& s, int syndrome) {
  if (s.num_qubits() != 9) throw std::invalid_argument("correct_now: nine-qubit register");
  apply_pauli(s, the_code().recovery_operator(syndrome).adjoint());
}

void correct_now(DensityMatrix& rho, int syndrome) {
  apply_pauli(rho, the_code().recovery_operator(syndrome).adjoint());
}

void apply_frame(StateVector& s, const PauliFrame& frame) {
  apply_pauli(s, frame.accumulated().adjoint());
}

void apply_frame(DensityMatrix& rho, const PauliFrame& frame) {
  apply_pauli(rho, frame.accumulated().adjoint());
}

DensityMatrix recovery_map(const DensityMatrix& rho) {
  if (rho.num_qubits() != 9) throw std::invalid_argument("recovery_map: nine-qubit register");
  const auto& code = the_code();
  DensityMatrix out;
  out.layout = rho.layout;
  out.rho = Eigen::MatrixXcd::Zero(512, 512);
  for (int m = 0; m < 64; ++m) {
    Eigen::MatrixXcd branch = rho.rho;
    code.project_syndrome(branch, m);
    PauliOperator corr = code.recovery_operator(m).adjoint();
    corr.left_mul(branch);
    corr.adjoint().right_mul(branch);
    out.rho += branch;
  }
  return out;
}

void measure_syndrome_forced(DensityMatrix& rho, int syndrome, double* probability) {
  const auto& code = the_code();
  Eigen::MatrixXcd branch = rho.rho;
  code.project_syndrome(branch, syndrome);
  double p = branch.trace().real();
  if (probability) *probability = p;
  if (p < kBranchPruneTol) {
    rho.rho = branch;  // dead branch, caller checks probability
    return;
  }
  rho.rho = branch / p;
}

int measure_syndrome(DensityMatrix& rho, Rng& rng, double* probability) {
  const auto& code = the_code();
  double r = std::uniform_real_distribution<double>(0, 1)(rng);
  double acc = 0;
  for (int m = 0; m < 64; ++m) {
    Eigen::MatrixXcd branch = rho.rho;
    code.project_syndrome(branch, m);
    double p = branch.trace().real();
    acc += p;
    if ((r <= acc && p > kBranchPruneTol) || m == 63) {
      if (probability) *probability = p;
      rho.rho = branch / p;
      return m;
    }
  }
  throw std::runtime_error("measure_syndrome: no branch");
}

}  // namespace nsq
