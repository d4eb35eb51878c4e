#include "nsq/kraus.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace nsq {

namespace {

double spectral_norm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace

double completeness_residual(const KrausChannel& ch) {
  if (ch.pauli_form()) {
    // sqrt(w) P with unitary P: sum E^dag E = (sum w) I exactly.
    double total = 0;
    for (const auto& [p, w] : ch.pauli_elements) {
      if (w < 0) throw std::invalid_argument("pauli element with negative weight");
      total += w;
    }
    return std::abs(total - 1.0);
  }
  const long d = ch.dim();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& e : ch.elements) {
    if (e.rows() != d || e.cols() != d) throw std::invalid_argument("channel element dim mismatch");
    sum += e.adjoint() * e;
  }
  return spectral_norm(sum - Eigen::MatrixXcd::Identity(d, d));
}

double choi_min_eigenvalue(const KrausChannel& ch) {
  if (ch.pauli_form()) {
    // Choi = sum_j w_j vec(P_j) vec(P_j)^dag, a sum of outer products.
    return 0.0;
  }
  const long d = ch.dim();
  Eigen::MatrixXcd choi = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (const auto& e : ch.elements) {
    Eigen::VectorXcd v(d * d);
    for (long c = 0; c < d; ++c)
      for (long r = 0; r < d; ++r) v(c * d + r) = e(r, c);
    choi += v * v.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(choi, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void validate_completeness(KrausChannel& ch, double tol) {
  double r = completeness_residual(ch);
  if (r > tol) {
    throw std::invalid_argument("channel fails completeness: residual " + std::to_string(r));
  }
  ch.validated = true;
}

namespace {

// Detects E = c * Pauli for permutation-with-phase matrices.
bool pauli_multiple(const Eigen::MatrixXcd& e, int k, PauliOperator* out, cplx* coeff) {
  const long d = 1l << k;
  long hit = -1;
  for (long r = 0; r < d; ++r) {
    if (std::abs(e(r, 0)) > 1e-13) {
      if (hit >= 0) return false;
      hit = r;
    }
  }
  if (hit < 0) return false;
  const uint64_t x = static_cast<uint64_t>(hit);
  const cplx c0 = e(hit, 0);
  // candidate phases relative to column 0 decide the z mask
  uint64_t z = 0;
  for (int q = 0; q < k; ++q) {
    const uint64_t col = 1ull << q;
    const cplx v = e(x ^ col, col);
    if (std::abs(v - c0) < 1e-11) continue;
    if (std::abs(v + c0) < 1e-11) {
      z |= col;
      continue;
    }
    return false;
  }
  PauliOperator p(k, x, z);
  Eigen::MatrixXcd ref = p.dense_matrix(12);
  if ((e - c0 * ref).cwiseAbs().maxCoeff() > 1e-10) return false;
  if (out) *out = p;
  if (coeff) *coeff = c0;
  return true;
}

}  // namespace

CorrectabilityReport validate_channel(const KrausChannel& ch, double coeff_floor) {
  CorrectabilityReport rep;
  rep.completeness_residual = completeness_residual(ch);
  rep.choi_min_eigenvalue = choi_min_eigenvalue(ch);
  const auto& code = the_code();
  const int k = ch.arity();
  const long d = ch.dim();

  auto classify_term = [&](const PauliOperator& term_on_targets, size_t elem_idx) {
    PauliOperator p9 = term_on_targets.embedded(9, ch.targets);
    auto ec = code.classify(p9);
    if (ec.logical != LogicalPart::I) {
      std::ostringstream o;
      o << "element " << elem_idx << ": term " << print_pauli(p9, code.layout().names())
        << " carries logical " << logical_part_name(ec.logical);
      rep.offenders.push_back(o.str());
      rep.correctable = false;
    }
  };

  if (ch.pauli_form()) {
    for (size_t ei = 0; ei < ch.pauli_elements.size(); ++ei) {
      if (ch.pauli_elements[ei].second > coeff_floor * coeff_floor) {
        classify_term(ch.pauli_elements[ei].first, ei);
      }
    }
    return rep;
  }

  for (size_t ei = 0; ei < ch.elements.size(); ++ei) {
    const auto& e = ch.elements[ei];
    if (k > 6) {
      PauliOperator p(k);
      cplx c;
      if (!pauli_multiple(e, k, &p, &c)) {
        rep.offenders.push_back("element " + std::to_string(ei) +
                                ": wide element is not a Pauli multiple; not checkable");
        rep.correctable = false;
        continue;
      }
      if (std::abs(c) > coeff_floor) classify_term(p, ei);
      continue;
    }
    // Pauli expansion: coeff = tr(P^dag E) / 2^k
    for (uint64_t xm = 0; xm < (1ull << k); ++xm) {
      for (uint64_t zm = 0; zm < (1ull << k); ++zm) {
        PauliOperator p(k, xm, zm);
        // tr(P^dag E): P|b> = f_b |b^x>, so tr = sum_b conj(f_b) E(b^x, b)
        cplx acc = 0;
        for (long b = 0; b < d; ++b) {
          cplx f = p.phase();
          if (std::popcount(zm & static_cast<uint64_t>(b)) & 1) f = -f;
          acc += std::conj(f) * e(static_cast<long>(b ^ static_cast<long>(xm)), b);
        }
        acc /= static_cast<double>(d);
        if (std::abs(acc) > coeff_floor) classify_term(p, ei);
      }
    }
  }
  return rep;
}

DensityMatrix apply_kraus(const DensityMatrix& rho, const KrausChannel& ch) {
  if (!ch.validated) throw std::invalid_argument("apply_kraus: channel not validated");
  for (int t : ch.targets) {
    if (t < 0 || t >= rho.num_qubits()) throw std::invalid_argument("apply_kraus: target range");
  }
  if (ch.pauli_form()) {
    DensityMatrix out;
    out.layout = rho.layout;
    out.rho = Eigen::MatrixXcd::Zero(rho.rho.rows(), rho.rho.cols());
    for (const auto& [p, w] : ch.pauli_elements) {
      PauliOperator wide = p.embedded(rho.num_qubits(), ch.targets);
      Eigen::MatrixXcd term = rho.rho;
      wide.left_mul(term);
      wide.adjoint().right_mul(term);
      out.rho += w * term;
    }
    return out;
  }
  const long dim = rho.rho.rows();
  DensityMatrix out;
  out.layout = rho.layout;
  out.rho = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<cplx> col(dim);
  for (const auto& e : ch.elements) {
    Eigen::MatrixXcd term = rho.rho;
    // term <- (E embedded) term (E embedded)^dag via vector kernels
    for (long c = 0; c < dim; ++c) {
      for (long r = 0; r < dim; ++r) col[r] = term(r, c);
      apply_dense_unchecked(col, rho.num_qubits(), e, ch.targets);
      for (long r = 0; r < dim; ++r) term(r, c) = col[r];
    }
    for (long r = 0; r < dim; ++r) {
      for (long c = 0; c < dim; ++c) col[c] = std::conj(term(r, c));
      apply_dense_unchecked(col, rho.num_qubits(), e, ch.targets);
      for (long c = 0; c < dim; ++c) term(r, c) = std::conj(col[c]);
    }
    out.rho += term;
  }
  return out;
}

Eigen::MatrixXcd apply_kraus_reference(const Eigen::MatrixXcd& rho, int n, const KrausChannel& ch) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  if (ch.pauli_form()) {
    for (const auto& [p, w] : ch.pauli_elements) {
      Eigen::MatrixXcd full = p.embedded(n, ch.targets).dense_matrix(n);
      out += w * full * rho * full.adjoint();
    }
    return out;
  }
  for (const auto& e : ch.elements) {
    Eigen::MatrixXcd full = embed_matrix(e, ch.targets, n);
    out += full * rho * full.adjoint();
  }
  return out;
}

std::vector<int> particle_targets(const RegisterLayout& lay, const std::string& particle) {
  int pi = lay.index_of(particle);
  return {3 * pi, 3 * pi + 1, 3 * pi + 2};
}

}  // namespace nsq
