#include "nsq/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nsq {

RegisterLayout code_layout() {
  return RegisterLayout{{{"P0", Role::physical}, {"P2", Role::physical}, {"P4", Role::physical}}};
}

RegisterLayout single_system_layout() {
  return RegisterLayout{{{"P0", Role::physical},
                         {"P1", Role::ancillary},
                         {"P2", Role::physical},
                         {"P3", Role::ancillary},
                         {"P4", Role::physical}}};
}

PauliOperator embed_by_name(const PauliOperator& p, const RegisterLayout& from,
                            const RegisterLayout& to) {
  std::vector<int> map(from.num_qubits());
  for (int pi = 0; pi < from.num_particles(); ++pi) {
    int ti = to.index_of(from.particles[pi].name);
    for (int s = 0; s < 3; ++s) map[3 * pi + s] = 3 * ti + s;
  }
  return p.embedded(to.num_qubits(), map);
}

StateVector::StateVector(RegisterLayout lay) : layout(std::move(lay)) {
  if (layout.num_qubits() > kMaxStateQubits) {
    throw std::invalid_argument("StateVector: register exceeds dense limit");
  }
  amps.assign(1ull << layout.num_qubits(), cplx(0, 0));
  amps[0] = 1.0;
}

double StateVector::norm() const {
  double n2 = 0;
  for (const cplx& a : amps) n2 += std::norm(a);
  return std::sqrt(n2);
}

void StateVector::normalize() {
  double n = norm();
  if (n <= 0) throw std::runtime_error("normalize: zero state");
  for (cplx& a : amps) a /= n;
}

DensityMatrix::DensityMatrix(RegisterLayout lay) : layout(std::move(lay)) {
  if (layout.num_qubits() > kMaxDensityQubits) {
    throw std::invalid_argument("DensityMatrix: register exceeds dense limit");
  }
  const long dim = 1l << layout.num_qubits();
  rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho(0, 0) = 1.0;
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
  if (psi.num_qubits() > kMaxDensityQubits) {
    throw std::invalid_argument("from_state: register exceeds density limit");
  }
  DensityMatrix d;
  d.layout = psi.layout;
  Eigen::Map<const Eigen::VectorXcd> v(psi.amps.data(), psi.amps.size());
  d.rho = v * v.adjoint();
  return d;
}

void reset_state(StateVector& s) {
  std::fill(s.amps.begin(), s.amps.end(), cplx(0, 0));
  s.amps[0] = 1.0;
}

namespace {

void check_conditions(const Conditioned1Q& g) {
  for (auto [q, v] : g.bit_conds) {
    if (q == g.target) throw std::invalid_argument("apply_1q: condition on target");
    if (v != 0 && v != 1) throw std::invalid_argument("apply_1q: condition value");
  }
  for (auto [a, b] : g.eq_conds) {
    if (a == g.target || b == g.target) throw std::invalid_argument("apply_1q: condition on target");
  }
  for (auto [a, b] : g.neq_conds) {
    if (a == g.target || b == g.target) throw std::invalid_argument("apply_1q: condition on target");
  }
}

inline bool conds_hold(uint64_t idx, const Conditioned1Q& g) {
  for (auto [q, v] : g.bit_conds) {
    if (static_cast<int>(idx >> q & 1u) != v) return false;
  }
  for (auto [a, b] : g.eq_conds) {
    if (((idx >> a) & 1u) != ((idx >> b) & 1u)) return false;
  }
  for (auto [a, b] : g.neq_conds) {
    if (((idx >> a) & 1u) == ((idx >> b) & 1u)) return false;
  }
  return true;
}

}  // namespace

void apply_1q(StateVector& s, const Conditioned1Q& g) {
  check_conditions(g);
  const uint64_t dim = s.amps.size();
  const uint64_t tbit = 1ull << g.target;
  const cplx u00 = g.u(0, 0), u01 = g.u(0, 1), u10 = g.u(1, 0), u11 = g.u(1, 1);
  for (uint64_t i = 0; i < dim; ++i) {
    if (i & tbit) continue;
    if (!conds_hold(i, g)) continue;
    const uint64_t j = i | tbit;
    const cplx a0 = s.amps[i], a1 = s.amps[j];
    s.amps[i] = u00 * a0 + u01 * a1;
    s.amps[j] = u10 * a0 + u11 * a1;
  }
}

void apply_1q(DensityMatrix& d, const Conditioned1Q& g) {
  check_conditions(g);
  const long dim = d.rho.rows();
  const uint64_t tbit = 1ull << g.target;
  const cplx u00 = g.u(0, 0), u01 = g.u(0, 1), u10 = g.u(1, 0), u11 = g.u(1, 1);
  // left: rho -> U rho
  for (long c = 0; c < dim; ++c) {
    for (uint64_t i = 0; i < static_cast<uint64_t>(dim); ++i) {
      if (i & tbit) continue;
      if (!conds_hold(i, g)) continue;
      const uint64_t j = i | tbit;
      const cplx a0 = d.rho(i, c), a1 = d.rho(j, c);
      d.rho(i, c) = u00 * a0 + u01 * a1;
      d.rho(j, c) = u10 * a0 + u11 * a1;
    }
  }
  // right: rho -> rho U^dag
  const cplx v00 = std::conj(u00), v01 = std::conj(u01), v10 = std::conj(u10),
             v11 = std::conj(u11);
  for (long r = 0; r < dim; ++r) {
    for (uint64_t i = 0; i < static_cast<uint64_t>(dim); ++i) {
      if (i & tbit) continue;
      if (!conds_hold(i, g)) continue;
      const uint64_t j = i | tbit;
      const cplx a0 = d.rho(r, i), a1 = d.rho(r, j);
      d.rho(r, i) = a0 * v00 + a1 * v01;
      d.rho(r, j) = a0 * v10 + a1 * v11;
    }
  }
}

void apply_dense_unchecked(std::vector<cplx>& amps, int n, const Eigen::MatrixXcd& u,
                           const std::vector<int>& targets) {
  const int k = static_cast<int>(targets.size());
  const uint64_t kdim = 1ull << k;
  if (u.rows() != static_cast<long>(kdim) || u.cols() != static_cast<long>(kdim)) {
    throw std::invalid_argument("apply_dense: matrix size");
  }
  for (int t : targets) {
    if (t < 0 || t >= n) throw std::invalid_argument("apply_dense: target out of range");
  }
  uint64_t tmask = 0;
  for (int t : targets) tmask |= 1ull << t;
  if (std::popcount(tmask) != k) throw std::invalid_argument("apply_dense: duplicate target");

  std::vector<cplx> in(kdim), out(kdim);
  const uint64_t dim = amps.size();
  for (uint64_t base = 0; base < dim; ++base) {
    if (base & tmask) continue;
    for (uint64_t g = 0; g < kdim; ++g) {
      uint64_t idx = base;
      for (int b = 0; b < k; ++b)
        if (g >> b & 1u) idx |= 1ull << targets[b];
      in[g] = amps[idx];
    }
    for (uint64_t r = 0; r < kdim; ++r) {
      cplx acc = 0;
      for (uint64_t c = 0; c < kdim; ++c) acc += u(r, c) * in[c];
      out[r] = acc;
    }
    for (uint64_t g = 0; g < kdim; ++g) {
      uint64_t idx = base;
      for (int b = 0; b < k; ++b)
        if (g >> b & 1u) idx |= 1ull << targets[b];
      amps[idx] = out[g];
    }
  }
}

void apply_dense(StateVector& s, const Eigen::MatrixXcd& u, const std::vector<int>& targets) {
  if (!(u * u.adjoint()).isIdentity(kNormTol * 10)) {
    throw std::invalid_argument("apply_dense: matrix is not unitary");
  }
  apply_dense_unchecked(s.amps, s.num_qubits(), u, targets);
}

void apply_dense(DensityMatrix& d, const Eigen::MatrixXcd& u, const std::vector<int>& targets) {
  if (!(u * u.adjoint()).isIdentity(kNormTol * 10)) {
    throw std::invalid_argument("apply_dense: matrix is not unitary");
  }
  // Columns as states for U rho, then rows for rho U^dag.
  const long dim = d.rho.rows();
  std::vector<cplx> col(dim);
  for (long c = 0; c < dim; ++c) {
    for (long r = 0; r < dim; ++r) col[r] = d.rho(r, c);
    apply_dense_unchecked(col, d.num_qubits(), u, targets);
    for (long r = 0; r < dim; ++r) d.rho(r, c) = col[r];
  }
  for (long r = 0; r < dim; ++r) {
    for (long c = 0; c < dim; ++c) col[c] = std::conj(d.rho(r, c));
    apply_dense_unchecked(col, d.num_qubits(), u, targets);
    for (long c = 0; c < dim; ++c) d.rho(r, c) = std::conj(col[c]);
  }
}

void apply_pauli(StateVector& s, const PauliOperator& p) {
  if (p.width() != s.num_qubits()) throw std::invalid_argument("apply_pauli: width mismatch");
  p.apply(s.amps);
}

void apply_pauli(DensityMatrix& d, const PauliOperator& p) {
  if (p.width() != d.num_qubits()) throw std::invalid_argument("apply_pauli: width mismatch");
  p.left_mul(d.rho);
  p.adjoint().right_mul(d.rho);
}

Eigen::MatrixXcd embed_matrix(const Eigen::MatrixXcd& u, const std::vector<int>& targets, int n) {
  const uint64_t dim = 1ull << n;
  const int k = static_cast<int>(targets.size());
  const uint64_t kdim = 1ull << k;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  uint64_t tmask = 0;
  for (int t : targets) tmask |= 1ull << t;
  for (uint64_t base = 0; base < dim; ++base) {
    if (base & tmask) continue;
    for (uint64_t r = 0; r < kdim; ++r) {
      uint64_t ridx = base;
      for (int b = 0; b < k; ++b)
        if (r >> b & 1u) ridx |= 1ull << targets[b];
      for (uint64_t c = 0; c < kdim; ++c) {
        uint64_t cidx = base;
        for (int b = 0; b < k; ++b)
          if (c >> b & 1u) cidx |= 1ull << targets[b];
        m(ridx, cidx) = u(r, c);
      }
    }
  }
  return m;
}

Eigen::MatrixXcd dense_of_conditioned(const Conditioned1Q& g, int n) {
  const uint64_t dim = 1ull << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
  const uint64_t tbit = 1ull << g.target;
  for (uint64_t i = 0; i < dim; ++i) {
    if (i & tbit) continue;
    if (!conds_hold(i, g)) continue;
    const uint64_t j = i | tbit;
    m(i, i) = g.u(0, 0);
    m(i, j) = g.u(0, 1);
    m(j, i) = g.u(1, 0);
    m(j, j) = g.u(1, 1);
  }
  return m;
}

cplx inner(const StateVector& a, const StateVector& b) {
  if (a.amps.size() != b.amps.size()) throw std::invalid_argument("inner: size mismatch");
  cplx acc = 0;
  for (size_t i = 0; i < a.amps.size(); ++i) acc += std::conj(a.amps[i]) * b.amps[i];
  return acc;
}

double expectation(const StateVector& s, const PauliOperator& p) {
  if (p.width() != s.num_qubits()) throw std::invalid_argument("expectation: width mismatch");
  StateVector t = s;
  p.apply(t.amps);
  return inner(s, t).real();
}

double expectation(const DensityMatrix& d, const PauliOperator& p) {
  if (p.width() != d.num_qubits()) throw std::invalid_argument("expectation: width mismatch");
  // tr(P rho): row b of P picks rho(b, b^x) with the phase of P|b^x>... use P rho and trace.
  Eigen::MatrixXcd tmp = d.rho;
  p.left_mul(tmp);
  return tmp.trace().real();
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner(a, b)); }

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd diff = a - b;
  diff = (diff + diff.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

MeasureOutcome measure_qubit_forced(StateVector& s, int qubit, int outcome) {
  const uint64_t bit = 1ull << qubit;
  double p1 = 0;
  for (uint64_t i = 0; i < s.amps.size(); ++i) {
    if (i & bit) p1 += std::norm(s.amps[i]);
  }
  const double p = outcome ? p1 : 1.0 - p1;
  if (p < kBranchPruneTol) return {outcome, 0.0};
  const double scale = 1.0 / std::sqrt(p);
  for (uint64_t i = 0; i < s.amps.size(); ++i) {
    if (static_cast<int>((i & bit) != 0) == outcome) {
      s.amps[i] *= scale;
    } else {
      s.amps[i] = 0;
    }
  }
  return {outcome, p};
}

MeasureOutcome measure_qubit(StateVector& s, int qubit, Rng& rng) {
  const uint64_t bit = 1ull << qubit;
  double p1 = 0;
  for (uint64_t i = 0; i < s.amps.size(); ++i) {
    if (i & bit) p1 += std::norm(s.amps[i]);
  }
  int outcome;
  if (p1 < kBranchPruneTol) {
    outcome = 0;
  } else if (1.0 - p1 < kBranchPruneTol) {
    outcome = 1;
  } else {
    outcome = std::uniform_real_distribution<double>(0, 1)(rng) < p1 ? 1 : 0;
  }
  return measure_qubit_forced(s, qubit, outcome);
}

MeasureOutcome measure_pauli_forced(StateVector& s, const PauliOperator& p, int outcome) {
  if (!p.is_hermitian()) throw std::invalid_argument("measure_pauli: operator not Hermitian");
  StateVector t = s;
  p.apply(t.amps);
  const double sign = outcome ? -1.0 : 1.0;
  double n2 = 0;
  for (size_t i = 0; i < s.amps.size(); ++i) {
    s.amps[i] = 0.5 * (s.amps[i] + sign * t.amps[i]);
    n2 += std::norm(s.amps[i]);
  }
  if (n2 < kBranchPruneTol) return {outcome, 0.0};
  const double scale = 1.0 / std::sqrt(n2);
  for (cplx& a : s.amps) a *= scale;
  return {outcome, n2};
}

MeasureOutcome measure_pauli(StateVector& s, const PauliOperator& p, Rng& rng) {
  const double e = expectation(s, p);
  const double p0 = std::clamp(0.5 * (1.0 + e), 0.0, 1.0);
  int outcome;
  if (p0 < kBranchPruneTol) {
    outcome = 1;
  } else if (1.0 - p0 < kBranchPruneTol) {
    outcome = 0;
  } else {
    outcome = std::uniform_real_distribution<double>(0, 1)(rng) < p0 ? 0 : 1;
  }
  return measure_pauli_forced(s, p, outcome);
}

namespace {

void validate_projector_set(const std::vector<Eigen::MatrixXcd>& projectors, long dim) {
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& p : projectors) {
    if (p.rows() != dim || p.cols() != dim) throw std::invalid_argument("projector dim mismatch");
    if ((p - p.adjoint()).cwiseAbs().maxCoeff() > kKrausTol) {
      throw std::invalid_argument("projector not Hermitian");
    }
    if ((p * p - p).cwiseAbs().maxCoeff() > kKrausTol) {
      throw std::invalid_argument("projector not idempotent");
    }
    sum += p;
  }
  if ((sum - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() > kKrausTol) {
    throw std::invalid_argument("projector set incomplete");
  }
}

}  // namespace

std::vector<ProjectorBranch> enumerate_projectors(const StateVector& s,
                                                  const std::vector<Eigen::MatrixXcd>& projectors) {
  const long dim = static_cast<long>(s.amps.size());
  validate_projector_set(projectors, dim);
  Eigen::Map<const Eigen::VectorXcd> v(s.amps.data(), dim);
  std::vector<ProjectorBranch> out;
  for (size_t k = 0; k < projectors.size(); ++k) {
    Eigen::VectorXcd w = projectors[k] * v;
    double p = w.squaredNorm();
    if (p < kBranchPruneTol) continue;
    ProjectorBranch b{static_cast<int>(k), p, StateVector()};
    b.state.layout = s.layout;
    b.state.amps.assign(w.data(), w.data() + dim);
    b.state.normalize();
    out.push_back(std::move(b));
  }
  return out;
}

int measure_projectors(StateVector& s, const std::vector<Eigen::MatrixXcd>& projectors, Rng& rng,
                       double* probability) {
  auto branches = enumerate_projectors(s, projectors);
  double r = std::uniform_real_distribution<double>(0, 1)(rng);
  double acc = 0;
  for (auto& b : branches) {
    acc += b.probability;
    if (r <= acc || &b == &branches.back()) {
      s = b.state;
      if (probability) *probability = b.probability;
      return b.index;
    }
  }
  throw std::runtime_error("measure_projectors: no branch");
}

Eigen::MatrixXcd partial_trace_matrix(const Eigen::MatrixXcd& rho, int n,
                                      const std::vector<int>& keep_qubits) {
  if (keep_qubits.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  const int k = static_cast<int>(keep_qubits.size());
  uint64_t keep_mask = 0;
  for (int q : keep_qubits) keep_mask |= 1ull << q;
  std::vector<int> rest;
  for (int q = 0; q < n; ++q) {
    if (!(keep_mask >> q & 1u)) rest.push_back(q);
  }
  const uint64_t kdim = 1ull << k, rdim = 1ull << rest.size();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kdim, kdim);
  for (uint64_t r = 0; r < kdim; ++r) {
    for (uint64_t c = 0; c < kdim; ++c) {
      uint64_t rbase = 0, cbase = 0;
      for (int b = 0; b < k; ++b) {
        if (r >> b & 1u) rbase |= 1ull << keep_qubits[b];
        if (c >> b & 1u) cbase |= 1ull << keep_qubits[b];
      }
      cplx acc = 0;
      for (uint64_t e = 0; e < rdim; ++e) {
        uint64_t env = 0;
        for (size_t b = 0; b < rest.size(); ++b)
          if (e >> b & 1u) env |= 1ull << rest[b];
        acc += rho(rbase | env, cbase | env);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

Eigen::MatrixXcd partial_trace(const DensityMatrix& d, const std::vector<int>& keep_qubits) {
  return partial_trace_matrix(d.rho, d.num_qubits(), keep_qubits);
}

Eigen::MatrixXcd partial_trace_state(const StateVector& s, const std::vector<int>& keep_qubits) {
  if (keep_qubits.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  const int n = s.num_qubits();
  const int k = static_cast<int>(keep_qubits.size());
  uint64_t keep_mask = 0;
  for (int q : keep_qubits) keep_mask |= 1ull << q;
  std::vector<int> rest;
  for (int q = 0; q < n; ++q) {
    if (!(keep_mask >> q & 1u)) rest.push_back(q);
  }
  const uint64_t kdim = 1ull << k, rdim = 1ull << rest.size();
  // rho_keep(r,c) = sum_env psi[r|env] conj(psi[c|env])
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kdim, kdim);
  std::vector<uint64_t> keep_idx(kdim), rest_idx(rdim);
  for (uint64_t g = 0; g < kdim; ++g) {
    uint64_t idx = 0;
    for (int b = 0; b < k; ++b)
      if (g >> b & 1u) idx |= 1ull << keep_qubits[b];
    keep_idx[g] = idx;
  }
  for (uint64_t e = 0; e < rdim; ++e) {
    uint64_t idx = 0;
    for (size_t b = 0; b < rest.size(); ++b)
      if (e >> b & 1u) idx |= 1ull << rest[b];
    rest_idx[e] = idx;
  }
  std::vector<cplx> col(kdim);
  for (uint64_t e = 0; e < rdim; ++e) {
    for (uint64_t g = 0; g < kdim; ++g) col[g] = s.amps[keep_idx[g] | rest_idx[e]];
    for (uint64_t r = 0; r < kdim; ++r) {
      for (uint64_t c = 0; c < kdim; ++c) out(r, c) += col[r] * std::conj(col[c]);
    }
  }
  return out;
}

Eigen::MatrixXcd particle_state(const DensityMatrix& d, const std::string& particle) {
  int pi = d.layout.index_of(particle);
  return partial_trace(d, {3 * pi, 3 * pi + 1, 3 * pi + 2});
}

Eigen::MatrixXcd particle_state(const StateVector& s, const std::string& particle) {
  int pi = s.layout.index_of(particle);
  return partial_trace_state(s, {3 * pi, 3 * pi + 1, 3 * pi + 2});
}

std::string state_snapshot_json(const StateVector& s, double amplitude_floor) {
  std::ostringstream out;
  out.precision(17);
  out << "{\"layout\":[";
  for (int i = 0; i < s.layout.num_particles(); ++i) {
    if (i) out << ",";
    out << "\"" << s.layout.particles[i].name << "\"";
  }
  out << "],\"qubits\":" << s.num_qubits() << ",\"amplitudes\":[";
  bool first = true;
  for (size_t i = 0; i < s.amps.size(); ++i) {
    if (std::abs(s.amps[i]) <= amplitude_floor) continue;
    if (!first) out << ",";
    first = false;
    out << "[" << i << "," << s.amps[i].real() << "," << s.amps[i].imag() << "]";
  }
  out << "]}";
  return out.str();
}

}  // namespace nsq
