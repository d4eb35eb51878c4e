#include "nsq/code.hpp"

#include <bit>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace nsq {

const char* logical_part_name(LogicalPart p) {
  switch (p) {
    case LogicalPart::I: return "I";
    case LogicalPart::X: return "X";
    case LogicalPart::Y: return "Y";
    case LogicalPart::Z: return "Z";
  }
  return "?";
}

NestedSquaresCode::NestedSquaresCode()
    : layout_(code_layout()),
      gauge_(9, {}) {
  const ParticleNames reg = layout_.names();
  auto P = [&](const std::string& s) { return parse_pauli(s, reg); };

  s_[0] = P("Zc.Zx.Iy@P0 * Zc.Zx.Iy@P2");
  s_[1] = P("Zc.Zx.Iy@P2 * Zc.Zx.Iy@P4");
  s_[2] = P("Zc.Ix.Zy@P0 * Zc.Ix.Zy@P2");
  s_[3] = P("Zc.Ix.Zy@P2 * Zc.Ix.Zy@P4");
  s_[4] = P("Xc.Xx.Xy@P0 * Xc.Xx.Xy@P2");
  s_[5] = P("Xc.Xx.Xy@P2 * Xc.Xx.Xy@P4");

  // The defining logical states are the +1/-1 eigenstates of the X-type
  // string on the outer particle; the all-particle Z-type string flips
  // them. The accessors are named by action on the encoded qubit.
  zbar_ = P("Xc.Xx.Xy@P4");
  xbar_ = P("Zc.Zx.Zy@P0 * Zc.Zx.Zy@P2 * Zc.Zx.Zy@P4");
  zg_[0] = P("Zc.Zx.Iy@P0 * Zc.Zx.Iy@P2 * Zc.Zx.Iy@P4");
  xg_[0] = P("Xc.Ix.Xy@P0 * Xc.Ix.Xy@P2 * Xc.Ix.Xy@P4");
  zg_[1] = P("Zc.Ix.Zy@P0 * Zc.Ix.Zy@P2 * Zc.Ix.Zy@P4");
  xg_[1] = P("Xc.Xx.Iy@P0 * Xc.Xx.Iy@P2 * Xc.Xx.Iy@P4");

  gauge_ = PauliGroup(9, {s_[0], s_[1], s_[2], s_[3], s_[4], s_[5], zg_[0], xg_[0], zg_[1], xg_[1]});
}

PauliOperator NestedSquaresCode::logical_y() const {
  return multiply(xbar_, zbar_).times_phase(1);
}

PauliOperator NestedSquaresCode::syndrome_generator(int i) const {
  // The Z-pair bits come out cumulatively (the ancilla spin is read for
  // both Z-type stages before its reset), so bits 1 and 3 report row
  // products; the X-type stage reads fresh spins.
  switch (i) {
    case 0: return s_[2];
    case 1: return multiply(s_[0], s_[2]);
    case 2: return s_[3];
    case 3: return multiply(s_[1], s_[3]);
    case 4: return s_[4];
    case 5: return s_[5];
    default: throw std::invalid_argument("syndrome_generator: index");
  }
}

int NestedSquaresCode::syndrome_from_raw(int a) {
  auto bit = [&](int i) { return a >> i & 1; };
  int m0 = bit(2);
  int m1 = bit(0) ^ bit(2);
  int m2 = bit(3);
  int m3 = bit(1) ^ bit(3);
  int m4 = bit(4);
  int m5 = bit(5);
  return m0 | m1 << 1 | m2 << 2 | m3 << 3 | m4 << 4 | m5 << 5;
}

int NestedSquaresCode::raw_from_syndrome(int m) {
  auto bit = [&](int i) { return m >> i & 1; };
  int a2 = bit(0);
  int a0 = bit(0) ^ bit(1);
  int a3 = bit(2);
  int a1 = bit(2) ^ bit(3);
  int a4 = bit(4);
  int a5 = bit(5);
  return a0 | a1 << 1 | a2 << 2 | a3 << 3 | a4 << 4 | a5 << 5;
}

int NestedSquaresCode::raw_anticommute_pattern(const PauliOperator& p) const {
  int a = 0;
  for (int i = 0; i < 6; ++i) {
    if (!commutes(p, s_[i])) a |= 1 << i;
  }
  return a;
}

ErrorClass NestedSquaresCode::classify(const PauliOperator& p) const {
  if (p.width() != 9) throw std::invalid_argument("classify: width mismatch");
  ErrorClass ec;
  ec.syndrome = syndrome_from_raw(raw_anticommute_pattern(p));
  PauliOperator residual = multiply(p, recovery_operator(ec.syndrome).adjoint());
  const bool anti_z = !commutes(residual, zbar_);
  const bool anti_x = !commutes(residual, xbar_);
  if (anti_z) {
    ec.logical = anti_x ? LogicalPart::Y : LogicalPart::X;
  } else {
    ec.logical = anti_x ? LogicalPart::Z : LogicalPart::I;
  }
  if (ec.logical == LogicalPart::I) {
    auto mem = gauge_.contains(residual, true);
    if (!mem.contained) throw std::runtime_error("classify: logical-I residual outside gauge group");
    ec.gauge_witness = mem.decomposition;
  }
  return ec;
}

namespace {

// sigma_X quarter-table: correction on one particle indexed by a 2-bit
// pattern (0 none, 1 spin, 2 x-axis, 3 y-axis).
PauliOperator quarter(const RegisterLayout& lay, const std::string& particle, int pattern) {
  const int w = lay.num_qubits();
  switch (pattern) {
    case 0: return PauliOperator::identity(w);
    case 1: return PauliOperator::x(w, lay.qubit(particle, Slot::c));
    case 2: return PauliOperator::x(w, lay.qubit(particle, Slot::x));
    case 3: return PauliOperator::x(w, lay.qubit(particle, Slot::y));
  }
  throw std::invalid_argument("quarter: pattern");
}

}  // namespace

PauliOperator NestedSquaresCode::recovery_operator(int m) const {
  if (m < 0 || m > 63) throw std::invalid_argument("recovery_operator: syndrome range");
  const int w = layout_.num_qubits();
  const int zpat = m >> 4 & 3;  // (m5 m4) -> bit1 bit0
  PauliOperator sigma_z = PauliOperator::identity(w);
  switch (zpat) {
    case 0b00: break;
    case 0b01: sigma_z = PauliOperator::z(w, layout_.qubit("P0", Slot::c)); break;
    case 0b10: sigma_z = PauliOperator::z(w, layout_.qubit("P4", Slot::c)); break;
    case 0b11: sigma_z = PauliOperator::z(w, layout_.qubit("P2", Slot::c)); break;
  }
  const int hi = m >> 2 & 3;  // (m3 m2)
  const int lo = m & 3;       // (m1 m0)
  PauliOperator sigma_x = PauliOperator::identity(w);
  if (hi != 0 && hi == lo) {
    sigma_x = quarter(layout_, "P2", hi);
  } else {
    sigma_x = multiply(quarter(layout_, "P4", hi), quarter(layout_, "P0", lo));
  }
  return multiply(sigma_z, sigma_x);
}

bool NestedSquaresCode::recovery_listed(int m) const {
  const int hi = m >> 2 & 3, lo = m & 3;
  return hi == 0 || lo == 0 || hi == lo;
}

Eigen::MatrixXcd NestedSquaresCode::projector(int m) const {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(512, 512);
  const int a = raw_from_syndrome(m);
  for (int i = 0; i < 6; ++i) {
    Eigen::MatrixXcd sp = p;
    s_[i].left_mul(sp);
    p = 0.5 * (p + (a >> i & 1 ? -1.0 : 1.0) * sp);
  }
  return p;
}

void NestedSquaresCode::project_syndrome(StateVector& s, int m) const {
  if (s.num_qubits() != 9) throw std::invalid_argument("project_syndrome: nine-qubit register");
  const int a = raw_from_syndrome(m);
  std::vector<cplx> tmp;
  for (int i = 0; i < 6; ++i) {
    tmp = s.amps;
    s_[i].apply(tmp);
    const double sign = a >> i & 1 ? -1.0 : 1.0;
    for (size_t k = 0; k < s.amps.size(); ++k) s.amps[k] = 0.5 * (s.amps[k] + sign * tmp[k]);
  }
}

void NestedSquaresCode::project_syndrome(Eigen::MatrixXcd& rho, int m) const {
  const int a = raw_from_syndrome(m);
  for (int i = 0; i < 6; ++i) {
    Eigen::MatrixXcd t = rho;
    s_[i].left_mul(t);
    rho = 0.5 * (rho + (a >> i & 1 ? -1.0 : 1.0) * t);
  }
  for (int i = 0; i < 6; ++i) {
    Eigen::MatrixXcd t = rho;
    s_[i].right_mul(t);
    rho = 0.5 * (rho + (a >> i & 1 ? -1.0 : 1.0) * t);
  }
}

StateVector NestedSquaresCode::logical_state(cplx alpha, cplx beta) const {
  const double n2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(n2 - 1.0) > kNormTol) {
    throw std::invalid_argument("logical_state: coefficients not normalized");
  }
  StateVector s(layout_);
  std::fill(s.amps.begin(), s.amps.end(), cplx(0, 0));
  const double w = std::pow(2.0, -1.5);
  for (int b = 0; b < 8; ++b) {
    uint64_t idx = 0;
    int ones = 0;
    for (int pi = 0; pi < 3; ++pi) {
      if (b >> pi & 1) {
        idx |= 7ull << (3 * pi);
        ++ones;
      }
    }
    s.amps[idx] = w * (alpha + beta * (ones % 2 ? -1.0 : 1.0));
  }
  return s;
}

std::string NestedSquaresCode::definition_json() const {
  const ParticleNames reg = layout_.names();
  std::ostringstream out;
  out << "{";
  for (int i = 0; i < 6; ++i) {
    out << "\"s" << i << "\":\"" << print_pauli(s_[i], reg) << "\",";
  }
  out << "\"Z_logical\":\"" << print_pauli(zbar_, reg) << "\",";
  out << "\"X_logical\":\"" << print_pauli(xbar_, reg) << "\",";
  out << "\"Z_gauge0\":\"" << print_pauli(zg_[0], reg) << "\",";
  out << "\"X_gauge0\":\"" << print_pauli(xg_[0], reg) << "\",";
  out << "\"Z_gauge1\":\"" << print_pauli(zg_[1], reg) << "\",";
  out << "\"X_gauge1\":\"" << print_pauli(xg_[1], reg) << "\",";
  out << "\"recovery\":{";
  for (int m = 0; m < 64; ++m) {
    if (m) out << ",";
    out << "\"" << m << "\":\"" << print_pauli(recovery_operator(m), reg) << "\"";
  }
  out << "}}";
  return out.str();
}

const NestedSquaresCode& the_code() {
  static const NestedSquaresCode code;
  return code;
}

namespace {

// GF(2) linear solve A x = b over 18-bit symplectic vectors.
// Rows are (x|z) masks; the symplectic product pairs x with z.
struct SymplecticSolver {
  std::vector<uint64_t> rows;  // 18-bit coefficient rows
  std::vector<int> rhs;

  static uint64_t vec_of(const PauliOperator& p) {
    return p.xmask() | (p.zmask() << 9);
  }
  // Coefficient row of the constraint <q, p> = rhs: the product pairs
  // q.x with p.z and q.z with p.x, so the row swaps halves of p.
  static uint64_t row_of(const PauliOperator& p) {
    return p.zmask() | (p.xmask() << 9);
  }

  std::optional<uint64_t> solve() const {
    std::vector<uint64_t> a = rows;
    std::vector<int> b = rhs;
    std::vector<int> pivot_col;
    std::vector<uint64_t> reduced;
    std::vector<int> reduced_rhs;
    for (size_t r = 0; r < a.size(); ++r) {
      uint64_t row = a[r];
      int rb = b[r];
      for (size_t k = 0; k < reduced.size(); ++k) {
        if (row >> pivot_col[k] & 1u) {
          row ^= reduced[k];
          rb ^= reduced_rhs[k];
        }
      }
      if (row == 0) {
        if (rb) return std::nullopt;
        continue;
      }
      int pc = std::countr_zero(row);
      pivot_col.push_back(pc);
      reduced.push_back(row);
      reduced_rhs.push_back(rb);
    }
    // back-substitute, free variables set to zero
    uint64_t x = 0;
    for (int k = static_cast<int>(reduced.size()) - 1; k >= 0; --k) {
      int parity = reduced_rhs[k] ^ static_cast<int>(std::popcount(reduced[k] & x) & 1);
      if (parity) x |= 1ull << pivot_col[k];
    }
    return x;
  }
};

}  // namespace

SubsystemFrame::SubsystemFrame(const NestedSquaresCode& code) {
  // Destabilizer d_i: anticommutes with s_i, commutes with every other
  // listed operator and with previously found destabilizers.
  std::vector<PauliOperator> fixed = {
      code.stabilizer(0), code.stabilizer(1), code.stabilizer(2), code.stabilizer(3),
      code.stabilizer(4), code.stabilizer(5), code.gauge_z(0),    code.gauge_z(1),
      code.logical_z(),   code.gauge_x(0),    code.gauge_x(1),    code.logical_x()};
  std::vector<PauliOperator> destab;
  for (int i = 0; i < 6; ++i) {
    SymplecticSolver solver;
    for (size_t j = 0; j < fixed.size(); ++j) {
      solver.rows.push_back(SymplecticSolver::row_of(fixed[j]));
      solver.rhs.push_back(j == static_cast<size_t>(i) ? 1 : 0);
    }
    for (const auto& d : destab) {
      solver.rows.push_back(SymplecticSolver::row_of(d));
      solver.rhs.push_back(0);
    }
    auto sol = solver.solve();
    if (!sol) throw std::runtime_error("SubsystemFrame: no destabilizer solution");
    uint64_t v = *sol;
    PauliOperator d(9, v & 0x1FFu, v >> 9 & 0x1FFu);
    // canonical Hermitian phase
    if (!d.is_hermitian()) d = d.times_phase(1);
    destab.push_back(d);
  }

  // Fiducial: joint +1 eigenstate of the nine commuting Z-side operators.
  StateVector v(code.layout());
  std::vector<PauliOperator> zside = {code.stabilizer(0), code.stabilizer(1), code.stabilizer(2),
                                      code.stabilizer(3), code.stabilizer(4), code.stabilizer(5),
                                      code.gauge_z(0),    code.gauge_z(1),    code.logical_z()};
  for (const auto& op : zside) {
    std::vector<cplx> t = v.amps;
    op.apply(t);
    for (size_t k = 0; k < v.amps.size(); ++k) v.amps[k] = 0.5 * (v.amps[k] + t[k]);
  }
  if (v.norm() < 1e-9) throw std::runtime_error("SubsystemFrame: fiducial projection vanished");
  v.normalize();

  u_ = Eigen::MatrixXcd::Zero(512, 512);
  for (int a = 0; a < 64; ++a) {
    for (int g = 0; g < 4; ++g) {
      for (int l = 0; l < 2; ++l) {
        PauliOperator op = PauliOperator::identity(9);
        for (int i = 0; i < 6; ++i) {
          if (a >> i & 1) op = multiply(op, destab[i]);
        }
        if (g & 1) op = multiply(op, code.gauge_x(0));
        if (g & 2) op = multiply(op, code.gauge_x(1));
        if (l) op = multiply(op, code.logical_x());
        std::vector<cplx> col = v.amps;
        op.apply(col);
        const int virt = a | g << 6 | l << 8;
        for (int j = 0; j < 512; ++j) u_(virt, j) = std::conj(col[j]);
      }
    }
  }
}

Eigen::MatrixXcd SubsystemFrame::extract_logical(const Eigen::MatrixXcd& rho9) const {
  Eigen::MatrixXcd framed = u_ * rho9 * u_.adjoint();
  return partial_trace_matrix(framed, 9, {8});
}

Eigen::MatrixXcd SubsystemFrame::extract_logical(const DensityMatrix& d) const {
  return extract_logical(d.rho);
}

Eigen::MatrixXcd SubsystemFrame::extract_logical(const StateVector& s9) const {
  if (s9.num_qubits() != 9) throw std::invalid_argument("extract_logical: nine-qubit register");
  Eigen::Map<const Eigen::VectorXcd> v(s9.amps.data(), 512);
  Eigen::VectorXcd framed = u_ * v;
  StateVector t = s9;
  t.amps.assign(framed.data(), framed.data() + 512);
  return partial_trace_state(t, {8});
}

const SubsystemFrame& the_frame() {
  static const SubsystemFrame frame(the_code());
  return frame;
}

namespace {

PauliOperator embed_code_op(const PauliOperator& p, const RegisterLayout& target,
                            const std::string& suffix) {
  const RegisterLayout from = code_layout();
  std::vector<int> map(9);
  for (int pi = 0; pi < 3; ++pi) {
    const std::string name = from.particles[pi].name + suffix;
    int ti = target.index_of(name);
    for (int s = 0; s < 3; ++s) map[3 * pi + s] = 3 * ti + s;
  }
  return p.embedded(target.num_qubits(), map);
}

}  // namespace

Eigen::MatrixXcd logical_qubit_from_expectations(const StateVector& s, const std::string& suffix) {
  const auto& code = the_code();
  const double ex = expectation(s, embed_code_op(code.logical_x(), s.layout, suffix));
  const double ey = expectation(s, embed_code_op(code.logical_y(), s.layout, suffix));
  const double ez = expectation(s, embed_code_op(code.logical_z(), s.layout, suffix));
  Eigen::MatrixXcd rho(2, 2);
  rho << 1.0 + ez, cplx(ex, -ey), cplx(ex, ey), 1.0 - ez;
  return rho / 2.0;
}

Eigen::MatrixXcd logical_pair_from_expectations(const StateVector& s, const std::string& suffix_a,
                                                const std::string& suffix_b) {
  const auto& code = the_code();
  auto op = [&](int k) {
    switch (k) {
      case 1: return code.logical_x();
      case 2: return code.logical_y();
      case 3: return code.logical_z();
      default: return PauliOperator::identity(9);
    }
  };
  // rho = (1/4) sum_{PQ} <P_a Q_b> P (x) Q over the 16 logical Pauli pairs.
  Eigen::Matrix2cd sigma[4];
  sigma[0] = Eigen::Matrix2cd::Identity();
  sigma[1] << 0, 1, 1, 0;
  sigma[2] << 0, cplx(0, -1), cplx(0, 1), 0;
  sigma[3] << 1, 0, 0, -1;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
  for (int p = 0; p < 4; ++p) {
    for (int q = 0; q < 4; ++q) {
      PauliOperator pa = embed_code_op(op(p), s.layout, suffix_a);
      PauliOperator pb = embed_code_op(op(q), s.layout, suffix_b);
      const double e = expectation(s, multiply(pa, pb));
      // kron with system A as the high bit of the 2-qubit index
      Eigen::MatrixXcd term = Eigen::MatrixXcd::Zero(4, 4);
      for (int r1 = 0; r1 < 2; ++r1)
        for (int c1 = 0; c1 < 2; ++c1)
          for (int r0 = 0; r0 < 2; ++r0)
            for (int c0 = 0; c0 < 2; ++c0)
              term(r1 * 2 + r0, c1 * 2 + c0) = sigma[p](r1, c1) * sigma[q](r0, c0);
      rho += e * term;
    }
  }
  return rho / 4.0;
}

}  // namespace nsq
