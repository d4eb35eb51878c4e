#include "nsq/pauli.hpp"

#include <bit>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace nsq {

namespace {
constexpr cplx kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
}

void PauliOperator::check_width(int w) {
  if (w < 0 || w > 64) {
    throw std::invalid_argument("PauliOperator width out of range: " + std::to_string(w));
  }
}

PauliOperator::PauliOperator(int width, uint64_t xmask, uint64_t zmask, unsigned phase_exp)
    : width_(width), x_(xmask), z_(zmask), phase_(phase_exp & 3u) {
  check_width(width);
  if (width < 64 && ((xmask | zmask) >> width) != 0) {
    throw std::invalid_argument("Pauli mask exceeds register width");
  }
}

PauliOperator PauliOperator::x(int width, int q) { return PauliOperator(width, 1ull << q, 0); }
PauliOperator PauliOperator::z(int width, int q) { return PauliOperator(width, 0, 1ull << q); }
PauliOperator PauliOperator::y(int width, int q) {
  return PauliOperator(width, 1ull << q, 1ull << q, 1);
}

cplx PauliOperator::phase() const { return kPhases[phase_]; }

bool PauliOperator::is_hermitian() const { return adjoint() == *this; }

PauliOperator PauliOperator::adjoint() const {
  // (i^e X^x Z^z)^dag = i^{-e} Z^z X^x = i^{-e} (-1)^{|x&z|} X^x Z^z
  unsigned e = (4u - phase_ + 2u * (std::popcount(x_ & z_) & 1u)) & 3u;
  return PauliOperator(width_, x_, z_, e);
}

PauliOperator PauliOperator::times_phase(unsigned i_exp) const {
  return PauliOperator(width_, x_, z_, phase_ + i_exp);
}

PauliOperator PauliOperator::embedded(int new_width, const std::vector<int>& qubit_map) const {
  if (static_cast<int>(qubit_map.size()) != width_) {
    throw std::invalid_argument("embedded: qubit_map size must equal width");
  }
  uint64_t nx = 0, nz = 0;
  for (int k = 0; k < width_; ++k) {
    if (x_ >> k & 1u) nx |= 1ull << qubit_map[k];
    if (z_ >> k & 1u) nz |= 1ull << qubit_map[k];
  }
  return PauliOperator(new_width, nx, nz, phase_);
}

Eigen::MatrixXcd PauliOperator::dense_matrix(int max_width) const {
  if (width_ > max_width) {
    throw std::invalid_argument("dense_matrix: width " + std::to_string(width_) +
                                " exceeds dense limit " + std::to_string(max_width));
  }
  const uint64_t dim = 1ull << width_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (uint64_t b = 0; b < dim; ++b) {
    cplx amp = kPhases[phase_];
    if (std::popcount(z_ & b) & 1) amp = -amp;
    m(b ^ x_, b) = amp;
  }
  return m;
}

void PauliOperator::apply(std::vector<cplx>& amps) const {
  const uint64_t dim = 1ull << width_;
  if (amps.size() != dim) throw std::invalid_argument("apply: state size mismatch");
  if (x_ == 0) {
    for (uint64_t b = 0; b < dim; ++b) {
      cplx amp = kPhases[phase_] * amps[b];
      if (std::popcount(z_ & b) & 1) amp = -amp;
      amps[b] = amp;
    }
    return;
  }
  std::vector<cplx> out(dim);
  for (uint64_t b = 0; b < dim; ++b) {
    cplx amp = kPhases[phase_] * amps[b];
    if (std::popcount(z_ & b) & 1) amp = -amp;
    out[b ^ x_] = amp;
  }
  amps.swap(out);
}

void PauliOperator::left_mul(Eigen::MatrixXcd& rho) const {
  const long dim = 1l << width_;
  if (rho.rows() != dim || rho.cols() != dim) throw std::invalid_argument("left_mul: dim mismatch");
  Eigen::MatrixXcd out(dim, dim);
  for (long b = 0; b < dim; ++b) {
    cplx f = kPhases[phase_];
    if (std::popcount(z_ & static_cast<uint64_t>(b)) & 1) f = -f;
    out.row(b ^ static_cast<long>(x_)) = f * rho.row(b);
  }
  rho.swap(out);
}

void PauliOperator::right_mul(Eigen::MatrixXcd& rho) const {
  // P|b> = f_b |b^x>  =>  (rho P) column b^x takes f_b rho column b... careful:
  // (rho P)_{r,c} = sum_b rho_{r,b} P_{b,c}; P_{b,c} nonzero at b = c^x with value f_c.
  const long dim = 1l << width_;
  if (rho.rows() != dim || rho.cols() != dim) throw std::invalid_argument("right_mul: dim mismatch");
  Eigen::MatrixXcd out(dim, dim);
  for (long c = 0; c < dim; ++c) {
    cplx f = kPhases[phase_];
    if (std::popcount(z_ & static_cast<uint64_t>(c)) & 1) f = -f;
    out.col(c) = f * rho.col(c ^ static_cast<long>(x_));
  }
  rho.swap(out);
}

PauliOperator multiply(const PauliOperator& a, const PauliOperator& b) {
  if (a.width() != b.width()) throw std::invalid_argument("multiply: width mismatch");
  unsigned e = a.phase_exp() + b.phase_exp() + 2u * (std::popcount(a.zmask() & b.xmask()) & 1u);
  return PauliOperator(a.width(), a.xmask() ^ b.xmask(), a.zmask() ^ b.zmask(), e);
}

bool commutes(const PauliOperator& a, const PauliOperator& b) {
  if (a.width() != b.width()) throw std::invalid_argument("commutes: width mismatch");
  int s = std::popcount(a.xmask() & b.zmask()) + std::popcount(a.zmask() & b.xmask());
  return (s & 1) == 0;
}

namespace {

// Pivot position over the concatenated (x|z) vector; -1 when zero.
int pivot_bit(uint64_t x, uint64_t z) {
  if (x) return 64 + (63 - std::countl_zero(x));
  if (z) return 63 - std::countl_zero(z);
  return -1;
}

}  // namespace

PauliGroup::PauliGroup(int width, std::vector<PauliOperator> generators)
    : width_(width), gens_(std::move(generators)) {
  if (gens_.size() > 32) throw std::invalid_argument("PauliGroup: too many generators");
  for (const auto& g : gens_) {
    if (g.width() != width_) throw std::invalid_argument("PauliGroup: generator width mismatch");
  }
  for (size_t gi = 0; gi < gens_.size(); ++gi) {
    Row r{gens_[gi].xmask(), gens_[gi].zmask(), 1u << gi};
    for (const Row& p : rows_) {
      int pb = pivot_bit(p.x, p.z);
      if (pb >= 64 ? (r.x >> (pb - 64) & 1u) : (r.z >> pb & 1u)) {
        r.x ^= p.x;
        r.z ^= p.z;
        r.combo ^= p.combo;
      }
    }
    if (r.x | r.z) {
      rows_.push_back(r);
      // keep rows sorted by descending pivot so reduction stays triangular
      for (size_t i = rows_.size(); i > 1; --i) {
        if (pivot_bit(rows_[i - 1].x, rows_[i - 1].z) > pivot_bit(rows_[i - 2].x, rows_[i - 2].z)) {
          std::swap(rows_[i - 1], rows_[i - 2]);
        } else {
          break;
        }
      }
    }
  }
}

PauliGroup::Membership PauliGroup::contains(const PauliOperator& p, bool ignore_phase) const {
  if (p.width() != width_) throw std::invalid_argument("contains: width mismatch");
  uint64_t rx = p.xmask(), rz = p.zmask();
  uint32_t combo = 0;
  for (const Row& row : rows_) {
    int pb = pivot_bit(row.x, row.z);
    if (pb >= 64 ? (rx >> (pb - 64) & 1u) : (rz >> pb & 1u)) {
      rx ^= row.x;
      rz ^= row.z;
      combo ^= row.combo;
    }
  }
  Membership m;
  if (rx | rz) return m;
  m.contained = true;
  PauliOperator prod = PauliOperator::identity(width_);
  for (int gi = 0; gi < static_cast<int>(gens_.size()); ++gi) {
    if (combo >> gi & 1u) {
      m.decomposition.push_back(gi);
      prod = multiply(prod, gens_[gi]);
    }
  }
  unsigned diff = (p.phase_exp() - prod.phase_exp()) & 3u;
  m.phase_factor = kPhases[diff];
  if (!ignore_phase && diff != 0) m.contained = false;
  return m;
}

PauliOperator PauliGroup::sample(uint64_t subset_mask) const {
  PauliOperator prod = PauliOperator::identity(width_);
  for (size_t gi = 0; gi < gens_.size(); ++gi) {
    if (subset_mask >> gi & 1u) prod = multiply(prod, gens_[gi]);
  }
  return prod;
}

int ParticleNames::find(const std::string& name) const {
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

struct SlotLetter {
  bool x = false, z = false;
};

SlotLetter letter_bits(char c) {
  switch (c) {
    case 'I': return {false, false};
    case 'X': return {true, false};
    case 'Z': return {false, true};
    case 'Y': return {true, true};
    default: throw std::invalid_argument(std::string("bad Pauli letter: ") + c);
  }
}

}  // namespace

PauliOperator parse_pauli(const std::string& text, const ParticleNames& reg) {
  const int width = static_cast<int>(reg.names.size()) * 3;
  uint64_t xm = 0, zm = 0;
  unsigned prefix_exp = 0;
  int ybits = 0;

  std::string s;
  for (char c : text)
    if (!isspace(static_cast<unsigned char>(c))) s += c;

  size_t pos = 0;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    bool neg = s[pos] == '-';
    ++pos;
    bool imag = pos < s.size() && s[pos] == 'i';
    if (imag) ++pos;
    prefix_exp = (neg ? 2u : 0u) + (imag ? 1u : 0u);
  } else if (pos < s.size() && s[pos] == 'i' && pos + 1 < s.size() &&
             (s[pos + 1] == 'I' || s[pos + 1] == 'X' || s[pos + 1] == 'Y' || s[pos + 1] == 'Z')) {
    prefix_exp = 1;
    ++pos;
  }

  if (pos < s.size() && s.compare(pos, 1, "I") == 0 && s.find('@', pos) == std::string::npos) {
    // bare identity
    return PauliOperator(width, 0, 0, prefix_exp);
  }

  while (pos < s.size()) {
    if (s[pos] == '*') {
      ++pos;
      continue;
    }
    size_t at = s.find('@', pos);
    if (at == std::string::npos) throw std::invalid_argument("parse_pauli: missing '@' in " + text);
    size_t end = s.find('*', at);
    if (end == std::string::npos) end = s.size();
    std::string slots = s.substr(pos, at - pos);
    std::string pname = s.substr(at + 1, end - at - 1);
    int pi = reg.find(pname);
    if (pi < 0) throw std::invalid_argument("parse_pauli: unknown particle " + pname);

    size_t sp = 0;
    while (sp < slots.size()) {
      size_t dot = slots.find('.', sp);
      std::string tok = slots.substr(sp, dot == std::string::npos ? std::string::npos : dot - sp);
      if (tok.size() != 2) throw std::invalid_argument("parse_pauli: bad slot token " + tok);
      int slot = tok[1] == 'c' ? 0 : tok[1] == 'x' ? 1 : tok[1] == 'y' ? 2 : -1;
      if (slot < 0) throw std::invalid_argument("parse_pauli: bad slot axis " + tok);
      SlotLetter lb = letter_bits(tok[0]);
      int q = pi * 3 + slot;
      if ((lb.x || lb.z) && ((xm >> q & 1u) || (zm >> q & 1u))) {
        throw std::invalid_argument("parse_pauli: duplicate slot " + tok);
      }
      if (lb.x) xm |= 1ull << q;
      if (lb.z) zm |= 1ull << q;
      if (lb.x && lb.z) ++ybits;
      if (dot == std::string::npos) break;
      sp = dot + 1;
    }
    pos = end;
  }
  // Displayed Y is the Hermitian Y; internally that is iXZ per qubit.
  return PauliOperator(width, xm, zm, prefix_exp + static_cast<unsigned>(ybits));
}

std::string print_pauli(const PauliOperator& p, const ParticleNames& reg) {
  if (p.width() != static_cast<int>(reg.names.size()) * 3) {
    throw std::invalid_argument("print_pauli: register size mismatch");
  }
  int ybits = static_cast<int>(std::popcount(p.xmask() & p.zmask()));
  unsigned prefix = (p.phase_exp() + 4u - static_cast<unsigned>(ybits % 4)) & 3u;
  static const char* kPrefix[4] = {"+", "+i", "-", "-i"};
  std::ostringstream out;
  out << kPrefix[prefix];
  bool any = false;
  static const char kAxis[3] = {'c', 'x', 'y'};
  for (size_t pi = 0; pi < reg.names.size(); ++pi) {
    std::string f;
    bool nontrivial = false;
    for (int slot = 0; slot < 3; ++slot) {
      int q = static_cast<int>(pi) * 3 + slot;
      bool bx = p.xmask() >> q & 1u, bz = p.zmask() >> q & 1u;
      char letter = bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
      if (letter != 'I') nontrivial = true;
      if (slot) f += '.';
      f += letter;
      f += kAxis[slot];
    }
    if (nontrivial) {
      if (any) out << " * ";
      out << f << "@" << reg.names[pi];
      any = true;
    }
  }
  if (!any) out << "I";
  return out.str();
}

}  // namespace nsq
