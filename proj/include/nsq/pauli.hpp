#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nsq {

using cplx = std::complex<double>;

/// An n-qubit Pauli string with exact phase tracking.
///
/// The operator equals i^phase_exp * prod_k X_k^{x_k} Z_k^{z_k} with
/// qubit k little-endian in basis indices. Y is represented as bits set
/// in both masks under the fixed convention Y = iXZ.
class PauliOperator {
 public:
  PauliOperator() = default;
  explicit PauliOperator(int width) : width_(width) { check_width(width); }
  PauliOperator(int width, uint64_t xmask, uint64_t zmask, unsigned phase_exp = 0);

  static PauliOperator identity(int width) { return PauliOperator(width); }
  // Single-qubit X/Y/Z embedded at qubit q.
  static PauliOperator x(int width, int q);
  static PauliOperator y(int width, int q);
  static PauliOperator z(int width, int q);

  int width() const { return width_; }
  uint64_t xmask() const { return x_; }
  uint64_t zmask() const { return z_; }
  unsigned phase_exp() const { return phase_; }
  cplx phase() const;

  bool is_identity_mask() const { return x_ == 0 && z_ == 0; }
  bool is_hermitian() const;

  PauliOperator adjoint() const;
  // Drops the phase, keeping only the string.
  PauliOperator phaseless() const { return PauliOperator(width_, x_, z_); }
  PauliOperator times_phase(unsigned i_exp) const;

  bool operator==(const PauliOperator& o) const = default;

  // Extends this operator to a wider register, placing qubit k at
  // qubit_map[k].
  PauliOperator embedded(int new_width, const std::vector<int>& qubit_map) const;

  Eigen::MatrixXcd dense_matrix(int max_width = 12) const;

  void apply(std::vector<cplx>& amps) const;        // |psi> -> P|psi>
  void left_mul(Eigen::MatrixXcd& rho) const;       // rho -> P rho
  void right_mul(Eigen::MatrixXcd& rho) const;      // rho -> rho P

 private:
  static void check_width(int w);
  int width_ = 0;
  uint64_t x_ = 0;
  uint64_t z_ = 0;
  unsigned phase_ = 0;  // exponent of i, mod 4
};

PauliOperator multiply(const PauliOperator& a, const PauliOperator& b);
bool commutes(const PauliOperator& a, const PauliOperator& b);

/// Group generated by a list of Pauli strings, reduced over GF(2) with
/// the phase column carried along. Membership is tested by symplectic
/// elimination; the exact-phase variant additionally multiplies out the
/// decomposition and compares phases.
class PauliGroup {
 public:
  PauliGroup(int width, std::vector<PauliOperator> generators);

  int width() const { return width_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  const std::vector<PauliOperator>& generators() const { return gens_; }

  struct Membership {
    bool contained = false;
    // Indices into generators(); the ordered product (ascending index,
    // repeated indices absent) equals the query up to the phase factor.
    std::vector<int> decomposition;
    cplx phase_factor{1.0, 0.0};  // query = phase_factor * product
  };

  Membership contains(const PauliOperator& p, bool ignore_phase = true) const;

  // Random group element: product of a random generator subset.
  PauliOperator sample(uint64_t subset_mask) const;

 private:
  struct Row {
    uint64_t x = 0, z = 0;
    uint32_t combo = 0;  // generator subset producing this row
  };
  int width_;
  std::vector<PauliOperator> gens_;
  std::vector<Row> rows_;
};

// Textual form, e.g. "+Zc.Zx.Iy@P0 * Zc.Zx.Iy@P2". Particles not named
// carry the identity. Phase prefixes: "+", "-", "+i", "-i" (default "+").
struct ParticleNames {
  std::vector<std::string> names;  // index -> name, 3 qubits per particle
  int find(const std::string& name) const;
};

PauliOperator parse_pauli(const std::string& text, const ParticleNames& reg);
std::string print_pauli(const PauliOperator& p, const ParticleNames& reg);

}  // namespace nsq
