#pragma once

#include <array>

#include "nsq/kraus.hpp"

namespace nsq {

enum class NoiseFamily {
  unified_spin,
  unified_position,
  dephasing_loss,
  dephasing_vanish,
  correctable_mixture,
};

const char* noise_family_name(NoiseFamily f);
NoiseFamily noise_family_from_name(const std::string& s);

/// Declarative channel description; builders below turn a spec into a
/// validated KrausChannel. Vertex labels index 2x + y.
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::dephasing_vanish;
  std::string particle = "P0";
  uint64_t seed = 0;

  // unified_spin: spin maps grouped by the vertex their position
  // projector selects; each group must resolve the identity.
  std::array<std::vector<Eigen::Matrix2cd>, 4> spin_maps;

  // unified_position: branch weight for the x-axis elements; map groups
  // keyed by (spin bit << 1) | other-axis bit. x groups resolve
  // weight*I, y groups (1-weight)*I.
  double x_branch_weight = 0.5;
  std::array<std::vector<Eigen::Matrix2cd>, 4> x_maps, y_maps;

  // dephasing_loss amplitudes, index n = (c<<2)|(x<<1)|y.
  std::array<cplx, 8> alphas{};

  // correctable_mixture term count.
  int mixture_terms = 4;

  std::string to_json() const;
  static NoiseSpec from_json(const std::string& text);
};

KrausChannel build_spin_noise(const NoiseSpec& spec, const RegisterLayout& lay);
KrausChannel build_position_noise(const NoiseSpec& spec, const RegisterLayout& lay);
KrausChannel build_dephasing_loss(const NoiseSpec& spec, const RegisterLayout& lay);
KrausChannel build_dephasing_vanish(const std::string& particle, const RegisterLayout& lay);
// Nine-qubit Pauli mixture: terms sqrt(p_j) * (gauge_j sigma_{m_j}).
KrausChannel build_correctable_mixture(uint64_t seed, int terms);

KrausChannel build_channel(const NoiseSpec& spec, const RegisterLayout& lay);

// Random family generators used by the sweeps.
NoiseSpec random_spin_spec(uint64_t seed, int maps_per_vertex = 2);
NoiseSpec random_position_spec(uint64_t seed, int maps_per_group = 2);
NoiseSpec dephasing_loss_spec(const std::string& particle);
NoiseSpec mixture_spec(uint64_t seed, int terms);

}  // namespace nsq
