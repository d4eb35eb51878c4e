#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nsq/pauli.hpp"

namespace nsq {

enum class Role { physical, ancillary, mediator };
enum class Slot : int { c = 0, x = 1, y = 2 };

/// Ordered particle register. Each particle owns three qubits (c, x, y);
/// global qubit index = 3 * particle position + slot, little-endian in
/// basis indices. Vertex labels "xy" mean bit x then bit y, so "10" is
/// x = 1, y = 0.
struct RegisterLayout {
  struct Particle {
    std::string name;
    Role role = Role::physical;
  };
  std::vector<Particle> particles;

  int num_particles() const { return static_cast<int>(particles.size()); }
  int num_qubits() const { return 3 * num_particles(); }

  int index_of(const std::string& name) const {
    for (size_t i = 0; i < particles.size(); ++i) {
      if (particles[i].name == name) return static_cast<int>(i);
    }
    throw std::invalid_argument("layout: unknown particle " + name);
  }
  bool has(const std::string& name) const {
    for (const auto& p : particles)
      if (p.name == name) return true;
    return false;
  }
  int qubit(const std::string& name, Slot s) const {
    return 3 * index_of(name) + static_cast<int>(s);
  }
  int qubit(int particle, Slot s) const { return 3 * particle + static_cast<int>(s); }

  ParticleNames names() const {
    ParticleNames r;
    for (const auto& p : particles) r.names.push_back(p.name);
    return r;
  }
};

// The three-particle physical register hosting the code.
RegisterLayout code_layout();
// Physical plus measurement particles, in order P0..P4.
RegisterLayout single_system_layout();

// Maps a Pauli on `from` onto `to` by particle name.
PauliOperator embed_by_name(const PauliOperator& p, const RegisterLayout& from,
                            const RegisterLayout& to);

}  // namespace nsq
