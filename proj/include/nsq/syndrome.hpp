#pragma once

#include <array>
#include <functional>

#include "nsq/code.hpp"
#include "nsq/schedule.hpp"

namespace nsq {

enum class SubmappingKind { zzi, ziz, xxx };
const char* submapping_name(SubmappingKind k);

/// Shuttle sequence transferring one row-operator eigenvalue of
/// `physical` onto the spin of `ancilla`: dressed conditional spin flips
/// with the ancilla cycled around its square, nearest-neighbor only.
/// `literal_xxx_core` switches the xxx kind to the y-only tunnel cycle;
/// see verify_submapping for what that variant actually implements.
GateSchedule build_submapping(const RegisterLayout& lay, SubmappingKind kind,
                              const std::string& physical, const std::string& ancilla,
                              bool literal_xxx_core = false);

// Pauli whose eigenvalue the submapping transfers.
PauliOperator submapping_row(const RegisterLayout& lay, SubmappingKind kind,
                             const std::string& physical);

// Spectral-norm deviation between the compiled schedule and the
// projector-sum form, on a two-particle register.
double verify_submapping(SubmappingKind kind, bool literal_xxx_core = false);

struct SyndromeRecord {
  int m = 0;                      // assembled readout bits
  std::array<int, 6> raw{};       // per-generator readouts in stage order
};

// Full three-stage round on the five-particle register: submappings,
// ancilla spin readouts, resets. Measurement labels are r0..r5.
GateSchedule build_round_schedule(const RegisterLayout& lay);

SyndromeRecord run_round(StateVector& state, Rng& rng);

void enumerate_round(const StateVector& input,
                     const std::function<void(const SyndromeRecord&, double, StateVector&)>& visit);

// Physical-register statevector from a five-particle state whose
// ancillas returned to |0,00>.
StateVector gather_physical(const StateVector& full);
// Embeds a nine-qubit physical state into the five-particle register
// with fresh ancillas.
StateVector scatter_physical(const StateVector& nine);

}  // namespace nsq
