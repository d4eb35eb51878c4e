#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "nsq/state.hpp"

namespace nsq {

enum class Locality { single_particle, nearest_neighbor, next_nearest_neighbor };

const char* locality_name(Locality l);

struct GateStep {
  std::string name;
  Conditioned1Q op;
  std::vector<std::string> actors;
  Locality locality = Locality::single_particle;
};

// Z-basis spin readout; the outcome is stored under `label`.
struct MeasureStep {
  std::string label;
  int qubit = 0;
  std::string actor;
};

// Eigenvalue readout of a Hermitian Pauli; outcome bit m means (-1)^m.
struct MeasurePauliStep {
  std::string label;
  PauliOperator op;
  std::vector<std::string> actors;
};

// Classically conditioned spin flip, used for ancilla reset after readout.
struct FlipIfStep {
  std::string label;
  int qubit = 0;
};

// Pending Pauli recorded instead of applied; optional `when_label` gates
// the record on a prior measurement outcome being 1.
struct FrameStep {
  PauliOperator op;
  std::string reason;
  std::string when_label;
};

using Step = std::variant<GateStep, MeasureStep, MeasurePauliStep, FlipIfStep, FrameStep>;

struct GateSchedule {
  RegisterLayout layout;
  std::vector<Step> steps;

  void push(Step s) { steps.push_back(std::move(s)); }
  void append(const GateSchedule& other);
  std::vector<std::string> measure_labels() const;
  int gate_count() const;
};

struct RunRecord {
  std::map<std::string, int> outcomes;
  double probability = 1.0;
  std::vector<std::pair<PauliOperator, std::string>> frame_ops;
};

// Executes the schedule in place. `forced` pins measurement outcomes by
// label (enumeration mode); unforced outcomes draw from `rng`.
RunRecord run_schedule(StateVector& state, const GateSchedule& sched, Rng* rng,
                       const std::map<std::string, int>* forced = nullptr);

// Visits every measurement branch with probability above the prune
// threshold. The default walks a snapshot tree (one state copy per
// measurement depth); the replay variant re-executes the schedule per
// branch and keeps a single working state, which suits wide registers.
void enumerate_schedule(const StateVector& input, const GateSchedule& sched,
                        const std::function<void(const RunRecord&, StateVector&)>& visit);
void enumerate_schedule_replay(const StateVector& input, const GateSchedule& sched,
                               const std::function<void(const RunRecord&, StateVector&)>& visit);

// Dense operator of a measurement-free schedule (small registers only).
Eigen::MatrixXcd dense_of_schedule(const GateSchedule& sched, int max_qubits = 10);

std::string schedule_json(const GateSchedule& sched);

// --- locality audit -----------------------------------------------------

struct AdjacencySpec {
  std::set<std::pair<std::string, std::string>> nearest;
  std::set<std::pair<std::string, std::string>> next_nearest;

  void allow_nearest(const std::string& a, const std::string& b);
  void allow_next_nearest(const std::string& a, const std::string& b);
  bool allows(const std::vector<std::string>& actors, Locality l) const;
};

AdjacencySpec single_system_adjacency();

// Returns human-readable violations; empty means the audit passed.
std::vector<std::string> audit_locality(const GateSchedule& sched, const AdjacencySpec& adj);

// --- single- and two-particle primitive steps ---------------------------

Eigen::Matrix2cd mat_h();
Eigen::Matrix2cd mat_x();
Eigen::Matrix2cd mat_z();
Eigen::Matrix2cd mat_s();
Eigen::Matrix2cd mat_v();  // V^2 = X

GateStep slot_gate(const RegisterLayout& lay, const std::string& particle, Slot slot,
                   const Eigen::Matrix2cd& u, const std::string& gate_name);

// Spin gate conditioned on the particle sitting at a vertex subset,
// vertex mask bit (2x + y). Mask 0b1111 means unconditional.
GateStep vertex_spin_gate(const RegisterLayout& lay, const std::string& particle,
                          const Eigen::Matrix2cd& u, unsigned vertex_mask,
                          const std::string& gate_name);

// Spin-controlled spin gate active only when the two particles share a
// vertex label. `extra_vertex_mask` further restricts the shared label.
GateStep shared_vertex_controlled(const RegisterLayout& lay, const std::string& ctrl,
                                  const std::string& tgt, const Eigen::Matrix2cd& u,
                                  Locality locality, const std::string& gate_name,
                                  unsigned extra_vertex_mask = 0xF);

GateStep cnot_c(const RegisterLayout& lay, const std::string& ctrl, const std::string& tgt,
                Locality locality);
GateStep cs_c(const RegisterLayout& lay, const std::string& ctrl, const std::string& tgt,
              Locality locality);
// Shared-position controlled phase: multiplies by e^{i theta} when the
// control spin is 1 and the particles share a vertex.
GateStep cphase_c(const RegisterLayout& lay, const std::string& ctrl, const std::string& tgt,
                  double theta, Locality locality, const std::string& gate_name);
GateStep cpi_c(const RegisterLayout& lay, const std::string& ctrl, const std::string& tgt,
               Locality locality);
GateStep cpihalf_c(const RegisterLayout& lay, const std::string& ctrl, const std::string& tgt,
                   Locality locality);

}  // namespace nsq
