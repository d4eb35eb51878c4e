#include "nsq/syndrome.hpp"

#include <stdexcept>

namespace nsq {

const char* submapping_name(SubmappingKind k) {
  switch (k) {
    case SubmappingKind::zzi: return "ZcZxIy";
    case SubmappingKind::ziz: return "ZcIxZy";
    case SubmappingKind::xxx: return "XcXxXy";
  }
  return "?";
}

PauliOperator submapping_row(const RegisterLayout& lay, SubmappingKind kind,
                             const std::string& physical) {
  const int w = lay.num_qubits();
  const int qc = lay.qubit(physical, Slot::c);
  const int qx = lay.qubit(physical, Slot::x);
  const int qy = lay.qubit(physical, Slot::y);
  switch (kind) {
    case SubmappingKind::zzi:
      return multiply(PauliOperator::z(w, qc), PauliOperator::z(w, qx));
    case SubmappingKind::ziz:
      return multiply(PauliOperator::z(w, qc), PauliOperator::z(w, qy));
    case SubmappingKind::xxx:
      return multiply(multiply(PauliOperator::x(w, qc), PauliOperator::x(w, qx)),
                      PauliOperator::x(w, qy));
  }
  throw std::invalid_argument("submapping_row: kind");
}

GateSchedule build_submapping(const RegisterLayout& lay, SubmappingKind kind,
                              const std::string& physical, const std::string& ancilla,
                              bool literal_xxx_core) {
  GateSchedule sched;
  sched.layout = lay;
  const std::string tag = std::string(submapping_name(kind)) + ":" + physical + ">" + ancilla;

  auto tunnel = [&](Slot axis) {
    GateStep g = slot_gate(lay, ancilla, axis, mat_x(), axis == Slot::x ? "X_x" : "X_y");
    sched.push(g);
  };

  if (kind == SubmappingKind::xxx) {
    // dressing: H_x H_y then the odd-vertex spin phase on the physical
    // particle, plus H_c on the ancilla
    sched.push(slot_gate(lay, physical, Slot::x, mat_h(), "H_x"));
    sched.push(slot_gate(lay, physical, Slot::y, mat_h(), "H_y"));
    sched.push(vertex_spin_gate(lay, physical, mat_z(), 0b0110, "Z_c[10,01]"));
    sched.push(slot_gate(lay, ancilla, Slot::c, mat_h(), "H_c"));
    // ancilla spin drives the physical spin while the ancilla cycles
    const bool xx_first = !literal_xxx_core;
    for (int leg = 0; leg < 4; ++leg) {
      sched.push(cnot_c(lay, ancilla, physical, Locality::nearest_neighbor));
      Slot axis;
      if (literal_xxx_core) {
        axis = Slot::y;  // printed cycle: y only
      } else {
        axis = (leg % 2 == 0) == xx_first ? Slot::x : Slot::y;
      }
      tunnel(axis);
    }
    sched.push(vertex_spin_gate(lay, physical, mat_z(), 0b0110, "Z_c[10,01]"));
    sched.push(slot_gate(lay, physical, Slot::x, mat_h(), "H_x"));
    sched.push(slot_gate(lay, physical, Slot::y, mat_h(), "H_y"));
    sched.push(slot_gate(lay, ancilla, Slot::c, mat_h(), "H_c"));
    return sched;
  }

  const unsigned dressing_mask = kind == SubmappingKind::zzi ? 0b1100 : 0b1010;
  const std::string dressing_name =
      kind == SubmappingKind::zzi ? "X_c[10,11]" : "X_c[01,11]";
  sched.push(vertex_spin_gate(lay, physical, mat_x(), dressing_mask, dressing_name));
  for (int leg = 0; leg < 4; ++leg) {
    sched.push(cnot_c(lay, physical, ancilla, Locality::nearest_neighbor));
    tunnel(leg % 2 == 0 ? Slot::x : Slot::y);
  }
  sched.push(vertex_spin_gate(lay, physical, mat_x(), dressing_mask, dressing_name));
  (void)tag;
  return sched;
}

double verify_submapping(SubmappingKind kind, bool literal_xxx_core) {
  RegisterLayout lay{{{"P0", Role::physical}, {"P1", Role::ancillary}}};
  GateSchedule sched = build_submapping(lay, kind, "P0", "P1", literal_xxx_core);
  Eigen::MatrixXcd compiled = dense_of_schedule(sched);

  PauliOperator row = submapping_row(lay, kind, "P0");
  Eigen::MatrixXcd rowm = row.dense_matrix(6);
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(64, 64);
  Eigen::MatrixXcd xc_anc = PauliOperator::x(6, lay.qubit("P1", Slot::c)).dense_matrix(6);
  Eigen::MatrixXcd target =
      0.5 * (id + rowm) * id + 0.5 * (id - rowm) * xc_anc;

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(compiled - target);
  return svd.singularValues()(0);
}

GateSchedule build_round_schedule(const RegisterLayout& lay) {
  GateSchedule sched;
  sched.layout = lay;
  struct Stage {
    SubmappingKind kind;
    int inner_label;  // readout index for P1
    int outer_label;  // readout index for P3
  };
  const Stage stages[3] = {{SubmappingKind::zzi, 0, 1},
                           {SubmappingKind::ziz, 2, 3},
                           {SubmappingKind::xxx, 4, 5}};
  for (const Stage& st : stages) {
    sched.append(build_submapping(lay, st.kind, "P0", "P1"));
    sched.append(build_submapping(lay, st.kind, "P2", "P1"));
    sched.append(build_submapping(lay, st.kind, "P2", "P3"));
    sched.append(build_submapping(lay, st.kind, "P4", "P3"));
    const int q1 = lay.qubit("P1", Slot::c);
    const int q3 = lay.qubit("P3", Slot::c);
    const std::string l1 = "r" + std::to_string(st.inner_label);
    const std::string l3 = "r" + std::to_string(st.outer_label);
    sched.push(MeasureStep{l1, q1, "P1"});
    sched.push(FlipIfStep{l1, q1});
    sched.push(MeasureStep{l3, q3, "P3"});
    sched.push(FlipIfStep{l3, q3});
  }
  return sched;
}

namespace {

void check_ancillas_ready(const StateVector& s) {
  for (const std::string& anc : {"P1", "P3"}) {
    int pi = s.layout.index_of(anc);
    for (int slot = 0; slot < 3; ++slot) {
      const uint64_t bit = 1ull << (3 * pi + slot);
      double p1 = 0;
      for (uint64_t i = 0; i < s.amps.size(); ++i) {
        if (i & bit) p1 += std::norm(s.amps[i]);
      }
      if (p1 > 1e-12) {
        throw std::invalid_argument("run_round: ancilla " + anc + " not initialized");
      }
    }
  }
}

SyndromeRecord record_from(const RunRecord& rec) {
  SyndromeRecord out;
  int raw = 0;
  for (int i = 0; i < 6; ++i) {
    int bit = rec.outcomes.at("r" + std::to_string(i));
    out.raw[i] = bit;
    raw |= bit << i;
  }
  out.m = NestedSquaresCode::syndrome_from_raw(raw);
  return out;
}

}  // namespace

SyndromeRecord run_round(StateVector& state, Rng& rng) {
  check_ancillas_ready(state);
  GateSchedule sched = build_round_schedule(state.layout);
  RunRecord rec = run_schedule(state, sched, &rng);
  return record_from(rec);
}

void enumerate_round(const StateVector& input,
                     const std::function<void(const SyndromeRecord&, double, StateVector&)>& visit) {
  check_ancillas_ready(input);
  GateSchedule sched = build_round_schedule(input.layout);
  enumerate_schedule(input, sched, [&](const RunRecord& rec, StateVector& state) {
    visit(record_from(rec), rec.probability, state);
  });
}

StateVector gather_physical(const StateVector& full) {
  const RegisterLayout nine = code_layout();
  StateVector out(nine);
  std::fill(out.amps.begin(), out.amps.end(), cplx(0, 0));
  const int i0 = full.layout.index_of("P0");
  const int i2 = full.layout.index_of("P2");
  const int i4 = full.layout.index_of("P4");
  const int n = full.num_qubits();
  uint64_t anc_mask = ~0ull >> (64 - n);
  uint64_t phys_bits[3] = {7ull << (3 * i0), 7ull << (3 * i2), 7ull << (3 * i4)};
  for (uint64_t b : phys_bits) anc_mask &= ~b;

  double dropped = 0;
  for (uint64_t i = 0; i < full.amps.size(); ++i) {
    if (std::abs(full.amps[i]) < 1e-300) continue;
    if (i & anc_mask) {
      dropped += std::norm(full.amps[i]);
      continue;
    }
    uint64_t idx = (i >> (3 * i0) & 7) | (i >> (3 * i2) & 7) << 3 | (i >> (3 * i4) & 7) << 6;
    out.amps[idx] = full.amps[i];
  }
  if (dropped > 1e-10) {
    throw std::runtime_error("gather_physical: ancillas not in their reset state");
  }
  out.normalize();
  return out;
}

StateVector scatter_physical(const StateVector& nine) {
  if (nine.num_qubits() != 9) throw std::invalid_argument("scatter_physical: nine-qubit input");
  StateVector out(single_system_layout());
  std::fill(out.amps.begin(), out.amps.end(), cplx(0, 0));
  const int i0 = out.layout.index_of("P0");
  const int i2 = out.layout.index_of("P2");
  const int i4 = out.layout.index_of("P4");
  for (uint64_t i = 0; i < nine.amps.size(); ++i) {
    if (std::abs(nine.amps[i]) == 0.0) continue;
    uint64_t idx = (i & 7) << (3 * i0) | (i >> 3 & 7) << (3 * i2) | (i >> 6 & 7) << (3 * i4);
    out.amps[idx] = nine.amps[i];
  }
  return out;
}

}  // namespace nsq
