#include "nsq/schedule.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nsq {

const char* locality_name(Locality l) {
  switch (l) {
    case Locality::single_particle: return "single-particle";
    case Locality::nearest_neighbor: return "nearest-neighbor";
    case Locality::next_nearest_neighbor: return "next-nearest-neighbor";
  }
  return "?";
}

void GateSchedule::append(const GateSchedule& other) {
  for (const Step& s : other.steps) steps.push_back(s);
}

std::vector<std::string> GateSchedule::measure_labels() const {
  std::vector<std::string> out;
  for (const Step& s : steps) {
    if (const auto* m = std::get_if<MeasureStep>(&s)) out.push_back(m->label);
    if (const auto* m = std::get_if<MeasurePauliStep>(&s)) out.push_back(m->label);
  }
  return out;
}

int GateSchedule::gate_count() const {
  int n = 0;
  for (const Step& s : this->steps)
    if (std::holds_alternative<GateStep>(s)) ++n;
  return n;
}

RunRecord run_schedule(StateVector& state, const GateSchedule& sched, Rng* rng,
                       const std::map<std::string, int>* forced) {
  RunRecord rec;
  for (const Step& step : sched.steps) {
    if (const auto* g = std::get_if<GateStep>(&step)) {
      apply_1q(state, g->op);
    } else if (const auto* m = std::get_if<MeasureStep>(&step)) {
      MeasureOutcome o;
      if (forced && forced->count(m->label)) {
        o = measure_qubit_forced(state, m->qubit, forced->at(m->label));
      } else if (rng) {
        o = measure_qubit(state, m->qubit, *rng);
      } else {
        throw std::invalid_argument("run_schedule: unforced measurement without rng");
      }
      rec.outcomes[m->label] = o.outcome;
      rec.probability *= o.probability;
      if (o.probability == 0.0) return rec;
    } else if (const auto* m = std::get_if<MeasurePauliStep>(&step)) {
      MeasureOutcome o;
      if (forced && forced->count(m->label)) {
        o = measure_pauli_forced(state, m->op, forced->at(m->label));
      } else if (rng) {
        o = measure_pauli(state, m->op, *rng);
      } else {
        throw std::invalid_argument("run_schedule: unforced measurement without rng");
      }
      rec.outcomes[m->label] = o.outcome;
      rec.probability *= o.probability;
      if (o.probability == 0.0) return rec;
    } else if (const auto* f = std::get_if<FlipIfStep>(&step)) {
      if (!rec.outcomes.count(f->label)) {
        throw std::invalid_argument("run_schedule: FlipIf before measurement " + f->label);
      }
      if (rec.outcomes.at(f->label) == 1) {
        Conditioned1Q flip{mat_x(), f->qubit, {}, {}, {}};
        apply_1q(state, flip);
      }
    } else if (const auto* fr = std::get_if<FrameStep>(&step)) {
      bool active = fr->when_label.empty() || (rec.outcomes.count(fr->when_label) &&
                                               rec.outcomes.at(fr->when_label) == 1);
      if (active) rec.frame_ops.emplace_back(fr->op, fr->reason);
    }
  }
  return rec;
}

namespace {

void enumerate_tree(StateVector& state, const GateSchedule& sched, size_t from, RunRecord rec,
                    const std::function<void(const RunRecord&, StateVector&)>& visit) {
  for (size_t i = from; i < sched.steps.size(); ++i) {
    const Step& step = sched.steps[i];
    if (const auto* g = std::get_if<GateStep>(&step)) {
      apply_1q(state, g->op);
    } else if (const auto* f = std::get_if<FlipIfStep>(&step)) {
      if (!rec.outcomes.count(f->label)) {
        throw std::invalid_argument("enumerate: FlipIf before measurement " + f->label);
      }
      if (rec.outcomes.at(f->label) == 1) {
        apply_1q(state, Conditioned1Q{mat_x(), f->qubit, {}, {}, {}});
      }
    } else if (const auto* fr = std::get_if<FrameStep>(&step)) {
      bool active = fr->when_label.empty() || (rec.outcomes.count(fr->when_label) &&
                                               rec.outcomes.at(fr->when_label) == 1);
      if (active) rec.frame_ops.emplace_back(fr->op, fr->reason);
    } else {
      // measurement: branch on both outcomes. Outcome 0 works on a copy,
      // outcome 1 consumes the running state.
      std::string label;
      auto force = [&](int outcome, StateVector& st) -> MeasureOutcome {
        if (const auto* mq = std::get_if<MeasureStep>(&step)) {
          label = mq->label;
          return measure_qubit_forced(st, mq->qubit, outcome);
        }
        const auto& mp = std::get<MeasurePauliStep>(step);
        label = mp.label;
        return measure_pauli_forced(st, mp.op, outcome);
      };
      {
        StateVector b0 = state;
        MeasureOutcome o = force(0, b0);
        if (o.probability >= kBranchPruneTol) {
          RunRecord sub = rec;
          sub.outcomes[label] = 0;
          sub.probability *= o.probability;
          enumerate_tree(b0, sched, i + 1, std::move(sub), visit);
        }
      }
      {
        MeasureOutcome o = force(1, state);
        if (o.probability >= kBranchPruneTol) {
          rec.outcomes[label] = 1;
          rec.probability *= o.probability;
          enumerate_tree(state, sched, i + 1, std::move(rec), visit);
        }
      }
      return;
    }
  }
  visit(rec, state);
}

}  // namespace

void enumerate_schedule(const StateVector& input, const GateSchedule& sched,
                        const std::function<void(const RunRecord&, StateVector&)>& visit) {
  StateVector root = input;
  enumerate_tree(root, sched, 0, RunRecord{}, visit);
}

void enumerate_schedule_replay(const StateVector& input, const GateSchedule& sched,
                               const std::function<void(const RunRecord&, StateVector&)>& visit) {
  std::vector<std::string> labels = sched.measure_labels();
  const size_t m = labels.size();
  if (m > 20) throw std::invalid_argument("enumerate_schedule: too many measurements");
  std::vector<std::pair<uint64_t, uint64_t>> dead_prefixes;  // (bits, length)
  for (uint64_t combo = 0; combo < (1ull << m); ++combo) {
    bool skip = false;
    for (auto [bits, len] : dead_prefixes) {
      if ((combo & ((1ull << len) - 1)) == bits) {
        skip = true;
        break;
      }
    }
    if (skip) continue;
    std::map<std::string, int> forced;
    for (size_t i = 0; i < m; ++i) forced[labels[i]] = static_cast<int>(combo >> i & 1u);
    StateVector state = input;
    RunRecord rec = run_schedule(state, sched, nullptr, &forced);
    if (rec.probability < kBranchPruneTol) {
      size_t done = 0;
      for (size_t i = 0; i < m; ++i) {
        if (rec.outcomes.count(labels[i])) ++done;
      }
      if (done == 0) done = 1;
      dead_prefixes.emplace_back(combo & ((1ull << done) - 1), done);
      continue;
    }
    visit(rec, state);
  }
}

Eigen::MatrixXcd dense_of_schedule(const GateSchedule& sched, int max_qubits) {
  const int n = sched.layout.num_qubits();
  if (n > max_qubits) throw std::invalid_argument("dense_of_schedule: register too wide");
  const long dim = 1l << n;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(dim, dim);
  for (const Step& step : sched.steps) {
    const auto* g = std::get_if<GateStep>(&step);
    if (!g) throw std::invalid_argument("dense_of_schedule: non-gate step");
    out = dense_of_conditioned(g->op, n) * out;
  }
  return out;
}

namespace {

std::string cond_string(const Conditioned1Q& op) {
  std::ostringstream s;
  bool first = true;
  for (auto [q, v] : op.bit_conds) {
    s << (first ? "" : ",") << "q" << q << "=" << v;
    first = false;
  }
  for (auto [a, b] : op.eq_conds) {
    s << (first ? "" : ",") << "q" << a << "==q" << b;
    first = false;
  }
  for (auto [a, b] : op.neq_conds) {
    s << (first ? "" : ",") << "q" << a << "!=q" << b;
    first = false;
  }
  return s.str();
}

}  // namespace

std::string schedule_json(const GateSchedule& sched) {
  std::ostringstream out;
  out << "{\"particles\":[";
  for (int i = 0; i < sched.layout.num_particles(); ++i) {
    if (i) out << ",";
    out << "\"" << sched.layout.particles[i].name << "\"";
  }
  out << "],\"steps\":[";
  bool first = true;
  auto emit = [&](const std::string& body) {
    if (!first) out << ",";
    first = false;
    out << body;
  };
  ParticleNames names = sched.layout.names();
  for (const Step& step : sched.steps) {
    std::ostringstream b;
    if (const auto* g = std::get_if<GateStep>(&step)) {
      b << "{\"kind\":\"gate\",\"name\":\"" << g->name << "\",\"target\":" << g->op.target
        << ",\"conditions\":\"" << cond_string(g->op) << "\",\"actors\":[";
      for (size_t i = 0; i < g->actors.size(); ++i) {
        if (i) b << ",";
        b << "\"" << g->actors[i] << "\"";
      }
      b << "],\"locality\":\"" << locality_name(g->locality) << "\"}";
    } else if (const auto* m = std::get_if<MeasureStep>(&step)) {
      b << "{\"kind\":\"measure\",\"label\":\"" << m->label << "\",\"qubit\":" << m->qubit
        << ",\"actor\":\"" << m->actor << "\"}";
    } else if (const auto* m = std::get_if<MeasurePauliStep>(&step)) {
      b << "{\"kind\":\"measure-pauli\",\"label\":\"" << m->label << "\",\"operator\":\""
        << print_pauli(m->op, names) << "\"}";
    } else if (const auto* f = std::get_if<FlipIfStep>(&step)) {
      b << "{\"kind\":\"flip-if\",\"label\":\"" << f->label << "\",\"qubit\":" << f->qubit << "}";
    } else if (const auto* f = std::get_if<FrameStep>(&step)) {
      b << "{\"kind\":\"frame\",\"operator\":\"" << print_pauli(f->op, names) << "\",\"reason\":\""
        << f->reason << "\"";
      if (!f->when_label.empty()) b << ",\"when\":\"" << f->when_label << "\"";
      b << "}";
    }
    emit(b.str());
  }
  out << "]}";
  return out.str();
}

void AdjacencySpec::allow_nearest(const std::string& a, const std::string& b) {
  nearest.insert({std::min(a, b), std::max(a, b)});
}

void AdjacencySpec::allow_next_nearest(const std::string& a, const std::string& b) {
  next_nearest.insert({std::min(a, b), std::max(a, b)});
}

bool AdjacencySpec::allows(const std::vector<std::string>& actors, Locality l) const {
  if (actors.size() <= 1) return l == Locality::single_particle;
  if (actors.size() != 2) return false;
  auto key = std::make_pair(std::min(actors[0], actors[1]), std::max(actors[0], actors[1]));
  if (l == Locality::nearest_neighbor) return nearest.count(key) > 0;
  if (l == Locality::next_nearest_neighbor) return next_nearest.count(key) > 0;
  return false;
}

AdjacencySpec single_system_adjacency() {
  AdjacencySpec adj;
  adj.allow_nearest("P0", "P1");
  adj.allow_nearest("P1", "P2");
  adj.allow_nearest("P2", "P3");
  adj.allow_nearest("P3", "P4");
  adj.allow_next_nearest("P1", "P3");
  return adj;
}

std::vector<std::string> audit_locality(const GateSchedule& sched, const AdjacencySpec& adj) {
  std::vector<std::string> violations;
  for (const Step& step : sched.steps) {
    const auto* g = std::get_if<GateStep>(&step);
    if (!g) continue;
    if (g->actors.size() == 1 && g->locality != Locality::single_particle) {
      violations.push_back(g->name + ": one actor tagged " + locality_name(g->locality));
      continue;
    }
    if (!adj.allows(g->actors, g->locality)) {
      std::string who;
      for (const auto& a : g->actors) who += a + " ";
      violations.push_back(g->name + ": pair [" + who + "] not allowed as " +
                           locality_name(g->locality));
    }
  }
  return violations;
}

Eigen::Matrix2cd mat_h() {
  Eigen::Matrix2cd m;
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

Eigen::Matrix2cd mat_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd mat_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

Eigen::Matrix2cd mat_s() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, cplx(0, 1);
  return m;
}

Eigen::Matrix2cd mat_v() {
  Eigen::Matrix2cd m;
  m << cplx(1, 1), cplx(1, -1), cplx(1, -1), cplx(1, 1);
  return m / 2.0;
}

GateStep slot_gate(const RegisterLayout& lay, const std::string& particle, Slot slot,
                   const Eigen::Matrix2cd& u, const std::string& gate_name) {
  GateStep g;
  g.name = gate_name + "@" + particle;
  g.op.u = u;
  g.op.target = lay.qubit(particle, slot);
  g.actors = {particle};
  g.locality = Locality::single_particle;
  return g;
}

GateStep vertex_spin_gate(const RegisterLayout& lay, const std::string& particle,
                          const Eigen::Matrix2cd& u, unsigned vertex_mask,
                          const std::string& gate_name) {
  if (vertex_mask == 0 || vertex_mask > 0xF) {
    throw std::invalid_argument("vertex_spin_gate: bad vertex mask");
  }
  GateStep g;
  g.name = gate_name + "@" + particle;
  g.op.u = u;
  g.op.target = lay.qubit(particle, Slot::c);
  g.actors = {particle};
  g.locality = Locality::single_particle;
  const int qx = lay.qubit(particle, Slot::x);
  const int qy = lay.qubit(particle, Slot::y);
  switch (vertex_mask) {
    case 0xF: break;
    case 0b0011: g.op.bit_conds = {{qx, 0}}; break;              // vertices 00, 01
    case 0b1100: g.op.bit_conds = {{qx, 1}}; break;              // vertices 10, 11
    case 0b0101: g.op.bit_conds = {{qy, 0}}; break;              // vertices 00, 10
    case 0b1010: g.op.bit_conds = {{qy, 1}}; break;              // vertices 01, 11
    case 0b1001: g.op.eq_conds = {{qx, qy}}; break;              // vertices 00, 11
    case 0b0110: g.op.neq_conds = {{qx, qy}}; break;             // vertices 10, 01
    default: {
      // single vertex
      if ((vertex_mask & (vertex_mask - 1)) != 0) {
        throw std::invalid_argument("vertex_spin_gate: unsupported vertex set");
      }
      int v = std::countr_zero(vertex_mask);
      g.op.bit_conds = {{qx, v >> 1 & 1}, {qy, v & 1}};
      break;
    }
  }
  return g;
}

GateStep shared_vertex_controlled(const RegisterLayout& lay, const std::string& ctrl,
                                  const std::string& tgt, const Eigen::Matrix2cd& u,
                                  Locality locality, const std::string& gate_name,
                                  unsigned extra_vertex_mask) {
  GateStep g;
  g.name = gate_name + "@" + ctrl + "," + tgt;
  g.op.u = u;
  g.op.target = lay.qubit(tgt, Slot::c);
  g.actors = {ctrl, tgt};
  g.locality = locality;
  g.op.bit_conds = {{lay.qubit(ctrl, Slot::c), 1}};
  g.op.eq_conds = {{lay.qubit(ctrl, Slot::x), lay.qubit(tgt, Slot::x)},
                   {lay.qubit(ctrl, Slot::y), lay.qubit(tgt, Slot::y)}};
  const int qx = lay.qubit(tgt, Slot::x);
  const int qy = lay.qubit(tgt, Slot::y);
  switch (extra_vertex_mask) {
    case 0xF: break;
    case 0b0110: g.op.neq_conds = {{qx, qy}}; break;
    case 0b1001: g.op.eq_conds.push_back({qx, qy}); break;
    default: {
      if ((extra_vertex_mask & (extra_vertex_mask - 1)) != 0) {
        throw std::invalid_argument("shared_vertex_controlled: unsupported vertex set");
      }
      int v = std::countr_zero(extra_vertex_mask);
      g.op.bit_conds.push_back({qx, v >> 1 & 1});
      g.op.bit_conds.push_back({qy, v & 1});
      break;
    }
  }
  return g;
}

GateStep cnot_c(const RegisterLayout& lay, const std::string& ctrl, const std::string& tgt,
                Locality locality) {
  return shared_vertex_controlled(lay, ctrl, tgt, mat_x(), locality, "CNOT_c");
}

GateStep cs_c(const RegisterLayout& lay, const std::string& ctrl, const std::string& tgt,
              Locality locality) {
  return shared_vertex_controlled(lay, ctrl, tgt, mat_s(), locality, "CS_c");
}

GateStep cphase_c(const RegisterLayout& lay, const std::string& ctrl, const std::string& tgt,
                  double theta, Locality locality, const std::string& gate_name) {
  // Pure phase on shared-vertex components with control spin 1: realized
  // as diag(1, e^{i theta}) on the control spin, conditioned on sharing a
  // vertex with the target.
  GateStep g;
  g.name = gate_name + "@" + ctrl + "," + tgt;
  g.op.u = Eigen::Matrix2cd::Identity();
  g.op.u(1, 1) = std::polar(1.0, theta);
  g.op.target = lay.qubit(ctrl, Slot::c);
  g.actors = {ctrl, tgt};
  g.locality = locality;
  g.op.eq_conds = {{lay.qubit(ctrl, Slot::x), lay.qubit(tgt, Slot::x)},
                   {lay.qubit(ctrl, Slot::y), lay.qubit(tgt, Slot::y)}};
  return g;
}

GateStep cpi_c(const RegisterLayout& lay, const std::string& ctrl, const std::string& tgt,
               Locality locality) {
  return cphase_c(lay, ctrl, tgt, M_PI, locality, "Cpi_c");
}

GateStep cpihalf_c(const RegisterLayout& lay, const std::string& ctrl, const std::string& tgt,
                   Locality locality) {
  return cphase_c(lay, ctrl, tgt, M_PI / 2, locality, "Cpihalf_c");
}

}  // namespace nsq
