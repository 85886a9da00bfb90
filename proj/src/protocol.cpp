#include "qicost/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "qicost/config.hpp"
#include "qicost/error.hpp"

namespace qicost {

Party other(Party p) { return p == Party::alice ? Party::bob : Party::alice; }
const char* party_name(Party p) { return p == Party::alice ? "alice" : "bob"; }

namespace {

double isometry_defect(const ComplexMatrix& v, bool reverse) {
  const ComplexMatrix va = v.adjoint();
  const ComplexMatrix g = reverse ? v * va : va * v;
  return max_abs_diff(g, ComplexMatrix::identity(g.rows()));
}

struct FlowState {
  std::set<std::string> alice, bob;
  std::set<std::string> live;  // every register currently in the state
  std::optional<std::string> transit;
  Party transit_recipient = Party::alice;

  std::set<std::string>& of(Party p) { return p == Party::alice ? alice : bob; }

  void absorb() {
    if (transit) {
      of(transit_recipient).insert(*transit);
      transit.reset();
    }
  }
};

// Symbolic register dims as declared by the protocol.
class DimTable {
 public:
  explicit DimTable(const QuantumProtocol& p) {
    dims_["X"] = p.x_dim;
    dims_["Y"] = p.y_dim;
    for (const auto& r : p.entanglement.system().registers())
      dims_[r.name] = r.dim;
  }
  void set(const std::string& name, std::size_t d) { dims_[name] = d; }
  std::size_t get(const std::string& name) const {
    auto it = dims_.find(name);
    if (it == dims_.end()) throw ArgumentError("unknown register " + name);
    return it->second;
  }
  bool known(const std::string& name) const { return dims_.count(name) > 0; }

 private:
  std::map<std::string, std::size_t> dims_;
};

void check_control_structure(const Round& round, const DimTable& dims,
                             std::vector<std::string>& violations,
                             const std::string& where) {
  if (round.controls.empty()) return;
  const auto& in = round.iso.in_regs;
  const auto& out = round.iso.out_regs;
  std::vector<std::size_t> in_dims, out_dims;
  for (const auto& n : in) in_dims.push_back(dims.get(n));
  for (const auto& r : out) out_dims.push_back(r.dim);

  for (const auto& c : round.controls) {
    const auto it_in = std::find(in.begin(), in.end(), c);
    const auto it_out =
        std::find_if(out.begin(), out.end(),
                     [&](const RegisterLabel& r) { return r.name == c; });
    if (it_in == in.end() || it_out == out.end()) {
      violations.push_back(where + ": control " + c +
                           " must appear in inputs and outputs");
      return;
    }
    if (it_out->dim != dims.get(c)) {
      violations.push_back(where + ": control " + c + " changes dimension");
      return;
    }
  }

  auto digit = [](std::size_t index, const std::vector<std::size_t>& ds,
                  std::size_t pos) {
    std::size_t stride = 1;
    for (std::size_t k = ds.size(); k-- > pos + 1;) stride *= ds[k];
    return (index / stride) % ds[pos];
  };

  const auto& m = round.iso.matrix;
  for (std::size_t o = 0; o < m.rows(); ++o)
    for (std::size_t i = 0; i < m.cols(); ++i) {
      if (std::abs(m.at(o, i)) <= 1e-10) continue;
      for (const auto& c : round.controls) {
        const std::size_t pi =
            std::find(in.begin(), in.end(), c) - in.begin();
        const std::size_t po =
            std::find_if(out.begin(), out.end(),
                         [&](const RegisterLabel& r) { return r.name == c; }) -
            out.begin();
        if (digit(i, in_dims, pi) != digit(o, out_dims, po)) {
          violations.push_back(where + ": isometry is not block-diagonal on " +
                               "control " + c);
          return;
        }
      }
    }
}

}  // namespace

ValidationReport validate_protocol(const QuantumProtocol& p) {
  ValidationReport rep;
  auto fail = [&](const std::string& msg) { rep.violations.push_back(msg); };

  if (p.x_dim < 1 || p.y_dim < 1) fail("input dimensions must be positive");
  if (std::abs(p.entanglement.norm() - 1.0) > 1e-8)
    fail("entanglement state is not normalized");

  // Entanglement ownership must partition its registers.
  {
    std::set<std::string> ent;
    for (const auto& r : p.entanglement.system().registers())
      ent.insert(r.name);
    std::set<std::string> claimed;
    for (const auto* side : {&p.alice_entanglement, &p.bob_entanglement})
      for (const auto& n : *side) {
        if (!ent.count(n)) fail("entanglement owner lists unknown register " + n);
        if (!claimed.insert(n).second)
          fail("entanglement register " + n + " claimed twice");
      }
    if (claimed.size() != ent.size())
      fail("entanglement registers must all be assigned an owner");
    for (const auto& reserved : {"X", "Y", "RX", "RY"})
      if (ent.count(reserved))
        fail(std::string("entanglement register shadows ") + reserved);
  }

  DimTable dims(p);
  FlowState flow;
  flow.alice.insert("X");
  flow.bob.insert("Y");
  flow.live = {"X", "Y", "RX", "RY"};
  for (const auto& n : p.alice_entanglement) {
    flow.alice.insert(n);
    flow.live.insert(n);
  }
  for (const auto& n : p.bob_entanglement) {
    flow.bob.insert(n);
    flow.live.insert(n);
  }

  for (std::size_t i = 0; i < p.rounds.size(); ++i) {
    const Round& round = p.rounds[i];
    std::ostringstream w;
    w << "round " << (i + 1);
    const std::string where = w.str();

    if (!p.custom_order) {
      const Party expected = (i % 2 == 0) ? Party::alice : Party::bob;
      if (round.owner != expected)
        fail(where + ": expected " + party_name(expected) +
             " by the alternation convention");
      if (!round.message && i + 1 != p.rounds.size())
        fail(where + ": only the final round may omit a message");
    }

    // Isometry shape and contract.
    std::size_t din = 1, dout = 1;
    bool dims_ok = true;
    for (const auto& n : round.iso.in_regs) {
      if (!dims.known(n)) {
        fail(where + ": unknown input register " + n);
        dims_ok = false;
        break;
      }
      din *= dims.get(n);
    }
    for (const auto& r : round.iso.out_regs) dout *= r.dim;
    if (!dims_ok) return rep;
    if (round.iso.matrix.rows() != dout || round.iso.matrix.cols() != din) {
      fail(where + ": matrix shape does not match register lists");
      return rep;
    }
    if (!round.iso.reverse && dout < din)
      fail(where + ": isometry must not shrink the space");
    if (round.iso.reverse && dout > din)
      fail(where + ": reverse isometry must not grow the space");
    if (isometry_defect(round.iso.matrix, round.iso.reverse) > 1e-10)
      fail(where + (round.iso.reverse
                        ? ": V V^dagger deviates from identity"
                        : ": V^dagger V deviates from identity"));

    // Register flow.
    flow.absorb();
    auto& held = flow.of(round.owner);
    std::set<std::string> consumed;
    for (const auto& n : round.iso.in_regs) {
      if (!held.count(n)) {
        fail(where + ": " + std::string(party_name(round.owner)) +
             " does not hold register " + n);
      } else {
        held.erase(n);
        flow.live.erase(n);
        consumed.insert(n);
      }
    }
    std::set<std::string> out_names;
    for (const auto& r : round.iso.out_regs) {
      if (!out_names.insert(r.name).second)
        fail(where + ": duplicate output register " + r.name);
      if (flow.live.count(r.name))
        fail(where + ": output register " + r.name + " is already live");
      flow.live.insert(r.name);
      held.insert(r.name);
      dims.set(r.name, r.dim);
    }
    if (round.message) {
      if (!out_names.count(*round.message))
        fail(where + ": message register " + *round.message +
             " is not produced by the round");
      else {
        held.erase(*round.message);
        flow.transit = *round.message;
        flow.transit_recipient = other(round.owner);
      }
    }

    check_control_structure(round, dims, rep.violations, where);
  }

  flow.absorb();
  for (const auto& n : p.alice_outputs)
    if (!flow.alice.count(n))
      fail("alice output register " + n + " is not held at the end");
  for (const auto& n : p.bob_outputs)
    if (!flow.bob.count(n))
      fail("bob output register " + n + " is not held at the end");

  return rep;
}

bool is_safe(const QuantumProtocol& p) {
  if (!validate_protocol(p).ok()) return false;
  for (const auto& round : p.rounds) {
    for (const char* input : {"X", "Y"}) {
      const auto& in = round.iso.in_regs;
      if (std::find(in.begin(), in.end(), input) != in.end()) {
        const auto& c = round.controls;
        if (std::find(c.begin(), c.end(), input) == c.end()) return false;
      }
    }
  }
  return true;
}

std::vector<std::string> ProtocolTrace::x_regs() const {
  auto out = x1_regs;
  out.insert(out.end(), x2_regs.begin(), x2_regs.end());
  return out;
}

std::vector<std::string> ProtocolTrace::y_regs() const {
  auto out = y1_regs;
  out.insert(out.end(), y2_regs.begin(), y2_regs.end());
  return out;
}

std::vector<std::string> ProtocolTrace::reference_regs() const {
  std::vector<std::string> out = rx1_regs;
  for (const auto* v : {&rx2_regs, &ry1_regs, &ry2_regs})
    out.insert(out.end(), v->begin(), v->end());
  return out;
}

namespace {

PureState purification_named(const InputDistribution& mu, const std::string& x,
                             const std::string& rx, const std::string& y,
                             const std::string& ry) {
  const std::size_t xd = mu.x_dim(), yd = mu.y_dim();
  RegisterSystem sys({{x, xd}, {rx, xd}, {y, yd}, {ry, yd}});
  std::vector<cplx> amp(sys.total_dim(), cplx(0.0, 0.0));
  for (std::size_t xv = 0; xv < xd; ++xv)
    for (std::size_t yv = 0; yv < yd; ++yv)
      amp[((xv * xd + xv) * yd + yv) * yd + yv] =
          cplx(std::sqrt(mu.at(xv, yv)), 0.0);
  return PureState(std::move(sys), std::move(amp));
}

struct ResolvedRegs {
  RegisterResolution map;
  std::vector<std::string> resolve(const std::vector<std::string>& names) const {
    std::vector<std::string> out;
    for (const auto& n : names) {
      auto it = map.find(n);
      if (it == map.end())
        out.push_back(n);
      else
        out.insert(out.end(), it->second.begin(), it->second.end());
    }
    return out;
  }
};

ProtocolTrace run_trace_impl(const QuantumProtocol& p, PureState initial,
                             ProtocolTrace trace, const ResolvedRegs& rr) {
  const ValidationReport rep = validate_protocol(p);
  if (!rep.ok()) {
    std::string msg = "invalid protocol:";
    for (const auto& v : rep.violations) msg += "\n  " + v;
    throw ContractError(msg);
  }
  const std::size_t state_cap = dim_cap() * dim_cap();

  // Holdings are tracked at protocol-level names; snapshots resolve them to
  // the state-level components.
  std::set<std::string> alice = {"X"};
  std::set<std::string> bob = {"Y"};
  for (const auto& n : p.alice_entanglement) alice.insert(n);
  for (const auto& n : p.bob_entanglement) bob.insert(n);
  std::optional<std::string> transit;
  Party transit_recipient = Party::alice;

  auto holdings_of = [&](Party party) -> std::set<std::string>& {
    return party == Party::alice ? alice : bob;
  };
  auto snapshot = [](const std::set<std::string>& s) {
    return std::vector<std::string>(s.begin(), s.end());
  };

  if (initial.amplitudes().size() > state_cap)
    throw DimCapError("global state dimension exceeds cap^2");
  trace.product_regs.push_back(product_pure_registers(initial));
  trace.states.push_back(std::move(initial));

  for (const Round& round : p.rounds) {
    if (transit) {
      holdings_of(transit_recipient).insert(*transit);
      transit.reset();
    }
    const PureState& cur = trace.states.back();
    const auto in = rr.resolve(round.iso.in_regs);
    std::vector<RegisterLabel> out;
    for (const auto& r : round.iso.out_regs) {
      auto it = rr.map.find(r.name);
      if (it == rr.map.end()) {
        out.push_back(r);
      } else {
        for (const auto& comp : it->second)
          out.push_back({comp, cur.system().dim_of(comp)});
      }
    }
    std::size_t dout = 1;
    for (const auto& r : out) dout *= r.dim;
    const std::size_t din = cur.system().dim_of_set(in);
    const std::size_t next_dim = cur.amplitudes().size() / din * dout;
    if (next_dim > state_cap)
      throw DimCapError("global state dimension exceeds cap^2");

    PureState next = apply_isometry(cur, in, out, round.iso.matrix);
    if (std::abs(next.norm() - 1.0) > 1e-10)
      throw ContractError("round broke norm preservation (reverse isometry "
                          "applied outside its range?)");

    auto& held = holdings_of(round.owner);
    for (const auto& n : round.iso.in_regs) held.erase(n);
    for (const auto& r : round.iso.out_regs) held.insert(r.name);
    RoundInfo info;
    info.sender = round.owner;
    if (round.message) {
      held.erase(*round.message);
      transit = *round.message;
      transit_recipient = other(round.owner);
      info.message = *round.message;
    }
    // Holdings are recorded at protocol-level names resolved to components.
    info.alice_holdings = rr.resolve(snapshot(alice));
    info.bob_holdings = rr.resolve(snapshot(bob));
    trace.rounds.push_back(std::move(info));
    trace.product_regs.push_back(product_pure_registers(next));
    trace.states.push_back(std::move(next));
  }

  if (transit) {
    holdings_of(transit_recipient).insert(*transit);
    transit.reset();
  }
  trace.final_alice_holdings = rr.resolve(snapshot(alice));
  trace.final_bob_holdings = rr.resolve(snapshot(bob));
  trace.alice_outputs = rr.resolve(p.alice_outputs);
  trace.bob_outputs = rr.resolve(p.bob_outputs);
  trace.safe = is_safe(p);
  return trace;
}

}  // namespace

ProtocolTrace run_trace(const QuantumProtocol& p, const InputDistribution& mu) {
  if (mu.x_dim() != p.x_dim || mu.y_dim() != p.y_dim)
    throw ArgumentError("distribution dimensions do not match the protocol");
  ProtocolTrace trace;
  trace.x1_regs = {"X"};
  trace.y1_regs = {"Y"};
  trace.rx1_regs = {"RX"};
  trace.ry1_regs = {"RY"};
  trace.mu = mu;
  trace.product_mu = mu.is_product();
  ResolvedRegs rr;  // identity resolution
  PureState initial = tensor(canonical_purification(mu), p.entanglement);
  return run_trace_impl(p, std::move(initial), std::move(trace), rr);
}

ProtocolTrace run_trace(const QuantumProtocol& p, const Decomposition& d) {
  if (d.x1_dim * d.x2_dim != p.x_dim || d.y1_dim * d.y2_dim != p.y_dim)
    throw ArgumentError("decomposition dimensions do not multiply back to "
                        "the protocol inputs");
  if (d.mu1.x_dim() != d.x1_dim || d.mu1.y_dim() != d.y1_dim ||
      d.mu2.x_dim() != d.x2_dim || d.mu2.y_dim() != d.y2_dim)
    throw ArgumentError("decomposition distribution dimensions mismatch");
  ProtocolTrace trace;
  trace.x1_regs = {"X1"};
  trace.x2_regs = {"X2"};
  trace.y1_regs = {"Y1"};
  trace.y2_regs = {"Y2"};
  trace.rx1_regs = {"RX1"};
  trace.rx2_regs = {"RX2"};
  trace.ry1_regs = {"RY1"};
  trace.ry2_regs = {"RY2"};
  trace.decomp = d;
  ResolvedRegs rr;
  rr.map["X"] = {"X1", "X2"};
  rr.map["Y"] = {"Y1", "Y2"};
  rr.map["RX"] = {"RX1", "RX2"};
  rr.map["RY"] = {"RY1", "RY2"};
  PureState initial =
      tensor(tensor(purification_named(d.mu1, "X1", "RX1", "Y1", "RY1"),
                    purification_named(d.mu2, "X2", "RX2", "Y2", "RY2")),
             p.entanglement);
  return run_trace_impl(p, std::move(initial), std::move(trace), rr);
}

ChannelTable channel_of(const QuantumProtocol& p, const InputDistribution& mu) {
  const ProtocolTrace trace = run_trace(p, mu);
  // Order: x refs, y refs, alice outputs, bob outputs.
  std::vector<std::string> ordered = trace.rx1_regs;
  ordered.insert(ordered.end(), trace.rx2_regs.begin(), trace.rx2_regs.end());
  ordered.insert(ordered.end(), trace.ry1_regs.begin(), trace.ry1_regs.end());
  ordered.insert(ordered.end(), trace.ry2_regs.begin(), trace.ry2_regs.end());
  ordered.insert(ordered.end(), trace.alice_outputs.begin(),
                 trace.alice_outputs.end());
  ordered.insert(ordered.end(), trace.bob_outputs.begin(),
                 trace.bob_outputs.end());

  const double mass = off_diagonal_mass(trace.final_state(), ordered);
  if (mass > 1e-8)
    throw ContractError(
        "final marginal on references and outputs is not classical "
        "(off-diagonal mass " +
        std::to_string(mass) + ")");

  ChannelTable table;
  table.x_dim = p.x_dim;
  table.y_dim = p.y_dim;
  table.a_dim = trace.final_state().system().dim_of_set(trace.alice_outputs);
  table.b_dim = trace.final_state().system().dim_of_set(trace.bob_outputs);
  table.p = measurement_distribution(trace.final_state(), ordered);
  return table;
}

double protocol_error(const QuantumProtocol& p, const FunctionTable& f,
                      const InputDistribution& mu, bool worst_case) {
  if (p.alice_outputs.empty() && p.bob_outputs.empty())
    throw ContractError("protocol designates no outputs");
  if (f.x_dim != p.x_dim || f.y_dim != p.y_dim)
    throw ArgumentError("function table dimensions mismatch");
  const InputDistribution eval_mu =
      worst_case ? InputDistribution::uniform(p.x_dim, p.y_dim) : mu;
  const ChannelTable ch = channel_of(p, eval_mu);
  double total = 0.0, worst = 0.0;
  for (std::size_t x = 0; x < ch.x_dim; ++x)
    for (std::size_t y = 0; y < ch.y_dim; ++y) {
      double wrong = 0.0, massxy = 0.0;
      for (std::size_t a = 0; a < ch.a_dim; ++a)
        for (std::size_t b = 0; b < ch.b_dim; ++b) {
          const double pr = ch.at(x, y, a, b);
          massxy += pr;
          const bool bad_a = !p.alice_outputs.empty() && a != f.at(x, y);
          const bool bad_b = !p.bob_outputs.empty() && b != f.at(x, y);
          if (bad_a || bad_b) wrong += pr;
        }
      total += wrong;
      if (massxy > 1e-15) worst = std::max(worst, wrong / massxy);
    }
  return worst_case ? worst : total;
}

bool solves(const QuantumProtocol& p, const FunctionTable& f,
            const InputDistribution& mu, double epsilon, bool worst_case) {
  return protocol_error(p, f, mu, worst_case) <= epsilon;
}

CommunicationCost qcc(const QuantumProtocol& p) {
  CommunicationCost cost;
  for (const auto& round : p.rounds) {
    if (!round.message) continue;
    for (const auto& r : round.iso.out_regs)
      if (r.name == *round.message) {
        const double bits = std::log2(double(r.dim));
        if (round.owner == Party::alice)
          cost.a_to_b += bits;
        else
          cost.b_to_a += bits;
      }
  }
  return cost;
}

}  // namespace qicost
