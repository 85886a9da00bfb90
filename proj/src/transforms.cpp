#include "qicost/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qicost/error.hpp"

namespace qicost {

namespace {

std::size_t digit_of(std::size_t index, const std::vector<std::size_t>& dims,
                     std::size_t pos) {
  std::size_t stride = 1;
  for (std::size_t k = dims.size(); k-- > pos + 1;) stride *= dims[k];
  return (index / stride) % dims[pos];
}

void rename_in_round(Round& round, const std::string& from,
                     const std::string& to) {
  for (auto& n : round.iso.in_regs)
    if (n == from) n = to;
  for (auto& r : round.iso.out_regs)
    if (r.name == from) r.name = to;
  for (auto& n : round.controls)
    if (n == from) n = to;
  if (round.message && *round.message == from) round.message = to;
}

// Rebuilds the party's first round so the input register is copied into a
// fresh working register and the original action runs on the copy.
Round make_safe_first_round(const Round& old_round, const std::string& input,
                            const std::string& copy_name,
                            std::size_t input_dim,
                            const std::map<std::string, std::size_t>& dims) {
  Round round = old_round;
  const auto& in = old_round.iso.in_regs;
  const auto it = std::find(in.begin(), in.end(), input);
  const ComplexMatrix& m = old_round.iso.matrix;

  if (it != in.end()) {
    // The round consumed (or controlled) the input: keep a pristine copy in
    // front, let the old action see the working copy in the old slot.
    const std::size_t pos = std::size_t(it - in.begin());
    std::vector<std::size_t> in_dims;
    for (const auto& n : in) in_dims.push_back(dims.at(n));
    rename_in_round(round, input, copy_name);
    round.iso.in_regs = in;  // original inputs, untouched names
    std::vector<RegisterLabel> out = {{input, input_dim}};
    out.insert(out.end(), round.iso.out_regs.begin(), round.iso.out_regs.end());
    round.iso.out_regs = out;
    ComplexMatrix nm(input_dim * m.rows(), m.cols());
    for (std::size_t o = 0; o < m.rows(); ++o)
      for (std::size_t i = 0; i < m.cols(); ++i) {
        const cplx v = m.at(o, i);
        if (v == cplx(0.0, 0.0)) continue;
        const std::size_t x = digit_of(i, in_dims, pos);
        nm.at(x * m.rows() + o, i) = v;
      }
    round.iso.matrix = std::move(nm);
  } else {
    // The round never touched the input: prepend it and emit the copy.
    rename_in_round(round, input, copy_name);
    std::vector<std::string> nin = {input};
    nin.insert(nin.end(), round.iso.in_regs.begin(), round.iso.in_regs.end());
    round.iso.in_regs = nin;
    std::vector<RegisterLabel> out = {{input, input_dim},
                                      {copy_name, input_dim}};
    out.insert(out.end(), round.iso.out_regs.begin(), round.iso.out_regs.end());
    round.iso.out_regs = out;
    ComplexMatrix nm(input_dim * input_dim * m.rows(), input_dim * m.cols());
    for (std::size_t x = 0; x < input_dim; ++x)
      for (std::size_t o = 0; o < m.rows(); ++o)
        for (std::size_t i = 0; i < m.cols(); ++i) {
          const cplx v = m.at(o, i);
          if (v == cplx(0.0, 0.0)) continue;
          nm.at((x * input_dim + x) * m.rows() + o, x * m.cols() + i) = v;
        }
    round.iso.matrix = std::move(nm);
  }
  // The old control declaration on the input register turns into an
  // in-to-out rename, which is no longer expressible as a control; the
  // pristine front register is the control now.
  auto& c = round.controls;
  c.erase(std::remove(c.begin(), c.end(), copy_name), c.end());
  if (std::find(c.begin(), c.end(), input) == c.end()) c.push_back(input);
  return round;
}

// Register dimension table before each round (and after the last).
std::vector<std::map<std::string, std::size_t>> running_dims(
    const QuantumProtocol& p) {
  std::map<std::string, std::size_t> cur;
  cur["X"] = p.x_dim;
  cur["Y"] = p.y_dim;
  for (const auto& r : p.entanglement.system().registers())
    cur[r.name] = r.dim;
  std::vector<std::map<std::string, std::size_t>> out;
  for (const auto& round : p.rounds) {
    out.push_back(cur);
    for (const auto& r : round.iso.out_regs) cur[r.name] = r.dim;
  }
  out.push_back(cur);
  return out;
}

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& used) {
  if (!used.count(base)) return base;
  for (std::size_t k = 2;; ++k) {
    const std::string cand = base + std::to_string(k);
    if (!used.count(cand)) return cand;
  }
}

std::set<std::string> all_names(const QuantumProtocol& p) {
  std::set<std::string> used = {"X", "Y", "RX", "RY"};
  for (const auto& r : p.entanglement.system().registers()) used.insert(r.name);
  for (const auto& round : p.rounds)
    for (const auto& r : round.iso.out_regs) used.insert(r.name);
  return used;
}

}  // namespace

QuantumProtocol safe_version(const QuantumProtocol& p) {
  const ValidationReport rep = validate_protocol(p);
  if (!rep.ok()) throw ContractError("safe_version: invalid protocol");
  const auto dims = running_dims(p);
  const auto used = all_names(p);
  const std::string xc = fresh_name("XC", used);
  const std::string yc = fresh_name("YC", used);

  QuantumProtocol out = p;
  bool alice_done = false, bob_done = false;
  for (std::size_t i = 0; i < out.rounds.size(); ++i) {
    Round& round = out.rounds[i];
    if (alice_done) rename_in_round(round, "X", xc);
    if (bob_done) rename_in_round(round, "Y", yc);
    if (round.owner == Party::alice && !alice_done) {
      round = make_safe_first_round(round, "X", xc, p.x_dim, dims[i]);
      alice_done = true;
    } else if (round.owner == Party::bob && !bob_done) {
      round = make_safe_first_round(round, "Y", yc, p.y_dim, dims[i]);
      bob_done = true;
    }
  }
  for (auto& n : out.alice_outputs)
    if (n == "X" && alice_done) n = xc;
  for (auto& n : out.bob_outputs)
    if (n == "Y" && bob_done) n = yc;
  const ValidationReport after = validate_protocol(out);
  if (!after.ok()) {
    std::string msg = "safe_version produced an invalid protocol:";
    for (const auto& v : after.violations) msg += "\n  " + v;
    throw ContractError(msg);
  }
  return out;
}

namespace {

struct CoordReg {
  std::string a, b;       // register pair names (both held by the owner)
  std::size_t dim = 1;
  std::size_t round = 0;  // 0-based round of use
  std::size_t view = 0;
  std::vector<std::size_t> values;
};

// Recomputes the owner's own message values from basis digits.
struct LiftEvaluator {
  const ClassicalProtocol* pi = nullptr;
  const std::vector<CoordReg>* coords = nullptr;  // owner's coordinates
  // digit positions inside the round's input list:
  // input, pub (or SIZE_MAX), coord index -> position, received msg round ->
  // position.
  std::size_t input_pos = 0;
  std::size_t pub_pos = SIZE_MAX;
  std::map<std::size_t, std::size_t> coord_pos;  // coord idx -> digit pos
  std::map<std::size_t, std::size_t> msg_pos;    // round -> digit pos
  Party owner = Party::alice;

  std::size_t message_at(std::size_t round,
                         const std::vector<std::size_t>& digits) const {
    // Messages of earlier rounds: own ones recomputed, received ones read.
    std::size_t transcript = 0;
    std::vector<std::size_t> msgs(round + 1, 0);
    for (std::size_t j = 0; j <= round; ++j) {
      std::size_t m;
      if (pi->rounds[j].owner == owner) {
        const std::size_t u = digits[input_pos];
        const std::size_t r = pub_pos == SIZE_MAX ? 0 : digits[pub_pos];
        // Deterministic or coordinate lookup through the plan baked into
        // the canonical protocol: evaluate via the protocol table with the
        // coin digits assembled from coordinate registers.
        std::size_t coin = 0;
        for (std::size_t ci = 0; ci < coords->size(); ++ci) {
          const auto it = coord_pos.find(ci);
          const std::size_t digit = it == coord_pos.end() ? 0 : digits[it->second];
          coin = coin * (*coords)[ci].dim + digit;
        }
        m = pi->message(j, u, coin, r, transcript);
      } else {
        m = digits.at(msg_pos.at(j));
      }
      msgs[j] = m;
      transcript = transcript * pi->rounds[j].alphabet + m;
    }
    return msgs[round];
  }

  std::size_t transcript_after(std::size_t n_rounds,
                               const std::vector<std::size_t>& digits) const {
    std::size_t transcript = 0;
    for (std::size_t j = 0; j < n_rounds; ++j) {
      std::size_t m;
      if (pi->rounds[j].owner == owner) {
        const std::size_t u = digits[input_pos];
        const std::size_t r = pub_pos == SIZE_MAX ? 0 : digits[pub_pos];
        std::size_t coin = 0;
        for (std::size_t ci = 0; ci < coords->size(); ++ci) {
          const auto it = coord_pos.find(ci);
          const std::size_t digit = it == coord_pos.end() ? 0 : digits[it->second];
          coin = coin * (*coords)[ci].dim + digit;
        }
        m = pi->message(j, u, coin, r, transcript);
      } else {
        m = digits.at(msg_pos.at(j));
      }
      transcript = transcript * pi->rounds[j].alphabet + m;
    }
    return transcript;
  }
};

PureState pair_state(const std::string& a, const std::string& b,
                     const std::vector<double>& probs) {
  RegisterSystem sys({{a, probs.size()}, {b, probs.size()}});
  std::vector<cplx> amp(sys.total_dim(), cplx(0.0, 0.0));
  for (std::size_t s = 0; s < probs.size(); ++s)
    amp[s * probs.size() + s] = cplx(std::sqrt(probs[s]), 0.0);
  return PureState(std::move(sys), std::move(amp));
}

}  // namespace

QuantumProtocol quantize_classical(const CanonicalForm& cf) {
  const ClassicalProtocol& pi = cf.protocol;
  validate_classical(pi);

  QuantumProtocol q;
  q.x_dim = pi.x_dim;
  q.y_dim = pi.y_dim;
  q.custom_order = true;

  // Pre-shared state: public-coin copies and private-coin coordinate pairs.
  PureState ent = PureState::trivial();
  const bool pub = pi.public_coin.size() > 1;
  if (pub) {
    ent = tensor(ent, pair_state("RA", "RB", pi.public_coin.p));
    q.alice_entanglement.push_back("RA");
    q.bob_entanglement.push_back("RB");
  }
  std::vector<CoordReg> alice_coords, bob_coords;
  for (std::size_t j = 0; j < cf.alice_coords.size(); ++j) {
    const auto& c = cf.alice_coords[j];
    CoordReg reg{"TA" + std::to_string(j) + "a", "TA" + std::to_string(j) + "b",
                 c.probs.size(), c.round, c.view, c.values};
    ent = tensor(ent, pair_state(reg.a, reg.b, c.probs));
    q.alice_entanglement.push_back(reg.a);
    q.alice_entanglement.push_back(reg.b);
    alice_coords.push_back(std::move(reg));
  }
  for (std::size_t j = 0; j < cf.bob_coords.size(); ++j) {
    const auto& c = cf.bob_coords[j];
    CoordReg reg{"TB" + std::to_string(j) + "a", "TB" + std::to_string(j) + "b",
                 c.probs.size(), c.round, c.view, c.values};
    ent = tensor(ent, pair_state(reg.a, reg.b, c.probs));
    q.bob_entanglement.push_back(reg.a);
    q.bob_entanglement.push_back(reg.b);
    bob_coords.push_back(std::move(reg));
  }
  q.entanglement = std::move(ent);

  auto build_view_round = [&](Party owner, std::size_t upto_round,
                              bool is_message_round,
                              const std::string& fresh_name,
                              std::size_t fresh_dim,
                              const OutputFunction* out_fn) {
    const bool alice = owner == Party::alice;
    const auto& coords = alice ? alice_coords : bob_coords;
    LiftEvaluator ev;
    ev.pi = &pi;
    ev.coords = &coords;
    ev.owner = owner;

    Round round;
    round.owner = owner;
    std::vector<std::size_t> in_dims;
    auto add_in = [&](const std::string& name, std::size_t dim) {
      round.iso.in_regs.push_back(name);
      in_dims.push_back(dim);
      return round.iso.in_regs.size() - 1;
    };
    ev.input_pos = add_in(alice ? "X" : "Y", alice ? pi.x_dim : pi.y_dim);
    if (pub) ev.pub_pos = add_in(alice ? "RA" : "RB", pi.public_coin.size());
    for (std::size_t ci = 0; ci < coords.size(); ++ci)
      if (coords[ci].round <= upto_round || !is_message_round)
        ev.coord_pos[ci] = add_in(coords[ci].a, coords[ci].dim);
    for (std::size_t j = 0; j < (is_message_round ? upto_round
                                                  : pi.rounds.size());
         ++j)
      if (pi.rounds[j].owner != owner)
        ev.msg_pos[j] = add_in("C" + std::to_string(j), pi.rounds[j].alphabet);

    round.controls = round.iso.in_regs;
    for (const auto& n : round.iso.in_regs) {
      std::size_t d = 1;
      for (std::size_t k = 0; k < round.iso.in_regs.size(); ++k)
        if (round.iso.in_regs[k] == n) d = in_dims[k];
      round.iso.out_regs.push_back({n, d});
    }
    round.iso.out_regs.push_back({fresh_name, fresh_dim});

    std::size_t din = 1;
    for (std::size_t d : in_dims) din *= d;
    ComplexMatrix m(din * fresh_dim, din);
    std::vector<std::size_t> digits(in_dims.size(), 0);
    for (std::size_t i = 0; i < din; ++i) {
      std::size_t tmp = i;
      for (std::size_t k = in_dims.size(); k-- > 0;) {
        digits[k] = tmp % in_dims[k];
        tmp /= in_dims[k];
      }
      std::size_t value;
      if (is_message_round) {
        value = ev.message_at(upto_round, digits);
      } else {
        const std::size_t transcript =
            ev.transcript_after(pi.rounds.size(), digits);
        const std::size_t u = digits[ev.input_pos];
        const std::size_t r = ev.pub_pos == SIZE_MAX ? 0 : digits[ev.pub_pos];
        std::size_t coin = 0;
        for (std::size_t ci = 0; ci < coords.size(); ++ci) {
          const auto it = ev.coord_pos.find(ci);
          const std::size_t digit =
              it == ev.coord_pos.end() ? 0 : digits[it->second];
          coin = coin * coords[ci].dim + digit;
        }
        const std::size_t coin_dim =
            alice ? pi.alice_coin.size() : pi.bob_coin.size();
        const std::size_t tfull = pi.transcript_dim(pi.rounds.size());
        value = out_fn->table[((u * coin_dim + coin) * pi.public_coin.size() +
                               r) *
                                  tfull +
                              transcript];
      }
      m.at(i * fresh_dim + value, i) = cplx(1.0, 0.0);
    }
    round.iso.matrix = std::move(m);
    if (is_message_round) round.message = fresh_name;
    return round;
  };

  for (std::size_t i = 0; i < pi.rounds.size(); ++i)
    q.rounds.push_back(build_view_round(pi.rounds[i].owner, i, true,
                                        "C" + std::to_string(i),
                                        pi.rounds[i].alphabet, nullptr));
  if (!pi.bob_output.trivial()) {
    q.rounds.push_back(build_view_round(Party::bob, pi.rounds.size(), false,
                                        "BOUT", pi.bob_output.dim,
                                        &pi.bob_output));
    q.bob_outputs = {"BOUT"};
  }
  if (!pi.alice_output.trivial()) {
    q.rounds.push_back(build_view_round(Party::alice, pi.rounds.size(), false,
                                        "AOUT", pi.alice_output.dim,
                                        &pi.alice_output));
    q.alice_outputs = {"AOUT"};
  }
  const ValidationReport rep = validate_protocol(q);
  if (!rep.ok()) {
    std::string msg = "quantize_classical produced an invalid protocol:";
    for (const auto& v : rep.violations) msg += "\n  " + v;
    throw ContractError(msg);
  }
  return q;
}

QuantizePipeline quantize_pipeline(const ClassicalProtocol& pi) {
  QuantizePipeline out;
  out.padded = pad_messages(pi);
  out.canonical = canonical_randomness_form(out.padded);
  out.quantum = quantize_classical(out.canonical);
  return out;
}

FunctionTable derive_function(const QuantumProtocol& p, double tol) {
  const InputDistribution uni = InputDistribution::uniform(p.x_dim, p.y_dim);
  const ChannelTable ch = channel_of(p, uni);
  const bool use_b = !p.bob_outputs.empty();
  if (!use_b && p.alice_outputs.empty())
    throw ContractError("derive_function: protocol designates no outputs");
  const std::size_t out_dim = use_b ? ch.b_dim : ch.a_dim;
  FunctionTable f;
  f.x_dim = p.x_dim;
  f.y_dim = p.y_dim;
  f.out_dim = out_dim;
  f.values.assign(p.x_dim * p.y_dim, 0);
  for (std::size_t x = 0; x < p.x_dim; ++x)
    for (std::size_t y = 0; y < p.y_dim; ++y) {
      std::vector<double> mass(out_dim, 0.0);
      double total = 0.0;
      for (std::size_t a = 0; a < ch.a_dim; ++a)
        for (std::size_t b = 0; b < ch.b_dim; ++b) {
          mass[use_b ? b : a] += ch.at(x, y, a, b);
          total += ch.at(x, y, a, b);
        }
      std::size_t best = 0;
      for (std::size_t v = 1; v < out_dim; ++v)
        if (mass[v] > mass[best]) best = v;
      if (total - mass[best] > tol * std::max(total, 1e-30))
        throw ContractError("derive_function: protocol is not zero-error at "
                            "input (" +
                            std::to_string(x) + ", " + std::to_string(y) + ")");
      f.values[x * p.y_dim + y] = best;
    }
  return f;
}

namespace {

void require_standard_shape(const QuantumProtocol& p, const char* what) {
  const ValidationReport rep = validate_protocol(p);
  if (!rep.ok()) throw ContractError(std::string(what) + ": invalid protocol");
  if (p.rounds.empty()) return;
  for (std::size_t i = 0; i + 1 < p.rounds.size(); ++i) {
    if (!p.rounds[i].message)
      throw ContractError(std::string(what) +
                          ": every round before the last must carry a message");
    const auto& next_in = p.rounds[i + 1].iso.in_regs;
    if (std::find(next_in.begin(), next_in.end(), *p.rounds[i].message) ==
        next_in.end())
      throw ContractError(std::string(what) +
                          ": each round must consume the previous message");
    if (p.rounds[i + 1].owner == p.rounds[i].owner)
      throw ContractError(std::string(what) + ": rounds must alternate");
  }
  if (p.rounds.back().message)
    throw ContractError(std::string(what) +
                        ": the final round must not emit a message");
}

QuantumProtocol mirror_composition(const QuantumProtocol& p, bool with_copy,
                                   bool phase) {
  require_standard_shape(p, with_copy ? "clean/phase protocol"
                                      : "reverse_composition");
  if (!is_safe(p))
    throw ContractError("the construction requires a safe protocol");

  QuantumProtocol out = p;
  out.custom_order = true;
  out.alice_outputs.clear();
  out.bob_outputs.clear();

  const auto dims = running_dims(p);
  if (with_copy) {
    if (p.bob_outputs.size() != 1)
      throw ContractError("clean/phase protocol requires a single designated "
                          "bob output register");
    const std::string bout = p.bob_outputs[0];
    const std::size_t bdim = dims.back().at(bout);
    if (bdim != 2)
      throw ContractError("clean/phase protocol requires a boolean output");
    const double err = protocol_error(p, derive_function(p),
                                      InputDistribution::uniform(p.x_dim,
                                                                 p.y_dim),
                                      true);
    if (err > 1e-10)
      throw ContractError("clean/phase protocol requires zero error");
    Round copy_round;
    copy_round.owner = Party::bob;
    copy_round.iso.in_regs = {bout};
    copy_round.iso.out_regs = {{bout, bdim}, {"BOUTC", 2}};
    ComplexMatrix m(2 * bdim, bdim);
    for (std::size_t b = 0; b < bdim; ++b) {
      if (phase) {
        const double s = 1.0 / std::sqrt(2.0);
        m.at(b * 2 + 0, b) = cplx((b ? -s : s), 0.0);
        m.at(b * 2 + 1, b) = cplx((b ? s : -s), 0.0);
      } else {
        m.at(b * 2 + b, b) = cplx(1.0, 0.0);
      }
    }
    copy_round.iso.matrix = std::move(m);
    copy_round.controls = phase ? std::vector<std::string>{}
                                : std::vector<std::string>{bout};
    out.rounds.push_back(std::move(copy_round));
    out.bob_outputs = {"BOUTC"};
  }

  for (std::size_t k = p.rounds.size(); k-- > 0;) {
    const Round& fwd = p.rounds[k];
    Round back;
    back.owner = fwd.owner;
    back.iso.reverse = true;
    back.iso.matrix = fwd.iso.matrix.adjoint();
    // The adjoint of a control isometry is block-diagonal on the same
    // registers, so the declarations carry over.
    back.controls = fwd.controls;
    for (const auto& r : fwd.iso.out_regs) back.iso.in_regs.push_back(r.name);
    for (const auto& n : fwd.iso.in_regs)
      back.iso.out_regs.push_back({n, dims[k].at(n)});
    if (k > 0 && p.rounds[k - 1].message) back.message = p.rounds[k - 1].message;
    out.rounds.push_back(std::move(back));
  }

  const ValidationReport rep = validate_protocol(out);
  if (!rep.ok()) {
    std::string msg = "mirror composition produced an invalid protocol:";
    for (const auto& v : rep.violations) msg += "\n  " + v;
    throw ContractError(msg);
  }
  return out;
}

}  // namespace

QuantumProtocol clean_protocol(const QuantumProtocol& p) {
  return mirror_composition(p, true, false);
}

QuantumProtocol phase_protocol(const QuantumProtocol& p) {
  return mirror_composition(p, true, true);
}

QuantumProtocol reverse_composition(const QuantumProtocol& p) {
  return mirror_composition(p, false, false);
}

}  // namespace qicost
