#include "qicost/classical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "qicost/config.hpp"
#include "qicost/entropy.hpp"
#include "qicost/error.hpp"

namespace qicost {

FiniteDistribution::FiniteDistribution(std::vector<double> probs)
    : p(std::move(probs)) {
  if (p.empty()) throw ArgumentError("empty coin distribution");
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0) throw ArgumentError("negative coin probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-10)
    throw ArgumentError("coin distribution sums to " + std::to_string(sum));
}

std::size_t ClassicalProtocol::transcript_dim(std::size_t upto_round) const {
  std::size_t d = 1;
  for (std::size_t j = 0; j < upto_round && j < rounds.size(); ++j)
    d *= rounds[j].alphabet;
  return d;
}

std::size_t ClassicalProtocol::message(std::size_t i, std::size_t input,
                                       std::size_t coin, std::size_t pub,
                                       std::size_t transcript) const {
  const ClassicalRound& round = rounds[i];
  const std::size_t coin_dim =
      round.owner == Party::alice ? alice_coin.size() : bob_coin.size();
  const std::size_t idx =
      ((input * coin_dim + coin) * public_coin.size() + pub) *
          transcript_dim(i) +
      transcript;
  return round.table[idx];
}

void validate_classical(const ClassicalProtocol& pi) {
  if (pi.x_dim < 1 || pi.y_dim < 1)
    throw ArgumentError("input dimensions must be positive");
  for (std::size_t i = 0; i < pi.rounds.size(); ++i) {
    const ClassicalRound& r = pi.rounds[i];
    const Party expected = (i % 2 == 0) ? Party::alice : Party::bob;
    if (r.owner != expected)
      throw ArgumentError("round " + std::to_string(i + 1) +
                          " violates the alternation convention");
    if (r.alphabet < 1) throw ArgumentError("empty message alphabet");
    const std::size_t input = r.owner == Party::alice ? pi.x_dim : pi.y_dim;
    const std::size_t coin = r.owner == Party::alice ? pi.alice_coin.size()
                                                     : pi.bob_coin.size();
    const std::size_t expect =
        input * coin * pi.public_coin.size() * pi.transcript_dim(i);
    if (r.table.size() != expect)
      throw ArgumentError("round " + std::to_string(i + 1) +
                          " table has wrong size");
    for (std::size_t v : r.table)
      if (v >= r.alphabet)
        throw ArgumentError("round " + std::to_string(i + 1) +
                            " table value out of alphabet");
  }
  const std::size_t tfull = pi.transcript_dim(pi.rounds.size());
  for (const auto* out : {&pi.alice_output, &pi.bob_output}) {
    if (out->trivial()) continue;
    const bool is_alice = out == &pi.alice_output;
    const std::size_t input = is_alice ? pi.x_dim : pi.y_dim;
    const std::size_t coin =
        is_alice ? pi.alice_coin.size() : pi.bob_coin.size();
    if (out->table.size() != input * coin * pi.public_coin.size() * tfull)
      throw ArgumentError("output table has wrong size");
    for (std::size_t v : out->table)
      if (v >= out->dim) throw ArgumentError("output value out of range");
  }
}

void JointTable::check_total() const {
  double sum = 0.0;
  for (const auto& rec : records) sum += rec.prob;
  if (std::abs(sum - 1.0) > 1e-12)
    throw ContractError("joint table probabilities sum to " +
                        std::to_string(sum));
}

double shannon_cmi(const JointTable& table, const KeyFn& u, const KeyFn& v,
                   const KeyFn& w) {
  std::map<std::vector<std::size_t>, double> uw, vw, ww, uvw;
  std::vector<std::size_t> ku, kv, kw, key;
  for (const auto& rec : table.records) {
    if (rec.prob <= 0.0) continue;
    ku.clear();
    kv.clear();
    kw.clear();
    u(rec, ku);
    v(rec, kv);
    w(rec, kw);
    key = kw;
    ww[key] += rec.prob;
    key.insert(key.end(), ku.begin(), ku.end());
    uw[key] += rec.prob;
    key.insert(key.end(), kv.begin(), kv.end());
    uvw[key] += rec.prob;
    key = kw;
    key.insert(key.end(), kv.begin(), kv.end());
    vw[key] += rec.prob;
  }
  auto entropy = [](const std::map<std::vector<std::size_t>, double>& dist) {
    double h = 0.0;
    for (const auto& [k, p] : dist)
      if (p > 0.0) h -= p * std::log2(p);
    return h;
  };
  return entropy(uw) + entropy(vw) - entropy(ww) - entropy(uvw);
}

namespace {

void check_extension(const Extension& ext, const InputDistribution& mu) {
  if (ext.d_dim == 1 && ext.d_given_xy.empty()) return;
  if (ext.d_given_xy.size() != mu.x_dim() * mu.y_dim())
    throw ArgumentError("extension table does not match mu support");
  for (const auto& row : ext.d_given_xy) {
    if (row.size() != ext.d_dim)
      throw ArgumentError("extension row has wrong size");
    double sum = 0.0;
    for (double v : row) {
      if (v < 0.0) throw ArgumentError("negative extension probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-10)
      throw ArgumentError("extension conditional sums to " +
                          std::to_string(sum));
  }
}

double ext_prob(const Extension& ext, std::size_t x, std::size_t y,
                std::size_t y_dim, std::size_t d) {
  if (ext.d_dim == 1 && ext.d_given_xy.empty()) return 1.0;
  return ext.d_given_xy[x * y_dim + y][d];
}

}  // namespace

JointTable run_classical(const ClassicalProtocol& pi,
                         const InputDistribution& mu, const Extension& ext) {
  validate_classical(pi);
  if (mu.x_dim() != pi.x_dim || mu.y_dim() != pi.y_dim)
    throw ArgumentError("distribution dimensions do not match the protocol");
  check_extension(ext, mu);
  const std::size_t atoms = pi.x_dim * pi.y_dim * pi.alice_coin.size() *
                            pi.bob_coin.size() * pi.public_coin.size() *
                            ext.d_dim;
  if (atoms > atom_cap())
    throw DimCapError("joint support " + std::to_string(atoms) +
                      " exceeds the atom cap " + std::to_string(atom_cap()));

  JointTable table;
  table.n_rounds = pi.rounds.size();
  for (std::size_t x = 0; x < pi.x_dim; ++x)
    for (std::size_t y = 0; y < pi.y_dim; ++y)
      for (std::size_t sa = 0; sa < pi.alice_coin.size(); ++sa)
        for (std::size_t sb = 0; sb < pi.bob_coin.size(); ++sb)
          for (std::size_t r = 0; r < pi.public_coin.size(); ++r)
            for (std::size_t d = 0; d < ext.d_dim; ++d) {
              const double prob = mu.at(x, y) * pi.alice_coin.p[sa] *
                                  pi.bob_coin.p[sb] * pi.public_coin.p[r] *
                                  ext_prob(ext, x, y, pi.y_dim, d);
              if (prob <= 0.0) continue;
              JointTable::Record rec;
              rec.x = x;
              rec.y = y;
              rec.sa = sa;
              rec.sb = sb;
              rec.r = r;
              rec.d = d;
              rec.prob = prob;
              std::size_t transcript = 0;
              for (std::size_t i = 0; i < pi.rounds.size(); ++i) {
                const bool alice = pi.rounds[i].owner == Party::alice;
                const std::size_t m =
                    pi.message(i, alice ? x : y, alice ? sa : sb, r, transcript);
                rec.msgs.push_back(m);
                transcript = transcript * pi.rounds[i].alphabet + m;
              }
              table.records.push_back(std::move(rec));
            }
  table.check_total();
  return table;
}

ClassicalIc ic(const ClassicalProtocol& pi, const InputDistribution& mu) {
  const JointTable table = run_classical(pi, mu);
  const KeyFn ux = [](const JointTable::Record& rec,
                      std::vector<std::size_t>& k) { k.push_back(rec.x); };
  const KeyFn uy = [](const JointTable::Record& rec,
                      std::vector<std::size_t>& k) { k.push_back(rec.y); };
  const KeyFn msgs = [](const JointTable::Record& rec,
                        std::vector<std::size_t>& k) {
    k.insert(k.end(), rec.msgs.begin(), rec.msgs.end());
  };
  const KeyFn ry = [](const JointTable::Record& rec,
                      std::vector<std::size_t>& k) {
    k.push_back(rec.r);
    k.push_back(rec.y);
  };
  const KeyFn rx = [](const JointTable::Record& rec,
                      std::vector<std::size_t>& k) {
    k.push_back(rec.r);
    k.push_back(rec.x);
  };
  ClassicalIc out;
  out.a_to_b = shannon_cmi(table, ux, msgs, ry);
  out.b_to_a = shannon_cmi(table, uy, msgs, rx);
  return out;
}

double ic_extended(const ClassicalProtocol& pi, const InputDistribution& mu,
                   const Extension& ext) {
  const JointTable table = run_classical(pi, mu, ext);
  const KeyFn xyd = [](const JointTable::Record& rec,
                       std::vector<std::size_t>& k) {
    k.push_back(rec.x);
    k.push_back(rec.y);
    k.push_back(rec.d);
  };
  double total = 0.0;
  for (std::size_t i = 0; i < pi.rounds.size(); ++i) {
    const KeyFn mi = [i](const JointTable::Record& rec,
                         std::vector<std::size_t>& k) {
      k.push_back(rec.msgs[i]);
    };
    const KeyFn recv_b = [i](const JointTable::Record& rec,
                             std::vector<std::size_t>& k) {
      k.push_back(rec.r);
      k.push_back(rec.sb);
      k.push_back(rec.y);
      k.insert(k.end(), rec.msgs.begin(), rec.msgs.begin() + i);
    };
    const KeyFn recv_a = [i](const JointTable::Record& rec,
                             std::vector<std::size_t>& k) {
      k.push_back(rec.r);
      k.push_back(rec.sa);
      k.push_back(rec.x);
      k.insert(k.end(), rec.msgs.begin(), rec.msgs.begin() + i);
    };
    total += shannon_cmi(table, xyd, mi, recv_b);
    total += shannon_cmi(table, xyd, mi, recv_a);
  }
  return total;
}

CommunicationCost cc(const ClassicalProtocol& pi) {
  CommunicationCost out;
  for (const auto& round : pi.rounds) {
    const double bits = std::log2(double(round.alphabet));
    if (round.owner == Party::alice)
      out.a_to_b += bits;
    else
      out.b_to_a += bits;
  }
  return out;
}

namespace {

std::size_t product_of(const std::vector<std::size_t>& dims) {
  std::size_t d = 1;
  for (std::size_t v : dims) d *= v;
  return d;
}

std::vector<std::size_t> decompose(std::size_t index,
                                   const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> out(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
  return out;
}

std::size_t compose(const std::vector<std::size_t>& digits,
                    const std::vector<std::size_t>& dims) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + digits[k];
  return idx;
}

}  // namespace

void validate_reversible(const ReversibleProtocol& rp) {
  if (rp.x_dim < 1 || rp.y_dim < 1)
    throw ArgumentError("input dimensions must be positive");
  std::vector<std::size_t> alice_mem = {rp.x_dim, rp.alice_coin.size(),
                                        rp.public_coin.size()};
  std::vector<std::size_t> bob_mem = {rp.y_dim, rp.bob_coin.size(),
                                      rp.public_coin.size()};
  std::size_t incoming = 1;
  for (std::size_t k = 0; k < rp.circuits.size(); ++k) {
    const ReversibleCircuit& c = rp.circuits[k];
    const bool alice = (k % 2 == 0);
    auto& mem = alice ? alice_mem : bob_mem;
    std::vector<std::size_t> expect = mem;
    if (incoming > 1) expect.push_back(incoming);
    if (c.n_ancillas > c.in_dims.size())
      throw ArgumentError("circuit declares more ancillas than inputs");
    const std::size_t non_anc = c.in_dims.size() - c.n_ancillas;
    if (std::vector<std::size_t>(c.in_dims.begin(),
                                 c.in_dims.begin() + non_anc) != expect)
      throw ArgumentError("circuit " + std::to_string(k + 1) +
                          " input registers do not match the holder's memory");
    const std::size_t din = product_of(c.in_dims);
    const std::size_t dout = product_of(c.out_mem_dims) * c.msg_dim;
    if (din != dout)
      throw ArgumentError("circuit " + std::to_string(k + 1) +
                          " is not dimension-preserving");
    if (c.perm.size() != din)
      throw ArgumentError("circuit " + std::to_string(k + 1) +
                          " permutation has wrong size");
    std::vector<bool> seen(din, false);
    for (std::size_t v : c.perm) {
      if (v >= din || seen[v])
        throw ArgumentError("circuit " + std::to_string(k + 1) +
                            " table is not a bijection");
      seen[v] = true;
    }
    if (k + 1 < rp.circuits.size() && c.msg_dim < 2)
      throw ArgumentError("only the final circuit may omit a message");
    if (k + 1 == rp.circuits.size() && c.msg_dim != 1)
      throw ArgumentError("the final circuit must not emit a message");
    mem = c.out_mem_dims;
    incoming = c.msg_dim;
  }
  for (std::size_t idx : rp.alice_output_regs)
    if (idx >= alice_mem.size())
      throw ArgumentError("alice output register index out of range");
  for (std::size_t idx : rp.bob_output_regs)
    if (idx >= bob_mem.size())
      throw ArgumentError("bob output register index out of range");
}

JointTable run_reversible(const ReversibleProtocol& rp,
                          const InputDistribution& mu, const Extension& ext) {
  validate_reversible(rp);
  if (mu.x_dim() != rp.x_dim || mu.y_dim() != rp.y_dim)
    throw ArgumentError("distribution dimensions do not match the protocol");
  check_extension(ext, mu);
  const std::size_t atoms = rp.x_dim * rp.y_dim * rp.alice_coin.size() *
                            rp.bob_coin.size() * rp.public_coin.size() *
                            ext.d_dim;
  if (atoms > atom_cap())
    throw DimCapError("joint support exceeds the atom cap");

  const std::size_t n_messages =
      rp.circuits.empty() ? 0
                          : rp.circuits.size() -
                                (rp.circuits.back().msg_dim == 1 ? 1 : 0);
  JointTable table;
  table.n_rounds = n_messages;
  for (std::size_t x = 0; x < rp.x_dim; ++x)
    for (std::size_t y = 0; y < rp.y_dim; ++y)
      for (std::size_t sa = 0; sa < rp.alice_coin.size(); ++sa)
        for (std::size_t sb = 0; sb < rp.bob_coin.size(); ++sb)
          for (std::size_t r = 0; r < rp.public_coin.size(); ++r)
            for (std::size_t d = 0; d < ext.d_dim; ++d) {
              const double prob = mu.at(x, y) * rp.alice_coin.p[sa] *
                                  rp.bob_coin.p[sb] * rp.public_coin.p[r] *
                                  ext_prob(ext, x, y, rp.y_dim, d);
              if (prob <= 0.0) continue;
              JointTable::Record rec;
              rec.x = x;
              rec.y = y;
              rec.sa = sa;
              rec.sb = sb;
              rec.r = r;
              rec.d = d;
              rec.prob = prob;
              std::vector<std::size_t> amem = {x, sa, r};
              std::vector<std::size_t> bmem = {y, sb, r};
              std::size_t msg = 0;
              std::size_t msg_dim = 1;
              for (std::size_t k = 0; k < rp.circuits.size(); ++k) {
                const ReversibleCircuit& c = rp.circuits[k];
                const bool alice = (k % 2 == 0);
                auto& mem = alice ? amem : bmem;
                std::vector<std::size_t> digits = mem;
                if (msg_dim > 1) digits.push_back(msg);
                digits.resize(c.in_dims.size(), 0);  // ancillas start at 0
                const std::size_t out = c.perm[compose(digits, c.in_dims)];
                std::vector<std::size_t> out_dims = c.out_mem_dims;
                out_dims.push_back(c.msg_dim);
                auto out_digits = decompose(out, out_dims);
                msg = out_digits.back();
                out_digits.pop_back();
                mem = out_digits;
                msg_dim = c.msg_dim;
                if (c.msg_dim > 1) {
                  rec.msgs.push_back(msg);
                  rec.alice_mem.push_back(amem);
                  rec.bob_mem.push_back(bmem);
                }
              }
              table.records.push_back(std::move(rec));
            }
  table.check_total();
  return table;
}

namespace {

double ric_value(const JointTable& table, bool with_extension) {
  const KeyFn measured = with_extension
                             ? KeyFn([](const JointTable::Record& rec,
                                        std::vector<std::size_t>& k) {
                                 k.push_back(rec.x);
                                 k.push_back(rec.y);
                                 k.push_back(rec.d);
                               })
                             : KeyFn([](const JointTable::Record& rec,
                                        std::vector<std::size_t>& k) {
                                 k.push_back(rec.x);
                                 k.push_back(rec.y);
                               });
  double total = 0.0;
  for (std::size_t i = 0; i < table.n_rounds; ++i) {
    const KeyFn mi = [i](const JointTable::Record& rec,
                         std::vector<std::size_t>& k) {
      k.push_back(rec.msgs[i]);
    };
    const KeyFn bmem = [i](const JointTable::Record& rec,
                           std::vector<std::size_t>& k) {
      k.insert(k.end(), rec.bob_mem[i].begin(), rec.bob_mem[i].end());
    };
    const KeyFn amem = [i](const JointTable::Record& rec,
                           std::vector<std::size_t>& k) {
      k.insert(k.end(), rec.alice_mem[i].begin(), rec.alice_mem[i].end());
    };
    total += shannon_cmi(table, measured, mi, bmem);
    total += shannon_cmi(table, measured, mi, amem);
  }
  return total;
}

}  // namespace

ReversibleIc ric(const ReversibleProtocol& rp, const InputDistribution& mu,
                 const Extension& ext) {
  const JointTable table = run_reversible(rp, mu, ext);
  const KeyFn measured = [](const JointTable::Record& rec,
                            std::vector<std::size_t>& k) {
    k.push_back(rec.x);
    k.push_back(rec.y);
    k.push_back(rec.d);
  };
  ReversibleIc out;
  for (std::size_t i = 0; i < table.n_rounds; ++i) {
    const KeyFn mi = [i](const JointTable::Record& rec,
                         std::vector<std::size_t>& k) {
      k.push_back(rec.msgs[i]);
    };
    const KeyFn bmem = [i](const JointTable::Record& rec,
                           std::vector<std::size_t>& k) {
      k.insert(k.end(), rec.bob_mem[i].begin(), rec.bob_mem[i].end());
    };
    const KeyFn amem = [i](const JointTable::Record& rec,
                           std::vector<std::size_t>& k) {
      k.insert(k.end(), rec.alice_mem[i].begin(), rec.alice_mem[i].end());
    };
    const double recv = shannon_cmi(table, measured, mi, bmem);
    const double send = shannon_cmi(table, measured, mi, amem);
    out.receiver_terms.push_back(recv);
    out.sender_terms.push_back(send);
    out.value += recv + send;
  }
  // Extension-independence: the value may not depend on D.
  if (ext.d_dim > 1) {
    const JointTable plain = run_reversible(rp, mu);
    const double base = ric_value(plain, false);
    if (std::abs(base - out.value) > 1e-10)
      throw ContractError("reversible information cost depends on the "
                          "extension (defect " +
                          std::to_string(std::abs(base - out.value)) + ")");
  }
  return out;
}

ReversibleProtocol safe_reversible(const ReversibleProtocol& rp) {
  validate_reversible(rp);
  ReversibleProtocol out = rp;
  out.circuits.clear();
  for (std::size_t k = 0; k < rp.circuits.size(); ++k) {
    const ReversibleCircuit& c = rp.circuits[k];
    const bool alice = (k % 2 == 0);
    const std::size_t input_dim = alice ? rp.x_dim : rp.y_dim;
    ReversibleCircuit nc;
    if (k < 2) {
      // First circuit of the party: copy the input into a fresh ancilla and
      // run the original circuit on the copy.
      nc.in_dims = c.in_dims;
      nc.in_dims.push_back(input_dim);  // trailing ancilla, starts at 0
      nc.n_ancillas = c.n_ancillas + 1;
      // Move the copy ancilla to the end so ancillas stay trailing.
      // Layout: [input, coin, pub, (incoming), old ancillas..., copy]
      nc.out_mem_dims = c.out_mem_dims;
      nc.out_mem_dims.insert(nc.out_mem_dims.begin(), input_dim);
      nc.msg_dim = c.msg_dim;
      nc.perm.resize(product_of(nc.in_dims));
      std::vector<std::size_t> out_dims = nc.out_mem_dims;
      out_dims.push_back(nc.msg_dim);
      for (std::size_t idx = 0; idx < nc.perm.size(); ++idx) {
        auto digits = decompose(idx, nc.in_dims);
        const std::size_t input_val = digits[0];
        const std::size_t copy = (digits.back() + input_val) % input_dim;
        std::vector<std::size_t> old_in = digits;
        old_in.pop_back();
        old_in[0] = copy;
        const std::size_t old_out = c.perm[compose(old_in, c.in_dims)];
        std::vector<std::size_t> old_out_dims = c.out_mem_dims;
        old_out_dims.push_back(c.msg_dim);
        auto od = decompose(old_out, old_out_dims);
        std::vector<std::size_t> nd;
        nd.push_back(input_val);
        nd.insert(nd.end(), od.begin(), od.end());
        nc.perm[idx] = compose(nd, out_dims);
      }
    } else {
      // Later circuits act as identity on the kept input register.
      nc.in_dims = c.in_dims;
      nc.in_dims.insert(nc.in_dims.begin(), input_dim);
      nc.n_ancillas = c.n_ancillas;
      nc.out_mem_dims = c.out_mem_dims;
      nc.out_mem_dims.insert(nc.out_mem_dims.begin(), input_dim);
      nc.msg_dim = c.msg_dim;
      nc.perm.resize(product_of(nc.in_dims));
      std::vector<std::size_t> out_dims = nc.out_mem_dims;
      out_dims.push_back(nc.msg_dim);
      for (std::size_t idx = 0; idx < nc.perm.size(); ++idx) {
        auto digits = decompose(idx, nc.in_dims);
        const std::size_t input_val = digits[0];
        std::vector<std::size_t> old_in(digits.begin() + 1, digits.end());
        const std::size_t old_out = c.perm[compose(old_in, c.in_dims)];
        std::vector<std::size_t> old_out_dims = c.out_mem_dims;
        old_out_dims.push_back(c.msg_dim);
        auto od = decompose(old_out, old_out_dims);
        std::vector<std::size_t> nd;
        nd.push_back(input_val);
        nd.insert(nd.end(), od.begin(), od.end());
        nc.perm[idx] = compose(nd, out_dims);
      }
    }
    out.circuits.push_back(std::move(nc));
  }
  // Output registers shift by one (the kept input register is prepended).
  const std::size_t n = rp.circuits.size();
  out.alice_output_regs.clear();
  out.bob_output_regs.clear();
  for (std::size_t idx : rp.alice_output_regs)
    out.alice_output_regs.push_back(n >= 1 ? idx + 1 : idx);
  for (std::size_t idx : rp.bob_output_regs)
    out.bob_output_regs.push_back(n >= 2 ? idx + 1 : idx);
  return out;
}

namespace {

// Forward simulation of one party's circuits given their local data and the
// other party's messages: returns this party's messages, final memory, and
// whether `upto` rounds were processed.
struct LocalSim {
  std::vector<std::size_t> mem;
  std::vector<std::size_t> own_msgs;
};

LocalSim simulate_party(const ReversibleProtocol& rp, bool alice,
                        std::size_t input, std::size_t coin, std::size_t pub,
                        const std::vector<std::size_t>& other_msgs) {
  LocalSim sim;
  sim.mem = {input, coin, pub};
  std::size_t other_seen = 0;
  for (std::size_t k = alice ? 0 : 1; k < rp.circuits.size(); k += 2) {
    const ReversibleCircuit& c = rp.circuits[k];
    std::vector<std::size_t> digits = sim.mem;
    if (k > 0) {
      // Incoming message is the other party's latest; stop once the
      // supplied transcript prefix runs out.
      if (other_seen >= other_msgs.size()) break;
      digits.push_back(other_msgs[other_seen]);
      ++other_seen;
    }
    digits.resize(c.in_dims.size(), 0);
    const std::size_t out = c.perm[compose(digits, c.in_dims)];
    std::vector<std::size_t> out_dims = c.out_mem_dims;
    out_dims.push_back(c.msg_dim);
    auto od = decompose(out, out_dims);
    const std::size_t msg = od.back();
    od.pop_back();
    sim.mem = od;
    if (c.msg_dim > 1) sim.own_msgs.push_back(msg);
  }
  return sim;
}

bool reversible_is_safe(const ReversibleProtocol& rp) {
  for (std::size_t k = 0; k < rp.circuits.size(); ++k) {
    const ReversibleCircuit& c = rp.circuits[k];
    const bool alice = (k % 2 == 0);
    const std::size_t input_dim = alice ? rp.x_dim : rp.y_dim;
    if (c.out_mem_dims.empty() || c.out_mem_dims[0] != input_dim ||
        c.in_dims[0] != input_dim)
      return false;
    std::vector<std::size_t> out_dims = c.out_mem_dims;
    out_dims.push_back(c.msg_dim);
    for (std::size_t idx = 0; idx < c.perm.size(); ++idx) {
      const auto in_digits = decompose(idx, c.in_dims);
      const auto out_digits = decompose(c.perm[idx], out_dims);
      if (in_digits[0] != out_digits[0]) return false;
    }
  }
  return true;
}

}  // namespace

ClassicalProtocol unforget_simulation(const ReversibleProtocol& rp) {
  validate_reversible(rp);
  if (!reversible_is_safe(rp))
    throw ContractError("unforget_simulation requires a safe reversible "
                        "protocol; apply safe_reversible first");
  ClassicalProtocol out;
  out.x_dim = rp.x_dim;
  out.y_dim = rp.y_dim;
  out.public_coin = rp.public_coin;
  out.alice_coin = rp.alice_coin;
  out.bob_coin = rp.bob_coin;

  const std::size_t n_messages =
      rp.circuits.empty() ? 0
                          : rp.circuits.size() -
                                (rp.circuits.back().msg_dim == 1 ? 1 : 0);
  std::vector<std::size_t> alphabets;
  for (std::size_t i = 0; i < n_messages; ++i)
    alphabets.push_back(rp.circuits[i].msg_dim);

  std::vector<std::size_t> tdims;  // transcript dims prefix products
  for (std::size_t i = 0; i < n_messages; ++i) {
    ClassicalRound round;
    round.owner = (i % 2 == 0) ? Party::alice : Party::bob;
    round.alphabet = alphabets[i];
    const bool alice = round.owner == Party::alice;
    const std::size_t input = alice ? rp.x_dim : rp.y_dim;
    const std::size_t coin =
        alice ? rp.alice_coin.size() : rp.bob_coin.size();
    std::size_t tdim = 1;
    for (std::size_t j = 0; j < i; ++j) tdim *= alphabets[j];
    round.table.resize(input * coin * rp.public_coin.size() * tdim);
    for (std::size_t u = 0; u < input; ++u)
      for (std::size_t s = 0; s < coin; ++s)
        for (std::size_t r = 0; r < rp.public_coin.size(); ++r)
          for (std::size_t t = 0; t < tdim; ++t) {
            // Extract the other party's messages from the transcript.
            std::vector<std::size_t> digits(i);
            std::size_t tv = t;
            for (std::size_t j = i; j-- > 0;) {
              digits[j] = tv % alphabets[j];
              tv /= alphabets[j];
            }
            std::vector<std::size_t> other_msgs;
            for (std::size_t j = alice ? 1 : 0; j < i; j += 2)
              other_msgs.push_back(digits[j]);
            const LocalSim sim =
                simulate_party(rp, alice, u, s, r, other_msgs);
            const std::size_t own_index = i / 2;
            const std::size_t idx =
                ((u * coin + s) * rp.public_coin.size() + r) * tdim + t;
            round.table[idx] = sim.own_msgs[own_index];
          }
    out.rounds.push_back(std::move(round));
  }

  // Outputs from the designated registers of the final memories.
  std::size_t tfull = 1;
  for (std::size_t a : alphabets) tfull *= a;
  auto build_output = [&](bool alice, const std::vector<std::size_t>& regs,
                          OutputFunction& fn) {
    if (regs.empty()) return;
    const std::size_t input = alice ? rp.x_dim : rp.y_dim;
    const std::size_t coin =
        alice ? rp.alice_coin.size() : rp.bob_coin.size();
    fn.table.resize(input * coin * rp.public_coin.size() * tfull);
    fn.dim = 1;
    std::vector<std::size_t> reg_dims;
    for (std::size_t u = 0; u < input; ++u)
      for (std::size_t s = 0; s < coin; ++s)
        for (std::size_t r = 0; r < rp.public_coin.size(); ++r)
          for (std::size_t t = 0; t < tfull; ++t) {
            std::vector<std::size_t> digits(n_messages);
            std::size_t tv = t;
            for (std::size_t j = n_messages; j-- > 0;) {
              digits[j] = tv % alphabets[j];
              tv /= alphabets[j];
            }
            std::vector<std::size_t> other_msgs;
            for (std::size_t j = alice ? 1 : 0; j < n_messages; j += 2)
              other_msgs.push_back(digits[j]);
            const LocalSim sim =
                simulate_party(rp, alice, u, s, r, other_msgs);
            if (reg_dims.empty()) {
              // Determine register dims from the final circuit layout.
              std::vector<std::size_t> mem_dims = {
                  input, coin, rp.public_coin.size()};
              for (std::size_t k = alice ? 0 : 1; k < rp.circuits.size();
                   k += 2)
                mem_dims = rp.circuits[k].out_mem_dims;
              for (std::size_t reg : regs) reg_dims.push_back(mem_dims[reg]);
              fn.dim = product_of(reg_dims);
              for (auto& v : fn.table) v = 0;
            }
            std::vector<std::size_t> vals;
            for (std::size_t reg : regs) vals.push_back(sim.mem[reg]);
            const std::size_t idx =
                ((u * coin + s) * rp.public_coin.size() + r) * tfull + t;
            fn.table[idx] = compose(vals, reg_dims);
          }
  };
  build_output(true, rp.alice_output_regs, out.alice_output);
  build_output(false, rp.bob_output_regs, out.bob_output);
  validate_classical(out);
  return out;
}

ReversibleProtocol tensor_protocol(const ReversibleProtocol& p1,
                                   const ReversibleProtocol& p2) {
  validate_reversible(p1);
  validate_reversible(p2);
  if (p1.circuits.size() != p2.circuits.size())
    throw ArgumentError("tensor_protocol requires equal round structure");
  ReversibleProtocol out;
  out.x_dim = p1.x_dim * p2.x_dim;
  out.y_dim = p1.y_dim * p2.y_dim;
  auto product_coin = [](const FiniteDistribution& a,
                         const FiniteDistribution& b) {
    std::vector<double> p;
    for (double va : a.p)
      for (double vb : b.p) p.push_back(va * vb);
    return FiniteDistribution(p);
  };
  out.public_coin = product_coin(p1.public_coin, p2.public_coin);
  out.alice_coin = product_coin(p1.alice_coin, p2.alice_coin);
  out.bob_coin = product_coin(p1.bob_coin, p2.bob_coin);

  // Memory layout: the three seed registers hold fused values
  // (input, coin, pub); later memories are [p1 regs..., p2 regs...].
  std::vector<std::size_t> mem1a = {p1.x_dim, p1.alice_coin.size(),
                                    p1.public_coin.size()};
  std::vector<std::size_t> mem2a = {p2.x_dim, p2.alice_coin.size(),
                                    p2.public_coin.size()};
  std::vector<std::size_t> mem1b = {p1.y_dim, p1.bob_coin.size(),
                                    p1.public_coin.size()};
  std::vector<std::size_t> mem2b = {p2.y_dim, p2.bob_coin.size(),
                                    p2.public_coin.size()};
  std::size_t in_msg1 = 1, in_msg2 = 1;

  for (std::size_t k = 0; k < p1.circuits.size(); ++k) {
    const ReversibleCircuit& c1 = p1.circuits[k];
    const ReversibleCircuit& c2 = p2.circuits[k];
    const bool alice = (k % 2 == 0);
    auto& m1 = alice ? mem1a : mem1b;
    auto& m2 = alice ? mem2a : mem2b;
    ReversibleCircuit nc;
    const bool seed = (k < 2);
    if (seed) {
      // Seed registers are fused pairwise: (input, coin, pub) each combined.
      nc.in_dims = {m1[0] * m2[0], m1[1] * m2[1], m1[2] * m2[2]};
      if (in_msg1 * in_msg2 > 1) nc.in_dims.push_back(in_msg1 * in_msg2);
    } else {
      nc.in_dims = m1;
      nc.in_dims.insert(nc.in_dims.end(), m2.begin(), m2.end());
      if (in_msg1 * in_msg2 > 1) nc.in_dims.push_back(in_msg1 * in_msg2);
    }
    const std::size_t anc1 = c1.n_ancillas, anc2 = c2.n_ancillas;
    for (std::size_t j = c1.in_dims.size() - anc1; j < c1.in_dims.size(); ++j)
      nc.in_dims.push_back(c1.in_dims[j]);
    for (std::size_t j = c2.in_dims.size() - anc2; j < c2.in_dims.size(); ++j)
      nc.in_dims.push_back(c2.in_dims[j]);
    nc.n_ancillas = anc1 + anc2;
    nc.out_mem_dims = c1.out_mem_dims;
    nc.out_mem_dims.insert(nc.out_mem_dims.end(), c2.out_mem_dims.begin(),
                           c2.out_mem_dims.end());
    nc.msg_dim = c1.msg_dim * c2.msg_dim;
    nc.perm.resize(product_of(nc.in_dims));
    std::vector<std::size_t> out_dims = nc.out_mem_dims;
    out_dims.push_back(nc.msg_dim);
    for (std::size_t idx = 0; idx < nc.perm.size(); ++idx) {
      const auto digits = decompose(idx, nc.in_dims);
      std::vector<std::size_t> in1, in2;
      std::size_t pos = 0;
      if (seed) {
        for (std::size_t j = 0; j < 3; ++j) {
          in1.push_back(digits[pos] / m2[j]);
          in2.push_back(digits[pos] % m2[j]);
          ++pos;
        }
      } else {
        for (std::size_t j = 0; j < m1.size(); ++j) in1.push_back(digits[pos++]);
        for (std::size_t j = 0; j < m2.size(); ++j) in2.push_back(digits[pos++]);
      }
      if (in_msg1 * in_msg2 > 1) {
        const std::size_t msg = digits[pos++];
        if (in_msg1 > 1) in1.push_back(msg / in_msg2);
        if (in_msg2 > 1) in2.push_back(msg % in_msg2);
      }
      for (std::size_t j = 0; j < anc1; ++j) in1.push_back(digits[pos++]);
      for (std::size_t j = 0; j < anc2; ++j) in2.push_back(digits[pos++]);
      const std::size_t o1 = c1.perm[compose(in1, c1.in_dims)];
      const std::size_t o2 = c2.perm[compose(in2, c2.in_dims)];
      std::vector<std::size_t> od1 = c1.out_mem_dims;
      od1.push_back(c1.msg_dim);
      std::vector<std::size_t> od2 = c2.out_mem_dims;
      od2.push_back(c2.msg_dim);
      auto d1 = decompose(o1, od1);
      auto d2 = decompose(o2, od2);
      const std::size_t msg_out = d1.back() * c2.msg_dim + d2.back();
      d1.pop_back();
      d2.pop_back();
      std::vector<std::size_t> nd = d1;
      nd.insert(nd.end(), d2.begin(), d2.end());
      nd.push_back(msg_out);
      nc.perm[idx] = compose(nd, out_dims);
    }
    m1 = c1.out_mem_dims;
    m2 = c2.out_mem_dims;
    in_msg1 = c1.msg_dim;
    in_msg2 = c2.msg_dim;
    out.circuits.push_back(std::move(nc));
  }
  for (std::size_t idx : p1.alice_output_regs) out.alice_output_regs.push_back(idx);
  for (std::size_t idx : p2.alice_output_regs)
    out.alice_output_regs.push_back(mem1a.size() + idx);
  for (std::size_t idx : p1.bob_output_regs) out.bob_output_regs.push_back(idx);
  for (std::size_t idx : p2.bob_output_regs)
    out.bob_output_regs.push_back(mem1b.size() + idx);
  validate_reversible(out);
  return out;
}

namespace {

ChannelTable channel_from_table(const JointTable& table, std::size_t x_dim,
                                std::size_t y_dim, std::size_t a_dim,
                                std::size_t b_dim,
                                const std::function<std::size_t(
                                    const JointTable::Record&)>& a_of,
                                const std::function<std::size_t(
                                    const JointTable::Record&)>& b_of) {
  ChannelTable ch;
  ch.x_dim = x_dim;
  ch.y_dim = y_dim;
  ch.a_dim = a_dim;
  ch.b_dim = b_dim;
  ch.p.assign(x_dim * y_dim * a_dim * b_dim, 0.0);
  for (const auto& rec : table.records) {
    const std::size_t a = a_of(rec);
    const std::size_t b = b_of(rec);
    ch.p[((rec.x * y_dim + rec.y) * a_dim + a) * b_dim + b] += rec.prob;
  }
  return ch;
}

}  // namespace

ChannelTable classical_channel(const ClassicalProtocol& pi,
                               const InputDistribution& mu) {
  const JointTable table = run_classical(pi, mu);
  const std::size_t tfull = pi.transcript_dim(pi.rounds.size());
  auto out_of = [&](const OutputFunction& fn, bool alice,
                    const JointTable::Record& rec) -> std::size_t {
    if (fn.trivial()) return 0;
    std::size_t transcript = 0;
    for (std::size_t i = 0; i < pi.rounds.size(); ++i)
      transcript = transcript * pi.rounds[i].alphabet + rec.msgs[i];
    const std::size_t input = alice ? rec.x : rec.y;
    const std::size_t coin = alice ? rec.sa : rec.sb;
    const std::size_t coin_dim =
        alice ? pi.alice_coin.size() : pi.bob_coin.size();
    return fn
        .table[((input * coin_dim + coin) * pi.public_coin.size() + rec.r) *
                   tfull +
               transcript];
  };
  return channel_from_table(
      table, pi.x_dim, pi.y_dim,
      std::max<std::size_t>(pi.alice_output.dim, 1),
      std::max<std::size_t>(pi.bob_output.dim, 1),
      [&](const JointTable::Record& rec) {
        return out_of(pi.alice_output, true, rec);
      },
      [&](const JointTable::Record& rec) {
        return out_of(pi.bob_output, false, rec);
      });
}

ChannelTable reversible_channel(const ReversibleProtocol& rp,
                                const InputDistribution& mu) {
  const JointTable table = run_reversible(rp, mu);
  // Final memory register dims per party.
  std::vector<std::size_t> amem = {rp.x_dim, rp.alice_coin.size(),
                                   rp.public_coin.size()};
  std::vector<std::size_t> bmem = {rp.y_dim, rp.bob_coin.size(),
                                   rp.public_coin.size()};
  for (std::size_t k = 0; k < rp.circuits.size(); ++k)
    (k % 2 == 0 ? amem : bmem) = rp.circuits[k].out_mem_dims;
  std::size_t a_dim = 1, b_dim = 1;
  std::vector<std::size_t> a_dims, b_dims;
  for (std::size_t reg : rp.alice_output_regs) {
    a_dims.push_back(amem[reg]);
    a_dim *= amem[reg];
  }
  for (std::size_t reg : rp.bob_output_regs) {
    b_dims.push_back(bmem[reg]);
    b_dim *= bmem[reg];
  }
  // The joint table records memories per message round; re-simulate each
  // party forward to read the final circuit contents per atom.
  auto value_of = [&](const JointTable::Record& rec, bool alice,
                      const std::vector<std::size_t>& regs,
                      const std::vector<std::size_t>& dims) -> std::size_t {
    if (regs.empty()) return 0;
    std::vector<std::size_t> other_msgs;
    for (std::size_t j = alice ? 1 : 0; j < rec.msgs.size(); j += 2)
      other_msgs.push_back(rec.msgs[j]);
    const LocalSim sim = simulate_party(rp, alice, alice ? rec.x : rec.y,
                                        alice ? rec.sa : rec.sb, rec.r,
                                        other_msgs);
    std::vector<std::size_t> vals;
    for (std::size_t reg : regs) vals.push_back(sim.mem[reg]);
    return compose(vals, dims);
  };
  return channel_from_table(
      table, rp.x_dim, rp.y_dim, a_dim ? a_dim : 1, b_dim ? b_dim : 1,
      [&](const JointTable::Record& rec) {
        return value_of(rec, true, rp.alice_output_regs, a_dims);
      },
      [&](const JointTable::Record& rec) {
        return value_of(rec, false, rp.bob_output_regs, b_dims);
      });
}

namespace {

// Private-coin values of `owner` consistent with their own messages in the
// given transcript prefix.
std::vector<std::size_t> consistent_coins(const ClassicalProtocol& pi,
                                          Party owner, std::size_t input,
                                          std::size_t pub,
                                          const std::vector<std::size_t>& msgs,
                                          std::size_t upto) {
  const std::size_t coin_dim =
      owner == Party::alice ? pi.alice_coin.size() : pi.bob_coin.size();
  const auto& coin_dist =
      owner == Party::alice ? pi.alice_coin : pi.bob_coin;
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < coin_dim; ++s) {
    if (coin_dist.p[s] <= 0.0) continue;
    bool ok = true;
    std::size_t transcript = 0;
    for (std::size_t j = 0; j < upto; ++j) {
      if (pi.rounds[j].owner == owner) {
        const std::size_t m = pi.message(j, input, s, pub, transcript);
        if (m != msgs[j]) {
          ok = false;
          break;
        }
      }
      transcript = transcript * pi.rounds[j].alphabet + msgs[j];
    }
    if (ok) out.push_back(s);
  }
  return out;
}

}  // namespace

CanonicalForm canonical_randomness_form(const ClassicalProtocol& pi) {
  validate_classical(pi);
  CanonicalForm cf;
  cf.protocol.x_dim = pi.x_dim;
  cf.protocol.y_dim = pi.y_dim;
  cf.protocol.public_coin = pi.public_coin;

  struct RoundPlan {
    std::vector<long long> det;         // per view; -1 when a coordinate exists
    std::vector<long long> coord_index; // per view; -1 when deterministic
  };
  std::vector<RoundPlan> plans(pi.rounds.size());

  for (std::size_t i = 0; i < pi.rounds.size(); ++i) {
    const ClassicalRound& round = pi.rounds[i];
    const bool alice = round.owner == Party::alice;
    const std::size_t input_dim = alice ? pi.x_dim : pi.y_dim;
    const auto& coin = alice ? pi.alice_coin : pi.bob_coin;
    const std::size_t tdim = pi.transcript_dim(i);
    auto& plan = plans[i];
    plan.det.assign(input_dim * pi.public_coin.size() * tdim, 0);
    plan.coord_index.assign(plan.det.size(), -1);
    for (std::size_t u = 0; u < input_dim; ++u)
      for (std::size_t r = 0; r < pi.public_coin.size(); ++r)
        for (std::size_t t = 0; t < tdim; ++t) {
          // Transcript digits for consistency checking.
          std::vector<std::size_t> digits(i);
          std::size_t tv = t;
          for (std::size_t j = i; j-- > 0;) {
            digits[j] = tv % pi.rounds[j].alphabet;
            tv /= pi.rounds[j].alphabet;
          }
          const auto consistent =
              consistent_coins(pi, round.owner, u, r, digits, i);
          const std::size_t view = (u * pi.public_coin.size() + r) * tdim + t;
          if (consistent.empty()) {
            plan.det[view] = 0;  // unreachable view
            continue;
          }
          // Conditional message distribution given the view.
          std::map<std::size_t, double> dist;
          double total = 0.0;
          for (std::size_t s : consistent) {
            const double w = coin.p[s];
            dist[pi.message(i, u, s, r, t)] += w;
            total += w;
          }
          if (dist.size() == 1) {
            plan.det[view] = (long long)dist.begin()->first;
            continue;
          }
          CoinCoordinate cc_entry;
          cc_entry.round = i;
          cc_entry.view = view;
          for (const auto& [m, w] : dist) {
            cc_entry.values.push_back(m);
            cc_entry.probs.push_back(w / total);
          }
          auto& coords = alice ? cf.alice_coords : cf.bob_coords;
          plan.coord_index[view] = (long long)coords.size();
          plan.det[view] = -1;
          coords.push_back(std::move(cc_entry));
        }
  }

  auto coin_of = [](const std::vector<CoinCoordinate>& coords) {
    std::vector<double> p = {1.0};
    for (const auto& c : coords) {
      std::vector<double> np;
      np.reserve(p.size() * c.probs.size());
      for (double a : p)
        for (double b : c.probs) np.push_back(a * b);
      p = std::move(np);
    }
    return FiniteDistribution(p);
  };
  cf.protocol.alice_coin = coin_of(cf.alice_coords);
  cf.protocol.bob_coin = coin_of(cf.bob_coords);

  auto coord_digit = [](const std::vector<CoinCoordinate>& coords,
                        std::size_t s, std::size_t index) {
    // Big-endian over coordinates in order.
    std::size_t stride = 1;
    for (std::size_t k = coords.size(); k-- > index + 1;)
      stride *= coords[k].probs.size();
    return (s / stride) % coords[index].probs.size();
  };

  for (std::size_t i = 0; i < pi.rounds.size(); ++i) {
    const ClassicalRound& old_round = pi.rounds[i];
    const bool alice = old_round.owner == Party::alice;
    const std::size_t input_dim = alice ? pi.x_dim : pi.y_dim;
    const auto& coords = alice ? cf.alice_coords : cf.bob_coords;
    const std::size_t coin_dim =
        alice ? cf.protocol.alice_coin.size() : cf.protocol.bob_coin.size();
    const std::size_t tdim = pi.transcript_dim(i);
    ClassicalRound round;
    round.owner = old_round.owner;
    round.alphabet = old_round.alphabet;
    round.table.resize(input_dim * coin_dim * pi.public_coin.size() * tdim);
    for (std::size_t u = 0; u < input_dim; ++u)
      for (std::size_t s = 0; s < coin_dim; ++s)
        for (std::size_t r = 0; r < pi.public_coin.size(); ++r)
          for (std::size_t t = 0; t < tdim; ++t) {
            const std::size_t view =
                (u * pi.public_coin.size() + r) * tdim + t;
            std::size_t m;
            if (plans[i].coord_index[view] >= 0) {
              const std::size_t ci = (std::size_t)plans[i].coord_index[view];
              m = coords[ci].values[coord_digit(coords, s, ci)];
            } else {
              m = (std::size_t)plans[i].det[view];
            }
            round.table[((u * coin_dim + s) * pi.public_coin.size() + r) *
                            tdim +
                        t] = m;
          }
    cf.protocol.rounds.push_back(std::move(round));
  }

  // Outputs must not depend on private coins (checked over consistent
  // coin values of each reachable full view).
  const std::size_t tfull = pi.transcript_dim(pi.rounds.size());
  auto convert_output = [&](const OutputFunction& fn, Party owner,
                            OutputFunction& nf) {
    if (fn.trivial()) return;
    const bool alice = owner == Party::alice;
    const std::size_t input_dim = alice ? pi.x_dim : pi.y_dim;
    const std::size_t new_coin =
        alice ? cf.protocol.alice_coin.size() : cf.protocol.bob_coin.size();
    const std::size_t old_coin =
        alice ? pi.alice_coin.size() : pi.bob_coin.size();
    nf.dim = fn.dim;
    nf.table.resize(input_dim * new_coin * pi.public_coin.size() * tfull);
    for (std::size_t u = 0; u < input_dim; ++u)
      for (std::size_t r = 0; r < pi.public_coin.size(); ++r)
        for (std::size_t t = 0; t < tfull; ++t) {
          std::vector<std::size_t> digits(pi.rounds.size());
          std::size_t tv = t;
          for (std::size_t j = pi.rounds.size(); j-- > 0;) {
            digits[j] = tv % pi.rounds[j].alphabet;
            tv /= pi.rounds[j].alphabet;
          }
          const auto consistent = consistent_coins(pi, owner, u, r, digits,
                                                   pi.rounds.size());
          std::size_t value = 0;
          bool first = true;
          for (std::size_t s : consistent) {
            const std::size_t v =
                fn.table[((u * old_coin + s) * pi.public_coin.size() + r) *
                             tfull +
                         t];
            if (first) {
              value = v;
              first = false;
            } else if (v != value) {
              throw ContractError(
                  "canonical_randomness_form: output depends on the private "
                  "coin beyond the transcript");
            }
          }
          for (std::size_t s = 0; s < new_coin; ++s)
            nf.table[((u * new_coin + s) * pi.public_coin.size() + r) * tfull +
                     t] = value;
        }
  };
  convert_output(pi.alice_output, Party::alice, cf.protocol.alice_output);
  convert_output(pi.bob_output, Party::bob, cf.protocol.bob_output);
  validate_classical(cf.protocol);

  // The joint (X, Y, R, M) distribution must be untouched; verify under the
  // uniform distribution, which exercises every reachable view.
  {
    const InputDistribution uni =
        InputDistribution::uniform(pi.x_dim, pi.y_dim);
    std::map<std::vector<std::size_t>, double> before, after;
    for (const auto& rec : run_classical(pi, uni).records) {
      std::vector<std::size_t> key = {rec.x, rec.y, rec.r};
      key.insert(key.end(), rec.msgs.begin(), rec.msgs.end());
      before[key] += rec.prob;
    }
    for (const auto& rec : run_classical(cf.protocol, uni).records) {
      std::vector<std::size_t> key = {rec.x, rec.y, rec.r};
      key.insert(key.end(), rec.msgs.begin(), rec.msgs.end());
      after[key] += rec.prob;
    }
    for (const auto& [key, p] : before) {
      const auto it = after.find(key);
      const double q = it == after.end() ? 0.0 : it->second;
      if (std::abs(p - q) > 1e-10)
        throw ContractError("canonical_randomness_form changed the joint "
                            "transcript distribution");
    }
  }
  return cf;
}

ClassicalProtocol pad_messages(const ClassicalProtocol& pi) {
  validate_classical(pi);
  if (pi.rounds.empty()) return pi;
  std::size_t k = 0;
  bool uniform = true;
  for (const auto& round : pi.rounds) k = std::max(k, round.alphabet);
  for (const auto& round : pi.rounds)
    if (round.alphabet != k) uniform = false;
  if (uniform) return pi;

  const std::size_t na = k + 1;  // distinguished pad symbol = k
  ClassicalProtocol out;
  out.x_dim = pi.x_dim;
  out.y_dim = pi.y_dim;
  out.public_coin = pi.public_coin;
  out.alice_coin = pi.alice_coin;
  out.bob_coin = pi.bob_coin;

  // Old transcript from new digits; nullopt when the prefix is unreachable.
  auto old_transcript = [&](const std::vector<std::size_t>& new_digits,
                            std::size_t upto) -> std::optional<std::size_t> {
    std::size_t t = 0;
    for (std::size_t j = 0; j < upto; ++j) {
      const std::size_t a = pi.rounds[j].alphabet;
      std::size_t v = new_digits[j];
      if (a == 1) {
        if (v != k) return std::nullopt;  // silent rounds always send the pad
        v = 0;
      } else if (v >= a) {
        return std::nullopt;
      }
      t = t * a + v;
    }
    return t;
  };

  for (std::size_t i = 0; i < pi.rounds.size(); ++i) {
    const ClassicalRound& old_round = pi.rounds[i];
    const bool alice = old_round.owner == Party::alice;
    const std::size_t input_dim = alice ? pi.x_dim : pi.y_dim;
    const std::size_t coin_dim =
        alice ? pi.alice_coin.size() : pi.bob_coin.size();
    std::size_t tdim = 1;
    for (std::size_t j = 0; j < i; ++j) tdim *= na;
    ClassicalRound round;
    round.owner = old_round.owner;
    round.alphabet = na;
    round.table.resize(input_dim * coin_dim * pi.public_coin.size() * tdim);
    for (std::size_t u = 0; u < input_dim; ++u)
      for (std::size_t s = 0; s < coin_dim; ++s)
        for (std::size_t r = 0; r < pi.public_coin.size(); ++r)
          for (std::size_t t = 0; t < tdim; ++t) {
            std::vector<std::size_t> digits(i);
            std::size_t tv = t;
            for (std::size_t j = i; j-- > 0;) {
              digits[j] = tv % na;
              tv /= na;
            }
            std::size_t m = 0;
            const auto ot = old_transcript(digits, i);
            if (ot) {
              m = old_round.alphabet == 1
                      ? k
                      : pi.message(i, u, s, r, *ot);
            }
            round.table[((u * coin_dim + s) * pi.public_coin.size() + r) *
                            tdim +
                        t] = m;
          }
    out.rounds.push_back(std::move(round));
  }

  std::size_t tfull_new = 1;
  for (std::size_t j = 0; j < pi.rounds.size(); ++j) tfull_new *= na;
  auto convert_output = [&](const OutputFunction& fn, bool alice,
                            OutputFunction& nf) {
    if (fn.trivial()) return;
    const std::size_t input_dim = alice ? pi.x_dim : pi.y_dim;
    const std::size_t coin_dim =
        alice ? pi.alice_coin.size() : pi.bob_coin.size();
    const std::size_t tfull_old = pi.transcript_dim(pi.rounds.size());
    nf.dim = fn.dim;
    nf.table.assign(input_dim * coin_dim * pi.public_coin.size() * tfull_new,
                    0);
    for (std::size_t u = 0; u < input_dim; ++u)
      for (std::size_t s = 0; s < coin_dim; ++s)
        for (std::size_t r = 0; r < pi.public_coin.size(); ++r)
          for (std::size_t t = 0; t < tfull_new; ++t) {
            std::vector<std::size_t> digits(pi.rounds.size());
            std::size_t tv = t;
            for (std::size_t j = pi.rounds.size(); j-- > 0;) {
              digits[j] = tv % na;
              tv /= na;
            }
            const auto ot = old_transcript(digits, pi.rounds.size());
            if (!ot) continue;
            nf.table[((u * coin_dim + s) * pi.public_coin.size() + r) *
                         tfull_new +
                     t] =
                fn.table[((u * coin_dim + s) * pi.public_coin.size() + r) *
                             tfull_old +
                         *ot];
          }
  };
  convert_output(pi.alice_output, true, out.alice_output);
  convert_output(pi.bob_output, false, out.bob_output);
  validate_classical(out);
  return out;
}

std::vector<std::size_t> compile_gates(const GateCircuit& circuit) {
  const std::size_t n = circuit.n_bits;
  const std::size_t dim = std::size_t(1) << n;
  // Wire 0 is the most significant bit, consistent with big-endian
  // register indexing.
  auto bit = [&](std::size_t v, std::size_t w) {
    return (v >> (n - 1 - w)) & 1u;
  };
  auto flip = [&](std::size_t v, std::size_t w) {
    return v ^ (std::size_t(1) << (n - 1 - w));
  };
  std::vector<std::size_t> perm(dim);
  for (std::size_t v = 0; v < dim; ++v) {
    std::size_t cur = v;
    for (const auto& g : circuit.gates) {
      if (g.kind == "not") {
        cur = flip(cur, g.wires.at(0));
      } else if (g.kind == "cnot") {
        if (bit(cur, g.wires.at(0))) cur = flip(cur, g.wires.at(1));
      } else if (g.kind == "toffoli") {
        if (bit(cur, g.wires.at(0)) && bit(cur, g.wires.at(1)))
          cur = flip(cur, g.wires.at(2));
      } else if (g.kind == "swap") {
        const std::size_t b0 = bit(cur, g.wires.at(0));
        const std::size_t b1 = bit(cur, g.wires.at(1));
        if (b0 != b1) {
          cur = flip(cur, g.wires.at(0));
          cur = flip(cur, g.wires.at(1));
        }
      } else {
        throw ArgumentError("unknown gate kind " + g.kind);
      }
    }
    perm[v] = cur;
  }
  return perm;
}

}  // namespace qicost
