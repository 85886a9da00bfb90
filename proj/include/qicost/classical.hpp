#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qicost/protocol.hpp"

namespace qicost {

struct FiniteDistribution {
  std::vector<double> p;
  FiniteDistribution() : p{1.0} {}
  explicit FiniteDistribution(std::vector<double> probs);
  std::size_t size() const { return p.size(); }
  bool trivial() const { return p.size() == 1; }
};

/// Message function of one round as a truth table over
/// (own input, own private coin, public coin, previous messages),
/// big-endian in that order.
struct ClassicalRound {
  Party owner = Party::alice;
  std::size_t alphabet = 1;
  std::vector<std::size_t> table;
};

/// Output value as a truth table over (own input, own private coin,
/// public coin, full transcript).
struct OutputFunction {
  std::size_t dim = 1;
  std::vector<std::size_t> table;
  bool trivial() const { return dim <= 1; }
};

/// Standard r-round protocol: odd rounds Alice, even rounds Bob. Each
/// party holds one private coin variable and both share one public coin.
struct ClassicalProtocol {
  std::size_t x_dim = 1, y_dim = 1;
  FiniteDistribution public_coin, alice_coin, bob_coin;
  std::vector<ClassicalRound> rounds;
  OutputFunction alice_output, bob_output;

  std::size_t transcript_dim(std::size_t upto_round) const;  // prod alphabets
  /// Message of round i (0-based) for the given data.
  std::size_t message(std::size_t i, std::size_t input, std::size_t coin,
                      std::size_t pub, std::size_t transcript) const;
};

void validate_classical(const ClassicalProtocol& pi);

/// Distribution over (X, Y, X', Y', D) with X' Y' copies of X Y: stored as
/// the conditional of D given (x, y). Trivial D has d_dim 1.
struct Extension {
  std::size_t d_dim = 1;
  std::vector<std::vector<double>> d_given_xy;  // [x * y_dim + y][d]
  static Extension trivial() { return Extension{}; }
};

/// Exhaustive enumeration of one protocol run: one record per atom of
/// (x, y, s_A, s_B, r_AB, d) with positive probability, carrying the
/// transcript (and, for reversible runs, the register contents per round).
struct JointTable {
  struct Record {
    std::size_t x = 0, y = 0, sa = 0, sb = 0, r = 0, d = 0;
    double prob = 0.0;
    std::vector<std::size_t> msgs;
    // Reversible runs: memory register contents after each round
    // (after-convention: the sender's entry updates in their round).
    std::vector<std::vector<std::size_t>> alice_mem, bob_mem;
  };
  std::vector<Record> records;
  std::size_t n_rounds = 0;

  /// Probabilities must sum to 1 +- 1e-12.
  void check_total() const;
};

using KeyFn =
    std::function<void(const JointTable::Record&, std::vector<std::size_t>&)>;

/// Shannon conditional mutual information I(U ; V | W) in bits over the
/// table, with U, V, W given as key extractors.
double shannon_cmi(const JointTable& table, const KeyFn& u, const KeyFn& v,
                   const KeyFn& w);

JointTable run_classical(const ClassicalProtocol& pi,
                         const InputDistribution& mu,
                         const Extension& ext = Extension::trivial());

/// IC(Pi, mu) with directional split: IC_{A->B} = I(X ; transcript | R Y).
struct ClassicalIc {
  double a_to_b = 0.0;
  double b_to_a = 0.0;
  double total() const { return a_to_b + b_to_a; }
};
ClassicalIc ic(const ClassicalProtocol& pi, const InputDistribution& mu);

/// The extension form: per-round sums of I(X'Y'D ; M_i | R S_B Y M_<i) +
/// I(X'Y'D ; M_i | R S_A X M_<i); equals ic() for every valid extension.
double ic_extended(const ClassicalProtocol& pi, const InputDistribution& mu,
                   const Extension& ext);

CommunicationCost cc(const ClassicalProtocol& pi);

/// Reversible circuit as an explicit permutation table over the product of
/// its input registers (the party's entire memory, the incoming message if
/// any, then ancillas fixed to 0 on input).
struct ReversibleCircuit {
  std::vector<std::size_t> in_dims;
  std::vector<std::size_t> out_mem_dims;
  std::size_t msg_dim = 1;  // 1 = no outgoing message (final circuit)
  std::size_t n_ancillas = 0;
  std::vector<std::size_t> perm;
};

/// Reversible r-round protocol: circuits alternate Alice/Bob starting with
/// Alice; circuit i <= r emits message M_i, circuit r+1 only rearranges the
/// receiver's memory. Outputs designate registers of each party's final
/// memory list.
struct ReversibleProtocol {
  std::size_t x_dim = 1, y_dim = 1;
  FiniteDistribution public_coin, alice_coin, bob_coin;
  std::vector<ReversibleCircuit> circuits;
  std::vector<std::size_t> alice_output_regs, bob_output_regs;
};

void validate_reversible(const ReversibleProtocol& rp);

JointTable run_reversible(const ReversibleProtocol& rp,
                          const InputDistribution& mu,
                          const Extension& ext = Extension::trivial());

/// RIC(Pi, mu) = sum_i I(X'Y'D ; M_i | B_i) + sum_i I(X'Y'D ; M_i | A_i),
/// both sums over all rounds. Extension-independence is verified against
/// the trivial extension to 1e-10.
struct ReversibleIc {
  double value = 0.0;
  std::vector<double> receiver_terms, sender_terms;
};
ReversibleIc ric(const ReversibleProtocol& rp, const InputDistribution& mu,
                 const Extension& ext = Extension::trivial());

/// Players copy their inputs up front and run on the copies; the input
/// registers are never modified afterwards.
ReversibleProtocol safe_reversible(const ReversibleProtocol& rp);

/// Standard protocol with the same per-round message distribution as the
/// (safe) reversible protocol; each party implicitly keeps every message,
/// so nothing is forgotten and IC <= RIC.
ClassicalProtocol unforget_simulation(const ReversibleProtocol& rp);

/// Runs Pi1 and Pi2 side by side as one protocol on (X1 x X2, Y1 x Y2);
/// used to exercise subadditivity of RIC.
ReversibleProtocol tensor_protocol(const ReversibleProtocol& p1,
                                   const ReversibleProtocol& p2);

/// Classical channel (x, y, a_out, b_out) of a protocol run.
ChannelTable classical_channel(const ClassicalProtocol& pi,
                               const InputDistribution& mu);
ChannelTable reversible_channel(const ReversibleProtocol& rp,
                                const InputDistribution& mu);

/// Fresh per-round private randomness: one independent coordinate per
/// reachable view (own input, public coin, previous messages) whose message
/// distribution is not deterministic; the coordinate carries the
/// conditional message distribution given that view.
struct CoinCoordinate {
  std::size_t round = 0;  // 0-based
  std::size_t view = 0;   // flattened (input, pub, transcript)
  std::vector<std::size_t> values;
  std::vector<double> probs;
};

struct CanonicalForm {
  ClassicalProtocol protocol;
  std::vector<CoinCoordinate> alice_coords, bob_coords;
};

/// Rewrites private randomness into canonical per-round per-view form.
/// IC, CC and the joint (X, Y, R, M) distribution are unchanged (verified
/// internally under the uniform distribution to 1e-10). Output functions
/// must not depend on the private coins.
CanonicalForm canonical_randomness_form(const ClassicalProtocol& pi);

/// Unions all message alphabets with a distinguished pad symbol so every
/// round speaks from the same alphabet; IC and the channel are unchanged,
/// CC may grow. Protocols whose alphabets already agree are returned as-is.
ClassicalProtocol pad_messages(const ClassicalProtocol& pi);

/// Gate-level description of a reversible circuit on bit registers;
/// compiled to a permutation table.
struct GateCircuit {
  std::size_t n_bits = 0;
  struct Gate {
    std::string kind;  // "not", "cnot", "toffoli", "swap"
    std::vector<std::size_t> wires;
  };
  std::vector<Gate> gates;
};
std::vector<std::size_t> compile_gates(const GateCircuit& circuit);

}  // namespace qicost
