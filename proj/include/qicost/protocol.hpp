#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qicost/state.hpp"

namespace qicost {

enum class Party { alice, bob };
Party other(Party p);
const char* party_name(Party p);

/// A register map from the protocol's declared names to the state-level
/// component registers (the input register X may be realized by two factor
/// registers when costs over an input decomposition are evaluated).
using RegisterResolution = std::map<std::string, std::vector<std::string>>;

struct Isometry {
  std::vector<std::string> in_regs;      // big-endian order of matrix columns
  std::vector<RegisterLabel> out_regs;   // big-endian order of matrix rows
  ComplexMatrix matrix;                  // dim(out) x dim(in)
  /// Reverse rounds apply the conjugate transpose of a forward isometry
  /// (V V^dagger = I instead of V^dagger V = I); they shrink the space and
  /// are valid only on states in the range of the forward map, which the
  /// runtime norm check enforces.
  bool reverse = false;
};

struct Round {
  Party owner = Party::alice;
  Isometry iso;
  /// Name of the message register produced this round (must be one of the
  /// isometry's out_regs). Rounds without a message communicate nothing.
  std::optional<std::string> message;
  /// Declared control registers: must appear unchanged in in_regs and
  /// out_regs, and the matrix must be block-diagonal over their basis.
  std::vector<std::string> controls;
};

/// Interactive two-party protocol in the round-isometry model: classical
/// inputs X and Y, optional pre-shared entanglement, and a sequence of
/// rounds alternating Alice/Bob (odd rounds Alice) unless custom_order.
struct QuantumProtocol {
  std::size_t x_dim = 1;
  std::size_t y_dim = 1;
  PureState entanglement = PureState::trivial();
  std::vector<std::string> alice_entanglement;  // who holds which factor
  std::vector<std::string> bob_entanglement;
  std::vector<Round> rounds;
  std::vector<std::string> alice_outputs;  // A_out register names at the end
  std::vector<std::string> bob_outputs;    // B_out register names at the end
  bool custom_order = false;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks isometry contracts (V^dagger V = I to 1e-10 max-entry, dim growth),
/// register-flow consistency, owner alternation, control block structure,
/// message and output designations. Report-based: never throws on protocol
/// defects.
ValidationReport validate_protocol(const QuantumProtocol& p);

/// True iff every round that touches an input register declares it as a
/// control and the control checks pass (the protocol never modifies X, Y).
bool is_safe(const QuantumProtocol& p);

/// Optional input factorization X = X1 (x) X2, Y = Y1 (x) Y2 with
/// independent distributions mu1 on X1 Y1 and mu2 on X2 Y2; index split is
/// big-endian (x = x1 * x2_dim + x2). Used by the hybrid cost family.
struct Decomposition {
  std::size_t x1_dim, x2_dim, y1_dim, y2_dim;
  InputDistribution mu1;
  InputDistribution mu2;
};

struct RoundInfo {
  Party sender = Party::alice;
  std::optional<std::string> message;  // state-level register name
  std::vector<std::string> alice_holdings;  // after the round, message excluded
  std::vector<std::string> bob_holdings;
};

/// The per-round global pure states of a purified run, with the register
/// bookkeeping every cost functional needs.
struct ProtocolTrace {
  std::vector<PureState> states;  // states[0] initial, states[i] after round i
  std::vector<RoundInfo> rounds;
  // Input/reference register components; the *2 lists are empty for plain
  // runs and hold the second factor for decomposition runs.
  std::vector<std::string> x1_regs, x2_regs, y1_regs, y2_regs;
  std::vector<std::string> rx1_regs, rx2_regs, ry1_regs, ry2_regs;
  std::vector<std::string> alice_outputs, bob_outputs;
  // Holdings once the last message has been absorbed by its recipient.
  std::vector<std::string> final_alice_holdings, final_bob_holdings;
  std::vector<std::vector<std::string>> product_regs;  // per state
  bool safe = false;
  bool product_mu = false;
  std::optional<InputDistribution> mu;
  std::optional<Decomposition> decomp;

  std::vector<std::string> x_regs() const;
  std::vector<std::string> y_regs() const;
  std::vector<std::string> reference_regs() const;
  const PureState& final_state() const { return states.back(); }
};

/// Exact purified execution: rho_0 = canonical purification of mu tensored
/// with the pre-shared entanglement, then each round's isometry applied as
/// identity on untouched factors. R registers are never acted on.
ProtocolTrace run_trace(const QuantumProtocol& p, const InputDistribution& mu);

/// Purified execution over a decomposition: mu1 and mu2 are purified
/// separately (references RX1 RY1 and RX2 RY2) and the protocol's X, Y
/// resolve to the factor pairs.
ProtocolTrace run_trace(const QuantumProtocol& p, const Decomposition& d);

/// Joint distribution over (x, y, a_out, b_out) measured on the final
/// state; requires the final marginal on R_X R_Y A_out B_out to be
/// classical (off-diagonal mass <= 1e-8).
struct ChannelTable {
  std::size_t x_dim, y_dim, a_dim, b_dim;
  std::vector<double> p;  // big-endian (x, y, a, b)
  double at(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    return p[((x * y_dim + y) * a_dim + a) * b_dim + b];
  }
};
ChannelTable channel_of(const QuantumProtocol& p, const InputDistribution& mu);

/// Truth table of a function f(x, y) with values in [0, out_dim).
struct FunctionTable {
  std::size_t x_dim, y_dim, out_dim;
  std::vector<std::size_t> values;  // row-major over (x, y)
  std::size_t at(std::size_t x, std::size_t y) const {
    return values[x * y_dim + y];
  }
};

/// Pr_mu[output != f] <= epsilon; with worst_case, max over all input pairs
/// (evaluated under a full-support distribution). Every non-empty output
/// side must agree with f.
bool solves(const QuantumProtocol& p, const FunctionTable& f,
            const InputDistribution& mu, double epsilon,
            bool worst_case = false);

/// Distributional (or worst-case) error probability of the protocol on f.
double protocol_error(const QuantumProtocol& p, const FunctionTable& f,
                      const InputDistribution& mu, bool worst_case = false);

/// Communication cost in (q)bits: sum of lg dim of message registers, split
/// by sending party.
struct CommunicationCost {
  double a_to_b = 0.0;
  double b_to_a = 0.0;
  double total() const { return a_to_b + b_to_a; }
};
CommunicationCost qcc(const QuantumProtocol& p);

}  // namespace qicost
