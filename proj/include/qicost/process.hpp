#pragma once

#include "qicost/protocol.hpp"

namespace qicost {

/// One step of a general two-way interactive process: both parties apply a
/// local isometry simultaneously; Alice may emit a register to Bob and Bob
/// one to Alice. Either message may be absent.
struct ProcessRound {
  Isometry alice;
  Isometry bob;
  std::optional<std::string> alice_message;  // produced by alice, sent to bob
  std::optional<std::string> bob_message;    // produced by bob, sent to alice
};

/// Bipartite interactive process with untouched extension registers E, F.
/// The round-message protocol model embeds by keeping one party idle per
/// round.
struct InteractiveProcess {
  PureState initial = PureState::trivial();
  std::vector<std::string> alice_regs, bob_regs, e_regs, f_regs;
  std::vector<ProcessRound> rounds;
};

/// Absolute residual of the flow identity
///   I(E; B_final | F) - I(E; B_0 | F)
///     = sum_i [ I(E; C_i | F B_i) - I(E; D_i | F B_i) ],
/// where B_final absorbs the last Alice-to-Bob message. Exact up to
/// numerics; contract is residual <= 1e-8.
/// Throws ContractError if any isometry acts on E or F.
double flow_identity_residual(const InteractiveProcess& proc);

/// Embeds a protocol into the process model (idle counterpart per round)
/// with E = the X references and F = the Y references of a purified run on
/// mu, giving the protocol corollary of the flow identity.
InteractiveProcess embed_protocol(const QuantumProtocol& p,
                                  const InputDistribution& mu);

}  // namespace qicost
