#pragma once

#include "qicost/classical.hpp"
#include "qicost/info_costs.hpp"
#include "qicost/protocol.hpp"

namespace qicost {

/// Protocol that first copies X (and Y) coherently into fresh working
/// registers and runs the original rounds on the copies, leaving the input
/// registers untouched (used only as controls). Same input-output channel;
/// QIC never increases, with equality for protocols that were already safe.
QuantumProtocol safe_version(const QuantumProtocol& p);

/// Quantum simulation of a classical protocol in canonical randomness form:
/// public coins become shared entangled copies, each private-coin
/// coordinate becomes a locally held entangled pair, and every message is
/// computed coherently into a fresh register. Same channel as the classical
/// protocol; QIC = IC; CRIC = 0; QCC = CC.
QuantumProtocol quantize_classical(const CanonicalForm& cf);

struct QuantizePipeline {
  ClassicalProtocol padded;
  CanonicalForm canonical;
  QuantumProtocol quantum;
};
/// pad_messages, then canonical_randomness_form, then quantize_classical.
QuantizePipeline quantize_pipeline(const ClassicalProtocol& pi);

/// Reads the function a zero-error protocol computes off its channel;
/// throws ContractError if any input pair has error above tol.
FunctionTable derive_function(const QuantumProtocol& p, double tol = 1e-10);

/// Forward run, coherent copy of the output qubit into a fresh ancilla,
/// then the conjugate-transpose rounds in mirror order. Restores every
/// working register and leaves f(x, y) in the ancilla.
/// Requires a safe protocol of the standard shape solving a boolean
/// function with zero error (worst case, to 1e-10).
QuantumProtocol clean_protocol(const QuantumProtocol& p);

/// Same with the ancilla prepared in |->: the output lands in the phase
/// (-1)^{f(x,y)} and every register returns to its initial state.
QuantumProtocol phase_protocol(const QuantumProtocol& p);

/// Forward rounds, then the conjugate-transpose rounds without any output
/// copy: QIC doubles and CIC equals the original QIC.
QuantumProtocol reverse_composition(const QuantumProtocol& p);

}  // namespace qicost
