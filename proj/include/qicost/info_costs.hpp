#pragma once

#include "qicost/protocol.hpp"

namespace qicost {

/// One directional cost measure with its per-round terms (index aligned
/// with the protocol's rounds; zero where a round carries no term).
struct DirectionalCost {
  double a_to_b = 0.0;
  double b_to_a = 0.0;
  std::vector<double> terms_a_to_b;
  std::vector<double> terms_b_to_a;
  double total() const { return a_to_b + b_to_a; }
};

/// All directional cost terms for one protocol/distribution pair.
struct InfoCostReport {
  double qic_a_to_b = 0, qic_b_to_a = 0;
  double cic_a_to_b = 0, cic_b_to_a = 0;
  double cric_a_from_b = 0, cric_b_from_a = 0;
  double hic_a_to_b = 0, hic_b_to_a = 0;
  std::vector<double> qic_terms, cic_terms, cric_terms;  // per round

  double qic() const { return qic_a_to_b + qic_b_to_a; }
  double cic() const { return cic_a_to_b + cic_b_to_a; }
  double cric() const { return cric_a_from_b + cric_b_from_a; }
  double hic() const { return hic_a_to_b + hic_b_to_a; }
};

/// QIC(Pi, mu) = sum over messages of I(C_i ; R_X R_Y | receiver memory).
/// Works for safe and unsafe protocols alike.
DirectionalCost qic(const ProtocolTrace& trace);

/// CIC terms I(C_i ; X | Y B_i) over Alice-sent rounds (and mirror).
/// Requires a safe-protocol trace; throws ContractError directing to
/// safe_version otherwise.
DirectionalCost cic(const ProtocolTrace& trace);

/// CRIC_{A<-B} terms I(C_i ; X | Y B_i) over Bob-sent rounds (and mirror):
/// a_from_b is stored in `a_to_b`-slot order (alice slot = CRIC_{A<-B}).
struct ReverseCost {
  double a_from_b = 0.0;
  double b_from_a = 0.0;
  std::vector<double> terms_a_from_b;
  std::vector<double> terms_b_from_a;
  double total() const { return a_from_b + b_from_a; }
};
ReverseCost cric(const ProtocolTrace& trace);

/// HIC_{A->B} = I(X ; B_out B' | Y) on the final state (and mirror).
struct HolevoCost {
  double a_to_b = 0.0;
  double b_to_a = 0.0;
  double total() const { return a_to_b + b_to_a; }
};
HolevoCost hic(const ProtocolTrace& trace);

/// Everything above in one report.
InfoCostReport info_costs(const ProtocolTrace& trace);

/// Superposed variants for product input distributions: SCIC terms
/// I(C_i ; X | R_Y Y B_i), SCRIC likewise over reverse rounds, and
/// SHIC_{A->B} = I(X ; R_Y Y B_out B').
struct SuperposedCosts {
  double scic_a_to_b = 0, scic_b_to_a = 0;
  double scric_a_from_b = 0, scric_b_from_a = 0;
  double shic_a_to_b = 0, shic_b_to_a = 0;
};
/// Throws ArgumentError when mu is not a product distribution.
SuperposedCosts superposed_costs(const ProtocolTrace& trace);
/// The same CQMI sums without the product-distribution check (they are
/// well-defined as formal expressions for any mu).
SuperposedCosts superposed_costs_raw(const ProtocolTrace& trace);

/// Hybrid variants for a trace run over an input decomposition:
/// HCIC terms I(C_i ; X1 | X2 R_Y2 Y1 Y2 B_i) and mirrors, plus
/// HHIC_{A->B} = I(X1 ; R_Y2 Y2 B_out B' | Y1 X2). The identity
/// HHIC = HCIC - HCRIC is checked internally to 1e-9.
struct HybridCosts {
  double hcic_a_to_b = 0, hcic_b_to_a = 0;
  double hcric_a_from_b = 0, hcric_b_from_a = 0;
  double hhic_a_to_b = 0, hhic_b_to_a = 0;
};
HybridCosts hybrid_costs(const ProtocolTrace& trace);

/// No-forget certification: either the structural sufficient condition
/// (every round preserves its inputs and writes the message as a function
/// of their basis; this criterion is an artifact-level sufficient check,
/// not a definition from the model) or exhaustive HCRIC <= 1e-8 over the
/// supplied decomposition family.
struct NoForgetReport {
  bool certified = false;
  std::string method;  // "structural", "exhaustive", or "" when failed
  double max_hcric = 0.0;
  std::string detail;
};
NoForgetReport no_forget_certify(const QuantumProtocol& p,
                                 const std::vector<Decomposition>& family);

}  // namespace qicost
