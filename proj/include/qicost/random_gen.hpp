#pragma once

#include "qicost/classical.hpp"
#include "qicost/process.hpp"
#include "qicost/protocol.hpp"
#include "qicost/rng.hpp"

namespace qicost {

ComplexMatrix random_unitary(std::size_t dim, Rng& rng);
ComplexMatrix random_isometry(std::size_t dout, std::size_t din, Rng& rng);
ComplexMatrix random_hermitian(std::size_t dim, Rng& rng);
ComplexMatrix random_density_matrix(std::size_t dim, Rng& rng);
PureState random_pure_state(const RegisterSystem& sys, Rng& rng);
InputDistribution random_distribution(std::size_t x_dim, std::size_t y_dim,
                                      Rng& rng);
InputDistribution random_product_distribution(std::size_t x_dim,
                                              std::size_t y_dim, Rng& rng);

struct ProtocolGenOptions {
  std::size_t x_dim = 2, y_dim = 2;
  std::size_t max_rounds = 3;        // message rounds before the final one
  std::size_t message_dim = 2;
  std::size_t workspace_dim = 2;
  bool safe = true;                  // inputs used as controls only
  bool with_entanglement = true;
};
/// Random round-isometry protocol; safe ones touch X, Y only as controls,
/// unsafe ones may consume them. Rounds consume random subsets of the
/// owner's holdings, so later messages can forget earlier ones.
QuantumProtocol random_protocol(const ProtocolGenOptions& opt, Rng& rng);

struct ProcessGenOptions {
  std::size_t reg_dim = 2;
  std::size_t max_rounds = 3;
};
/// Random two-way interactive process with extension registers E, F.
InteractiveProcess random_process(const ProcessGenOptions& opt, Rng& rng);

struct ClassicalGenOptions {
  std::size_t x_dim = 2, y_dim = 2;
  std::size_t max_rounds = 3;
  std::size_t alphabet = 2;
  bool allow_public_coin = true;
  /// Each round is deterministic except, with this probability, one view
  /// that forwards a fresh binary coin (keeps the canonical form small).
  double coin_round_prob = 0.4;
  bool with_outputs = false;
};
ClassicalProtocol random_classical_protocol(const ClassicalGenOptions& opt,
                                            Rng& rng);

struct ReversibleGenOptions {
  std::size_t x_dim = 2, y_dim = 2;
  std::size_t rounds = 2;      // message rounds; circuits = rounds + 1
  std::size_t msg_dim = 2;
  bool with_coins = false;
};
ReversibleProtocol random_reversible_protocol(const ReversibleGenOptions& opt,
                                              Rng& rng);

}  // namespace qicost
