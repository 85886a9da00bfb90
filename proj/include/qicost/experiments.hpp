#pragma once

#include <cstdint>
#include <string>

#include "qicost/classical.hpp"
#include "qicost/info_costs.hpp"
#include "qicost/protocol.hpp"
#include "qicost/rng.hpp"

namespace qicost {

/// Boolean function on n_x + n_y bits.
struct BooleanFunctionTable {
  std::size_t n_x = 1, n_y = 1;
  std::vector<std::uint8_t> values;  // row-major over (x, y), 2^{n_x+n_y}
  std::size_t x_dim() const { return std::size_t(1) << n_x; }
  std::size_t y_dim() const { return std::size_t(1) << n_y; }
  std::uint8_t at(std::size_t x, std::size_t y) const {
    return values[x * y_dim() + y];
  }
  FunctionTable as_function() const;
};

BooleanFunctionTable inner_product_function(std::size_t n);
BooleanFunctionTable and_function();  // n = 1
/// DISJ_n(x, y) = NOT OR_i (x_i AND y_i); desk-scale sanity channels only
/// (n <= 3), no asymptotic claims attach to it.
BooleanFunctionTable disjointness_function(std::size_t n);
BooleanFunctionTable random_boolean_function(std::size_t n, Rng& rng);

/// Gram matrix of the phase-state ensemble: G[x][x'] =
/// sqrt(muX(x) muX(x')) sum_y muY(y) (-1)^{f(x,y)+f(x',y)}.
ComplexMatrix phase_gram(const BooleanFunctionTable& f,
                         const std::vector<double>& mu_x,
                         const std::vector<double>& mu_y);

/// Entropy of the mixture of phase states, computed from the |X|-dim Gram
/// matrix rather than the |Y|^2-dim density matrix.
double phase_entropy(const BooleanFunctionTable& f,
                     const std::vector<double>& mu_x,
                     const std::vector<double>& mu_y);

double renyi2_phase_entropy(const BooleanFunctionTable& f,
                            const std::vector<double>& mu_x,
                            const std::vector<double>& mu_y);

/// Oracle route: the same entropy from the full density operator of the
/// ensemble on Y R_Y (feasible only at small n).
double phase_entropy_full(const BooleanFunctionTable& f,
                          const std::vector<double>& mu_x,
                          const std::vector<double>& mu_y);

/// Quantized send-x protocol where Bob evaluates f; zero error by
/// construction.
QuantumProtocol send_x_protocol(const BooleanFunctionTable& f);

struct LowerBoundReport {
  double qic = 0.0;
  double bound = 0.0;  // phase entropy H(Y R_Y)
  bool holds = false;  // qic >= bound - 1e-8
  bool tight = false;  // |qic - bound| <= 1e-8
};
/// Checks QIC(p, mu) >= H(Y R_Y) of the phase ensemble for a zero-error
/// protocol for f on a product distribution.
LowerBoundReport qic_lower_bound_check(const QuantumProtocol& p,
                                       const BooleanFunctionTable& f,
                                       const std::vector<double>& mu_x,
                                       const std::vector<double>& mu_y);

struct RandomFunctionReport {
  std::size_t n = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> h2_values, h_values;
  double delta = 0.0;            // 1/sqrt(n)
  double empirical_violation = 0.0;  // fraction with H2 < (1-delta) n
  double tail_bound = 0.0;           // exp(-(2^{delta n}-1)^2/2), reported only
  bool ordering_ok = false;          // H2 <= H <= n on every sample
  double wall_seconds = 0.0;
  std::string summary() const;
};
/// Samples uniform boolean functions and reports the spread of the phase
/// entropies. Asserts only H2 <= H <= n; the tail bound is reported, not
/// asserted.
RandomFunctionReport random_function_experiment(std::size_t n,
                                                std::size_t samples,
                                                std::uint64_t seed);

struct AppendixReport {
  double w = 0.0;
  double qic_mu = 0.0, qic_mu0 = 0.0, binary_term = 0.0;
  bool mass_shift_holds = false;  // QIC(mu) <= QIC(mu0) + H(w) + 1e-8
  double convex_lower = 0.0, qic_mix = 0.0, convex_upper = 0.0;
  bool quasi_convexity_holds = false;
};
/// Both inequalities for a no-forget-certified AND protocol on mu with
/// mu(1,1) = w <= 1/2: the mass-shift bound against the renormalized
/// zero-(1,1) distribution mu0, and the quasi-convexity sandwich for the
/// split mu = (1-w) mu0 + w delta_(1,1). Throws ContractError when the
/// certification fails.
AppendixReport appendix_inequality_suite(const QuantumProtocol& p,
                                         const InputDistribution& mu);

struct QuasiConvexityReport {
  double lower = 0.0, mid = 0.0, upper = 0.0;
  bool holds = false;
};
/// p QIC(mu_a) + (1-p) QIC(mu_b) <= QIC(mix) <= same + H(p) + 1e-8 for a
/// no-forget-certified protocol.
QuasiConvexityReport quasi_convexity_check(const QuantumProtocol& p,
                                           const InputDistribution& mu_a,
                                           const InputDistribution& mu_b,
                                           double mix_p);

}  // namespace qicost
