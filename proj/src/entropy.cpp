#include "qicost/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qicost/error.hpp"

namespace qicost {

namespace {

void check_density(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols())
    throw ContractError("density operator must be square");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > 1e-6)
    throw NormalizationError("density operator trace " + std::to_string(tr));
}

}  // namespace

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0)
    throw ArgumentError("binary_entropy argument " + std::to_string(p) +
                        " outside [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double entropy_of_probabilities(std::span<const double> probs) {
  double h = 0.0;
  for (double v : probs) {
    if (v < -1e-8)
      throw PositivityError("probability " + std::to_string(v) +
                            " below positivity window");
    const double p = std::clamp(v, 0.0, 1.0);
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  check_density(rho);
  const Spectrum spec = hermitian_eigenvalues(rho);
  const std::vector<double> probs = spec.clipped_probabilities();
  return entropy_of_probabilities(probs);
}

double renyi2_entropy(const ComplexMatrix& rho) {
  check_density(rho);
  if (rho.hermiticity_defect() > 1e-10)
    throw ContractError("renyi2_entropy: input is not Hermitian");
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  double purity = 0.0;
  for (const cplx& v : rho.data()) purity += std::norm(v);
  purity = std::clamp(purity, 1e-300, 1.0 + 1e-9);
  return -std::log2(purity);
}

double gram_entropy(const ComplexMatrix& gram) {
  const Spectrum spec = hermitian_eigenvalues(gram);
  return entropy_of_probabilities(spec.eigenvalues);
}

double gram_renyi2_entropy(const ComplexMatrix& gram) {
  double purity = 0.0;
  for (const cplx& v : gram.data()) purity += std::norm(v);
  purity = std::clamp(purity, 1e-300, 1.0 + 1e-9);
  return -std::log2(purity);
}

}  // namespace qicost
