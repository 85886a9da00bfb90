#pragma once

#include <span>

#include "qicost/complex_matrix.hpp"
#include "qicost/eigen.hpp"

namespace qicost {

/// H(p) = -p lg p - (1-p) lg(1-p) in bits, 0 at the endpoints.
double binary_entropy(double p);

/// Shannon entropy in bits of a list of probabilities (0 lg 0 := 0).
/// Values are clipped to [0, 1]; values below -1e-8 raise PositivityError.
double entropy_of_probabilities(std::span<const double> probs);

/// Von Neumann entropy in bits. The input must be a density operator:
/// Hermitian, trace in [1 +- 1e-6], spectrum >= -1e-8.
double von_neumann_entropy(const ComplexMatrix& rho);

/// Renyi entropy of order 2 in bits, H2 = -lg Tr(rho^2).
double renyi2_entropy(const ComplexMatrix& rho);

/// Entropy of the mixture sum_x p_x |phi_x><phi_x| computed from the Gram
/// matrix G[x][x'] = sqrt(p_x p_x') <phi_x | phi_x'>.
double gram_entropy(const ComplexMatrix& gram);

/// H2 of the same mixture: -lg sum_{x,x'} |G[x][x']|^2.
double gram_renyi2_entropy(const ComplexMatrix& gram);

}  // namespace qicost
