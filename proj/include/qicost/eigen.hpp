#pragma once

#include <vector>

#include "qicost/complex_matrix.hpp"

namespace qicost {

/// Real eigenvalues sorted descending. For density-operator input these are
/// probabilities: validate() enforces the clipping window [-1e-8, 0) -> 0
/// and checks the clipped sum against 1.
struct Spectrum {
  std::vector<double> eigenvalues;

  /// Clip to [0, 1] per the density-operator contract; throws
  /// PositivityError below -1e-8 and NormalizationError if the clipped sum
  /// strays from 1 by more than 1e-8.
  std::vector<double> clipped_probabilities() const;
};

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi. The matrix is first
/// split into connected blocks of its nonzero off-diagonal pattern, so
/// diagonal and block-sparse inputs (the common case for reduced states of
/// protocols on classical data) cost next to nothing.
/// Throws ContractError if the input is not Hermitian to 1e-10 or larger
/// than the dimension cap.
Spectrum hermitian_eigenvalues(const ComplexMatrix& m);

}  // namespace qicost
