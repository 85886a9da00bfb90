#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qicost/kernels.hpp"

namespace qicost {

/// Dense row-major complex matrix. All numeric state in the library lives
/// in these (isometries, density operators) or in raw amplitude vectors.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& at(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }

  ComplexMatrix adjoint() const;
  cplx trace() const;
  double max_abs() const;

  /// max-entry |M - M^dagger|.
  double hermiticity_defect() const;
  bool is_hermitian(double tol = 1e-10) const {
    return rows_ == cols_ && hermiticity_defect() <= tol;
  }

  ComplexMatrix operator*(const ComplexMatrix& rhs) const;
  ComplexMatrix operator+(const ComplexMatrix& rhs) const;
  ComplexMatrix operator-(const ComplexMatrix& rhs) const;
  ComplexMatrix operator*(cplx scalar) const;

  bool operator==(const ComplexMatrix& rhs) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Kronecker product. Errors with DimCapError if either result dimension
/// would exceed dim_cap().
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// max-entry |A - B|; matrices must have equal shape.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qicost
