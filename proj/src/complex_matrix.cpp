#include "qicost/complex_matrix.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "qicost/config.hpp"
#include "qicost/error.hpp"

namespace qicost {

namespace {

std::size_t initial_dim_cap() {
  if (const char* env = std::getenv("QICOST_DIM_CAP")) {
    const long v = std::atol(env);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 4096;
}

std::size_t g_dim_cap = initial_dim_cap();
std::size_t g_atom_cap = 1000000;

}  // namespace

std::size_t dim_cap() { return g_dim_cap; }
void set_dim_cap(std::size_t cap) { g_dim_cap = cap; }
std::size_t atom_cap() { return g_atom_cap; }
void set_atom_cap(std::size_t cap) { g_atom_cap = cap; }

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_)
    throw ArgumentError("matrix entry count " + std::to_string(data_.size()) +
                        " does not match " + std::to_string(rows_) + "x" +
                        std::to_string(cols_));
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = cplx(1.0, 0.0);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      out.at(j, i) = std::conj(at(i, j));
  return out;
}

cplx ComplexMatrix::trace() const {
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) acc += at(i, i);
  return acc;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::hermiticity_defect() const {
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      m = std::max(m, std::abs(at(i, j) - std::conj(at(j, i))));
  return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
  if (cols_ != rhs.rows_)
    throw ArgumentError("matrix product shape mismatch");
  ComplexMatrix out(rows_, rhs.cols_);
  kernels::gemm(data_.data(), rhs.data_.data(), out.data_.data(), rows_,
                cols_, rhs.cols_);
  return out;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw ArgumentError("matrix sum shape mismatch");
  ComplexMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw ArgumentError("matrix difference shape mismatch");
  ComplexMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

ComplexMatrix ComplexMatrix::operator*(cplx scalar) const {
  ComplexMatrix out = *this;
  for (cplx& v : out.data_) v *= scalar;
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t rr = a.rows() * b.rows();
  const std::size_t rc = a.cols() * b.cols();
  if (rr > dim_cap() || rc > dim_cap())
    throw DimCapError("kron result " + std::to_string(rr) + "x" +
                      std::to_string(rc) + " exceeds dimension cap " +
                      std::to_string(dim_cap()));
  ComplexMatrix out(rr, rc);
  kernels::kron(a.data().data(), a.rows(), a.cols(), b.data().data(), b.rows(),
                b.cols(), out.data().data());
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ArgumentError("max_abs_diff shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace qicost
