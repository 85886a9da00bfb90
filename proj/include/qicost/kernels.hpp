#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qicost {

using cplx = std::complex<double>;

/// Dense complex kernels behind the state and matrix operations. Every
/// kernel has a plain serial implementation (the reference) and an
/// OpenMP-parallel one; the unqualified entry points dispatch between them
/// based on problem size and compile-time OpenMP availability.
namespace kernels {

namespace serial {

/// C = A * B with A (m x k), B (k x n), row-major.
void gemm(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
          std::size_t n);

/// G = A * A^dagger with A (m x n); G is m x m Hermitian.
void gram(const cplx* a, std::size_t m, std::size_t n, cplx* g);

/// Kronecker product, C = A (x) B.
void kron(const cplx* a, std::size_t ar, std::size_t ac, const cplx* b,
          std::size_t br, std::size_t bc, cplx* c);

/// Reindex amplitudes of a tensor with factor dimensions `dims` so that the
/// factors appear in order `order` (order[j] = old position of new factor j).
void permute(const cplx* in, cplx* out, const std::vector<std::size_t>& dims,
             const std::vector<std::size_t>& order);

/// Accumulate |amp|^2 of `in` grouped by the index of the front block:
/// in is viewed as (group x rest), out[g] += sum_r |in[g*rest + r]|^2.
void prob_accumulate(const cplx* in, std::size_t group, std::size_t rest,
                     double* out);

}  // namespace serial

namespace par {

void gemm(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
          std::size_t n);
void gram(const cplx* a, std::size_t m, std::size_t n, cplx* g);
void kron(const cplx* a, std::size_t ar, std::size_t ac, const cplx* b,
          std::size_t br, std::size_t bc, cplx* c);
void permute(const cplx* in, cplx* out, const std::vector<std::size_t>& dims,
             const std::vector<std::size_t>& order);
void prob_accumulate(const cplx* in, std::size_t group, std::size_t rest,
                     double* out);

}  // namespace par

void gemm(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
          std::size_t n);
void gram(const cplx* a, std::size_t m, std::size_t n, cplx* g);
void kron(const cplx* a, std::size_t ar, std::size_t ac, const cplx* b,
          std::size_t br, std::size_t bc, cplx* c);
void permute(const cplx* in, cplx* out, const std::vector<std::size_t>& dims,
             const std::vector<std::size_t>& order);
void prob_accumulate(const cplx* in, std::size_t group, std::size_t rest,
                     double* out);

}  // namespace kernels
}  // namespace qicost
