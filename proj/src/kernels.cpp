#include "qicost/kernels.hpp"

#include <cstring>

namespace qicost::kernels {

namespace {

// Work threshold below which the serial path is used even when OpenMP is
// compiled in; tiny problems lose more to thread startup than they gain.
constexpr std::size_t kParThreshold = 1u << 15;

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

}  // namespace

namespace serial {

void gemm(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
          std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    cplx* ci = c + i * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] = cplx(0.0, 0.0);
    for (std::size_t t = 0; t < k; ++t) {
      const cplx av = a[i * k + t];
      if (av == cplx(0.0, 0.0)) continue;
      const cplx* bt = b + t * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += av * bt[j];
    }
  }
}

void gram(const cplx* a, std::size_t m, std::size_t n, cplx* g) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const cplx* ai = a + i * n;
      const cplx* aj = a + j * n;
      cplx acc(0.0, 0.0);
      for (std::size_t t = 0; t < n; ++t) acc += ai[t] * std::conj(aj[t]);
      g[i * m + j] = acc;
      g[j * m + i] = std::conj(acc);
    }
  }
}

void kron(const cplx* a, std::size_t ar, std::size_t ac, const cplx* b,
          std::size_t br, std::size_t bc, cplx* c) {
  const std::size_t cc = ac * bc;
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t k = 0; k < br; ++k) {
      cplx* row = c + (i * br + k) * cc;
      for (std::size_t j = 0; j < ac; ++j) {
        const cplx av = a[i * ac + j];
        for (std::size_t l = 0; l < bc; ++l) row[j * bc + l] = av * b[k * bc + l];
      }
    }
}

void permute(const cplx* in, cplx* out, const std::vector<std::size_t>& dims,
             const std::vector<std::size_t>& order) {
  const std::size_t r = dims.size();
  std::vector<std::size_t> old_strides = strides_of(dims);
  std::vector<std::size_t> new_dims(r);
  for (std::size_t j = 0; j < r; ++j) new_dims[j] = dims[order[j]];
  std::vector<std::size_t> new_strides = strides_of(new_dims);
  // For each old factor k, the stride of its slot in the output.
  std::vector<std::size_t> out_stride(r);
  for (std::size_t j = 0; j < r; ++j) out_stride[order[j]] = new_strides[j];
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t oi = 0;
    for (std::size_t k = 0; k < r; ++k)
      oi += ((i / old_strides[k]) % dims[k]) * out_stride[k];
    out[oi] = in[i];
  }
}

void prob_accumulate(const cplx* in, std::size_t group, std::size_t rest,
                     double* out) {
  for (std::size_t g = 0; g < group; ++g) {
    double acc = 0.0;
    const cplx* row = in + g * rest;
    for (std::size_t t = 0; t < rest; ++t) acc += std::norm(row[t]);
    out[g] += acc;
  }
}

}  // namespace serial

namespace par {

void gemm(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
          std::size_t n) {
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < m; ++i) {
    cplx* ci = c + i * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] = cplx(0.0, 0.0);
    for (std::size_t t = 0; t < k; ++t) {
      const cplx av = a[i * k + t];
      if (av == cplx(0.0, 0.0)) continue;
      const cplx* bt = b + t * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += av * bt[j];
    }
  }
}

void gram(const cplx* a, std::size_t m, std::size_t n, cplx* g) {
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const cplx* ai = a + i * n;
      const cplx* aj = a + j * n;
      cplx acc(0.0, 0.0);
      for (std::size_t t = 0; t < n; ++t) acc += ai[t] * std::conj(aj[t]);
      g[i * m + j] = acc;
      g[j * m + i] = std::conj(acc);
    }
  }
}

void kron(const cplx* a, std::size_t ar, std::size_t ac, const cplx* b,
          std::size_t br, std::size_t bc, cplx* c) {
  const std::size_t cc = ac * bc;
#pragma omp parallel for collapse(2) schedule(static)
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t k = 0; k < br; ++k) {
      cplx* row = c + (i * br + k) * cc;
      for (std::size_t j = 0; j < ac; ++j) {
        const cplx av = a[i * ac + j];
        for (std::size_t l = 0; l < bc; ++l) row[j * bc + l] = av * b[k * bc + l];
      }
    }
}

void permute(const cplx* in, cplx* out, const std::vector<std::size_t>& dims,
             const std::vector<std::size_t>& order) {
  const std::size_t r = dims.size();
  std::vector<std::size_t> old_strides = strides_of(dims);
  std::vector<std::size_t> new_dims(r);
  for (std::size_t j = 0; j < r; ++j) new_dims[j] = dims[order[j]];
  std::vector<std::size_t> new_strides = strides_of(new_dims);
  std::vector<std::size_t> out_stride(r);
  for (std::size_t j = 0; j < r; ++j) out_stride[order[j]] = new_strides[j];
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t oi = 0;
    for (std::size_t k = 0; k < r; ++k)
      oi += ((i / old_strides[k]) % dims[k]) * out_stride[k];
    out[oi] = in[i];
  }
}

void prob_accumulate(const cplx* in, std::size_t group, std::size_t rest,
                     double* out) {
#pragma omp parallel for schedule(static)
  for (std::size_t g = 0; g < group; ++g) {
    double acc = 0.0;
    const cplx* row = in + g * rest;
    for (std::size_t t = 0; t < rest; ++t) acc += std::norm(row[t]);
    out[g] += acc;
  }
}

}  // namespace par

#ifdef QICOST_HAS_OPENMP
#define QICOST_DISPATCH(work, call_par, call_serial) \
  do {                                               \
    if ((work) >= kParThreshold) {                   \
      call_par;                                      \
    } else {                                         \
      call_serial;                                   \
    }                                                \
  } while (0)
#else
#define QICOST_DISPATCH(work, call_par, call_serial) \
  do {                                               \
    call_serial;                                     \
  } while (0)
#endif

void gemm(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
          std::size_t n) {
  QICOST_DISPATCH(m * k * n, par::gemm(a, b, c, m, k, n),
                  serial::gemm(a, b, c, m, k, n));
}

void gram(const cplx* a, std::size_t m, std::size_t n, cplx* g) {
  QICOST_DISPATCH(m * m * n, par::gram(a, m, n, g), serial::gram(a, m, n, g));
}

void kron(const cplx* a, std::size_t ar, std::size_t ac, const cplx* b,
          std::size_t br, std::size_t bc, cplx* c) {
  QICOST_DISPATCH(ar * ac * br * bc, par::kron(a, ar, ac, b, br, bc, c),
                  serial::kron(a, ar, ac, b, br, bc, c));
}

void permute(const cplx* in, cplx* out, const std::vector<std::size_t>& dims,
             const std::vector<std::size_t>& order) {
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  QICOST_DISPATCH(total * dims.size(), par::permute(in, out, dims, order),
                  serial::permute(in, out, dims, order));
}

void prob_accumulate(const cplx* in, std::size_t group, std::size_t rest,
                     double* out) {
  QICOST_DISPATCH(group * rest, par::prob_accumulate(in, group, rest, out),
                  serial::prob_accumulate(in, group, rest, out));
}

#undef QICOST_DISPATCH

}  // namespace qicost::kernels
