#include "qicost/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qicost/config.hpp"
#include "qicost/error.hpp"

namespace qicost {

namespace {

// Cyclic Jacobi on a dense Hermitian block, eigenvalues only.
void jacobi_eigenvalues(std::vector<cplx>& m, std::size_t n,
                        std::vector<double>& out) {
  auto a = [&](std::size_t i, std::size_t j) -> cplx& { return m[i * n + j]; };
  const int max_sweeps = 60;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  if (scale == 0.0) scale = 1.0;
  const double stop = 1e-15 * scale;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= stop) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double g = std::abs(apq);
        if (g <= stop) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const cplx phase = apq / g;  // e^{i phi}
        // Rotation diagonalizing [[app, g], [g, aqq]].
        const double tau = (app - aqq) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Unitary on coordinates (p, q):
        //   U = [[c, -s], [s e^{-i phi}, c e^{-i phi}]] up to the phase
        //   absorbed below; update M <- U^dagger M U.
        const cplx ph = phase;
        for (std::size_t i = 0; i < n; ++i) {
          const cplx mip = a(i, p);
          const cplx miq = a(i, q);
          a(i, p) = c * mip + s * std::conj(ph) * miq;
          a(i, q) = -s * ph * mip + c * miq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const cplx mpj = a(p, j);
          const cplx mqj = a(q, j);
          a(p, j) = c * mpj + s * ph * mqj;
          a(q, j) = -s * std::conj(ph) * mpj + c * mqj;
        }
        a(p, q) = cplx(0.0, 0.0);
        a(q, p) = cplx(0.0, 0.0);
        a(p, p) = cplx(a(p, p).real(), 0.0);
        a(q, q) = cplx(a(q, q).real(), 0.0);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) out.push_back(a(i, i).real());
}

}  // namespace

Spectrum hermitian_eigenvalues(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw ContractError("hermitian_eigenvalues: matrix is not square");
  if (m.rows() > dim_cap())
    throw DimCapError("hermitian_eigenvalues: dimension " +
                      std::to_string(m.rows()) + " exceeds cap " +
                      std::to_string(dim_cap()));
  if (m.hermiticity_defect() > 1e-10)
    throw ContractError("hermitian_eigenvalues: input is not Hermitian");

  const std::size_t n = m.rows();
  Spectrum spec;
  spec.eigenvalues.reserve(n);
  if (n == 0) return spec;

  // Connected components of the off-diagonal pattern; entries below
  // 1e-15 * scale are treated as structural zeros (their contribution to
  // any eigenvalue is below the accuracy contract).
  const double tol = 1e-15 * std::max(1.0, m.max_abs());
  std::vector<std::size_t> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  std::vector<std::size_t> stack;
  std::vector<bool> seen(n, false);
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> block;
    stack.push_back(start);
    seen[start] = true;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      block.push_back(v);
      for (std::size_t j = 0; j < n; ++j) {
        if (!seen[j] && j != v && std::abs(m.at(v, j)) > tol) {
          seen[j] = true;
          stack.push_back(j);
        }
      }
    }
    blocks.push_back(std::move(block));
  }

  std::vector<cplx> sub;
  for (const auto& block : blocks) {
    const std::size_t b = block.size();
    if (b == 1) {
      spec.eigenvalues.push_back(m.at(block[0], block[0]).real());
      continue;
    }
    sub.assign(b * b, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < b; ++j) sub[i * b + j] = m.at(block[i], block[j]);
    jacobi_eigenvalues(sub, b, spec.eigenvalues);
  }

  std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end(),
            std::greater<double>());
  return spec;
}

std::vector<double> Spectrum::clipped_probabilities() const {
  std::vector<double> out;
  out.reserve(eigenvalues.size());
  double sum = 0.0;
  for (double v : eigenvalues) {
    if (v < -1e-8)
      throw PositivityError("eigenvalue " + std::to_string(v) +
                            " below positivity window");
    const double c = std::clamp(v, 0.0, 1.0);
    out.push_back(c);
    sum += c;
  }
  if (std::abs(sum - 1.0) > 1e-8)
    throw NormalizationError("clipped spectrum sums to " + std::to_string(sum));
  return out;
}

}  // namespace qicost
