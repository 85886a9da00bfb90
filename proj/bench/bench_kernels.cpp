// Times the serial reference kernels against the OpenMP ones on the shapes
// the simulator actually hits (reduced-state grams, round applications,
// state permutations), then one end-to-end trace.

#include <chrono>
#include <cstdio>
#include <vector>

#include "qicost/experiments.hpp"
#include "qicost/info_costs.hpp"
#include "qicost/kernels.hpp"
#include "qicost/rng.hpp"

using namespace qicost;

namespace {

double seconds(const std::function<void()>& fn, int reps) {
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
             .count() /
         reps;
}

std::vector<cplx> random_block(std::size_t n, Rng& rng) {
  std::vector<cplx> v(n);
  for (auto& a : v) a = cplx(rng.next_gaussian(), rng.next_gaussian());
  return v;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-28s %10.4f ms %10.4f ms   x%.2f\n", name, serial * 1e3,
              parallel * 1e3, parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main() {
  Rng rng(1);
  std::printf("%-28s %13s %13s   speedup\n", "kernel", "serial", "openmp");

  {
    const std::size_t m = 256, k = 256, n = 1024;
    const auto a = random_block(m * k, rng);
    const auto b = random_block(k * n, rng);
    std::vector<cplx> c(m * n);
    const double ts = seconds(
        [&] { kernels::serial::gemm(a.data(), b.data(), c.data(), m, k, n); },
        3);
    const double tp = seconds(
        [&] { kernels::par::gemm(a.data(), b.data(), c.data(), m, k, n); }, 3);
    row("gemm 256x256x1024", ts, tp);
  }
  {
    const std::size_t m = 512, n = 4096;
    const auto a = random_block(m * n, rng);
    std::vector<cplx> g(m * m);
    const double ts = seconds(
        [&] { kernels::serial::gram(a.data(), m, n, g.data()); }, 3);
    const double tp =
        seconds([&] { kernels::par::gram(a.data(), m, n, g.data()); }, 3);
    row("gram 512x4096", ts, tp);
  }
  {
    const std::vector<std::size_t> dims = {16, 16, 16, 16, 4};
    const std::vector<std::size_t> order = {4, 2, 0, 3, 1};
    const auto in = random_block(16 * 16 * 16 * 16 * 4, rng);
    std::vector<cplx> out(in.size());
    const double ts = seconds(
        [&] { kernels::serial::permute(in.data(), out.data(), dims, order); },
        5);
    const double tp = seconds(
        [&] { kernels::par::permute(in.data(), out.data(), dims, order); }, 5);
    row("permute 262144 amplitudes", ts, tp);
  }
  {
    const auto a = random_block(64 * 64, rng);
    const auto b = random_block(32 * 32, rng);
    std::vector<cplx> c(64 * 32 * 64 * 32);
    const double ts = seconds(
        [&] {
          kernels::serial::kron(a.data(), 64, 64, b.data(), 32, 32, c.data());
        },
        3);
    const double tp = seconds(
        [&] {
          kernels::par::kron(a.data(), 64, 64, b.data(), 32, 32, c.data());
        },
        3);
    row("kron 64x64 (x) 32x32", ts, tp);
  }

  // End to end: the inner-product cost check at n = 4 runs reshapes, grams
  // and the eigensolver through the dispatching layer.
  {
    const auto start = std::chrono::steady_clock::now();
    const BooleanFunctionTable f = inner_product_function(4);
    const std::vector<double> u(16, 1.0 / 16.0);
    const LowerBoundReport rep =
        qic_lower_bound_check(send_x_protocol(f), f, u, u);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("\ninner-product n=4 end to end: %.2f s (qic %.6f, bound "
                "%.6f)\n",
                secs, rep.qic, rep.bound);
  }
  return 0;
}
