// Times the serial reference kernels against their OpenMP variants on a
// few table sizes and prints a speedup table. Not a test; run it by hand:
//
//   ./build/bench/bench_kernels [max_log2]
//
// Sizes sweep 2^14 (the dispatch threshold) up to 2^max_log2, default 22.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

#include "ptf/kernels.hpp"
#include "ptf/rng.hpp"

using namespace ptf;

namespace {

double time_best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int max_log2 = argc > 1 ? std::atoi(argv[1]) : 22;
  if (max_log2 < 14 || max_log2 > 28) {
    std::fprintf(stderr, "max_log2 must be in [14, 28]\n");
    return 2;
  }

  std::printf("%-16s %10s %12s %12s %8s\n", "kernel", "size", "seq (ms)",
              "omp (ms)", "speedup");

  Rng rng(20240815);
  for (int k = 14; k <= max_log2; k += 4) {
    std::size_t size = std::size_t{1} << k;
    std::vector<double> base(size);
    for (double& v : base) v = rng.pm1();

    // fwht mutates in place, so give each rep a fresh copy and subtract
    // nothing: the copy cost is identical for both variants.
    std::vector<double> scratch(size);
    double t_seq = time_best_of(5, [&] {
      scratch = base;
      kernels::fwht_seq(scratch.data(), size);
    });
    double t_omp = time_best_of(5, [&] {
      scratch = base;
      kernels::fwht_omp(scratch.data(), size);
    });
    std::printf("%-16s %10zu %12.3f %12.3f %7.2fx\n", "fwht", size,
                1e3 * t_seq, 1e3 * t_omp, t_seq / t_omp);

    volatile double sink = 0.0;
    t_seq = time_best_of(5,
                         [&] { sink = kernels::sum_pow4_seq(base.data(), size); });
    t_omp = time_best_of(5,
                         [&] { sink = kernels::sum_pow4_omp(base.data(), size); });
    std::printf("%-16s %10zu %12.3f %12.3f %7.2fx\n", "sum_pow4", size,
                1e3 * t_seq, 1e3 * t_omp, t_seq / t_omp);
    (void)sink;

    std::vector<std::int8_t> sa(size), sb(size);
    for (std::size_t i = 0; i < size; ++i) {
      sa[i] = rng.pm1() > 0 ? 1 : -1;
      sb[i] = rng.pm1() > 0 ? 1 : -1;
    }
    volatile std::size_t csink = 0;
    t_seq = time_best_of(5, [&] {
      csink = kernels::count_sign_diff_seq(sa.data(), sb.data(), size);
    });
    t_omp = time_best_of(5, [&] {
      csink = kernels::count_sign_diff_omp(sa.data(), sb.data(), size);
    });
    std::printf("%-16s %10zu %12.3f %12.3f %7.2fx\n", "count_sign_diff",
                size, 1e3 * t_seq, 1e3 * t_omp, t_seq / t_omp);
    (void)csink;
  }
  return 0;
}
