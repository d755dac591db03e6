#include "ptf/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ptf::kernels {

namespace {

std::atomic<bool> g_parallel{true};

// Below this size the fork/join overhead dominates; stay serial.
constexpr std::size_t kParallelThreshold = std::size_t{1} << 14;

bool go_parallel(std::size_t size) {
#ifdef _OPENMP
  return g_parallel.load(std::memory_order_relaxed) &&
         size >= kParallelThreshold;
#else
  (void)size;
  return false;
#endif
}

#ifdef _OPENMP
int thread_count(std::size_t size) {
  int hw = omp_get_max_threads();
  std::size_t chunks = size / (kParallelThreshold / 4);
  return std::max(1, (int)std::min<std::size_t>(hw, chunks ? chunks : 1));
}
#endif

// Deterministic chunked reduction: per-thread partials combined in thread
// order.
template <class Fn>
double chunked_sum(const double* v, std::size_t size, Fn fn) {
#ifdef _OPENMP
  int nt = thread_count(size);
  std::vector<double> partial(nt, 0.0);
  std::size_t chunk = (size + nt - 1) / nt;
#pragma omp parallel num_threads(nt)
  {
    int t = omp_get_thread_num();
    std::size_t lo = (std::size_t)t * chunk;
    std::size_t hi = std::min(size, lo + chunk);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += fn(v[i]);
    partial[t] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
#else
  double s = 0.0;
  for (std::size_t i = 0; i < size; ++i) s += fn(v[i]);
  return s;
#endif
}

template <class Fn>
std::size_t counted_omp(const double* v, std::size_t size, Fn fn) {
#ifdef _OPENMP
  std::int64_t cnt = 0;
#pragma omp parallel for schedule(static) reduction(+ : cnt)
  for (std::int64_t i = 0; i < (std::int64_t)size; ++i) cnt += fn(v[i]) ? 1 : 0;
  return (std::size_t)cnt;
#else
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < size; ++i) cnt += fn(v[i]) ? 1 : 0;
  return cnt;
#endif
}

}  // namespace

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

void fwht_seq(double* v, std::size_t size) {
  for (std::size_t h = 1; h < size; h <<= 1) {
    for (std::size_t base = 0; base < size; base += 2 * h) {
      for (std::size_t i = base; i < base + h; ++i) {
        double a = v[i];
        double b = v[i + h];
        v[i] = a + b;
        v[i + h] = a - b;
      }
    }
  }
}

void fwht_omp(double* v, std::size_t size) {
#ifdef _OPENMP
  for (std::size_t h = 1; h < size; h <<= 1) {
    std::int64_t step = (std::int64_t)(2 * h);
#pragma omp parallel for schedule(static)
    for (std::int64_t base = 0; base < (std::int64_t)size; base += step) {
      for (std::int64_t i = base; i < base + (std::int64_t)h; ++i) {
        double a = v[i];
        double b = v[i + h];
        v[i] = a + b;
        v[i + h] = a - b;
      }
    }
  }
#else
  fwht_seq(v, size);
#endif
}

void fwht(double* v, std::size_t size) {
  if (go_parallel(size)) {
    fwht_omp(v, size);
  } else {
    fwht_seq(v, size);
  }
}

void fwht(std::span<double> v) { fwht(v.data(), v.size()); }

void fwht_i64_seq(std::int64_t* v, std::size_t size) {
  for (std::size_t h = 1; h < size; h <<= 1) {
    for (std::size_t base = 0; base < size; base += 2 * h) {
      for (std::size_t i = base; i < base + h; ++i) {
        std::int64_t a = v[i];
        std::int64_t b = v[i + h];
        v[i] = a + b;
        v[i + h] = a - b;
      }
    }
  }
}

void fwht_i64_omp(std::int64_t* v, std::size_t size) {
#ifdef _OPENMP
  for (std::size_t h = 1; h < size; h <<= 1) {
    std::int64_t step = (std::int64_t)(2 * h);
#pragma omp parallel for schedule(static)
    for (std::int64_t base = 0; base < (std::int64_t)size; base += step) {
      for (std::int64_t i = base; i < base + (std::int64_t)h; ++i) {
        std::int64_t a = v[i];
        std::int64_t b = v[i + h];
        v[i] = a + b;
        v[i + h] = a - b;
      }
    }
  }
#else
  fwht_i64_seq(v, size);
#endif
}

void fwht_i64(std::int64_t* v, std::size_t size) {
  if (go_parallel(size)) {
    fwht_i64_omp(v, size);
  } else {
    fwht_i64_seq(v, size);
  }
}

double sum_pow4_seq(const double* v, std::size_t size) {
  double s = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    double x = v[i] * v[i];
    s += x * x;
  }
  return s;
}

double sum_pow4_omp(const double* v, std::size_t size) {
  return chunked_sum(v, size, [](double x) {
    double y = x * x;
    return y * y;
  });
}

double sum_pow4(const double* v, std::size_t size) {
  return go_parallel(size) ? sum_pow4_omp(v, size) : sum_pow4_seq(v, size);
}

std::size_t count_sign_diff_seq(const std::int8_t* a, const std::int8_t* b,
                                std::size_t size) {
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < size; ++i) cnt += a[i] != b[i];
  return cnt;
}

std::size_t count_sign_diff_omp(const std::int8_t* a, const std::int8_t* b,
                                std::size_t size) {
#ifdef _OPENMP
  std::int64_t cnt = 0;
#pragma omp parallel for schedule(static) reduction(+ : cnt)
  for (std::int64_t i = 0; i < (std::int64_t)size; ++i) cnt += a[i] != b[i];
  return (std::size_t)cnt;
#else
  return count_sign_diff_seq(a, b, size);
#endif
}

std::size_t count_sign_diff(const std::int8_t* a, const std::int8_t* b,
                            std::size_t size) {
  return go_parallel(size) ? count_sign_diff_omp(a, b, size)
                           : count_sign_diff_seq(a, b, size);
}

std::size_t count_negative_seq(const double* v, std::size_t size,
                               std::size_t* zero_hits) {
  std::size_t neg = 0;
  std::size_t zero = 0;
  for (std::size_t i = 0; i < size; ++i) {
    if (v[i] < 0.0) ++neg;
    if (v[i] == 0.0) ++zero;
  }
  if (zero_hits) *zero_hits = zero;
  return neg;
}

std::size_t count_negative_omp(const double* v, std::size_t size,
                               std::size_t* zero_hits) {
#ifdef _OPENMP
  std::int64_t neg = 0;
  std::int64_t zero = 0;
#pragma omp parallel for schedule(static) reduction(+ : neg, zero)
  for (std::int64_t i = 0; i < (std::int64_t)size; ++i) {
    if (v[i] < 0.0) ++neg;
    if (v[i] == 0.0) ++zero;
  }
  if (zero_hits) *zero_hits = (std::size_t)zero;
  return (std::size_t)neg;
#else
  return count_negative_seq(v, size, zero_hits);
#endif
}

std::size_t count_negative(const double* v, std::size_t size,
                           std::size_t* zero_hits) {
  return go_parallel(size) ? count_negative_omp(v, size, zero_hits)
                           : count_negative_seq(v, size, zero_hits);
}

std::size_t count_abs_ge_seq(const double* v, std::size_t size, double t) {
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < size; ++i) cnt += std::abs(v[i]) >= t;
  return cnt;
}

std::size_t count_abs_ge_omp(const double* v, std::size_t size, double t) {
  return counted_omp(v, size, [t](double x) { return std::abs(x) >= t; });
}

std::size_t count_abs_ge(const double* v, std::size_t size, double t) {
  return go_parallel(size) ? count_abs_ge_omp(v, size, t)
                           : count_abs_ge_seq(v, size, t);
}

std::size_t count_abs_le_seq(const double* v, std::size_t size, double t) {
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < size; ++i) cnt += std::abs(v[i]) <= t;
  return cnt;
}

std::size_t count_abs_le_omp(const double* v, std::size_t size, double t) {
  return counted_omp(v, size, [t](double x) { return std::abs(x) <= t; });
}

std::size_t count_abs_le(const double* v, std::size_t size, double t) {
  return go_parallel(size) ? count_abs_le_omp(v, size, t)
                           : count_abs_le_seq(v, size, t);
}

std::size_t count_gt_seq(const double* v, std::size_t size, double t) {
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < size; ++i) cnt += v[i] > t;
  return cnt;
}

std::size_t count_gt_omp(const double* v, std::size_t size, double t) {
  return counted_omp(v, size, [t](double x) { return x > t; });
}

std::size_t count_gt(const double* v, std::size_t size, double t) {
  return go_parallel(size) ? count_gt_omp(v, size, t)
                           : count_gt_seq(v, size, t);
}

}  // namespace ptf::kernels
