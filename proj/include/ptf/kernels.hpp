#pragma once
#include <cstddef>
#include <cstdint>
#include <span>

// Dense enumeration kernels over {-1,1}^n tables. Each kernel has a serial
// reference (*_seq) and an OpenMP variant (*_omp); the unsuffixed entry
// point dispatches on input size and the global parallel toggle. The _seq
// versions are the ground truth the tests compare against, and the
// benchmark target times both.
//
// Parallel float reductions combine fixed per-thread partial sums in thread
// order, so results are reproducible run to run for a fixed thread count.

namespace ptf::kernels {

bool parallel_enabled();
void set_parallel(bool on);

// In-place Walsh-Hadamard butterfly pass over a length-2^k array.
// Index convention: bit i of the array index set means x_{i+1} = -1, so
// transform(table)[S] = sum_b table[b] * (-1)^popcount(b & S).
void fwht_seq(double* v, std::size_t size);
void fwht_omp(double* v, std::size_t size);
void fwht(double* v, std::size_t size);
void fwht(std::span<double> v);

// Exact integer variant (used for sign tables of integer polynomials).
// Caller guarantees sum_b |v[b]| stays below 2^62 so butterflies cannot
// overflow.
void fwht_i64_seq(std::int64_t* v, std::size_t size);
void fwht_i64_omp(std::int64_t* v, std::size_t size);
void fwht_i64(std::int64_t* v, std::size_t size);

double sum_pow4_seq(const double* v, std::size_t size);
double sum_pow4_omp(const double* v, std::size_t size);
double sum_pow4(const double* v, std::size_t size);

std::size_t count_sign_diff_seq(const std::int8_t* a, const std::int8_t* b,
                                std::size_t size);
std::size_t count_sign_diff_omp(const std::int8_t* a, const std::int8_t* b,
                                std::size_t size);
std::size_t count_sign_diff(const std::int8_t* a, const std::int8_t* b,
                            std::size_t size);

// Counts v[i] < 0 and, via zero_hits, entries exactly 0 (which the sign
// convention sends to +1).
std::size_t count_negative_seq(const double* v, std::size_t size,
                               std::size_t* zero_hits);
std::size_t count_negative_omp(const double* v, std::size_t size,
                               std::size_t* zero_hits);
std::size_t count_negative(const double* v, std::size_t size,
                           std::size_t* zero_hits);

std::size_t count_abs_ge_seq(const double* v, std::size_t size, double t);
std::size_t count_abs_ge_omp(const double* v, std::size_t size, double t);
std::size_t count_abs_ge(const double* v, std::size_t size, double t);

std::size_t count_abs_le_seq(const double* v, std::size_t size, double t);
std::size_t count_abs_le_omp(const double* v, std::size_t size, double t);
std::size_t count_abs_le(const double* v, std::size_t size, double t);

std::size_t count_gt_seq(const double* v, std::size_t size, double t);
std::size_t count_gt_omp(const double* v, std::size_t size, double t);
std::size_t count_gt(const double* v, std::size_t size, double t);

}  // namespace ptf::kernels
