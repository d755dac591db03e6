#pragma once
#include <bit>
#include <cstdint>
#include <string>

namespace ptf {

// Sign with the convention sign(0) = +1, used everywhere a threshold
// function is evaluated.
inline int sign_pm(double v) { return v < 0.0 ? -1 : 1; }
inline int sign_pm_int(std::int64_t v) { return v < 0 ? -1 : 1; }

inline int popcount32(std::uint32_t x) { return std::popcount(x); }

// Extracts the bits of `value` selected by `mask` and packs them into the
// low bits of the result (software pext).
inline std::uint32_t compress_bits(std::uint32_t value, std::uint32_t mask) {
  std::uint32_t out = 0;
  int k = 0;
  while (mask) {
    std::uint32_t low = mask & (~mask + 1);
    if (value & low) out |= std::uint32_t{1} << k;
    ++k;
    mask &= mask - 1;
  }
  return out;
}

// Exact C(n, k) for the small n used here (n <= 30 keeps this well inside
// uint64).
inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (std::uint64_t)(n - k + i) / (std::uint64_t)i;
  }
  return r;
}

std::string u128_to_string(unsigned __int128 v);
std::string i128_to_string(__int128 v);

}  // namespace ptf
