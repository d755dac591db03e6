#pragma once
#include <cstdint>
#include <random>
#include <string_view>

namespace ptf {

// All randomness in the library flows through this wrapper so every sampled
// quantity is reproducible from a seed. The engine is mt19937_64 (fully
// specified by the standard); uniforms and normals are derived by explicit
// arithmetic rather than std distributions, whose output is
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in (0, 1], 53-bit resolution.
  double uniform01() {
    return (double)((eng_() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the spare value is cached.
  double normal();

  int pm1() { return (eng_() & 1) ? 1 : -1; }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Derives an independent stream from a master seed, a label, and an index.
// Used to decorrelate per-check and per-item sampling deterministically.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t index = 0);

}  // namespace ptf
