#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace imputeval {

// One splitmix64 step; good cheap mixer for seed material.
std::uint64_t splitmix64(std::uint64_t x);

// Stable 64-bit seed for a named sub-stream. FNV-1a over the key, mixed with
// the master seed through splitmix64. The key string is the canonical cell
// identity, so equal keys give equal streams on every platform.
std::uint64_t derive_seed(std::uint64_t master, std::string_view key);

// mt19937_64 with hand-rolled distributions. The standard mandates the engine
// bit-for-bit but not the distributions, and report bytes must not depend on
// the standard library in use.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; second deviate is cached.
  double normal();

  // Uniform integer in [0, n). n must be > 0.
  std::size_t below(std::size_t n);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace imputeval
