#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bavne {

// splitmix64 step; used for seed mixing and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ splitmix64(tag));
}

// Deterministic random stream. All draws go through hand-rolled
// transformations of mt19937_64 output, so a (seed, call sequence) pair
// yields the same values on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : base_(seed), gen_(splitmix64(seed)) {}

  // Independent stream keyed by tag; does not advance this stream.
  Rng derive(std::uint64_t tag) const { return Rng(mix_seed(base_, tag)); }
  Rng derive(std::uint64_t tag_a, std::uint64_t tag_b) const {
    return Rng(mix_seed(mix_seed(base_, tag_a), tag_b));
  }

  std::uint64_t seed() const { return base_; }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  // Uniform on [lo, hi) quantized to a 2^-20 grid. With integer-valued
  // bounds the result is a dyadic rational that double arithmetic handles
  // exactly, which the resource ledger relies on.
  double uniform_grid(double lo, double hi) {
    static constexpr double kGrid = 1048576.0;  // 2^20
    double steps = std::floor(uniform01() * (hi - lo) * kGrid);
    return lo + steps / kGrid;
  }

  // uniform integer in [lo, hi], inclusive
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform01() * (static_cast<double>(hi - lo) + 1.0));
  }

  // index in [0, n)
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform01() * static_cast<double>(n));
  }

  double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

  bool coin(double p) { return uniform01() < p; }

 private:
  std::uint64_t base_;
  std::mt19937_64 gen_;
};

}  // namespace bavne
