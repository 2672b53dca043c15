#pragma once

#include <cstdint>
#include <random>

#include "rackkex/bytes.hpp"

namespace rackkex {

/// Explicitly seeded generator. All randomness in the toolkit flows through
/// one of these; there is no ambient RNG, so transcripts are reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  /// Uniform draw from {0, ..., n-1}. Rejection sampling keeps the stream
  /// identical across standard library implementations.
  std::uint32_t below(std::uint32_t n) {
    if (n == 0) throw Error("Rng::below(0)");
    std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return static_cast<std::uint32_t>(v % n);
  }

  bool coin() { return (eng_() & 1) != 0; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace rackkex
