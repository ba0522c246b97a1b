#pragma once

#include <cstdint>

namespace epsdyad {

/// 64-bit linear congruential generator returning the top 32 state bits.
///
///   state <- state * 6364136223846793005 + 1442695040888963407  (mod 2^64)
///
/// The seed is the initial state. Kept explicit so banks can be regenerated
/// bit-for-bit in any language.
class Lcg {
public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}

  std::uint32_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<std::uint32_t>(state_ >> 32);
  }

  /// Uniform on [0, 1) with 32-bit resolution.
  double uniform() { return static_cast<double>(next()) * 0x1p-32; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer in [0, n) by multiply-shift; n must be at most 2^32.
  std::uint64_t below(std::uint64_t n) { return (static_cast<std::uint64_t>(next()) * n) >> 32; }

  std::uint64_t state() const { return state_; }

private:
  std::uint64_t state_;
};

}  // namespace epsdyad
