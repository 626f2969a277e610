#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A stream is a
// (key, counter prefix) pair, so independent draws can be addressed by sample
// index without any shared state.

#include <array>
#include <cstdint>
#include <limits>

namespace ndsid {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

/// 32-bit engine over one stream: key = seed, counter = (block, a, b).
/// Satisfies UniformRandomBitGenerator.
class PhiloxStream {
 public:
  using result_type = std::uint32_t;

  PhiloxStream(std::uint64_t seed, std::uint32_t a, std::uint32_t b);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// 53-bit uniform in [0, 1).
  double uniform01();
  /// Uniform on the open interval (lo, hi).
  double uniform_open(double lo, double hi);

 private:
  PhiloxKey key_;
  std::uint32_t a_, b_;
  std::uint64_t block_ = 0;
  PhiloxCounter buf_{};
  int used_ = 4;
};

}  // namespace ndsid
