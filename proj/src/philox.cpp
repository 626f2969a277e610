#include "ndsid/philox.hpp"

#include "ndsid/errors.hpp"

namespace ndsid {

namespace {
constexpr std::uint32_t kM0 = 0xD2511F53, kM1 = 0xCD9E8D57;
constexpr std::uint32_t kW0 = 0x9E3779B9, kW1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}
}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter c, PhiloxKey k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

PhiloxStream::PhiloxStream(std::uint64_t seed, std::uint32_t a, std::uint32_t b)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, a_(a), b_(b) {}

PhiloxStream::result_type PhiloxStream::operator()() {
  if (used_ == 4) {
    if (block_ > std::numeric_limits<std::uint32_t>::max()) throw InvalidParam("Philox stream exhausted");
    buf_ = philox4x32_10({static_cast<std::uint32_t>(block_), 0, a_, b_}, key_);
    ++block_;
    used_ = 0;
  }
  return buf_[used_++];
}

double PhiloxStream::uniform01() {
  const std::uint64_t hi = (*this)() >> 5, lo = (*this)() >> 6;
  return static_cast<double>(hi * 67108864ULL + lo) * 0x1.0p-53;
}

double PhiloxStream::uniform_open(double lo, double hi) {
  for (;;) {
    const double u = uniform01();
    if (u > 0) return lo + (hi - lo) * u;
  }
}

}  // namespace ndsid
