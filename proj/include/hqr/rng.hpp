#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "hqr/errors.hpp"

namespace hqr {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Counter-based stream (Philox4x32-10). A stream is fully determined by
// (seed, stream id); draws depend only on the key and the block position, so
// independently derived streams can be consumed from different threads while
// the overall program stays bit-for-bit reproducible.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_(stream_id) {}

  // Independent stream derived from this stream's identity and a tag.
  // Children with distinct tags never share counter space.
  RngStream child(std::uint64_t tag) const {
    return RngStream(seed_, detail::splitmix64(stream_ ^ detail::splitmix64(tag)));
  }

  std::uint64_t next_u64() {
    if (pos_ >= 4) refill();
    std::uint64_t lo = buf_[pos_];
    std::uint64_t hi = buf_[pos_ + 1];
    pos_ += 2;
    return (hi << 32) | lo;
  }

  // Strictly inside (0,1): 52 random bits centered in each cell.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  // Unit-rate exponential.
  double exponential() { return -std::log(uniform01()); }

  // Frechet with shape kappa: F(z) = exp(-z^-kappa), z > 0.
  double frechet(double kappa) {
    if (kappa <= 0) throw domain_error("frechet shape must be positive");
    return std::pow(-std::log(uniform01()), -1.0 / kappa);
  }

  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // Uniform integer in [0, bound) by rejection-free scaling (bound << 2^64).
  std::uint64_t uniform_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(uniform01() * static_cast<double>(bound)) % bound;
  }

 private:
  static void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0,
                           std::uint32_t k1) {
    std::uint64_t p0 = 0xD2511F53ULL * c[0];
    std::uint64_t p1 = 0xCD9E8D57ULL * c[2];
    std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
  }

  void refill() {
    std::array<std::uint32_t, 4> c = {
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
    for (int round = 0; round < 10; ++round) {
      philox_round(c, k0, k1);
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    buf_ = c;
    pos_ = 0;
    ++block_;
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace hqr
