#pragma once

#include <bit>
#include <cstdint>

namespace pclda {

namespace detail {

// SplitMix64 finalizer (Stafford mix13 variant).
inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t mix64_v13(uint64_t z) {
  z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
  z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
  return z ^ (z >> 33);
}

}  // namespace detail

/**
 * Splittable counter-based generator: state advances by a per-stream odd
 * increment and the output is an avalanche mix of the state (SplitMix64
 * with per-stream gamma). Identical (seed, stream_id) pairs reproduce the
 * same sequence; distinct stream ids give statistically independent
 * streams, so each (worker, document) job can own one.
 *
 * Streams are single-owner: never share one instance between threads.
 */
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}

  RngStream(uint64_t seed, uint64_t stream_id) {
    state_ = detail::mix64(seed ^ detail::mix64_v13(stream_id + 0x9e3779b97f4a7c15ULL));
    uint64_t g = detail::mix64_v13((stream_id ^ 0x6a09e667f3bcc909ULL) + detail::mix64(seed)) | 1ULL;
    // avoid gammas with too little bit alternation (Steele et al. fix)
    if (std::popcount(g ^ (g >> 1)) < 24) g ^= 0xaaaaaaaaaaaaaaaaULL;
    gamma_ = g;
  }

  uint64_t next_u64() {
    state_ += gamma_;
    return detail::mix64(state_);
  }

  // uniform on [0, 1), 53-bit resolution
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // unbiased uniform integer on [0, n), n >= 1 (Lemire rejection method)
  uint32_t next_below(uint32_t n) {
    uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<uint64_t>(m);
    if (lo < n) {
      const uint64_t threshold = (0 - static_cast<uint64_t>(n)) % n;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint32_t>(m >> 64);
  }

 private:
  uint64_t state_;
  uint64_t gamma_;
};

// Stream-id namespace tags; keeps every (purpose, sweep, index) triple on its
// own stream so results cannot depend on scheduling or worker count.
enum class StreamTag : uint64_t {
  init = 1,
  chain = 2,       // sequential collapsed chain / AD-LDA partition streams
  z_doc = 3,       // per-document z-phase streams
  phi_row = 4,     // per-topic Dirichlet rows
  theta = 5,       // diagnostic theta draws
  vs_indicator = 6,
  measurement = 7, // inefficiency-experiment Theta/Phi draws, shared by chains
  misc = 15,
};

inline uint64_t stream_id(StreamTag tag, uint64_t sweep, uint64_t index) {
  return (static_cast<uint64_t>(tag) << 56) | ((sweep & 0xffffffULL) << 32) |
         (index & 0xffffffffULL);
}

inline RngStream make_stream(uint64_t seed, StreamTag tag, uint64_t sweep, uint64_t index) {
  return {seed, stream_id(tag, sweep, index)};
}

}  // namespace pclda
