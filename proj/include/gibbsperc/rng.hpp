#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace gibbsperc {

/// Counter-based random stream (Philox4x32-10). The pair (seed, stream)
/// identifies the sequence; the draw counter is the only mutable state, so
/// copying a stream replays it and distinct stream ids never overlap.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1), 53 bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double exponential(double rate);
  std::uint64_t poisson(double mean);
  /// Index in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Independent child stream keyed by `child`; does not advance this stream.
  RngStream split(std::uint64_t child) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// SplitMix64 finaliser, used for deriving stream ids.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t stream_id(std::uint64_t a, std::uint64_t b, std::uint64_t c);

}  // namespace gibbsperc
