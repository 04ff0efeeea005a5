#ifndef FUZZSTOCH_RNG_HPP
#define FUZZSTOCH_RNG_HPP

#include <cstdint>

namespace fuzzstoch {

// Counter-based randomness: every draw is a pure function of
// (seed, stream, counter), so results do not depend on thread count or
// evaluation order. Streams are cheap to split per sample / per disk.

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// 64-bit hash of a (seed, stream, counter) triple.
inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
  std::uint64_t h = detail::mix64(seed);
  h = detail::mix64(h ^ detail::mix64(stream));
  return detail::mix64(h ^ counter);
}

/// Uniform double in the open interval (0,1).
inline double uniform_open(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t counter) {
  const std::uint64_t bits = counter_hash(seed, stream, counter) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

/// Inverse of the standard normal CDF (Wichura's AS 241, double precision).
double norm_quantile(double p);

/// Standard normal draw for (seed, stream, counter).
inline double normal_draw(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t counter) {
  return norm_quantile(uniform_open(seed, stream, counter));
}

/// Sequential view over one stream; draws advance an internal counter.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  double uniform() { return uniform_open(seed_, stream_, counter_++); }
  double normal() { return norm_quantile(uniform()); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) %
           n;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace fuzzstoch

#endif  // FUZZSTOCH_RNG_HPP
