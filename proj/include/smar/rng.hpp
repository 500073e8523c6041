#pragma once

#include <cstdint>
#include <limits>

namespace smar {

/// Counter-based generator built on the SplitMix64 finalizer.
///
/// Output n of a stream with key k is mix64(k + (n + 1) * golden), so any
/// draw is a pure function of (key, counter). `split(i)` derives the key of
/// an independent child stream, which is how Monte Carlo replications get
/// reproducible seeds regardless of how they are scheduled on workers.
///
/// Satisfies std::uniform_random_bit_generator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed = 0) noexcept : key_(mix64(seed ^ kSeedSalt)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
  }

  /// Child stream `index`; does not advance this stream.
  CounterRng split(std::uint64_t index) const noexcept {
    CounterRng child;
    child.key_ = mix64(key_ ^ mix64((index + 1) * kSplitGolden));
    return child;
  }

  /// Uniform double in the open interval (0, 1).
  double uniform_open() noexcept {
    // 53 random bits, shifted half a step away from zero.
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  static constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kSplitGolden = 0xd1b54a32d192ed03ULL;
  static constexpr std::uint64_t kSeedSalt = 0x5851f42d4c957f2dULL;

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace smar
