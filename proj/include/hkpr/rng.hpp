#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace hkpr {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Small counter-style generator (SplitMix64). Satisfies
/// UniformRandomBitGenerator, so it plugs into <random> if needed.
class SplitMix64 {
public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64(std::uint64_t state = 0) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

private:
  std::uint64_t state_;
};

/// Derives a child seed from a parent seed and a sequence of tags. Distinct
/// tag sequences give statistically independent streams.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
  for (std::uint64_t tag : tags) h = mix64(h ^ mix64(tag + 0x9e3779b97f4a7c15ULL));
  return h;
}

/// Independent generator for iteration `index` of a run keyed by `seed`.
/// Output of a run built from substreams does not depend on how the
/// iterations are scheduled across threads.
constexpr SplitMix64 substream(std::uint64_t seed, std::uint64_t index) noexcept {
  return SplitMix64(derive_seed(seed, {index}));
}

/// Uniform double in [0, 1) with 53 random bits.
template <typename Gen>
double uniform01(Gen& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) without modulo bias (Lemire's method).
template <typename Gen>
std::uint64_t uniform_below(Gen& gen, std::uint64_t bound) {
  __extension__ using u128 = unsigned __int128;
  std::uint64_t x = gen();
  u128 m = static_cast<u128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = gen();
      m = static_cast<u128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

} // namespace hkpr
