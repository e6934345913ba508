#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace referee {

inline constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t state = kFnvOffsetBasis) {
  for (unsigned char c : bytes) {
    state ^= static_cast<std::uint64_t>(c);
    state *= kFnvPrime;
  }
  return state;
}

inline std::string hex64(std::uint64_t value) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic RNG used wherever the contracts call for seeded randomness.
// Not std::mt19937 + distributions: those are free to differ across standard
// library implementations, and every draw here must be bit-reproducible.
class SplitMixRng {
 public:
  explicit SplitMixRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0,1) with 53 bits of mantissa
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform integer in [0,n); n must be > 0
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// Combines a seed with string components (separator-framed so that
// ("ab","c") and ("a","bc") key different streams).
inline std::uint64_t keyed_hash(std::uint64_t seed,
                                std::initializer_list<std::string_view> parts) {
  std::uint64_t h = kFnvOffsetBasis;
  for (int i = 0; i < 8; ++i) {
    h ^= (seed >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
  for (std::string_view part : parts) {
    h = fnv1a64(part, h);
    h ^= 0x1f;  // frame separator
    h *= kFnvPrime;
  }
  return h;
}

inline SplitMixRng keyed_rng(std::uint64_t seed,
                             std::initializer_list<std::string_view> parts) {
  return SplitMixRng(keyed_hash(seed, parts));
}

}  // namespace referee
