#pragma once

#include <cstdint>
#include <string_view>

namespace cyclesim {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Child key for an integer tag; children of distinct tags are independent streams.
constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t tag) {
  return mix64(key ^ mix64(kGamma * (tag + 1)));
}

constexpr std::uint64_t tag_of(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001B3ULL;
  return h;
}

constexpr std::uint64_t derive(std::uint64_t key, std::string_view purpose) {
  return derive(key, tag_of(purpose));
}

// Exact uniform draw in [0, bound) from a 64-bit hash; `h` is advanced on rejection.
constexpr std::uint64_t bounded_from(std::uint64_t h, std::uint64_t bound) {
  for (;;) {
    __uint128_t prod = static_cast<__uint128_t>(h) * bound;
    auto low = static_cast<std::uint64_t>(prod);
    if (low >= bound || low >= (-bound) % bound) return static_cast<std::uint64_t>(prod >> 64);
    h = mix64(h + kGamma);
  }
}

// Value i of the counter-based stream `key`.
constexpr std::uint64_t stream_at(std::uint64_t key, std::uint64_t i) {
  return mix64(key + (i + 1) * kGamma);
}

class SplitMix {
 public:
  explicit constexpr SplitMix(std::uint64_t key) : key_(key) {}
  constexpr std::uint64_t next() { return stream_at(key_, ctr_++); }
  constexpr std::uint64_t below(std::uint64_t bound) { return bounded_from(next(), bound); }
  // Bernoulli(p) with 53-bit resolution.
  bool chance(double p) {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return static_cast<double>(next() >> 11) * 0x1.0p-53 < p;
  }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

// Color of vertex v in one color-coding trial. Shared by node programs and kernels.
constexpr std::uint32_t trial_color(std::uint64_t trial_key, std::uint32_t v, std::uint32_t colors) {
  return static_cast<std::uint32_t>(bounded_from(stream_at(trial_key, v), colors));
}

}  // namespace cyclesim
