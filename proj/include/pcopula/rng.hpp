#pragma once

#include <cstdint>
#include <string_view>

namespace pcop {

/// Counter-based uniform stream: every draw is a pure function of
/// (seed, row, slot), so rows can be generated in any order or thread.
class CounterRng {
 public:
  static constexpr std::string_view kName = "splitmix64-counter/v1";

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t bits(std::uint64_t row, std::uint64_t slot) const {
    std::uint64_t key = mix(seed_ + 0x9E3779B97F4A7C15ULL);
    key = mix(key ^ (row * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
    return mix(key ^ (slot * 0xABC98388FB8FAC03ULL + 0x2545F4914F6CDD1DULL));
  }

  /// Uniform on (0,1): 53 random bits centred in their cell.
  double uniform(std::uint64_t row, std::uint64_t slot) const {
    return (static_cast<double>(bits(row, slot) >> 11) + 0.5) * 0x1p-53;
  }

  /// Independent stream for a derived purpose (e.g. one per sigma value).
  CounterRng substream(std::uint64_t id) const { return CounterRng(mix(seed_ ^ mix(id + 1))); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

}  // namespace pcop
