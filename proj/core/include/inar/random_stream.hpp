#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace inar {

/// Reproducible source of randomness identified by (master seed, stream index).
///
/// Two streams built from the same pair emit byte-identical sequences. The
/// engine is std::mt19937_64 keyed through std::seed_seq, both of which are
/// fully specified by the standard, and doubles are formed from the top 53
/// bits, so the output does not depend on the standard library vendor.
class RandomStream {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+seed_seq/v1";

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::string_view algorithm() const noexcept { return kAlgorithm; }

  /// Fresh stream with the same master seed and a different index.
  RandomStream substream(std::uint64_t index) const { return RandomStream(seed_, index); }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Draw a seed from system entropy.
  static std::uint64_t entropy_seed();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace inar
