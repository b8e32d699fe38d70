#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace forgetting {

/// Philox4x64-10 counter-based generator (Salmon et al., Random123).
///
/// This is the pinned generator behind every random ordering: draw t of a
/// stream keyed by (seed, stream) is word t % 4 of block
/// philox4x64_10({t / 4, 0, 0, 0}, {seed, stream}).
using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;

PhiloxCounter philox4x64_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Sequential reader over one Philox stream.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_{seed, stream} {}

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Uniform on {0, ..., n - 1}: the high 64 bits of word * n.
  std::size_t uniform_index(std::size_t n) noexcept;

  /// Standard normal via Box-Muller, one variate per two words.
  double normal() noexcept;

private:
  PhiloxKey key_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  unsigned used_ = 4;
};

}  // namespace forgetting
