#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace nlvoter {

/// Philox4x32-10 block function (Salmon et al., Random123). Counter-based:
/// the output depends only on (counter, key), so any draw can be computed
/// independently of the others.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

namespace detail {

inline void philox_round(PhiloxCounter& ctr, const PhiloxKey& key) noexcept {
  const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
  const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace detail

inline PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
  detail::philox_round(ctr, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += 0x9E3779B9u;
    key[1] += 0xBB67AE85u;
    detail::philox_round(ctr, key);
  }
  return ctr;
}

/// Bijective 64-bit finalizer (SplitMix64 output function).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

/// Purpose of a derived stream. Occupies the top nibble of the tag byte; the
/// low nibble carries a topology index (< 16) for multi-topology experiments.
enum class StreamPurpose : std::uint8_t {
  dynamics = 1,
  graph = 2,
};

inline constexpr std::uint32_t max_alpha_index = (1u << 24) - 1;
inline constexpr std::uint32_t max_topology_index = 15;

/// Stream key for one work unit.
///
/// Layout of the packed word: bits 56..63 tag, bits 32..55 alpha index,
/// bits 0..31 realization index. key = mix64(mix64(master) ^ packed). For a
/// fixed master seed this is injective over the packed index space because
/// both the xor with a constant and mix64 are bijections.
///
/// Throws std::out_of_range when an index does not fit its field.
std::uint64_t derive_stream(std::uint64_t master_seed, StreamPurpose purpose,
                            std::uint32_t topology_index,
                            std::uint32_t alpha_index,
                            std::uint32_t realization_index);

/// Per-realization source of the uniforms consumed by the dynamics.
///
/// Each synchronous step t gives node i exactly one uniform u(t, i) in (0, 1).
/// Nodes are grouped in blocks of four sharing one Philox call (counter =
/// {i / 4, domain, t_lo, t_hi}); lane i % 4 belongs to node i.
class UpdateStream {
 public:
  enum class Domain : std::uint32_t { update = 0, init = 1 };

  UpdateStream() = default;
  explicit UpdateStream(std::uint64_t key) noexcept
      : key_{static_cast<std::uint32_t>(key),
             static_cast<std::uint32_t>(key >> 32)} {}

  std::uint64_t key() const noexcept {
    return (std::uint64_t{key_[1]} << 32) | key_[0];
  }

  PhiloxCounter block(std::uint64_t step, std::uint32_t block_index,
                      Domain domain = Domain::update) const noexcept {
    return philox4x32_10({block_index, static_cast<std::uint32_t>(domain),
                          static_cast<std::uint32_t>(step),
                          static_cast<std::uint32_t>(step >> 32)},
                         key_);
  }

  /// The uniform owned by node `node` at step `step`.
  double uniform(std::uint64_t step, std::uint32_t node,
                 Domain domain = Domain::update) const noexcept {
    return to_unit(block(step, node / 4, domain)[node % 4]);
  }

  /// Maps a 32-bit word to the midpoint grid (k + 1/2) / 2^32, strictly
  /// inside (0, 1), so `u < 1` and `!(u < 0)` always hold.
  static constexpr double to_unit(std::uint32_t word) noexcept {
    return (static_cast<double>(word) + 0.5) * 0x1p-32;
  }

 private:
  PhiloxKey key_{0, 0};
};

/// Sequential engine used by the graph generators. mt19937_64 output is fully
/// specified by the standard; the helpers below avoid the
/// implementation-defined std distributions.
using GraphEngine = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(GraphEngine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1p-53;
}

/// Uniform integer in [0, n), n > 0, by rejection.
std::uint64_t uniform_below(GraphEngine& eng, std::uint64_t n);

}  // namespace nlvoter
