#include "nlvoter/random.hpp"

#include <stdexcept>
#include <string>

namespace nlvoter {

std::uint64_t derive_stream(std::uint64_t master_seed, StreamPurpose purpose,
                            std::uint32_t topology_index,
                            std::uint32_t alpha_index,
                            std::uint32_t realization_index) {
  if (topology_index > max_topology_index) {
    throw std::out_of_range("topology index " + std::to_string(topology_index) +
                            " exceeds " + std::to_string(max_topology_index));
  }
  if (alpha_index > max_alpha_index) {
    throw std::out_of_range("alpha index " + std::to_string(alpha_index) +
                            " exceeds " + std::to_string(max_alpha_index));
  }
  const std::uint64_t tag =
      (static_cast<std::uint64_t>(purpose) << 4) | topology_index;
  const std::uint64_t packed = (tag << 56) |
                               (std::uint64_t{alpha_index} << 32) |
                               realization_index;
  return mix64(mix64(master_seed) ^ packed);
}

std::uint64_t uniform_below(GraphEngine& eng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: empty range");
  // Largest multiple of n representable; values at or above it are rejected.
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n + 1) % n;
  std::uint64_t x;
  do {
    x = eng();
  } while (x > limit);
  return x % n;
}

}  // namespace nlvoter
