#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nlvoter/graph.hpp"
#include "nlvoter/random.hpp"

namespace nlvoter {

/// Herding exponent. Finite values live in [-guard, guard]; the distinguished
/// infinite value selects the deterministic local-majority rule.
class Alpha {
 public:
  static constexpr double guard = 8.0;

  Alpha() = default;
  static Alpha finite(double value);
  static Alpha infinity() noexcept {
    Alpha a;
    a.infinite_ = true;
    return a;
  }
  /// Accepts a decimal number, "inf" or "infinity".
  static Alpha parse(std::string_view text);

  bool is_infinite() const noexcept { return infinite_; }
  /// The finite value; +infinity for the majority limit.
  double value() const noexcept;
  /// Consensus is absorbing exactly when alpha > 0 (including infinity).
  bool absorbing() const noexcept { return infinite_ || value_ > 0.0; }

  std::string to_string() const;

  friend bool operator==(const Alpha&, const Alpha&) = default;

 private:
  double value_ = 1.0;
  bool infinite_ = false;
};

/// Opinion counts over a node and its neighbors (the node itself included).
struct NeighborhoodCount {
  std::uint32_t n_plus = 0;
  std::uint32_t n_minus = 0;
};

/// Probability that a node adopts +1:
///   p = n_plus^a / (n_plus^a + n_minus^a)
/// evaluated as 1 / (1 + exp(a (ln n_minus - ln n_plus))) when both counts are
/// positive. Conventions at the edges:
///   a = 0         -> 1/2 regardless of counts
///   a > 0         -> a zero count contributes 0
///   a < 0         -> the opinion with zero count wins with probability 1
///   a = infinity  -> 1, 0 or 1/2 for majority +1, majority -1, tie
///   a = 1         -> exactly n_plus / (n_plus + n_minus)
/// Throws std::invalid_argument when both counts are zero.
double select_prob(NeighborhoodCount counts, Alpha alpha);

using Opinion = std::int8_t;

struct OpinionState {
  std::vector<Opinion> opinions;  // each +1 or -1
  std::uint64_t time_step = 0;

  std::size_t size() const noexcept { return opinions.size(); }
  std::size_t count_plus() const noexcept;

  friend bool operator==(const OpinionState&, const OpinionState&) = default;
};

/// Each node flips a fair coin (draws from the stream's init domain).
OpinionState init_random(std::size_t node_count, const UpdateStream& stream);

/// L x L lattice state with a centered B x B block of +1 on a field of -1.
/// The block spans rows and columns (L - B) / 2 .. (L - B) / 2 + B - 1.
OpinionState init_block(std::uint32_t side, std::uint32_t block);

/// Horizontal stripes of width `width` rows (alternating, starting with +1);
/// side must be a multiple of 2 * width so the pattern wraps cleanly.
/// With width >= 2 every node has a strict local majority for its own opinion
/// on the 4-neighbor torus, so the majority rule leaves it unchanged.
OpinionState init_stripes(std::uint32_t side, std::uint32_t width);

/// select_prob tabulated for every neighborhood size up to max_degree + 1.
class SelectionTable {
 public:
  SelectionTable(Alpha alpha, std::uint32_t max_degree);

  double operator()(std::uint32_t total, std::uint32_t n_plus) const noexcept {
    return table_[std::size_t{total} * stride_ + n_plus];
  }
  Alpha alpha() const noexcept { return alpha_; }
  std::uint32_t max_degree() const noexcept { return stride_ - 2; }

 private:
  Alpha alpha_;
  std::uint32_t stride_;
  std::vector<double> table_;
};

/// One synchronous step. Every node reads `from`, writes `to`, and consumes
/// the uniform u(from.time_step, i). Node blocks are split across OpenMP
/// threads when `parallel` is set; the result is bit-identical either way.
/// Returns the number of +1 opinions in `to`.
///
/// Throws std::invalid_argument on size mismatch or when the table was built
/// for a smaller maximum degree than the graph has.
std::size_t step_sync(const OpinionState& from, OpinionState& to, const Graph& g,
                      const SelectionTable& table, const UpdateStream& stream,
                      bool parallel = true);

OpinionState step_sync(const OpinionState& from, const Graph& g, Alpha alpha,
                       const UpdateStream& stream);

namespace reference {

/// Plain serial loop over nodes calling select_prob directly. Kept as the
/// oracle for the blocked kernel above.
OpinionState step_sync(const OpinionState& from, const Graph& g, Alpha alpha,
                       const UpdateStream& stream);

}  // namespace reference

}  // namespace nlvoter
