#include "nlvoter/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlvoter/text.hpp"

namespace nlvoter {

Alpha Alpha::finite(double value) {
  if (!std::isfinite(value) || value < -guard || value > guard) {
    throw std::invalid_argument("alpha " + format_shortest(value) +
                                " outside the accepted range [-8, 8] (use 'inf' "
                                "for the majority limit)");
  }
  Alpha a;
  a.value_ = value;
  return a;
}

Alpha Alpha::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "INF" || text == "Infinity") {
    return infinity();
  }
  const std::string copy(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(copy, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (copy.empty() || used != copy.size()) {
    throw std::invalid_argument("alpha: cannot parse '" + copy + "'");
  }
  return finite(v);
}

double Alpha::value() const noexcept {
  return infinite_ ? HUGE_VAL : value_;
}

std::string Alpha::to_string() const {
  return infinite_ ? "inf" : format_shortest(value_);
}

double select_prob(NeighborhoodCount counts, Alpha alpha) {
  const auto plus = counts.n_plus;
  const auto minus = counts.n_minus;
  if (plus + minus == 0) {
    throw std::invalid_argument("select_prob: empty neighborhood");
  }
  if (alpha.is_infinite()) {
    if (plus > minus) return 1.0;
    if (plus < minus) return 0.0;
    return 0.5;
  }
  const double a = alpha.value();
  if (a == 0.0) return 0.5;
  if (plus == 0) return a > 0.0 ? 0.0 : 1.0;
  if (minus == 0) return a > 0.0 ? 1.0 : 0.0;
  if (plus == minus) return 0.5;
  if (a == 1.0) return static_cast<double>(plus) / static_cast<double>(plus + minus);
  const double x = a * (std::log(static_cast<double>(minus)) -
                        std::log(static_cast<double>(plus)));
  return 1.0 / (1.0 + std::exp(x));
}

std::size_t OpinionState::count_plus() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(opinions.begin(), opinions.end(), [](Opinion o) { return o > 0; }));
}

OpinionState init_random(std::size_t node_count, const UpdateStream& stream) {
  if (node_count == 0) throw std::invalid_argument("init_random: empty state");
  OpinionState s;
  s.opinions.resize(node_count);
  for (std::size_t i = 0; i < node_count; ++i) {
    const double u = stream.uniform(0, static_cast<std::uint32_t>(i),
                                    UpdateStream::Domain::init);
    s.opinions[i] = u < 0.5 ? Opinion{1} : Opinion{-1};
  }
  return s;
}

OpinionState init_block(std::uint32_t side, std::uint32_t block) {
  if (side == 0 || block == 0) throw std::invalid_argument("init_block: sizes must be positive");
  if (block > side) {
    throw std::invalid_argument("init_block: block " + std::to_string(block) +
                                " exceeds lattice side " + std::to_string(side));
  }
  OpinionState s;
  s.opinions.assign(std::size_t{side} * side, Opinion{-1});
  const std::uint32_t start = (side - block) / 2;
  for (std::uint32_t r = start; r < start + block; ++r) {
    for (std::uint32_t c = start; c < start + block; ++c) {
      s.opinions[std::size_t{r} * side + c] = 1;
    }
  }
  return s;
}

OpinionState init_stripes(std::uint32_t side, std::uint32_t width) {
  if (side == 0 || width == 0) throw std::invalid_argument("init_stripes: sizes must be positive");
  if (side % (2 * width) != 0) {
    throw std::invalid_argument("init_stripes: side must be a multiple of twice the width");
  }
  OpinionState s;
  s.opinions.resize(std::size_t{side} * side);
  for (std::uint32_t r = 0; r < side; ++r) {
    const Opinion o = (r / width) % 2 == 0 ? Opinion{1} : Opinion{-1};
    std::fill_n(s.opinions.begin() + std::size_t{r} * side, side, o);
  }
  return s;
}

SelectionTable::SelectionTable(Alpha alpha, std::uint32_t max_degree)
    : alpha_(alpha), stride_(max_degree + 2) {
  table_.assign(std::size_t{stride_} * stride_, 0.0);
  for (std::uint32_t total = 1; total < stride_; ++total) {
    for (std::uint32_t plus = 0; plus <= total; ++plus) {
      table_[std::size_t{total} * stride_ + plus] = select_prob({plus, total - plus}, alpha);
    }
  }
}

std::size_t step_sync(const OpinionState& from, OpinionState& to, const Graph& g,
                      const SelectionTable& table, const UpdateStream& stream,
                      bool parallel) {
  const std::size_t n = g.node_count();
  if (from.size() != n) {
    throw std::invalid_argument("step_sync: state has " + std::to_string(from.size()) +
                                " nodes, graph has " + std::to_string(n));
  }
  if (table.max_degree() < g.max_degree()) {
    throw std::invalid_argument("step_sync: selection table too small for graph degree");
  }
  to.opinions.resize(n);
  to.time_step = from.time_step + 1;

  const std::uint32_t* off = g.offsets().data();
  const NodeId* adj = g.neighbor_list().data();
  const Opinion* src = from.opinions.data();
  Opinion* dst = to.opinions.data();
  const std::uint64_t t = from.time_step;
  const auto blocks = static_cast<std::int64_t>((n + 3) / 4);

  auto update_block = [&](std::int64_t b) {
    const auto words = stream.block(t, static_cast<std::uint32_t>(b));
    const std::size_t first = static_cast<std::size_t>(b) * 4;
    const std::size_t last = std::min(first + 4, n);
    std::size_t ups = 0;
    for (std::size_t i = first; i < last; ++i) {
      std::uint32_t plus = src[i] > 0;
      for (std::uint32_t k = off[i]; k < off[i + 1]; ++k) plus += src[adj[k]] > 0;
      const double p = table(off[i + 1] - off[i] + 1, plus);
      const bool up = UpdateStream::to_unit(words[i - first]) < p;
      dst[i] = up ? Opinion{1} : Opinion{-1};
      ups += up;
    }
    return ups;
  };

  std::size_t plus_total = 0;
  if (parallel && n >= 4096) {
#pragma omp parallel for schedule(static) reduction(+ : plus_total)
    for (std::int64_t b = 0; b < blocks; ++b) plus_total += update_block(b);
  } else {
    for (std::int64_t b = 0; b < blocks; ++b) plus_total += update_block(b);
  }
  return plus_total;
}

OpinionState step_sync(const OpinionState& from, const Graph& g, Alpha alpha,
                       const UpdateStream& stream) {
  OpinionState to;
  step_sync(from, to, g, SelectionTable(alpha, g.max_degree()), stream);
  return to;
}

namespace reference {

OpinionState step_sync(const OpinionState& from, const Graph& g, Alpha alpha,
                       const UpdateStream& stream) {
  if (from.size() != g.node_count()) {
    throw std::invalid_argument("step_sync: state/graph size mismatch");
  }
  OpinionState to;
  to.opinions.resize(from.size());
  to.time_step = from.time_step + 1;
  for (std::size_t i = 0; i < from.size(); ++i) {
    const auto v = static_cast<NodeId>(i);
    NeighborhoodCount c;
    (from.opinions[i] > 0 ? c.n_plus : c.n_minus) += 1;
    for (NodeId u : g.neighbors(v)) (from.opinions[u] > 0 ? c.n_plus : c.n_minus) += 1;
    const double u = stream.uniform(from.time_step, v);
    to.opinions[i] = u < select_prob(c, alpha) ? Opinion{1} : Opinion{-1};
  }
  return to;
}

}  // namespace reference

}  // namespace nlvoter
