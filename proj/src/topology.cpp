#include "nlvoter/topology.hpp"

#include "nlvoter/text.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nlvoter {

namespace {

std::uint32_t parse_count(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end || out > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("topology: '" + std::string(key) +
                                "' expects a non-negative integer, got '" +
                                std::string(value) + "'");
  }
  return static_cast<std::uint32_t>(out);
}

double parse_real(std::string_view key, std::string_view value) {
  const std::string copy(value);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(copy, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != copy.size() || copy.empty() || !std::isfinite(out)) {
    throw std::invalid_argument("topology: '" + std::string(key) +
                                "' expects a real number, got '" + copy + "'");
  }
  return out;
}

}  // namespace

TopologySpec TopologySpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  TopologySpec spec;
  std::vector<std::string_view> allowed;
  if (kind == "lattice") {
    spec.kind = Topology::lattice2d;
    allowed = {"L"};
  } else if (kind == "er") {
    spec.kind = Topology::er;
    allowed = {"N", "k"};
  } else if (kind == "nw") {
    spec.kind = Topology::nw;
    allowed = {"N", "ring", "ps"};
  } else if (kind == "ba") {
    spec.kind = Topology::ba;
    allowed = {"N", "m"};
  } else {
    throw std::invalid_argument("topology: unknown kind '" + std::string(kind) +
                                "' (expected lattice, er, nw or ba)");
  }
  std::string_view rest = colon == std::string_view::npos ? std::string_view{}
                                                          : text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("topology: expected key=value, got '" + std::string(item) + "'");
    }
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) {
      throw std::invalid_argument("topology: '" + std::string(key) +
                                  "' is not a parameter of " + std::string(kind));
    }
    if (key == "L") spec.side = parse_count(key, value);
    else if (key == "N") spec.nodes = parse_count(key, value);
    else if (key == "k") spec.mean_degree = parse_real(key, value);
    else if (key == "ring") spec.ring_degree = parse_count(key, value);
    else if (key == "ps") spec.shortcut_prob = parse_real(key, value);
    else if (key == "m") spec.attach = parse_count(key, value);
  }
  // Range checks mirror the generators so bad specs fail before any work.
  switch (spec.kind) {
    case Topology::lattice2d:
      if (spec.side < 3) throw std::invalid_argument("topology: lattice needs L >= 3");
      break;
    case Topology::er:
      if (spec.nodes < 2 || !(spec.mean_degree > 0.0) ||
          spec.mean_degree > static_cast<double>(spec.nodes - 1)) {
        throw std::invalid_argument("topology: er needs N >= 2 and 0 < k <= N-1");
      }
      break;
    case Topology::nw:
      if (spec.ring_degree < 2 || spec.ring_degree % 2 != 0 || spec.nodes <= spec.ring_degree ||
          !(spec.shortcut_prob >= 0.0 && spec.shortcut_prob <= 1.0)) {
        throw std::invalid_argument(
            "topology: nw needs even ring >= 2, N > ring and 0 <= ps <= 1");
      }
      break;
    case Topology::ba:
      if (spec.attach < 1 || spec.nodes <= spec.attach + 1) {
        throw std::invalid_argument("topology: ba needs m >= 1 and N > m + 1");
      }
      break;
  }
  return spec;
}

std::string TopologySpec::to_string() const {
  switch (kind) {
    case Topology::lattice2d: return "lattice:L=" + std::to_string(side);
    case Topology::er:
      return "er:N=" + std::to_string(nodes) + ",k=" + format_shortest(mean_degree);
    case Topology::nw:
      return "nw:N=" + std::to_string(nodes) + ",ring=" + std::to_string(ring_degree) +
             ",ps=" + format_shortest(shortcut_prob);
    case Topology::ba:
      return "ba:N=" + std::to_string(nodes) + ",m=" + std::to_string(attach);
  }
  return {};
}

std::string TopologySpec::label() const {
  std::string out;
  for (char c : to_string()) {
    if (c == ':' || c == ',') out += '_';
    else if (c != '=') out += c;
  }
  return out;
}

std::uint32_t TopologySpec::requested_nodes() const noexcept {
  return kind == Topology::lattice2d ? side * side : nodes;
}

Graph TopologySpec::build(GraphEngine& rng) const {
  switch (kind) {
    case Topology::lattice2d: return make_lattice(side);
    case Topology::er: return make_er(nodes, mean_degree, rng);
    case Topology::nw: return make_nw(nodes, ring_degree, shortcut_prob, rng);
    case Topology::ba: return make_ba(nodes, attach, rng);
  }
  throw std::logic_error("unreachable topology kind");
}

}  // namespace nlvoter
