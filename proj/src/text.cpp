#include "nlvoter/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace nlvoter {

std::string format_shortest(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_sig9(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.9g", x);
  return buf;
}

}  // namespace nlvoter
