#pragma once

#include <string>

namespace nlvoter {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_shortest(double x);

/// Nine significant digits, trailing zeros kept ("%#.9g"): 1 -> "1.00000000".
std::string format_sig9(double x);

}  // namespace nlvoter
