#pragma once

#include <string>

namespace peri {

/// Hexadecimal float formatting ("%a"): exact round trip.
std::string hex_double(double v);
double parse_hex_double(const std::string& s);

/// Shortest-exact decimal ("%.17g"): also round trips exactly.
std::string dec17(double v);
double parse_double(const std::string& s);

}  // namespace peri
