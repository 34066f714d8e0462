#include "peri/textio.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace peri {

std::string hex_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

double parse_hex_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw std::invalid_argument("not a float literal: " + s);
    return v;
}

std::string dec17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) { return parse_hex_double(s); }

}  // namespace peri
