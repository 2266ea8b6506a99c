#include "colobench/json_util.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace colobench {

double sig9(double v) {
    if (!std::isfinite(v)) return v;
    std::array<char, 64> buf;
    const int n = std::snprintf(buf.data(), buf.size(), "%.9g", v);
    (void)n;
    return std::strtod(buf.data(), nullptr);
}

Json sig9_array(std::span<const double> values) {
    Json arr = Json::array();
    for (double v : values) arr.push_back(sig9(v));
    return arr;
}

std::string fmt_fixed(double v, int decimals) {
    std::array<char, 64> buf;
    std::snprintf(buf.data(), buf.size(), "%.*f", decimals, v);
    return std::string(buf.data());
}

std::string fmt_shortest(double v) {
    std::array<char, 64> buf;
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

}  // namespace colobench
