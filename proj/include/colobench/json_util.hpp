#pragma once

#include <span>
#include <string>

#include "json.hpp"

namespace colobench {

using Json = nlohmann::ordered_json;

/// Rounds to 9 significant decimal digits; reports serialize through this
/// so emitted numbers are byte-stable and readable.
double sig9(double v);

Json sig9_array(std::span<const double> values);

/// Fixed-decimal formatting for display tables.
std::string fmt_fixed(double v, int decimals);

/// Shortest decimal form that parses back to the same double.
std::string fmt_shortest(double v);

}  // namespace colobench
