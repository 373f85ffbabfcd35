#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace unitdep {

using Rational = boost::multiprecision::cpp_rational;

// Parses "66", "-3", "18.0", "2.50" or "7/3" exactly. Throws
// std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

// Shortest exact rendering: "7", "2.5", or "1/3" when the decimal expansion
// does not terminate.
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

}  // namespace unitdep
