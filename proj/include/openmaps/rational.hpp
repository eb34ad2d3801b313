#pragma once

#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace openmaps {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "n", "n/d" or a plain decimal ("1.25", "-0.5") into an exact rational.
std::optional<Rational> parse_rational(const std::string& text);

/// Canonical form: "n" when the denominator is 1, otherwise "n/d".
std::string format_rational(const Rational& q);

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace openmaps
