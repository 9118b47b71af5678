#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hcm {

// Utilities and defaults are exact so that the strict/non-strict comparisons
// in the harm conditions can never be decided by rounding.
using Rational = boost::rational<std::int64_t>;

// Accepts "n" or "n/d" with optional leading '-'. Returns nullopt on malformed
// text, a zero denominator, or overflow.
std::optional<Rational> parse_rational(std::string_view text);

// "n" when the denominator is 1, otherwise "n/d" in lowest terms.
std::string to_string(const Rational& r);

inline bool in_unit_interval(const Rational& r) {
  return r >= Rational(0) && r <= Rational(1);
}

}  // namespace hcm
