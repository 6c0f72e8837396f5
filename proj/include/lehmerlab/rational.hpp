#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace lehmerlab {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// ceil(r * q), computed exactly.
std::int64_t ceil_mul(const Rational& r, std::uint64_t q);

/// Parses "3", "-2", "1/2" or a finite decimal such as "0.125" into an exact rational.
Rational parse_rational(std::string_view text);

std::string format_rational(const Rational& r);

}  // namespace lehmerlab
