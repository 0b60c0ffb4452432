#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace glab {

/// Exact fraction, always kept in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// "p/q" with q > 0; integers are written as "p/1".
std::string to_string(const Rational& r);

/// Accepts "p/q" or a bare integer "p". Throws InvalidInput otherwise.
Rational parse_rational(std::string_view text);

/// Equality through the reduced numerator and denominator; cheaper than operator==
/// on this backend, which goes through a full comparison.
inline bool same_value(const Rational& a, const Rational& b) {
  return boost::multiprecision::numerator(a) == boost::multiprecision::numerator(b) &&
         boost::multiprecision::denominator(a) == boost::multiprecision::denominator(b);
}

/// base^-exponent as an exact fraction.
Rational inverse_power(std::uint32_t base, std::uint64_t exponent);

}  // namespace glab
