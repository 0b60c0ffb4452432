#include "glab/rational.hpp"

#include "glab/errors.hpp"

#include <cctype>
#include <map>

namespace glab {

std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

namespace {

BigInt parse_integer(std::string_view text) {
  std::size_t i = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) i = 1;
  if (i == text.size()) throw InvalidInput("empty integer in rational '" + std::string(text) + "'");
  for (std::size_t j = i; j < text.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(text[j]))) {
      throw InvalidInput("malformed rational '" + std::string(text) + "'");
    }
  }
  return BigInt(std::string(text));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  BigInt num = parse_integer(text.substr(0, slash));
  BigInt den = parse_integer(text.substr(slash + 1));
  if (den == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

Rational inverse_power(std::uint32_t base, std::uint64_t exponent) {
  // Hot in the enumeration checks; cache per thread.
  thread_local std::map<std::pair<std::uint32_t, std::uint64_t>, Rational> cache;
  auto key = std::make_pair(base, exponent);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  BigInt den = boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exponent));
  return cache.emplace(key, Rational(BigInt(1), den)).first->second;
}

}  // namespace glab
