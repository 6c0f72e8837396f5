#include <charconv>
#include <string>

#include "lehmerlab/errors.hpp"
#include "lehmerlab/rational.hpp"

namespace lehmerlab {

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("not a number: '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

std::int64_t ceil_mul(const Rational& r, std::uint64_t q) {
  const __int128 num = static_cast<__int128>(r.numerator()) * q;
  const __int128 den = r.denominator();
  __int128 quot = num / den;
  if (num % den != 0 && num > 0) ++quot;
  return static_cast<std::int64_t>(quot);
}

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw ConfigError("empty number");
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto den = parse_int(text.substr(slash + 1), text);
    if (den == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash), text), den);
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const bool negative = text.front() == '-';
    std::string_view int_part = text.substr(negative ? 1 : 0, dot - (negative ? 1 : 0));
    std::string_view frac_part = text.substr(dot + 1);
    if (frac_part.size() > 17) throw ConfigError("too many decimals in '" + std::string(text) + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    const std::int64_t ip = int_part.empty() ? 0 : parse_int(int_part, text);
    const std::int64_t fp = frac_part.empty() ? 0 : parse_int(frac_part, text);
    if (frac_part.find_first_not_of("0123456789") != std::string_view::npos) {
      throw ConfigError("not a number: '" + std::string(text) + "'");
    }
    Rational r(ip * scale + fp, scale);
    return negative ? -r : r;
  }
  return Rational(parse_int(text, text));
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace lehmerlab
