#include "unitdep/rational.h"

#include <cctype>
#include <stdexcept>

namespace unitdep {

namespace {

using boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Rational parse_unsigned_decimal(std::string_view s, std::string_view whole) {
  auto dot = s.find('.');
  std::string_view int_part = s.substr(0, dot);
  std::string_view frac_part =
      dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) {
    throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
  }
  if ((!int_part.empty() && !all_digits(int_part)) ||
      (dot != std::string_view::npos && !all_digits(frac_part))) {
    throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
  }
  cpp_int numer(std::string(int_part.empty() ? "0" : int_part) +
                std::string(frac_part));
  cpp_int denom = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) denom *= 10;
  return Rational(numer, denom);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    cpp_int d{std::string(den)};
    if (d == 0) {
      throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    }
    value = Rational(cpp_int{std::string(num)}, d);
  } else {
    value = parse_unsigned_decimal(s, text);
  }
  return negative ? Rational(-value) : value;
}

std::string format_rational(const Rational& value) {
  cpp_int num = boost::multiprecision::numerator(value);
  cpp_int den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();

  // Terminating iff the reduced denominator has no prime factors but 2 and 5.
  cpp_int rest = den;
  int twos = 0, fives = 0;
  while (rest % 2 == 0) { rest /= 2; ++twos; }
  while (rest % 5 == 0) { rest /= 5; ++fives; }
  if (rest != 1) return num.str() + "/" + den.str();

  int digits = std::max(twos, fives);
  cpp_int scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  cpp_int scaled = num * (scale / den);
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string s = scaled.str();
  if (static_cast<int>(s.size()) <= digits) {
    s.insert(0, static_cast<std::size_t>(digits) - s.size() + 1, '0');
  }
  s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  return negative ? "-" + s : s;
}

double to_double(const Rational& value) {
  return value.convert_to<double>();
}

}  // namespace unitdep
