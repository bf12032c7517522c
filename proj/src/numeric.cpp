#include "kgraph/numeric.hpp"

#include "kgraph/errors.hpp"

#include <cctype>

namespace kgraph {

namespace {

bool is_integer_text(const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Integer parse_integer(const std::string& text) {
  if (!is_integer_text(text)) throw MalformedInput("not an integer: '" + text + "'");
  return Integer(text[0] == '+' ? text.substr(1) : text);
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(text));
  const std::string den_text = text.substr(slash + 1);
  if (den_text.empty() || den_text[0] == '-' || den_text[0] == '+')
    throw MalformedInput("not a rational: '" + text + "'");
  const Integer num = parse_integer(text.substr(0, slash));
  const Integer den = parse_integer(den_text);
  if (den == 0) throw MalformedInput("zero denominator in '" + text + "'");
  return Rational(num, den);
}

}  // namespace kgraph
