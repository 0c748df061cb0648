#include "aprlab/rational.hpp"

#include <cstdlib>
#include <ostream>

namespace aprlab {

namespace {

long long parse_ll(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer in rational");
  std::string buf(s);
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(buf.c_str(), &end, 10);
  if (errno != 0 || end != buf.c_str() + buf.size())
    throw std::invalid_argument("bad integer in rational: '" + buf + "'");
  return v;
}

}  // namespace

Rational parse_rational(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_ll(s));
  long long num = parse_ll(s.substr(0, slash));
  long long den = parse_ll(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in rational");
  return Rational(num, den);
}

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << to_string(q); }

}  // namespace aprlab
