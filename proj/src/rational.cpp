#include "qk/rational.hpp"

namespace qk {

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  mpq_class q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("malformed rational literal: " + s);
  if (q.get_den() == 0)
    throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& r) { return r.get_str(); }

} // namespace qk
