#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace qk {

/// Exact arbitrary-precision rational scalar. mpq_class keeps values in
/// canonical form (reduced fraction, positive denominator).
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed input
/// or zero denominator.
Rational parse_rational(const std::string& s);

std::string to_string(const Rational& r);

} // namespace qk
