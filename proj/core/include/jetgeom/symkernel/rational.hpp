#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace jetgeom::sym {

/// Exact rational number. All symbolic coefficients are kept exact.
using Rational = mpq_class;

std::string to_string(const Rational& q);

/// Parses "a", "-a" or "a/b" with decimal integers. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace jetgeom::sym
