#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace qsusy {

using Rational = mpq_class;

/// Parses "3", "-7/2", "0.25", "1e-3" exactly.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace qsusy
