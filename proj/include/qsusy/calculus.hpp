#pragma once

#include <map>
#include <string>

#include "qsusy/expr.hpp"

namespace qsusy {

/// d^order e / d var^order; opaque f^(k)(u) differentiates to f^(k+1)(u) u'.
Expr differentiate(const Expr& e, const std::string& var, int order = 1);

bool depends_on(const Expr& e, const std::string& name);
bool has_function(const Expr& e, const std::string& name);

/// Replaces symbols by expressions, all at once.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& symbols);
Expr substitute(const Expr& e, const std::string& name, const Expr& replacement);

/// Replaces the opaque function `name` by `replacement`, an expression in `var`;
/// f^(k)(u) becomes the k-th derivative of `replacement` evaluated at u.
Expr substitute_function(const Expr& e, const std::string& name, const Expr& replacement, const std::string& var);

}  // namespace qsusy
