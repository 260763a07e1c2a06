#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qsusy/expr.hpp"

namespace qsusy {

struct ParseOptions {
    /// Symbol an opaque function is applied to when written without an argument, as in f''.
    std::string variable = "z";
    /// Identifiers that denote opaque functions rather than parameters.
    std::vector<std::string> functions = {"f"};
};

/// Unsimplified syntax tree, kept for checking canonicalization against direct evaluation.
struct ParseTree {
    enum class Op { Number, Symbol, Neg, Add, Sub, Mul, Div, Pow, Call, Opaque };
    Op op = Op::Number;
    Rational value;
    std::string name;
    int order = 0;
    std::vector<ParseTree> children;
};

ParseTree parse_tree(std::string_view text, const ParseOptions& options = {});
Expr to_expr(const ParseTree& tree);
Expr parse(std::string_view text, const ParseOptions& options = {});

/// Direct double evaluation of the syntax tree with every symbol bound in `values`.
double evaluate_tree(const ParseTree& tree, const std::map<std::string, double>& values);

}  // namespace qsusy
