#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsusy/expr.hpp"
#include "qsusy/simd/kernels.hpp"

namespace qsusy {

/// Numeric values for parameters and concrete replacements for opaque functions.
struct Binding {
    std::map<std::string, double> params;
    std::map<std::string, Expr> functions;
};

/// Denominators below this magnitude are treated as poles.
inline constexpr double kPoleGuard = 1e-10;

/// Replaces every bound opaque function by its concrete expression in `var`.
Expr bind_functions(const Expr& e, const Binding& binding, const std::string& var);

/// Tree-walking evaluation at var = at.
double evaluate(const Expr& e, double at, const Binding& binding = {}, const std::string& var = "z");

/// Exact value at a rational point for rational functions of `var` with bound opaque functions;
/// empty when the expression has transcendental parts, non-integer powers, free symbols or a pole there.
std::optional<Rational> evaluate_exact(const Expr& e, const Rational& at, const Binding& binding = {},
                                       const std::string& var = "z");

/// Straight-line program compiled from an expression, evaluated over batches of points.
class CompiledExpr {
public:
    CompiledExpr() = default;
    CompiledExpr(const Expr& e, const Binding& binding, const std::string& var);

    void evaluate(std::span<const double> xs, std::span<double> out, const simd::KernelTable& k = simd::active()) const;
    std::vector<double> evaluate(std::span<const double> xs, const simd::KernelTable& k = simd::active()) const;
    double evaluate(double x) const;
    std::size_t instruction_count() const { return code_.size(); }

private:
    enum class Op { Const, Var, Add, Mul, Scale, Shift, Recip, PowInt, PowReal, PowVar, Exp, Log, Sin, Cos };
    struct Instr {
        Op op;
        int a = -1;
        int b = -1;
        double c = 0.0;
        unsigned k = 0;
    };
    std::vector<Instr> code_;
    int result_ = -1;
};

}  // namespace qsusy
