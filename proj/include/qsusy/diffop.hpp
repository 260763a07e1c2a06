#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qsusy/expr.hpp"

namespace qsusy {

/// Linear differential operator sum_k a_k(var) d^k/dvar^k; zero coefficients are never stored.
class DiffOp {
public:
    explicit DiffOp(std::string var = "z");
    DiffOp(std::map<int, Expr> coefficients, std::string var);

    static DiffOp d(const std::string& var, int k = 1);
    static DiffOp multiply(const Expr& c, const std::string& var);
    static DiffOp identity(const std::string& var) { return multiply(Expr(1), var); }

    const std::string& var() const { return var_; }
    /// Highest order with a nonzero coefficient; -1 for the zero operator.
    int order() const;
    bool is_zero() const { return coeffs_.empty(); }
    const Expr& coeff(int k) const;
    const std::map<int, Expr>& coefficients() const { return coeffs_; }
    std::string str() const;

    DiffOp operator-() const;
    friend DiffOp operator+(const DiffOp& a, const DiffOp& b);
    friend DiffOp operator-(const DiffOp& a, const DiffOp& b);
    /// Composition a∘b.
    friend DiffOp operator*(const DiffOp& a, const DiffOp& b);
    /// Left multiplication by a function.
    friend DiffOp operator*(const Expr& c, const DiffOp& a);
    friend DiffOp operator+(const DiffOp& a, const Expr& c);
    friend DiffOp operator-(const DiffOp& a, const Expr& c);
    friend bool operator==(const DiffOp& a, const DiffOp& b);

private:
    std::map<int, Expr> coeffs_;
    std::string var_;
};

std::ostream& operator<<(std::ostream& os, const DiffOp& op);

Expr apply(const DiffOp& op, const Expr& psi);
DiffOp compose(const DiffOp& a, const DiffOp& b);
DiffOp commutator(const DiffOp& a, const DiffOp& b);

/// g∘op∘g^{-1} = sum_k a_k (d - g'/g)^k.
DiffOp gauge_conjugate(const Expr& g, const DiffOp& op);

/// Product of monic first-order factors, left to right.
DiffOp expand_factored(const std::vector<DiffOp>& factors);
/// Product of (d + s_i), left to right.
DiffOp expand_factored(const std::vector<Expr>& shifts, const std::string& var);

/// Applies f to every coefficient.
DiffOp transform(const DiffOp& op, const std::function<Expr(const Expr&)>& f);

/// Rewrites an operator in `op.var()` as one in `new_var` under old = old_of_new(new_var).
/// Opaque functions f(old) listed in `functions` become their given composition G(new_var),
/// with f^(k)(old) expanded as G_k, G_{k+1} = G_k' / old'.
DiffOp change_variable(const DiffOp& op, const std::string& new_var, const Expr& old_of_new,
                       const std::map<std::string, Expr>& functions = {});

}  // namespace qsusy
