#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qsusy/rational.hpp"

namespace qsusy {

enum class Kind : std::uint8_t { Number, Symbol, Func, Pow, Mul, Add, Exp, Log, Sin, Cos };

struct Node;

/// Immutable symbolic expression, always held in canonical form.
///
/// Sums are fully expanded over positive integer powers, like bases are merged,
/// and operands are ordered by a deterministic total order, so structural
/// equality decides equality of canonical forms.
class Expr {
public:
    Expr();
    template <std::integral T>
    Expr(T v) : Expr(Rational(static_cast<long>(v))) {}
    Expr(const Rational& q);

    static Expr symbol(const std::string& name);
    /// Opaque function: the order-th derivative of `name` applied to `arg`.
    static Expr function(const std::string& name, int order, const Expr& arg);

    Kind kind() const;
    bool is_number() const { return kind() == Kind::Number; }
    bool is_zero() const;
    bool is_one() const;
    const Rational& number() const;
    const std::string& name() const;
    int order() const;
    std::span<const Expr> operands() const;
    const Expr& operand(std::size_t i) const { return operands()[i]; }
    std::size_t size() const { return operands().size(); }
    std::size_t hash() const;
    const Node* id() const { return node_.get(); }

    std::string str() const;

    Expr operator-() const;
    Expr& operator+=(const Expr& o);
    Expr& operator-=(const Expr& o);
    Expr& operator*=(const Expr& o);
    Expr& operator/=(const Expr& o);

    friend struct ExprFactory;

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Node {
    Kind kind = Kind::Number;
    Rational value;
    std::string name;
    int order = 0;
    std::vector<Expr> ops;
    std::size_t hash = 0;
};

/// Total order on expressions; 0 iff structurally equal.
int compare(const Expr& a, const Expr& b);
bool operator==(const Expr& a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};
struct ExprHash {
    std::size_t operator()(const Expr& e) const { return e.hash(); }
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);

Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr pow(const Expr& base, const Expr& exponent);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr tan(const Expr& a);
Expr sqrt(const Expr& a);

inline Expr num(long p, long q = 1) { return Expr(Rational(p, q)); }
inline Expr sym(const std::string& name) { return Expr::symbol(name); }

/// Splits a monomial into its rational coefficient and the remaining factor.
std::pair<Rational, Expr> split_coefficient(const Expr& term);

/// Expressions in canonical form print in the parser's grammar.
std::string to_string(const Expr& e);
std::string to_tex(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

/// Number of nodes in the expression DAG counted as a tree.
std::size_t tree_size(const Expr& e);

}  // namespace qsusy
