#include <cmath>
#include <functional>
#include <unordered_map>

#include "qsusy/calculus.hpp"
#include "qsusy/errors.hpp"
#include "qsusy/eval.hpp"
#include "numeric.hpp"

namespace qsusy {

namespace detail {

double powi(double base, unsigned k) {
    double r = 1.0;
    bool first = true;
    while (k) {
        if (k & 1u) {
            r = first ? base : r * base;
            first = false;
        }
        k >>= 1u;
        if (k) base = base * base;
    }
    return r;
}

double checked_reciprocal(double x) {
    if (std::fabs(x) < kPoleGuard) throw EvalError(EvalFailure::Pole, "pole: denominator vanishes");
    return 1.0 / x;
}

double real_power(double b, double e) {
    if (e == std::floor(e) && std::fabs(e) < 1e9) {
        long k = static_cast<long>(e);
        if (k >= 0) return powi(b, static_cast<unsigned>(k));
        return checked_reciprocal(powi(b, static_cast<unsigned>(-k)));
    }
    if (b < 0) throw EvalError(EvalFailure::Domain, "non-integer power of a negative value");
    if (b < kPoleGuard && e < 0) throw EvalError(EvalFailure::Pole, "pole: negative power of zero");
    return std::pow(b, e);
}

double checked_log(double x) {
    if (!(x > 0)) throw EvalError(EvalFailure::Domain, "logarithm of a non-positive value");
    return std::log(x);
}

/// 0: ordinary power; 1/2: negative bases allowed (odd denominator) with even/odd numerator.
int rational_parity(const Rational& q) {
    if (is_integer(q) || q.get_den().get_ui() % 2 == 0) return 0;
    return mpz_odd_p(q.get_num_mpz_t()) ? 2 : 1;
}

double rational_power(double b, double q, int parity) {
    if (parity != 0 && b < 0) {
        if (q < 0 && -b < kPoleGuard) throw EvalError(EvalFailure::Pole, "pole: negative power of zero");
        double r = std::pow(-b, q);
        return parity == 2 ? -r : r;
    }
    return real_power(b, q);
}

}  // namespace detail

namespace {

struct Walker {
    double at;
    const Binding& binding;
    const std::string& var;
    std::unordered_map<const Node*, double> memo;
    std::vector<Expr> keep;

    double run(const Expr& e) {
        if (e.is_number()) return e.number().get_d();
        auto it = memo.find(e.id());
        if (it != memo.end()) return it->second;
        double r = 0.0;
        switch (e.kind()) {
            case Kind::Symbol: {
                if (e.name() == var) {
                    r = at;
                    break;
                }
                auto p = binding.params.find(e.name());
                if (p == binding.params.end()) throw EvalError(EvalFailure::Unbound, "unbound symbol '" + e.name() + "'");
                r = p->second;
                break;
            }
            case Kind::Func: {
                auto f = binding.functions.find(e.name());
                if (f == binding.functions.end()) {
                    throw EvalError(EvalFailure::Unbound, "unbound function '" + e.name() + "'");
                }
                keep.push_back(substitute_function(e, e.name(), f->second, var));
                r = run(keep.back());
                break;
            }
            case Kind::Add: {
                std::size_t start = e.operand(0).is_number() ? 1 : 0;
                r = run(e.operand(start));
                for (std::size_t i = start + 1; i < e.size(); ++i) r = r + run(e.operand(i));
                if (start == 1) r = e.operand(0).number().get_d() + r;
                break;
            }
            case Kind::Mul: {
                std::size_t start = e.operand(0).is_number() ? 1 : 0;
                r = run(e.operand(start));
                for (std::size_t i = start + 1; i < e.size(); ++i) r = r * run(e.operand(i));
                if (start == 1) r = e.operand(0).number().get_d() * r;
                break;
            }
            case Kind::Pow: {
                double b = run(e.operand(0));
                const Expr& x = e.operand(1);
                r = x.is_number() ? detail::rational_power(b, x.number().get_d(), detail::rational_parity(x.number()))
                                  : detail::real_power(b, run(x));
                break;
            }
            case Kind::Exp: r = std::exp(run(e.operand(0))); break;
            case Kind::Log: r = detail::checked_log(run(e.operand(0))); break;
            case Kind::Sin: r = std::sin(run(e.operand(0))); break;
            case Kind::Cos: r = std::cos(run(e.operand(0))); break;
            default: break;
        }
        memo.emplace(e.id(), r);
        return r;
    }
};

}  // namespace

Expr bind_functions(const Expr& e, const Binding& binding, const std::string& var) {
    Expr r = e;
    for (const auto& [name, repl] : binding.functions) {
        if (has_function(r, name)) r = substitute_function(r, name, repl, var);
    }
    return r;
}

double evaluate(const Expr& e, double at, const Binding& binding, const std::string& var) {
    Walker w{at, binding, var, {}, {}};
    double r = w.run(e);
    if (!std::isfinite(r)) throw EvalError(EvalFailure::NonFinite, "evaluation overflowed");
    return r;
}

}  // namespace qsusy

namespace qsusy {

std::optional<Rational> evaluate_exact(const Expr& e, const Rational& at, const Binding& binding,
                                       const std::string& var) {
    std::unordered_map<const Node*, std::optional<Rational>> memo;
    std::unordered_map<Expr, std::optional<Rational>, ExprHash> funcs;
    std::vector<Expr> keep;
    std::function<std::optional<Rational>(const Expr&)> go = [&](const Expr& x) -> std::optional<Rational> {
        if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
        std::optional<Rational> r;
        switch (x.kind()) {
            case Kind::Number: r = x.number(); break;
            case Kind::Symbol:
                if (x.name() == var) r = at;
                break;
            case Kind::Func: {
                if (auto it = funcs.find(x); it != funcs.end()) {
                    r = it->second;
                    break;
                }
                auto f = binding.functions.find(x.name());
                if (f != binding.functions.end()) {
                    keep.push_back(substitute_function(x, x.name(), f->second, var));
                    r = go(keep.back());
                }
                funcs.emplace(x, r);
                break;
            }
            case Kind::Add:
            case Kind::Mul: {
                const bool sum = x.kind() == Kind::Add;
                Rational acc = sum ? 0 : 1;
                bool ok = true;
                for (std::size_t i = 0; ok && i < x.size(); ++i) {
                    auto v = go(x.operand(i));
                    if (!v) ok = false;
                    else if (sum) acc += *v;
                    else acc *= *v;
                }
                if (ok) r = acc;
                break;
            }
            case Kind::Pow: {
                const Expr& ex = x.operand(1);
                if (!ex.is_number() || !is_integer(ex.number()) || abs(ex.number()) > 100000) break;
                auto b = go(x.operand(0));
                if (!b) break;
                long k = ex.number().get_num().get_si();
                if (k < 0 && *b == 0) break;
                Rational p = 1;
                for (long n = 0; n < (k < 0 ? -k : k); ++n) p *= *b;
                r = k < 0 ? Rational(1) / p : p;
                break;
            }
            default: break;
        }
        memo.emplace(x.id(), r);
        return r;
    };
    return go(e);
}

}  // namespace qsusy
