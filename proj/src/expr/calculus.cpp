#include "qsusy/calculus.hpp"

#include <unordered_map>
#include <vector>

#include "qsusy/errors.hpp"

namespace qsusy {

namespace {

using Memo = std::unordered_map<const Node*, Expr>;

Expr rebuild(const Expr& e, std::vector<Expr> ops) {
    switch (e.kind()) {
        case Kind::Add: return add(std::move(ops));
        case Kind::Mul: return mul(std::move(ops));
        case Kind::Pow: return pow(ops[0], ops[1]);
        case Kind::Exp: return exp(ops[0]);
        case Kind::Log: return log(ops[0]);
        case Kind::Sin: return sin(ops[0]);
        case Kind::Cos: return cos(ops[0]);
        case Kind::Func: return Expr::function(e.name(), e.order(), ops[0]);
        default: return e;
    }
}

struct Differ {
    const std::string& var;
    Memo memo;
    std::unordered_map<const Node*, bool> dep;

    bool depends(const Expr& e) {
        auto it = dep.find(e.id());
        if (it != dep.end()) return it->second;
        bool r = false;
        if (e.kind() == Kind::Symbol) {
            r = e.name() == var;
        } else {
            for (const auto& o : e.operands()) {
                if (depends(o)) {
                    r = true;
                    break;
                }
            }
        }
        dep.emplace(e.id(), r);
        return r;
    }

    Expr d(const Expr& e) {
        if (!depends(e)) return Expr();
        auto it = memo.find(e.id());
        if (it != memo.end()) return it->second;
        Expr r;
        switch (e.kind()) {
            case Kind::Symbol: r = Expr(1); break;
            case Kind::Add: {
                std::vector<Expr> terms;
                terms.reserve(e.size());
                for (const auto& t : e.operands()) terms.push_back(d(t));
                r = add(std::move(terms));
                break;
            }
            case Kind::Mul: {
                std::vector<Expr> terms;
                const auto ops = e.operands();
                for (std::size_t i = 0; i < ops.size(); ++i) {
                    if (!depends(ops[i])) continue;
                    std::vector<Expr> f(ops.begin(), ops.end());
                    f[i] = d(ops[i]);
                    terms.push_back(mul(std::move(f)));
                }
                r = add(std::move(terms));
                break;
            }
            case Kind::Pow: {
                const Expr& b = e.operand(0);
                const Expr& x = e.operand(1);
                if (!depends(x)) {
                    r = mul({x, pow(b, x - Expr(1)), d(b)});
                } else {
                    r = e * (d(x) * log(b) + x * d(b) / b);
                }
                break;
            }
            case Kind::Exp: r = e * d(e.operand(0)); break;
            case Kind::Log: r = d(e.operand(0)) / e.operand(0); break;
            case Kind::Sin: r = cos(e.operand(0)) * d(e.operand(0)); break;
            case Kind::Cos: r = -(sin(e.operand(0)) * d(e.operand(0))); break;
            case Kind::Func: r = Expr::function(e.name(), e.order() + 1, e.operand(0)) * d(e.operand(0)); break;
            default: r = Expr(); break;
        }
        memo.emplace(e.id(), r);
        return r;
    }
};

struct Substituter {
    const std::map<std::string, Expr>& symbols;
    Memo memo;

    Expr run(const Expr& e) {
        if (e.kind() == Kind::Number) return e;
        auto it = memo.find(e.id());
        if (it != memo.end()) return it->second;
        Expr r;
        if (e.kind() == Kind::Symbol) {
            auto s = symbols.find(e.name());
            r = s == symbols.end() ? e : s->second;
        } else {
            std::vector<Expr> ops;
            ops.reserve(e.size());
            bool changed = false;
            for (const auto& o : e.operands()) {
                ops.push_back(run(o));
                changed = changed || ops.back().id() != o.id();
            }
            r = changed ? rebuild(e, std::move(ops)) : e;
        }
        memo.emplace(e.id(), r);
        return r;
    }
};

struct FunctionSubstituter {
    const std::string& name;
    const std::string& var;
    std::vector<Expr> derivatives;
    Memo memo;

    const Expr& derivative(int k) {
        while (static_cast<int>(derivatives.size()) <= k) {
            derivatives.push_back(differentiate(derivatives.back(), var));
        }
        return derivatives[static_cast<std::size_t>(k)];
    }

    Expr run(const Expr& e) {
        if (e.kind() == Kind::Number || e.kind() == Kind::Symbol) return e;
        auto it = memo.find(e.id());
        if (it != memo.end()) return it->second;
        std::vector<Expr> ops;
        ops.reserve(e.size());
        bool changed = false;
        for (const auto& o : e.operands()) {
            ops.push_back(run(o));
            changed = changed || ops.back().id() != o.id();
        }
        Expr r;
        if (e.kind() == Kind::Func && e.name() == name) {
            const Expr& dk = derivative(e.order());
            const Expr& arg = ops[0];
            if (arg.kind() == Kind::Symbol && arg.name() == var) {
                r = dk;
            } else {
                r = substitute(dk, var, arg);
            }
        } else {
            r = changed ? rebuild(e, std::move(ops)) : e;
        }
        memo.emplace(e.id(), r);
        return r;
    }
};

bool find_function(const Expr& e, const std::string& name, std::unordered_map<const Node*, bool>& seen) {
    auto it = seen.find(e.id());
    if (it != seen.end()) return it->second;
    bool r = e.kind() == Kind::Func && e.name() == name;
    for (const auto& o : e.operands()) {
        if (r) break;
        r = find_function(o, name, seen);
    }
    seen.emplace(e.id(), r);
    return r;
}

}  // namespace

Expr differentiate(const Expr& e, const std::string& var, int order) {
    if (order < 0) throw PreconditionError("negative differentiation order");
    Expr r = e;
    for (int i = 0; i < order; ++i) {
        Differ d{var, {}, {}};
        r = d.d(r);
    }
    return r;
}

bool depends_on(const Expr& e, const std::string& name) {
    Differ d{name, {}, {}};
    return d.depends(e);
}

bool has_function(const Expr& e, const std::string& name) {
    std::unordered_map<const Node*, bool> seen;
    return find_function(e, name, seen);
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& symbols) {
    Substituter s{symbols, {}};
    return s.run(e);
}

Expr substitute(const Expr& e, const std::string& name, const Expr& replacement) {
    std::map<std::string, Expr> m{{name, replacement}};
    return substitute(e, m);
}

Expr substitute_function(const Expr& e, const std::string& name, const Expr& replacement, const std::string& var) {
    FunctionSubstituter s{name, var, {replacement}, {}};
    return s.run(e);
}

}  // namespace qsusy
