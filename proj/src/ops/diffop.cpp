#include <ostream>
#include "qsusy/diffop.hpp"

#include <unordered_map>

#include "qsusy/calculus.hpp"
#include "qsusy/errors.hpp"

namespace qsusy {

namespace {

void require_same_var(const DiffOp& a, const DiffOp& b) {
    if (a.var() != b.var()) {
        throw PreconditionError("operators act on different variables '" + a.var() + "' and '" + b.var() + "'");
    }
}

Expr binomial(int n, int k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Expr(Rational(r));
}

const Expr& zero() {
    static const Expr z;
    return z;
}

}  // namespace

DiffOp::DiffOp(std::string var) : var_(std::move(var)) {}

DiffOp::DiffOp(std::map<int, Expr> coefficients, std::string var) : var_(std::move(var)) {
    for (auto& [k, c] : coefficients) {
        if (k < 0) throw PreconditionError("negative derivative order in operator");
        if (!c.is_zero()) coeffs_.emplace(k, std::move(c));
    }
}

DiffOp DiffOp::d(const std::string& var, int k) { return DiffOp({{k, Expr(1)}}, var); }

DiffOp DiffOp::multiply(const Expr& c, const std::string& var) { return DiffOp({{0, c}}, var); }

int DiffOp::order() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }

const Expr& DiffOp::coeff(int k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? zero() : it->second;
}

std::string DiffOp::str() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        if (!out.empty()) out += " + ";
        std::string c = "(" + to_string(it->second) + ")";
        if (it->first == 0) {
            out += c;
        } else if (it->first == 1) {
            out += c + "*d";
        } else {
            out += c + "*d^" + std::to_string(it->first);
        }
    }
    return out;
}

DiffOp DiffOp::operator-() const { return transform(*this, [](const Expr& c) { return -c; }); }

DiffOp operator+(const DiffOp& a, const DiffOp& b) {
    require_same_var(a, b);
    std::map<int, Expr> m = a.coeffs_;
    for (const auto& [k, c] : b.coeffs_) {
        auto it = m.find(k);
        if (it == m.end()) {
            m.emplace(k, c);
        } else {
            it->second = it->second + c;
        }
    }
    return DiffOp(std::move(m), a.var_);
}

DiffOp operator-(const DiffOp& a, const DiffOp& b) { return a + (-b); }

DiffOp operator*(const DiffOp& a, const DiffOp& b) { return compose(a, b); }

DiffOp operator*(const Expr& c, const DiffOp& a) {
    return transform(a, [&](const Expr& x) { return c * x; });
}

DiffOp operator+(const DiffOp& a, const Expr& c) { return a + DiffOp::multiply(c, a.var()); }
DiffOp operator-(const DiffOp& a, const Expr& c) { return a + DiffOp::multiply(-c, a.var()); }

bool operator==(const DiffOp& a, const DiffOp& b) {
    if (a.var_ != b.var_ || a.coeffs_.size() != b.coeffs_.size()) return false;
    auto i = a.coeffs_.begin();
    auto j = b.coeffs_.begin();
    for (; i != a.coeffs_.end(); ++i, ++j) {
        if (i->first != j->first || !(i->second == j->second)) return false;
    }
    return true;
}

std::ostream& operator<<(std::ostream& os, const DiffOp& op) { return os << op.str(); }

Expr apply(const DiffOp& op, const Expr& psi) {
    std::vector<Expr> terms;
    Expr deriv = psi;
    int at = 0;
    for (const auto& [k, c] : op.coefficients()) {
        while (at < k) {
            deriv = differentiate(deriv, op.var());
            ++at;
        }
        terms.push_back(c * deriv);
    }
    return add(std::move(terms));
}

DiffOp compose(const DiffOp& a, const DiffOp& b) {
    require_same_var(a, b);
    std::map<int, std::vector<Expr>> acc;
    for (const auto& [j, bj] : b.coefficients()) {
        std::vector<Expr> derivs{bj};
        for (const auto& [i, ai] : a.coefficients()) {
            while (static_cast<int>(derivs.size()) <= i) derivs.push_back(differentiate(derivs.back(), a.var()));
            for (int m = 0; m <= i; ++m) {
                const Expr& dm = derivs[static_cast<std::size_t>(m)];
                if (dm.is_zero()) continue;
                acc[i - m + j].push_back(binomial(i, m) * ai * dm);
            }
        }
    }
    std::map<int, Expr> out;
    for (auto& [k, terms] : acc) out.emplace(k, add(std::move(terms)));
    return DiffOp(std::move(out), a.var());
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) { return compose(a, b) - compose(b, a); }

DiffOp gauge_conjugate(const Expr& g, const DiffOp& op) {
    const std::string& v = op.var();
    Expr h = differentiate(g, v) / g;
    DiffOp step = DiffOp::d(v) - h;
    DiffOp power = DiffOp::identity(v);
    DiffOp out(v);
    int at = 0;
    for (const auto& [k, c] : op.coefficients()) {
        while (at < k) {
            power = compose(power, step);
            ++at;
        }
        out = out + c * power;
    }
    return out;
}

DiffOp expand_factored(const std::vector<DiffOp>& factors) {
    if (factors.empty()) throw PreconditionError("empty factor list");
    for (const auto& f : factors) {
        if (f.order() != 1 || !f.coeff(1).is_one()) throw PreconditionError("non-monic factor " + f.str());
    }
    DiffOp out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) out = compose(out, factors[i]);
    return out;
}

DiffOp expand_factored(const std::vector<Expr>& shifts, const std::string& var) {
    std::vector<DiffOp> f;
    f.reserve(shifts.size());
    for (const auto& s : shifts) f.push_back(DiffOp::d(var) + s);
    return expand_factored(f);
}

DiffOp transform(const DiffOp& op, const std::function<Expr(const Expr&)>& f) {
    std::map<int, Expr> m;
    for (const auto& [k, c] : op.coefficients()) m.emplace(k, f(c));
    return DiffOp(std::move(m), op.var());
}

namespace {

struct VariableChange {
    const std::string& old_var;
    const std::string& new_var;
    Expr old_of_new;
    Expr inv_jacobian;
    std::map<std::string, std::vector<Expr>> derivs;
    std::unordered_map<const Node*, Expr> memo;

    const Expr& function_derivative(const std::string& name, int k) {
        auto& list = derivs.at(name);
        while (static_cast<int>(list.size()) <= k) {
            list.push_back(differentiate(list.back(), new_var) * inv_jacobian);
        }
        return list[static_cast<std::size_t>(k)];
    }

    Expr run(const Expr& e) {
        if (e.is_number()) return e;
        auto it = memo.find(e.id());
        if (it != memo.end()) return it->second;
        Expr r;
        if (e.kind() == Kind::Symbol) {
            r = e.name() == old_var ? old_of_new : e;
        } else if (e.kind() == Kind::Func && derivs.count(e.name())) {
            const Expr& a = e.operand(0);
            if (a.kind() != Kind::Symbol || a.name() != old_var) {
                throw PreconditionError("opaque function '" + e.name() + "' applied to a composite argument");
            }
            r = function_derivative(e.name(), e.order());
        } else {
            std::vector<Expr> ops;
            for (const auto& o : e.operands()) ops.push_back(run(o));
            switch (e.kind()) {
                case Kind::Add: r = add(std::move(ops)); break;
                case Kind::Mul: r = mul(std::move(ops)); break;
                case Kind::Pow: r = pow(ops[0], ops[1]); break;
                case Kind::Exp: r = exp(ops[0]); break;
                case Kind::Log: r = log(ops[0]); break;
                case Kind::Sin: r = sin(ops[0]); break;
                case Kind::Cos: r = cos(ops[0]); break;
                case Kind::Func: r = Expr::function(e.name(), e.order(), ops[0]); break;
                default: r = e; break;
            }
        }
        memo.emplace(e.id(), r);
        return r;
    }
};

}  // namespace

DiffOp change_variable(const DiffOp& op, const std::string& new_var, const Expr& old_of_new,
                       const std::map<std::string, Expr>& functions) {
    Expr jac = differentiate(old_of_new, new_var);
    if (jac.is_zero()) throw PreconditionError("degenerate change of variable");
    VariableChange vc{op.var(), new_var, old_of_new, pow(jac, Expr(-1)), {}, {}};
    for (const auto& [name, g] : functions) vc.derivs[name] = {g};
    DiffOp step({{1, vc.inv_jacobian}}, new_var);
    DiffOp power = DiffOp::identity(new_var);
    DiffOp out(new_var);
    int at = 0;
    for (const auto& [k, c] : op.coefficients()) {
        while (at < k) {
            power = compose(step, power);
            ++at;
        }
        out = out + vc.run(c) * power;
    }
    return out;
}

}  // namespace qsusy
