#include "qsusy/expr.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include "qsusy/errors.hpp"

namespace qsusy {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t rational_hash(const Rational& q) {
    std::size_t h = static_cast<std::size_t>(mpz_sgn(q.get_num_mpz_t()) + 2);
    h = mix(h, static_cast<std::size_t>(mpz_getlimbn(q.get_num_mpz_t(), 0)));
    h = mix(h, static_cast<std::size_t>(mpz_getlimbn(q.get_den_mpz_t(), 0)));
    return h;
}

}  // namespace

struct ExprFactory {
    static Expr make(Node n) {
        std::size_t h = static_cast<std::size_t>(n.kind) * 0x51ed27u;
        switch (n.kind) {
            case Kind::Number: h = mix(h, rational_hash(n.value)); break;
            case Kind::Symbol: h = mix(h, std::hash<std::string>{}(n.name)); break;
            case Kind::Func:
                h = mix(h, std::hash<std::string>{}(n.name));
                h = mix(h, static_cast<std::size_t>(n.order));
                break;
            default: break;
        }
        for (const auto& o : n.ops) h = mix(h, o.hash());
        n.hash = h;
        return Expr(std::make_shared<const Node>(std::move(n)));
    }
    static Expr number(const Rational& q) {
        Node n;
        n.kind = Kind::Number;
        // mpq_set mishandles a negative denominator, so copy numerator and denominator separately.
        n.value = Rational(q.get_num(), q.get_den());
        n.value.canonicalize();
        return make(std::move(n));
    }
    static Expr compound(Kind k, std::vector<Expr> ops) {
        Node n;
        n.kind = k;
        n.ops = std::move(ops);
        return make(std::move(n));
    }
};

namespace {

const Expr& zero_expr() {
    static const Expr z = ExprFactory::number(Rational(0));
    return z;
}
const Expr& one_expr() {
    static const Expr o = ExprFactory::number(Rational(1));
    return o;
}

Expr raw(Kind k, std::vector<Expr> ops) { return ExprFactory::compound(k, std::move(ops)); }

std::pair<Expr, Expr> split_power(const Expr& f) {
    if (f.kind() == Kind::Pow) return {f.operand(0), f.operand(1)};
    return {f, one_expr()};
}

/// Builds a product node from an already canonical coefficient and sorted factor list.
Expr assemble_mul(const Rational& coeff, std::vector<Expr> factors) {
    if (coeff == 0) return zero_expr();
    if (factors.empty()) return Expr(coeff);
    if (factors.size() == 1 && coeff == 1) return factors.front();
    if (coeff != 1) factors.insert(factors.begin(), Expr(coeff));
    return raw(Kind::Mul, std::move(factors));
}

Expr with_coefficient(const Rational& c, const Expr& mono) {
    if (c == 0) return zero_expr();
    if (mono.is_one()) return Expr(c);
    if (c == 1) return mono;
    std::vector<Expr> ops;
    ops.reserve(mono.size() + 1);
    ops.push_back(Expr(c));
    if (mono.kind() == Kind::Mul) {
        for (const auto& o : mono.operands()) ops.push_back(o);
    } else {
        ops.push_back(mono);
    }
    return raw(Kind::Mul, std::move(ops));
}

/// Multiplies every term of a sum by r, keeping term order.
Expr scale_sum(const Expr& sum, const Rational& r) {
    std::vector<Expr> terms;
    terms.reserve(sum.size());
    for (const auto& t : sum.operands()) {
        auto [c, m] = split_coefficient(t);
        terms.push_back(with_coefficient(c * r, m));
    }
    return raw(Kind::Add, std::move(terms));
}

int leading_sign(const Expr& a) {
    if (a.is_number()) return sgn(a.number());
    const Expr& lead = a.kind() == Kind::Add ? a.operand(0) : a;
    return sgn(split_coefficient(lead).first);
}

bool integer_number(const Expr& e) { return e.is_number() && is_integer(e.number()); }

Rational rational_power(const Rational& b, const mpz_class& k) {
    if (!k.fits_slong_p()) throw PreconditionError("exponent too large");
    long n = k.get_si();
    Rational base = b;
    if (n < 0) {
        if (b == 0) throw PreconditionError("division by zero");
        base = 1 / b;
        n = -n;
    }
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(n));
    Rational r(num, den);
    r.canonicalize();
    return r;
}

bool exact_root(const mpz_class& v, unsigned long n, mpz_class& out) {
    if (v < 0) {
        if (n % 2 == 0) return false;
        mpz_class a = -v;
        if (!mpz_root(out.get_mpz_t(), a.get_mpz_t(), n)) return false;
        out = -out;
        return true;
    }
    return mpz_root(out.get_mpz_t(), v.get_mpz_t(), n) != 0;
}

Expr pow_number(const Rational& b, const Expr& e) {
    if (b == 1) return one_expr();
    if (b == 0) {
        if (e.is_number() && e.number() > 0) return zero_expr();
        throw PreconditionError("division by zero");
    }
    if (!e.is_number()) return raw(Kind::Pow, {Expr(b), e});
    const Rational& q = e.number();
    if (is_integer(q)) return Expr(rational_power(b, q.get_num()));
    if (!q.get_den().fits_ulong_p()) return raw(Kind::Pow, {Expr(b), e});
    unsigned long n = q.get_den().get_ui();
    mpz_class rn, rd;
    if (exact_root(b.get_num(), n, rn) && exact_root(b.get_den(), n, rd)) {
        Rational root(rn, rd);
        root.canonicalize();
        return Expr(rational_power(root, q.get_num()));
    }
    if (b < 0) return raw(Kind::Pow, {Expr(b), e});
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    Rational frac = q - Rational(fl);
    Expr root_part = raw(Kind::Pow, {Expr(b), Expr(frac)});
    Rational whole = rational_power(b, fl);
    if (whole == 1) return root_part;
    return raw(Kind::Mul, {Expr(whole), root_part});
}

}  // namespace

std::pair<Rational, Expr> split_coefficient(const Expr& term) {
    if (term.is_number()) return {term.number(), one_expr()};
    if (term.kind() == Kind::Mul && term.operand(0).is_number()) {
        if (term.size() == 2) return {term.operand(0).number(), term.operand(1)};
        std::vector<Expr> rest(term.operands().begin() + 1, term.operands().end());
        return {term.operand(0).number(), raw(Kind::Mul, std::move(rest))};
    }
    return {Rational(1), term};
}

Expr::Expr() : node_(zero_expr().node_) {}

Expr::Expr(const Rational& raw_q) {
    Rational q(raw_q.get_num(), raw_q.get_den());
    q.canonicalize();
    if (q == 0) {
        node_ = zero_expr().node_;
    } else if (q == 1) {
        node_ = one_expr().node_;
    } else {
        node_ = ExprFactory::number(q).node_;
    }
}

Expr Expr::symbol(const std::string& name) {
    if (name.empty()) throw PreconditionError("empty symbol name");
    Node n;
    n.kind = Kind::Symbol;
    n.name = name;
    return ExprFactory::make(std::move(n));
}

Expr Expr::function(const std::string& name, int order, const Expr& arg) {
    if (order < 0) throw PreconditionError("negative derivative order");
    Node n;
    n.kind = Kind::Func;
    n.name = name;
    n.order = order;
    n.ops = {arg};
    return ExprFactory::make(std::move(n));
}

Kind Expr::kind() const { return node_->kind; }
bool Expr::is_zero() const { return node_->kind == Kind::Number && node_->value == 0; }
bool Expr::is_one() const { return node_->kind == Kind::Number && node_->value == 1; }
const Rational& Expr::number() const {
    if (node_->kind != Kind::Number) throw PreconditionError("expression is not a number");
    return node_->value;
}
const std::string& Expr::name() const { return node_->name; }
int Expr::order() const { return node_->order; }
std::span<const Expr> Expr::operands() const { return {node_->ops.data(), node_->ops.size()}; }
std::size_t Expr::hash() const { return node_->hash; }
std::string Expr::str() const { return to_string(*this); }

Expr Expr::operator-() const { return mul({Expr(-1), *this}); }
Expr& Expr::operator+=(const Expr& o) { return *this = *this + o; }
Expr& Expr::operator-=(const Expr& o) { return *this = *this - o; }
Expr& Expr::operator*=(const Expr& o) { return *this = *this * o; }
Expr& Expr::operator/=(const Expr& o) { return *this = *this / o; }

int compare(const Expr& a, const Expr& b) {
    if (a.id() == b.id()) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
        case Kind::Number: {
            int c = cmp(a.number(), b.number());
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case Kind::Symbol: return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
        case Kind::Func: {
            int c = a.name().compare(b.name());
            if (c != 0) return c < 0 ? -1 : 1;
            if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
            break;
        }
        default: break;
    }
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = compare(a.operand(i), b.operand(i));
        if (c != 0) return c;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.id() == b.id()) return true;
    if (a.hash() != b.hash()) return false;
    return compare(a, b) == 0;
}

Expr add(std::vector<Expr> terms) {
    Rational constant = 0;
    std::map<Expr, Rational, ExprLess> acc;
    auto take = [&](const Expr& t) {
        if (t.is_number()) {
            constant += t.number();
            return;
        }
        auto [c, m] = split_coefficient(t);
        auto it = acc.find(m);
        if (it == acc.end()) {
            acc.emplace(m, c);
        } else {
            it->second += c;
        }
    };
    for (const auto& t : terms) {
        if (t.kind() == Kind::Add) {
            for (const auto& o : t.operands()) take(o);
        } else {
            take(t);
        }
    }
    std::vector<Expr> out;
    out.reserve(acc.size() + 1);
    if (constant != 0) out.push_back(Expr(constant));
    for (const auto& [m, c] : acc) {
        if (c != 0) out.push_back(with_coefficient(c, m));
    }
    if (out.empty()) return zero_expr();
    if (out.size() == 1) return out.front();
    return raw(Kind::Add, std::move(out));
}

Expr mul(std::vector<Expr> factors) {
    Rational coeff = 1;
    std::vector<Expr> flat;
    std::vector<Expr> exp_args;
    std::function<void(const Expr&)> flatten = [&](const Expr& f) {
        switch (f.kind()) {
            case Kind::Number: coeff *= f.number(); break;
            case Kind::Mul:
                for (const auto& o : f.operands()) flatten(o);
                break;
            case Kind::Exp: exp_args.push_back(f.operand(0)); break;
            default: flat.push_back(f); break;
        }
    };
    for (const auto& f : factors) {
        flatten(f);
        if (coeff == 0) return zero_expr();
    }
    if (exp_args.size() == 1) {
        flat.push_back(raw(Kind::Exp, {exp_args.front()}));
    } else if (exp_args.size() > 1) {
        Expr merged = exp(add(exp_args));
        auto absorb = [&](const Expr& g) {
            if (g.is_number()) {
                coeff *= g.number();
            } else {
                flat.push_back(g);
            }
        };
        if (merged.kind() == Kind::Mul) {
            for (const auto& o : merged.operands()) absorb(o);
        } else {
            absorb(merged);
        }
    }

    struct Group {
        std::vector<Expr> exponents;
        Expr original;
        bool reusable = true;
    };
    std::map<Expr, Group, ExprLess> groups;
    for (const auto& f : flat) {
        auto [b, e] = split_power(f);
        bool normalized = false;
        if (b.kind() == Kind::Add && integer_number(e)) {
            Rational lead = split_coefficient(b.operand(0)).first;
            if (lead != 1) {
                coeff *= rational_power(lead, e.number().get_num());
                b = scale_sum(b, 1 / lead);
                normalized = true;
            }
        }
        Group& g = groups[b];
        g.exponents.push_back(e);
        g.original = f;
        g.reusable = g.exponents.size() == 1 && !normalized;
    }

    std::vector<Expr> out;
    std::vector<Expr> sums;
    for (auto& [b, g] : groups) {
        const auto& es = g.exponents;
        Expr p;
        if (g.reusable) {
            p = g.original;
        } else {
            Expr e = es.size() == 1 ? es.front() : add(es);
            if (e.is_zero()) continue;
            p = pow(b, e);
        }
        switch (p.kind()) {
            case Kind::Number: coeff *= p.number(); break;
            case Kind::Mul:
                for (const auto& o : p.operands()) {
                    if (o.is_number()) {
                        coeff *= o.number();
                    } else {
                        out.push_back(o);
                    }
                }
                break;
            case Kind::Add: sums.push_back(p); break;
            default: out.push_back(p); break;
        }
    }
    if (coeff == 0) return zero_expr();
    std::sort(out.begin(), out.end(), [](const Expr& x, const Expr& y) {
        int c = compare(split_power(x).first, split_power(y).first);
        if (c != 0) return c < 0;
        return compare(x, y) < 0;
    });
    Expr prod = assemble_mul(coeff, std::move(out));
    if (sums.empty()) return prod;

    std::vector<Expr> terms{prod};
    for (const auto& s : sums) {
        std::vector<Expr> next;
        next.reserve(terms.size() * s.size());
        for (const auto& t : terms) {
            for (const auto& u : s.operands()) {
                Expr m = mul({t, u});
                if (m.kind() == Kind::Add) {
                    for (const auto& o : m.operands()) next.push_back(o);
                } else {
                    next.push_back(m);
                }
            }
        }
        terms = std::move(next);
    }
    return add(std::move(terms));
}

Expr pow(const Expr& base, const Expr& exponent) {
    if (exponent.is_zero()) return one_expr();
    if (exponent.is_one()) return base;
    switch (base.kind()) {
        case Kind::Number: return pow_number(base.number(), exponent);
        case Kind::Pow: return pow(base.operand(0), base.operand(1) * exponent);
        case Kind::Exp: return exp(base.operand(0) * exponent);
        case Kind::Mul: {
            auto [c, rest] = split_coefficient(base);
            if (integer_number(exponent) || c > 0) {
                std::vector<Expr> parts;
                parts.push_back(pow_number(c, exponent));
                if (rest.kind() == Kind::Mul) {
                    for (const auto& o : rest.operands()) parts.push_back(pow(o, exponent));
                } else {
                    parts.push_back(pow(rest, exponent));
                }
                return mul(std::move(parts));
            }
            return raw(Kind::Pow, {base, exponent});
        }
        case Kind::Add: {
            if (integer_number(exponent) && exponent.number() > 0 && exponent.number() <= 16) {
                long n = exponent.number().get_num().get_si();
                Expr r = base;
                for (long i = 1; i < n; ++i) {
                    std::vector<Expr> next;
                    std::vector<Expr> lhs;
                    if (r.kind() == Kind::Add) {
                        lhs.assign(r.operands().begin(), r.operands().end());
                    } else {
                        lhs.push_back(r);
                    }
                    next.reserve(lhs.size() * base.size());
                    for (const auto& t : lhs) {
                        for (const auto& u : base.operands()) next.push_back(mul({t, u}));
                    }
                    r = add(std::move(next));
                }
                return r;
            }
            Rational lead = split_coefficient(base.operand(0)).first;
            if (lead != 1 && (integer_number(exponent) || lead > 0)) {
                Expr monic = scale_sum(base, 1 / lead);
                return mul({pow_number(lead, exponent), raw(Kind::Pow, {monic, exponent})});
            }
            return raw(Kind::Pow, {base, exponent});
        }
        default: return raw(Kind::Pow, {base, exponent});
    }
}

Expr exp(const Expr& a) {
    if (a.is_zero()) return one_expr();
    std::vector<Expr> terms;
    if (a.kind() == Kind::Add) {
        terms.assign(a.operands().begin(), a.operands().end());
    } else {
        terms.push_back(a);
    }
    std::vector<Expr> factors;
    std::vector<Expr> rest;
    for (const auto& t : terms) {
        auto [c, m] = split_coefficient(t);
        if (m.kind() == Kind::Log) {
            factors.push_back(pow(m.operand(0), Expr(c)));
        } else {
            rest.push_back(t);
        }
    }
    if (factors.empty()) return raw(Kind::Exp, {a});
    if (!rest.empty()) factors.push_back(exp(add(rest)));
    return mul(std::move(factors));
}

Expr log(const Expr& a) {
    if (a.is_one()) return zero_expr();
    if (a.kind() == Kind::Exp) return a.operand(0);
    if (a.kind() == Kind::Pow) return a.operand(1) * log(a.operand(0));
    return raw(Kind::Log, {a});
}

Expr sin(const Expr& a) {
    if (a.is_zero()) return zero_expr();
    if (leading_sign(a) < 0) return -raw(Kind::Sin, {-a});
    return raw(Kind::Sin, {a});
}

Expr cos(const Expr& a) {
    if (a.is_zero()) return one_expr();
    if (leading_sign(a) < 0) return raw(Kind::Cos, {-a});
    return raw(Kind::Cos, {a});
}

Expr tan(const Expr& a) { return sin(a) * pow(cos(a), Expr(-1)); }

Expr sqrt(const Expr& a) { return pow(a, Expr(Rational(1, 2))); }

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    return add({a, b});
}
Expr operator-(const Expr& a, const Expr& b) {
    if (b.is_zero()) return a;
    return add({a, mul({Expr(-1), b})});
}
Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    return mul({a, b});
}
Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_zero()) throw PreconditionError("division by zero");
    return mul({a, pow(b, Expr(-1))});
}

std::size_t tree_size(const Expr& e) {
    std::size_t n = 1;
    for (const auto& o : e.operands()) n += tree_size(o);
    return n;
}

}  // namespace qsusy
