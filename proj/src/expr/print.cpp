#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qsusy/errors.hpp"
#include "qsusy/expr.hpp"

namespace qsusy {

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw ParseError("empty number", 0);
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational a = parse_rational(s.substr(0, slash));
        Rational b = parse_rational(s.substr(slash + 1));
        if (b == 0) throw ParseError("zero denominator", slash);
        return a / b;
    }
    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') {
        neg = s[i] == '-';
        ++i;
    }
    mpz_class mant = 0;
    long scale = 0;
    bool digits = false;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
        mant = mant * 10 + (s[i] - '0');
        digits = true;
    }
    if (i < s.size() && s[i] == '.') {
        for (++i; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
            mant = mant * 10 + (s[i] - '0');
            --scale;
            digits = true;
        }
    }
    if (!digits) throw ParseError("malformed number '" + s + "'", i);
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        std::size_t start = i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        if (i == s.size()) throw ParseError("malformed exponent", i);
        for (std::size_t j = i; j < s.size(); ++j) {
            if (!std::isdigit(static_cast<unsigned char>(s[j]))) throw ParseError("malformed exponent", j);
        }
        scale += std::stol(s.substr(start));
        i = s.size();
    }
    if (i != s.size()) throw ParseError("malformed number '" + s + "'", i);
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    Rational r = scale < 0 ? Rational(mant, p10) : Rational(mant * p10);
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

namespace {

bool is_atom(const Expr& e) {
    switch (e.kind()) {
        case Kind::Symbol:
        case Kind::Func:
        case Kind::Exp:
        case Kind::Log:
        case Kind::Sin:
        case Kind::Cos: return true;
        case Kind::Number: return e.number() >= 0 && is_integer(e.number());
        default: return false;
    }
}

struct Printer {
    bool tex = false;

    std::string call(const char* fn, const Expr& arg) const {
        if (tex) return std::string("\\") + fn + "\\left(" + print(arg) + "\\right)";
        return std::string(fn) + "(" + print(arg) + ")";
    }

    std::string atom(const Expr& e) const {
        switch (e.kind()) {
            case Kind::Number: return to_string(e.number());
            case Kind::Symbol: return e.name();
            case Kind::Func: {
                std::string s = e.name();
                if (tex && e.order() > 3) {
                    s += "^{(" + std::to_string(e.order()) + ")}";
                } else {
                    s += std::string(static_cast<std::size_t>(e.order()), '\'');
                }
                return s + (tex ? "\\left(" + print(e.operand(0)) + "\\right)" : "(" + print(e.operand(0)) + ")");
            }
            case Kind::Exp:
                if (tex) return "\\mathrm{e}^{" + print(e.operand(0)) + "}";
                return call("exp", e.operand(0));
            case Kind::Log: return call("log", e.operand(0));
            case Kind::Sin: return call("sin", e.operand(0));
            case Kind::Cos: return call("cos", e.operand(0));
            default: return "(" + print(e) + ")";
        }
    }

    std::string power(const Expr& base, const Expr& ex) const {
        std::string b = is_atom(base) ? atom(base) : (tex ? "\\left(" + print(base) + "\\right)" : "(" + print(base) + ")");
        if (ex.is_one()) return b;
        if (tex) return b + "^{" + print(ex) + "}";
        bool simple = (ex.is_number() && ex.number() > 0 && is_integer(ex.number())) || ex.kind() == Kind::Symbol;
        return b + "^" + (simple ? print(ex) : "(" + print(ex) + ")");
    }

    std::string join(const std::vector<std::string>& parts) const {
        std::string out;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out += tex ? " " : "*";
            out += parts[i];
        }
        return out;
    }

    /// Prints |c| * m with the sign handled by the caller.
    std::string term(const Rational& c, const Expr& m) const {
        std::vector<Expr> factors;
        if (m.kind() == Kind::Mul) {
            factors.assign(m.operands().begin(), m.operands().end());
        } else if (!m.is_one()) {
            factors.push_back(m);
        }
        std::vector<std::string> num, den;
        Rational a = abs(c);
        for (const auto& f : factors) {
            if (f.kind() == Kind::Pow && f.operand(1).is_number() && f.operand(1).number() < 0) {
                den.push_back(power(f.operand(0), Expr(Rational(-f.operand(1).number()))));
            } else if (f.kind() == Kind::Pow) {
                num.push_back(power(f.operand(0), f.operand(1)));
            } else if (f.kind() == Kind::Add) {
                num.push_back(tex ? "\\left(" + print(f) + "\\right)" : "(" + print(f) + ")");
            } else {
                num.push_back(atom(f));
            }
        }
        if (a.get_num() != 1 || num.empty()) num.insert(num.begin(), a.get_num().get_str());
        if (a.get_den() != 1) den.insert(den.begin(), a.get_den().get_str());
        std::string n = join(num);
        if (den.empty()) return n;
        if (tex) return "\\frac{" + n + "}{" + join(den) + "}";
        std::string d = join(den);
        if (den.size() > 1) d = "(" + d + ")";
        return n + "/" + d;
    }

    std::string print(const Expr& e) const {
        if (e.kind() == Kind::Add) {
            std::string out;
            for (std::size_t i = 0; i < e.size(); ++i) {
                auto [c, m] = split_coefficient(e.operand(i));
                if (i == 0) {
                    out += (c < 0 ? "-" : "") + term(c, m);
                } else {
                    out += (c < 0 ? " - " : " + ") + term(c, m);
                }
            }
            return out;
        }
        auto [c, m] = split_coefficient(e);
        return (c < 0 ? "-" : "") + term(c, m);
    }
};

}  // namespace

std::string to_string(const Expr& e) { return Printer{false}.print(e); }
std::string to_tex(const Expr& e) { return Printer{true}.print(e); }

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

}  // namespace qsusy
