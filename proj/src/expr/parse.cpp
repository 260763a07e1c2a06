#include "qsusy/parse.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "qsusy/errors.hpp"

namespace qsusy {

namespace {

const std::vector<std::string> kBuiltins = {"exp", "log", "sin", "cos", "tan", "sqrt"};

class Parser {
public:
    Parser(std::string_view text, const ParseOptions& opt) : s_(text), opt_(opt) {}

    ParseTree run() {
        ParseTree t = expression();
        skip();
        if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return t;
    }

private:
    std::string_view s_;
    const ParseOptions& opt_;
    std::size_t pos_ = 0;

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    static ParseTree node(ParseTree::Op op, std::vector<ParseTree> ch) {
        ParseTree t;
        t.op = op;
        t.children = std::move(ch);
        return t;
    }

    ParseTree expression() {
        ParseTree lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = node(ParseTree::Op::Add, {std::move(lhs), term()});
            } else if (accept('-')) {
                lhs = node(ParseTree::Op::Sub, {std::move(lhs), term()});
            } else {
                return lhs;
            }
        }
    }

    ParseTree term() {
        ParseTree lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = node(ParseTree::Op::Mul, {std::move(lhs), unary()});
            } else if (accept('/')) {
                lhs = node(ParseTree::Op::Div, {std::move(lhs), unary()});
            } else {
                return lhs;
            }
        }
    }

    ParseTree unary() {
        if (accept('-')) return node(ParseTree::Op::Neg, {unary()});
        if (accept('+')) return unary();
        return power();
    }

    ParseTree power() {
        ParseTree base = primary();
        if (accept('^')) return node(ParseTree::Op::Pow, {std::move(base), unary()});
        return base;
    }

    ParseTree primary() {
        skip();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            ParseTree t = expression();
            expect(')');
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    ParseTree number() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        ParseTree t;
        t.op = ParseTree::Op::Number;
        try {
            t.value = parse_rational(s_.substr(start, pos_ - start));
        } catch (const ParseError&) {
            throw ParseError("malformed number", start);
        }
        return t;
    }

    ParseTree identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        std::string id(s_.substr(start, pos_ - start));
        bool opaque = std::find(opt_.functions.begin(), opt_.functions.end(), id) != opt_.functions.end();
        if (opaque) {
            int order = 0;
            while (pos_ < s_.size() && s_[pos_] == '\'') {
                ++order;
                ++pos_;
            }
            ParseTree t;
            t.op = ParseTree::Op::Opaque;
            t.name = id;
            t.order = order;
            if (accept('(')) {
                t.children.push_back(expression());
                expect(')');
            } else {
                ParseTree v;
                v.op = ParseTree::Op::Symbol;
                v.name = opt_.variable;
                t.children.push_back(v);
            }
            return t;
        }
        skip();
        if (pos_ < s_.size() && s_[pos_] == '(') {
            if (std::find(kBuiltins.begin(), kBuiltins.end(), id) == kBuiltins.end()) {
                throw ParseError("unknown function name '" + id + "'", start);
            }
            ++pos_;
            ParseTree t;
            t.op = ParseTree::Op::Call;
            t.name = id;
            t.children.push_back(expression());
            expect(')');
            return t;
        }
        if (std::find(kBuiltins.begin(), kBuiltins.end(), id) != kBuiltins.end()) {
            throw ParseError("function '" + id + "' needs an argument", pos_);
        }
        ParseTree t;
        t.op = ParseTree::Op::Symbol;
        t.name = id;
        return t;
    }
};

}  // namespace

ParseTree parse_tree(std::string_view text, const ParseOptions& options) { return Parser(text, options).run(); }

Expr to_expr(const ParseTree& t) {
    using Op = ParseTree::Op;
    switch (t.op) {
        case Op::Number: return Expr(t.value);
        case Op::Symbol: return Expr::symbol(t.name);
        case Op::Neg: return -to_expr(t.children[0]);
        case Op::Add: return to_expr(t.children[0]) + to_expr(t.children[1]);
        case Op::Sub: return to_expr(t.children[0]) - to_expr(t.children[1]);
        case Op::Mul: return to_expr(t.children[0]) * to_expr(t.children[1]);
        case Op::Div: return to_expr(t.children[0]) / to_expr(t.children[1]);
        case Op::Pow: return pow(to_expr(t.children[0]), to_expr(t.children[1]));
        case Op::Opaque: return Expr::function(t.name, t.order, to_expr(t.children[0]));
        case Op::Call: {
            Expr a = to_expr(t.children[0]);
            if (t.name == "exp") return exp(a);
            if (t.name == "log") return log(a);
            if (t.name == "sin") return sin(a);
            if (t.name == "cos") return cos(a);
            if (t.name == "tan") return tan(a);
            return sqrt(a);
        }
    }
    return Expr();
}

Expr parse(std::string_view text, const ParseOptions& options) {
    ParseTree t = parse_tree(text, options);
    try {
        return to_expr(t);
    } catch (const PreconditionError& e) {
        throw ParseError(e.what(), 0);
    }
}

double evaluate_tree(const ParseTree& t, const std::map<std::string, double>& values) {
    using Op = ParseTree::Op;
    auto ev = [&](std::size_t i) { return evaluate_tree(t.children[i], values); };
    switch (t.op) {
        case Op::Number: return t.value.get_d();
        case Op::Symbol: {
            auto it = values.find(t.name);
            if (it == values.end()) throw EvalError(EvalFailure::Unbound, "unbound symbol '" + t.name + "'");
            return it->second;
        }
        case Op::Neg: return -ev(0);
        case Op::Add: return ev(0) + ev(1);
        case Op::Sub: return ev(0) - ev(1);
        case Op::Mul: return ev(0) * ev(1);
        case Op::Div: return ev(0) / ev(1);
        case Op::Pow: return std::pow(ev(0), ev(1));
        case Op::Opaque: throw EvalError(EvalFailure::Unbound, "opaque function '" + t.name + "' in syntax tree");
        case Op::Call: {
            double a = ev(0);
            if (t.name == "exp") return std::exp(a);
            if (t.name == "log") return std::log(a);
            if (t.name == "sin") return std::sin(a);
            if (t.name == "cos") return std::cos(a);
            if (t.name == "tan") return std::tan(a);
            return std::sqrt(a);
        }
    }
    return 0.0;
}

}  // namespace qsusy
