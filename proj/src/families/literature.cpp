#include "qsusy/errors.hpp"
#include "qsusy/families.hpp"

namespace qsusy {

namespace {

struct Theta {
    std::string var;
    Expr z;

    explicit Theta(const std::string& v) : var(v), z(sym(v)) {}

    DiffOp d(int k = 1) const { return DiffOp::d(var, k); }
    /// z d/dz - c
    DiffOp t(const Expr& c) const { return DiffOp({{1, z}, {0, -c}}, var); }
    DiffOp m(const Expr& c) const { return DiffOp::multiply(c, var); }
};

std::vector<NamedOp> type_c(Side side, const Expr& l, const std::string& var) {
    Theta th(var);
    const Expr& z = th.z;
    if (side == Side::Minus) {
        return {
            {"J0", th.t(0)},
            {"J0-", th.d() * th.t(l)},
            {"J00", z * z * th.d(2)},
            {"J+0", z * (th.t(1) * th.t(l))},
            {"J#-", pow(z, l) * (th.d() * th.t(l))},
            {"J#0", pow(z, l) * (th.t(1) * th.t(l))},
        };
    }
    Expr s = Expr(2) - l;
    return {
        {"K0", th.t(1)},
        {"K0-", pow(z, Expr(-1)) * (th.t(1) * th.t(s))},
        {"K00", th.t(2) * th.t(1)},
        {"K+0", z * (th.t(2) * th.t(s))},
        {"K#-", pow(z, -l) * (th.t(1) * th.t(s))},
        {"K#0", pow(z, 1 - l) * (th.t(2) * th.t(s))},
    };
}

std::vector<NamedOp> type_b(Side side, const std::string& var) {
    Theta th(var);
    const Expr& z = th.z;
    if (side == Side::Minus) {
        return {
            {"J0", th.t(0)},
            {"J--", th.d(2)},
            {"J0-", th.d() * th.t(3)},
            {"J00", z * z * th.d(2)},
            {"J+0", z * (th.t(3) * th.t(1))},
            {"J++", pow(z, Expr(3)) * (th.d() * th.t(3))},
            {"J3+", pow(z, Expr(3)) * (th.t(3) * th.t(1))},
        };
    }
    return {
        {"K0", th.t(0)},
        {"K--", pow(z, Expr(-2)) * (th.t(-1) * th.t(2))},
        {"K0-", pow(z, Expr(-1)) * (th.t(-1) * th.t(1))},
        {"K00", z * z * th.d(2)},
        {"K+0", z * (th.t(2) * th.t(-1))},
        {"K++", z * z * (th.t(2) * th.t(1))},
        {"K3+", pow(z, Expr(3)) * (th.t(2) * th.t(1))},
    };
}

std::vector<NamedOp> type_a(Side side, const std::string& var) {
    Theta th(var);
    const Expr& z = th.z;
    const std::string p = side == Side::Minus ? "J" : "K";
    return {
        {p + "-", th.d()},
        {p + "0", th.t(0)},
        {p + "+", z * th.t(2)},
        {p + "--", th.d(2)},
        {p + "0-", z * th.d(2)},
        {p + "00", z * z * th.d(2)},
        {p + "+0", z * z * (th.d() * th.t(2))},
        {p + "++", z * z * (th.t(2) * th.t(1))},
    };
}

BasisTerm term(const std::vector<NamedOp>& ops, const std::string& name, const std::string& parameter,
               const Expr& value, const Expr& coefficient) {
    return {name, parameter, value, coefficient, find_op(ops, name)};
}

BasisTerm bare(const std::string& name, const Expr& coefficient, DiffOp op) {
    return {name, "", coefficient, coefficient, std::move(op)};
}

}  // namespace

std::vector<NamedOp> literature_ops(Family family, Side side, const Expr& lambda, const std::string& var) {
    switch (family) {
        case Family::A: return type_a(side, var);
        case Family::B: return type_b(side, var);
        default: require_lambda(lambda); return type_c(side, lambda, var);
    }
}

const DiffOp& find_op(const std::vector<NamedOp>& ops, const std::string& name) {
    for (const auto& o : ops) {
        if (o.name == name) return o.op;
    }
    throw PreconditionError("no operator named '" + name + "'");
}

DiffOp LiteratureExpansion::assemble(const std::string& var) const {
    DiffOp out = DiffOp::multiply(constant, var);
    for (const auto& t : terms) out = out + t.coefficient * t.op;
    return out;
}

LiteratureExpansion expand_in_literature_basis(Family family, const HamiltonianCoefficients& h, const Expr& lambda,
                                               const std::string& var) {
    const Expr l = family_lambda(family, lambda);
    require_lambda(l);
    const auto ops = literature_ops(family, Side::Minus, l, var);
    auto j = [&](int i) { return monomial_op(Side::Minus, i, l, var); };
    LiteratureExpansion out;
    out.constant = -h.c0;
    auto& t = out.terms;
    switch (family) {
        case Family::C: {
            Expr a3 = h.c1 / l;
            Expr a2 = -(h.b1 - h.c0) / (l - 1) + (h.a2 - h.c0) / (l * (l - 1));
            Expr a1 = -h.b0 / (l - 1);
            Expr b0 = h.b1 - h.c0;
            t.push_back(bare("J~8", -h.c2 / l, j(8)));
            t.push_back(bare("J~6", h.b2 / (l - 1), j(6)));
            t.push_back(bare("J~2", -h.a1 / (l * (l - 1)), j(2)));
            t.push_back(bare("J~1", -h.a0 / (l * (l - 1)), j(1)));
            t.push_back(term(ops, "J+0", "a3", a3, -a3));
            t.push_back(term(ops, "J00", "a2", a2, -a2));
            t.push_back(term(ops, "J0-", "a1", a1, -a1));
            t.push_back(term(ops, "J0", "b0", b0, -b0));
            break;
        }
        case Family::B: {
            Expr app = -h.b2 / Expr(2);
            Expr ap0 = h.c1 / Expr(3);
            Expr a00 = (h.a2 - Expr(3) * h.b1 + Expr(2) * h.c0) / Expr(6);
            Expr a0m = -h.b0 / Expr(2);
            Expr amm = h.a1 / Expr(6);
            Expr b0 = h.b1 - h.c0;
            t.push_back(bare("J~8", -h.c2 / Expr(3), j(8)));
            t.push_back(bare("J~1", -h.a0 / Expr(6), j(1)));
            t.push_back(term(ops, "J++", "a++", app, -app));
            t.push_back(term(ops, "J+0", "a+0", ap0, -ap0));
            t.push_back(term(ops, "J00", "a00", a00, -a00));
            t.push_back(term(ops, "J0-", "a0-", a0m, -a0m));
            t.push_back(term(ops, "J--", "a--", amm, -amm));
            t.push_back(term(ops, "J0", "b0", b0, -b0));
            break;
        }
        case Family::A: {
            Expr half(Rational(1, 2));
            Expr app = half * h.c2;
            Expr ap0 = half * (h.c1 - Expr(2) * h.b2);
            Expr a00 = half * (h.a2 - Expr(2) * h.b1 + h.c0);
            Expr a0m = half * (h.a1 - Expr(2) * h.b0);
            Expr amm = half * h.a0;
            Expr bp = half * h.c1;
            Expr b0 = h.c0 - h.b1;
            Expr bm = -h.b0;
            t.push_back(term(ops, "J++", "a++", app, -app));
            t.push_back(term(ops, "J+0", "a+0", ap0, -ap0));
            t.push_back(term(ops, "J00", "a00", a00, -a00));
            t.push_back(term(ops, "J0-", "a0-", a0m, -a0m));
            t.push_back(term(ops, "J--", "a--", amm, -amm));
            t.push_back(term(ops, "J+", "b+", bp, bp));
            t.push_back(term(ops, "J0", "b0", b0, b0));
            t.push_back(term(ops, "J-", "b-", bm, bm));
            break;
        }
    }
    return out;
}

}  // namespace qsusy
