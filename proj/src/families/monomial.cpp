#include "qsusy/errors.hpp"
#include "qsusy/families.hpp"

namespace qsusy {

namespace {

DiffOp op2(const Expr& a2, const Expr& a1, const Expr& a0, const std::string& var) {
    return DiffOp({{2, a2}, {1, a1}, {0, a0}}, var);
}

}  // namespace

void require_lambda(const Expr& lambda) {
    if (lambda.is_number() && (lambda.is_zero() || lambda.is_one())) {
        throw PreconditionError("lambda = " + to_string(lambda) + " makes the monomial family degenerate");
    }
}

bool lambda_is_flagged(const Rational& lambda) { return is_integer(lambda) && lambda >= -2 && lambda <= 3; }

Expr family_lambda(Family family, const Expr& lambda) {
    switch (family) {
        case Family::A: return Expr(2);
        case Family::B: return Expr(3);
        default: return lambda;
    }
}

Expr family_f(Family family, const Expr& lambda, const std::string& var) {
    return pow(sym(var), family_lambda(family, lambda));
}

DiffOp monomial_op(Side side, int i, const Expr& l, const std::string& var) {
    if (i < 1 || i > 8) throw PreconditionError("monomial operator index must lie in 1..8, got " + std::to_string(i));
    require_lambda(l);
    Expr z = sym(var);
    auto zp = [&](const Expr& e) { return pow(z, e); };
    if (side == Side::Minus) {
        switch (i) {
            case 1: return op2(zp(2 - l), 0, 0, var);
            case 2: return op2(zp(3 - l), 0, 0, var);
            case 3: return op2(z * z, 0, 0, var);
            case 4: return op2(z, -(l - 1), 0, var);
            case 5: return op2(z * z, -(l - 1) * z, 0, var);
            case 6: return op2(zp(l + 1), -(l - 1) * zp(l), 0, var);
            case 7: return op2(zp(3), -l * z * z, l * z, var);
            default: return op2(zp(l + 2), -l * zp(l + 1), l * zp(l), var);
        }
    }
    switch (i) {
        case 1: return op2(zp(2 - l), (l - 2) * zp(1 - l), -(l - 2) * zp(-l), var);
        case 2: return op2(zp(3 - l), (l - 3) * zp(2 - l), Expr(-2) * (l - 2) * zp(1 - l), var);
        case 3: return op2(z * z, Expr(-2) * z, 2, var);
        case 4: return op2(z, l - 2, -(l - 2) * zp(-1), var);
        case 5: return op2(z * z, (l - 3) * z, Expr(-2) * (l - 2), var);
        case 6: return op2(zp(l + 1), Expr(-2) * zp(l), Expr(2) * zp(l - 1), var);
        case 7: return op2(zp(3), (l - 3) * z * z, Expr(-2) * (l - 2) * z, var);
        default: return op2(zp(l + 2), Expr(-2) * zp(l + 1), Expr(2) * zp(l), var);
    }
}

std::vector<DiffOp> monomial_family(Side side, const Expr& lambda, const std::string& var) {
    std::vector<DiffOp> out;
    for (int i = 1; i <= 8; ++i) out.push_back(monomial_op(side, i, lambda, var));
    return out;
}

Expr monomial_normalization(int i, const Expr& lambda) {
    if (i <= 3) return lambda * (lambda - 1);
    if (i <= 6) return lambda - 1;
    return lambda;
}

}  // namespace qsusy
