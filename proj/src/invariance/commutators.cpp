#include "qsusy/calculus.hpp"
#include "qsusy/errors.hpp"
#include "qsusy/families.hpp"
#include "qsusy/invariance.hpp"

namespace qsusy {

namespace {

struct RhsTerm {
    Expr a;
    Expr b;
    int target;
};

std::vector<RhsTerm> table_row(int i, int j, const Expr& f, const std::string& var) {
    const Expr z = sym(var);
    const Expr f1 = differentiate(f, var);
    const Expr f2 = differentiate(f1, var);
    const Expr g = z * f1 - f;
    const Expr r = pow(f2, Expr(-1));
    const Expr two(2);
    const Expr zero;
    const Expr one(1);
    switch (i * 10 + j) {
        case 12: return {{two * r, zero, 1}};
        case 13: return {{two * f1 * r, one, 1}};
        case 14: return {{two, zero, 1}};
        case 15: return {{two * z, zero, 1}, {two * r, zero, 4}};
        case 16: return {{two * f, zero, 1}, {two * f1 * r, one, 4}};
        case 17: return {{two * z * z, -z, 1}, {two * r, zero, 9}};
        case 18: return {{two * z * f, -f, 1}, {two * f1 * r, one, 9}};
        case 23: return {{two * g * r, z, 1}};
        case 24: return {{two * (z * f2 - f1) * r, one, 1}};
        case 25: return {{two * z * (z * f2 - f1) * r, z, 1}, {two * z * r, zero, 4}};
        case 26: return {{two * f * (z * f2 - f1) * r, f, 1}, {two * z * f1 * r, z, 4}};
        case 27: return {{two * z * (z * z * f2 - z * f1 + f) * r, zero, 1}, {two * z * r, zero, 9}};
        case 28: return {{two * f * (z * z * f2 - z * f1 + f) * r, zero, 1}, {two * z * f1 * r, z, 9}};
        case 34: return {{two * (f * f2 - f1 * f1) * r, zero, 1}};
        case 35: return {{two * z * (f * f2 - f1 * f1) * r, zero, 1}, {two * f * r, zero, 4}};
        case 36: return {{two * f * (f * f2 - f1 * f1) * r, zero, 1}, {two * f * f1 * r, f, 4}};
        case 37: return {{two * z * (z * f * f2 - z * f1 * f1 + f * f1) * r, zero, 1}, {two * f * r, zero, 9}};
        case 38: return {{two * f * (z * f * f2 - z * f1 * f1 + f * f1) * r, zero, 1}, {two * f * f1 * r, f, 9}};
        case 45: return {{two * f1 * r, -one, 4}};
        case 46: return {{two * f1 * f1 * r, zero, 4}};
        case 47: return {{two * z * f, zero, 1}, {zero, -z, 4}, {two * f1 * r, -one, 9}};
        case 48: return {{two * f * f, zero, 1}, {zero, -f, 4}, {two * f1 * f1 * r, zero, 9}};
        case 56: return {{two * f1 * g * r, f, 4}};
        case 57: return {{two * z * z * f, zero, 1}, {-two * z * g * r, zero, 4}, {two * z * f1 * r, -z, 9}};
        case 58: return {{two * z * f * f, zero, 1}, {-two * f * g * r, zero, 4}, {two * z * f1 * f1 * r, zero, 9}};
        case 67: return {{two * z * f * f, zero, 1}, {-two * z * f1 * g * r, zero, 4}, {two * f * f1 * r, -f, 9}};
        case 68: return {{two * f * f * f, zero, 1}, {-two * f * f1 * g * r, zero, 4}, {two * f * f1 * f1 * r, zero, 9}};
        case 78: return {{two * (z * z * f1 * f1 - two * z * f * f1 + f * f) * r, zero, 9}};
        default: throw PreconditionError("commutator table has no entry [J" + std::to_string(i) + ",J" + std::to_string(j) + "]");
    }
}

std::string pair_label(int i, int j) { return "[J" + std::to_string(i) + ",J" + std::to_string(j) + "]"; }

}  // namespace

DiffOp commutator_rhs(int i, int j, const Expr& f, const std::string& var) {
    DiffOp out(var);
    for (const auto& t : table_row(i, j, f, var)) {
        DiffOp left({{1, t.a}, {0, t.b}}, var);
        out = out + left * build_J(t.target, f, var);
    }
    return out;
}

std::vector<CommutatorCheck> verify_commutator_table(const Expr& f, const SamplePlan& plan, const Binding& binding) {
    require_admissible(f);
    std::vector<DiffOp> j;
    for (int i = 1; i <= 8; ++i) j.push_back(build_J(i, f));
    std::vector<CommutatorCheck> out;
    for (int a = 1; a <= 8; ++a) {
        for (int b = a + 1; b <= 8; ++b) {
            CommutatorCheck c;
            c.i = a;
            c.j = b;
            c.anchor = "commutator table " + pair_label(a, b);
            DiffOp lhs = commutator(j[static_cast<std::size_t>(a - 1)], j[static_cast<std::size_t>(b - 1)]);
            c.result = ops_equivalent(lhs, commutator_rhs(a, b, f), binding, plan);
            out.push_back(c);
        }
    }
    return out;
}

ClosureReport check_lie_closure(const Expr& alpha_m, const Expr& alpha_0, const Expr& alpha_p, const Expr& f,
                                const Binding& binding, const SamplePlan& plan) {
    ClosureReport r;
    r.jm = build_J(2, f) + alpha_m * build_J(4, f);
    r.j0 = build_J(3, f) + alpha_0 * build_J(5, f);
    r.jp = build_J(6, f) + alpha_p * build_J(7, f);
    DiffOp c1 = commutator(r.jm, r.j0);
    DiffOp c2 = commutator(r.jp, r.j0);
    DiffOp c3 = commutator(r.jp, r.jm);
    r.orders[0] = effective_order(c1, binding, plan);
    r.orders[1] = effective_order(c2, binding, plan);
    r.orders[2] = effective_order(c3, binding, plan);
    r.second_order = r.orders[0] <= 2 && r.orders[1] <= 2 && r.orders[2] <= 2;
    r.first_order_generators = effective_order(r.jm, binding, plan) <= 1 && effective_order(r.j0, binding, plan) <= 1 &&
                               effective_order(r.jp, binding, plan) <= 1;
    if (r.second_order && r.first_order_generators) {
        const Expr half(Rational(1, 2));
        r.closed = ops_equivalent(c1, half * r.jm, binding, plan).equal &&
                   ops_equivalent(c2, -half * r.jp, binding, plan).equal &&
                   ops_equivalent(c3, Expr(-2) * r.j0 + Expr(1), binding, plan).equal;
    }
    return r;
}

}  // namespace qsusy
