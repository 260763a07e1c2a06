#include "qsusy/families.hpp"

#include "qsusy/calculus.hpp"
#include "qsusy/errors.hpp"

namespace qsusy {

namespace {

struct FData {
    Expr z, f, f1, f2, f3, f4;
};

FData derivatives(const Expr& f, const std::string& var) {
    FData d;
    d.z = sym(var);
    d.f = f;
    d.f1 = differentiate(f, var);
    d.f2 = differentiate(d.f1, var);
    d.f3 = differentiate(d.f2, var);
    d.f4 = differentiate(d.f3, var);
    return d;
}

DiffOp op2(const Expr& a2, const Expr& a1, const Expr& a0, const std::string& var) {
    return DiffOp({{2, a2}, {1, a1}, {0, a0}}, var);
}

}  // namespace

Expr generic_f(const std::string& var) { return Expr::function("f", 0, sym(var)); }

void require_admissible(const Expr& f, const std::string& var) {
    if (differentiate(f, var, 2).is_zero()) {
        throw PreconditionError("f''(" + var + ") vanishes identically for f = " + to_string(f));
    }
}

DiffOp build_J(int i, const Expr& f, const std::string& var) {
    if (i < 1 || i > 9) throw PreconditionError("J index must lie in 1..9, got " + std::to_string(i));
    require_admissible(f, var);
    FData d = derivatives(f, var);
    Expr inv = pow(d.f2, Expr(-1));
    Expr g = d.z * d.f1 - d.f;
    switch (i) {
        case 1: return op2(inv, 0, 0, var);
        case 2: return op2(d.z * inv, 0, 0, var);
        case 3: return op2(d.f * inv, 0, 0, var);
        case 4: return op2(d.f1 * inv, -1, 0, var);
        case 5: return op2(d.z * d.f1 * inv, -d.z, 0, var);
        case 6: return op2(d.f * d.f1 * inv, -d.f, 0, var);
        case 7: return op2(d.z * g * inv, -d.z * d.z, d.z, var);
        case 8: return op2(d.f * g * inv, -d.z * d.f, d.f, var);
        default: return op2(g * inv, -d.z, 1, var);
    }
}

DiffOp build_K(int i, const Expr& f, const std::string& var) {
    if (i < 0 || i > 8) throw PreconditionError("K index must lie in 0..8, got " + std::to_string(i));
    require_admissible(f, var);
    FData d = derivatives(f, var);
    Expr inv = pow(d.f2, Expr(-1));
    DiffOp k0({{1, inv}, {0, d.f3 * pow(d.f2, Expr(-2))}}, var);
    if (i == 0) return k0;
    DiffOp k1 = op2(inv, d.f3 * pow(d.f2, Expr(-2)), (d.f2 * d.f4 - d.f3 * d.f3) * pow(d.f2, Expr(-3)), var);
    Expr g = d.z * d.f1 - d.f;
    auto k2 = [&] { return d.z * k1 - k0; };
    auto k3 = [&] { return d.f * k1 - d.f1 * k0 + Expr(1); };
    switch (i) {
        case 1: return k1;
        case 2: return k2();
        case 3: return k3();
        case 4: return d.f1 * k1;
        case 5: return d.f1 * k2();
        case 6: return d.f1 * k3();
        case 7: return g * k2();
        default: return g * k3();
    }
}

DiffOp build_op(Side side, int i, const Expr& f, const std::string& var) {
    return side == Side::Minus ? build_J(i, f, var) : build_K(i, f, var);
}

int dual_index(int i) {
    static const int map[] = {0, 1, 4, 9, 2, 5, 7, 6, 8};
    if (i < 1 || i > 8) throw PreconditionError("dual index must lie in 1..8, got " + std::to_string(i));
    return map[i];
}

DiffOp dual_from_J(int i, const Expr& f, const std::string& var) {
    require_admissible(f, var);
    const std::string w = var == "w" ? "w_" : "w";
    DiffOp jw = build_J(dual_index(i), generic_f(w), w);
    Expr f1 = differentiate(f, var);
    Expr f2 = differentiate(f1, var);
    DiffOp jz = change_variable(jw, var, f1, {{"f", sym(var) * f1 - f}});
    return gauge_conjugate(pow(f2, Expr(-1)), jz);
}

HamiltonianCoefficients HamiltonianCoefficients::from_array(const std::array<Expr, 9>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
}

HamiltonianCoefficients HamiltonianCoefficients::symbolic() {
    return {sym("c2"), sym("c1"), sym("c0"), sym("b2"), sym("b1"), sym("b0"), sym("a2"), sym("a1"), sym("a0")};
}

ABC coefficient_functions(const HamiltonianCoefficients& h, const Expr& f, const std::string& var) {
    require_admissible(f, var);
    FData d = derivatives(f, var);
    Expr bracket = (h.c2 * d.z - h.b2) * d.f + h.c1 * d.z * d.z + (h.c0 - h.b1) * d.z - h.b0;
    Expr af2 = bracket * d.f1 - (h.c2 * d.f + h.c1 * d.z + h.c0 - h.a2) * d.f + h.a1 * d.z + h.a0;
    ABC out;
    out.A = af2 * pow(d.f2, Expr(-1));
    out.B = -bracket;
    out.C = h.c2 * d.f + h.c1 * d.z + h.c0;
    return out;
}

DiffOp build_hamiltonian(Side side, const HamiltonianCoefficients& h, const Expr& f, const std::string& var) {
    auto op = [&](int i) { return build_op(side, i, f, var); };
    DiffOp out = -h.c2 * op(8) - h.c1 * op(7) + h.b2 * op(6) + (h.b1 - h.c0) * op(5) + h.b0 * op(4) -
                 (h.a2 - h.c0) * op(3) - h.a1 * op(2) - h.a0 * op(1);
    return out - h.c0;
}

DiffOp build_H_minus_direct(const HamiltonianCoefficients& h, const Expr& f, const std::string& var) {
    ABC c = coefficient_functions(h, f, var);
    return op2(-c.A, -c.B, -c.C, var);
}

DiffOp build_H_plus_direct(const HamiltonianCoefficients& h, const Expr& f, const std::string& var) {
    ABC c = coefficient_functions(h, f, var);
    Expr a1 = differentiate(c.A, var);
    Expr q = c.B + a1 / Expr(2);
    Expr f2 = differentiate(f, var, 2);
    Expr w2 = -differentiate(f2, var) / f2;
    Expr zeroth = -c.C - Expr(2) * differentiate(q, var) + a1 * w2 + Expr(2) * c.A * differentiate(w2, var);
    return op2(-c.A, a1 / Expr(2) + q, zeroth, var);
}

DiffOp supercharge(Side side, const Expr& f, const std::string& var) {
    require_admissible(f, var);
    FData d = derivatives(f, var);
    Expr w = d.f3 / d.f2;
    if (side == Side::Minus) return DiffOp({{3, Expr(1)}, {2, -w}}, var);
    return -(DiffOp::d(var, 2) * (DiffOp::d(var) + w));
}

std::vector<Expr> sector_basis(Side side, const Expr& f, const std::string& var) {
    require_admissible(f, var);
    FData d = derivatives(f, var);
    if (side == Side::Minus) return {Expr(1), d.z, d.f};
    Expr inv = pow(d.f2, Expr(-1));
    return {inv, d.f1 * inv, (d.z * d.f1 - d.f) * inv};
}

HamiltonianCoefficients from_integration_constants(const IntegrationConstants& c) {
    HamiltonianCoefficients h;
    h.c2 = Expr(-2) * c[0];
    h.c1 = Expr(2) * c[2];
    h.c0 = c[3] + c[4];
    h.b2 = Expr(2) * c[1];
    h.b1 = Expr(-2) * c[4];
    h.b0 = -c[5];
    h.a2 = c[4] - c[3];
    h.a1 = c[6];
    h.a0 = c[7];
    return h;
}

IntegrationConstants to_integration_constants(const HamiltonianCoefficients& h) {
    Expr c5 = -h.b1 / Expr(2);
    return {-h.c2 / Expr(2), h.b2 / Expr(2), h.c1 / Expr(2), h.c0 - c5, c5, -h.b0, h.a1, h.a0};
}

}  // namespace qsusy
