#include <gtest/gtest.h>

#include <random>

#include "qsusy/calculus.hpp"
#include "qsusy/errors.hpp"
#include "qsusy/families.hpp"
#include "qsusy/invariance.hpp"
#include "qsusy/parse.hpp"

using namespace qsusy;

namespace {

const Expr z = sym("z");
const Expr lam = sym("lambda");

Expr P(const std::string& s) { return parse(s); }
Expr q(long p, long r = 1) { return Expr(Rational(p, r)); }
Expr zp(const Expr& e) { return pow(z, e); }

DiffOp op2(const Expr& a2, const Expr& a1, const Expr& a0) { return DiffOp({{2, a2}, {1, a1}, {0, a0}}, "z"); }

HamiltonianCoefficients random_coefficients(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 4);
    std::array<Expr, 9> v;
    for (auto& x : v) x = q(num(rng), den(rng));
    return HamiltonianCoefficients::from_array(v);
}

Subspace minus_space(const Expr& f) { return {sector_basis(Side::Minus, f), "z", Expr(1)}; }
Subspace plus_space(const Expr& f) { return {sector_basis(Side::Plus, f), "z", Expr(1)}; }

}  // namespace

TEST(BuildJ, Examples) {
    Expr g = generic_f();
    Expr f1 = differentiate(g, "z"), f2 = differentiate(g, "z", 2);
    EXPECT_EQ(build_J(4, g), op2(f1 / f2, -1, 0));
    EXPECT_EQ(build_J(9, z * z), op2(z * z / Expr(2), -z, 1));
    DiffOp j1 = build_J(1, zp(q(5, 2)));
    EXPECT_EQ(j1, op2(zp(q(-1, 2)) * q(4, 15), 0, 0));
    Binding b{{{"lambda", 2.7}}, {}};
    EXPECT_TRUE(ops_equivalent(build_J(1, zp(lam)), op2(zp(2 - lam) / (lam * (lam - 1)), 0, 0), b).equal);
}

TEST(BuildJ, NineIsFiveMinusThreePlusOne) {
    Expr g = generic_f();
    EXPECT_EQ(build_J(9, g), build_J(5, g) - build_J(3, g) + Expr(1));
}

TEST(BuildJ, RejectsDegenerate) {
    EXPECT_THROW(build_J(1, z), PreconditionError);
    EXPECT_THROW(build_K(2, Expr(3) * z + Expr(1)), PreconditionError);
    EXPECT_THROW(build_J(0, z * z), PreconditionError);
    EXPECT_THROW(build_K(9, z * z), PreconditionError);
}

TEST(BuildK, Examples) {
    EXPECT_EQ(build_K(1, zp(3)), Expr(q(1, 6)) * op2(zp(-1), zp(-2), -zp(-3)));
    EXPECT_EQ(build_K(0, z * z), DiffOp({{1, q(1, 2)}}, "z"));
    EXPECT_EQ(Expr(2) * build_K(3, z * z), op2(z * z, Expr(-2) * z, 2));
}

TEST(BuildK, DualConstructionAgrees) {
    const std::vector<Expr> fs{zp(3), zp(q(5, 2)), exp(z), P("log(z)"), P("sin(z)"), P("z^4 + z")};
    for (const auto& f : fs) {
        for (int i = 1; i <= 8; ++i) {
            auto e = ops_equivalent(dual_from_J(i, f), build_K(i, f));
            EXPECT_TRUE(e.equal) << "K" << i << " f=" << f << " residual " << e.residual;
        }
    }
    EXPECT_EQ(dual_from_J(1, z * z), build_K(1, z * z));
    EXPECT_EQ(dual_index(3), 9);
    EXPECT_EQ(dual_index(7), 6);
}

TEST(BuildK, DualConstructionGenericF) {
    Expr g = generic_f();
    for (int i = 1; i <= 8; ++i) {
        Binding b{{}, {{"f", P("exp(z/2) + z^3")}}};
        EXPECT_TRUE(ops_equivalent(dual_from_J(i, g), build_K(i, g), b).equal) << "K" << i;
    }
}

TEST(Invariance, JAndKPreserveTheirSpaces) {
    const std::vector<Expr> fs{zp(q(5, 2)), zp(3), exp(Expr(-2) * z), P("log(z)"), P("sin(z)"), P("z^4 + z")};
    for (const auto& f : fs) {
        for (int i = 1; i <= 8; ++i) {
            auto vj = check_invariant(build_J(i, f), minus_space(f));
            EXPECT_TRUE(vj.pass) << "J" << i << " f=" << f << " " << vj.diagnostics;
            auto vk = check_invariant(build_K(i, f), plus_space(f));
            EXPECT_TRUE(vk.pass) << "K" << i << " f=" << f << " " << vk.diagnostics;
        }
    }
}

TEST(Invariance, GenericFBoundLate) {
    Expr g = generic_f();
    Binding b{{}, {{"f", P("exp(z) + z^3/5")}}};
    for (int i = 1; i <= 8; ++i) {
        EXPECT_TRUE(check_invariant(build_J(i, g), minus_space(g), {}, b).pass);
        EXPECT_TRUE(check_invariant(build_K(i, g), plus_space(g), {}, b).pass);
    }
}

TEST(Hamiltonian, Examples) {
    HamiltonianCoefficients zero{0, 0, 0, 0, 0, 0, 0, 0, 0};
    EXPECT_TRUE(build_hamiltonian(Side::Minus, zero, exp(z)).is_zero());
    EXPECT_TRUE(build_hamiltonian(Side::Plus, zero, exp(z)).is_zero());

    HamiltonianCoefficients c0 = zero;
    c0.c0 = 1;
    Expr g = generic_f();
    DiffOp h = build_hamiltonian(Side::Minus, c0, g);
    EXPECT_EQ(h, -build_J(9, g));
    EXPECT_EQ(apply(h, Expr(1)), Expr(-1));

    HamiltonianCoefficients a0 = zero;
    a0.a0 = 1;
    EXPECT_EQ(build_hamiltonian(Side::Plus, a0, exp(z)), -build_K(1, exp(z)));
}

TEST(Hamiltonian, ExampleOneGivesLinearA) {
    const Expr alpha = sym("alpha"), nu = sym("nu"), b0 = sym("b0"), b1 = sym("b1");
    HamiltonianCoefficients h{0, 0, b1 + Expr(2) * alpha * nu, 0, b1, b0, b1 + Expr(2) * alpha * nu + b0 * nu, 0, 0};
    ABC c = coefficient_functions(h, exp(nu * z));
    EXPECT_EQ(c.A, Expr(2) * alpha * z);
}

TEST(Hamiltonian, JSumEqualsDirectSymbolically) {
    auto h = HamiltonianCoefficients::symbolic();
    Expr g = generic_f();
    EXPECT_EQ(build_hamiltonian(Side::Minus, h, g), build_H_minus_direct(h, g));
}

TEST(Hamiltonian, JSumEqualsDirectRandomDraws) {
    std::mt19937_64 rng(2024);
    const std::vector<Expr> fs{zp(q(7, 3)), exp(z), P("sin(z)"), P("z^4 - 2*z^2 + z")};
    for (int k = 0; k < 20; ++k) {
        auto h = random_coefficients(rng);
        const Expr& f = fs[static_cast<std::size_t>(k) % fs.size()];
        EXPECT_TRUE(ops_equivalent(build_hamiltonian(Side::Minus, h, f), build_H_minus_direct(h, f)).equal);
    }
}

TEST(Hamiltonian, PlusFromKSumMatchesPartnerFormula) {
    std::mt19937_64 rng(77);
    const std::vector<Expr> fs{zp(q(7, 3)), exp(z), P("sin(z)"), zp(3)};
    for (int k = 0; k < 12; ++k) {
        auto h = random_coefficients(rng);
        const Expr& f = fs[static_cast<std::size_t>(k) % fs.size()];
        auto e = ops_equivalent(build_hamiltonian(Side::Plus, h, f), build_H_plus_direct(h, f));
        EXPECT_TRUE(e.equal) << "f=" << f << " residual " << e.residual;
    }
}

TEST(Hamiltonian, TypeAPlusPreservesQuadratics) {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 5; ++k) {
        auto h = random_coefficients(rng);
        Subspace s{{Expr(1), z, z * z}, "z", Expr(1)};
        EXPECT_TRUE(check_invariant(build_hamiltonian(Side::Plus, h, z * z), s).pass);
    }
}

TEST(Supercharge, Examples) {
    EXPECT_EQ(supercharge(Side::Minus, z * z), DiffOp::d("z", 3));
    EXPECT_EQ(supercharge(Side::Minus, zp(q(5, 2))), DiffOp({{3, Expr(1)}, {2, q(-1, 2) / z}}, "z"));
    Binding b{{{"lambda", 3.4}}, {}};
    DiffOp expect = DiffOp({{3, Expr(1)}, {2, -(lam - 2) / z}}, "z");
    EXPECT_TRUE(ops_equivalent(supercharge(Side::Minus, zp(lam)), expect, b).equal);
    const Expr nu = sym("nu");
    DiffOp pn = supercharge(Side::Minus, exp(nu * z));
    EXPECT_EQ(pn, DiffOp({{3, Expr(1)}, {2, -nu}}, "z"));
    EXPECT_TRUE(apply(pn, exp(nu * z)).is_zero());
}

TEST(Supercharge, KernelsAreTheSectors) {
    const std::vector<Expr> fs{zp(q(5, 2)), zp(3), z * z, exp(z), exp(Expr(-2) * z), P("log(z)"), P("sin(z)"), P("z^4 + z")};
    SamplePlan plan;
    plan.tol = 1e-10;
    for (const auto& f : fs) {
        EXPECT_TRUE(check_annihilates(supercharge(Side::Minus, f), minus_space(f), plan).pass) << f;
        EXPECT_TRUE(check_annihilates(supercharge(Side::Plus, f), plus_space(f), plan).pass) << f;
    }
    for (const auto& f : {zp(3), z * z, zp(4) + z}) {
        for (const auto& b : sector_basis(Side::Minus, f)) EXPECT_TRUE(apply(supercharge(Side::Minus, f), b).is_zero());
    }
    Subspace typeb{{pow(z, Expr(-1)), z, z * z}, "z", Expr(1)};
    EXPECT_TRUE(check_annihilates(supercharge(Side::Plus, zp(3)), typeb, plan).pass);
}

TEST(IntegrationConstants, RoundTrip) {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> num(-20, 20);
    for (int k = 0; k < 50; ++k) {
        IntegrationConstants c;
        for (auto& x : c) x = q(num(rng), 1 + (num(rng) + 20) % 5);
        HamiltonianCoefficients h = from_integration_constants(c);
        EXPECT_EQ(to_integration_constants(h), c);
        EXPECT_EQ(h.a2, -h.c0 - h.b1);
        auto back = from_integration_constants(to_integration_constants(h));
        EXPECT_EQ(back.as_array(), h.as_array());
    }
}

TEST(IntegrationConstants, MapValues) {
    IntegrationConstants c{1, 2, 3, 4, 5, 6, 7, 8};
    auto h = from_integration_constants(c);
    std::array<Expr, 9> expect{-2, 6, 9, 4, -10, -6, 1, 7, 8};
    EXPECT_EQ(h.as_array(), expect);
}

TEST(Monomial, MatchesNormalisedGeneralOperators) {
    for (const auto& l : {q(5, 2), q(7, 3), q(-3, 2), Expr(4), Expr(2), Expr(3)}) {
        Expr f = zp(l);
        for (int i = 1; i <= 8; ++i) {
            EXPECT_EQ(monomial_op(Side::Minus, i, l), monomial_normalization(i, l) * build_J(i, f)) << "J~" << i << " " << l;
            EXPECT_EQ(monomial_op(Side::Plus, i, l), monomial_normalization(i, l) * build_K(i, f)) << "K~" << i << " " << l;
        }
    }
}

TEST(Monomial, SymbolicLambdaAgreesNumerically) {
    Binding b{{{"lambda", 2.37}}, {}};
    for (int i = 1; i <= 8; ++i) {
        EXPECT_TRUE(ops_equivalent(monomial_op(Side::Minus, i, lam), monomial_normalization(i, lam) * build_J(i, zp(lam)), b).equal);
        EXPECT_TRUE(ops_equivalent(monomial_op(Side::Plus, i, lam), monomial_normalization(i, lam) * build_K(i, zp(lam)), b).equal);
    }
}

TEST(Monomial, PrintedTypeCEntry) {
    EXPECT_EQ(monomial_op(Side::Minus, 7, lam), op2(zp(3), -lam * z * z, lam * z));
}

TEST(Monomial, TypeBListAsPrinted) {
    std::vector<DiffOp> printed{
        op2(zp(-1), 0, 0),
        op2(1, 0, 0),
        op2(z * z, 0, 0),
        op2(z, -2, 0),
        op2(z * z, Expr(-2) * z, 0),
        op2(zp(4), Expr(-2) * zp(3), 0),
        op2(zp(3), Expr(-3) * z * z, Expr(3) * z),
        op2(zp(5), Expr(-3) * zp(4), Expr(3) * zp(3)),
    };
    auto fam = monomial_family(Side::Minus, Expr(3));
    for (int i = 0; i < 8; ++i) EXPECT_EQ(fam[static_cast<std::size_t>(i)], printed[static_cast<std::size_t>(i)]) << "J~" << i + 1 << "(3)";
}

TEST(Monomial, TypeAListAsPrinted) {
    std::vector<DiffOp> printed{
        op2(1, 0, 0),
        op2(z, 0, 0),
        op2(z * z, 0, 0),
        op2(z, -1, 0),
        op2(z * z, -z, 0),
        op2(zp(3), -z * z, 0),
        op2(zp(3), Expr(-2) * z * z, Expr(2) * z),
        op2(zp(4), Expr(-2) * zp(3), Expr(2) * z * z),
    };
    auto fam = monomial_family(Side::Minus, Expr(2));
    for (int i = 0; i < 8; ++i) EXPECT_EQ(fam[static_cast<std::size_t>(i)], printed[static_cast<std::size_t>(i)]) << "J~" << i + 1 << "(2)";
}

TEST(Monomial, PlusListsAsPrinted) {
    std::vector<DiffOp> b{
        op2(zp(-1), zp(-2), -zp(-3)),
        op2(1, 0, Expr(-2) * zp(-2)),
        op2(z * z, Expr(-2) * z, 2),
        op2(z, 1, -zp(-1)),
        op2(z * z, 0, 2),
        op2(zp(4), Expr(-2) * zp(3), Expr(2) * z * z),
        op2(zp(3), 0, Expr(-2) * z),
        op2(zp(5), Expr(-2) * zp(4), Expr(2) * zp(3)),
    };
    auto fb = monomial_family(Side::Plus, Expr(3));
    for (int i = 0; i < 8; ++i) {
        if (i == 4) {
            // The printed constant term of K~5(3) has the wrong sign; the operator itself is z^2 d^2 - 2.
            EXPECT_NE(fb[4], b[4]);
            EXPECT_EQ(fb[4], op2(z * z, 0, -2));
            continue;
        }
        EXPECT_EQ(fb[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]) << "K~" << i + 1 << "(3)";
    }
    std::vector<DiffOp> a{
        op2(1, 0, 0),
        op2(z, -1, 0),
        op2(z * z, Expr(-2) * z, 2),
        op2(z, 0, 0),
        op2(z * z, -z, 0),
        op2(zp(3), Expr(-2) * z * z, Expr(2) * z),
        op2(zp(3), -z * z, 0),
        op2(zp(4), Expr(-2) * zp(3), Expr(2) * z * z),
    };
    auto fa = monomial_family(Side::Plus, Expr(2));
    for (int i = 0; i < 8; ++i) EXPECT_EQ(fa[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(i)]) << "K~" << i + 1 << "(2)";
}

TEST(Monomial, ContinuousInLambda) {
    for (auto side : {Side::Minus, Side::Plus}) {
        auto sym_family = monomial_family(side, lam);
        for (int l : {2, 3}) {
            auto fixed = monomial_family(side, Expr(l));
            for (std::size_t i = 0; i < 8; ++i) {
                DiffOp limit = transform(sym_family[i], [&](const Expr& c) { return substitute(c, "lambda", Expr(l)); });
                EXPECT_EQ(limit, fixed[i]);
            }
        }
    }
}

TEST(Monomial, LambdaGuards) {
    EXPECT_THROW(monomial_op(Side::Minus, 1, Expr(0)), PreconditionError);
    EXPECT_THROW(monomial_op(Side::Plus, 1, Expr(1)), PreconditionError);
    EXPECT_NO_THROW(monomial_op(Side::Minus, 1, Expr(-1)));
    EXPECT_TRUE(lambda_is_flagged(Rational(-2)));
    EXPECT_TRUE(lambda_is_flagged(Rational(3)));
    EXPECT_FALSE(lambda_is_flagged(Rational(5, 2)));
    EXPECT_FALSE(lambda_is_flagged(Rational(4)));
}

TEST(Literature, PrintedForms) {
    auto c = literature_ops(Family::C, Side::Minus, lam);
    EXPECT_EQ(find_op(c, "J#-"), op2(zp(lam + 1), (1 - lam) * zp(lam), 0));
    auto b = literature_ops(Family::B, Side::Minus, Expr(3));
    EXPECT_EQ(find_op(b, "J3+"), op2(zp(5), Expr(-3) * zp(4), Expr(3) * zp(3)));
    auto a = literature_ops(Family::A, Side::Minus, Expr(2));
    EXPECT_EQ(find_op(a, "J+"), DiffOp({{1, z * z}, {0, Expr(-2) * z}}, "z"));
    EXPECT_THROW(find_op(a, "J7"), PreconditionError);
}

TEST(Literature, OperatorsPreserveTheirSpaces) {
    for (const auto& l : {q(5, 2), q(-3, 2), q(7, 3)}) {
        Subspace minus{{Expr(1), z, zp(l)}, "z", Expr(1)};
        Subspace plus{{z, z * z, zp(2 - l)}, "z", Expr(1)};
        for (const auto& o : literature_ops(Family::C, Side::Minus, l)) EXPECT_TRUE(check_invariant(o.op, minus).pass) << o.name;
        for (const auto& o : literature_ops(Family::C, Side::Plus, l)) EXPECT_TRUE(check_invariant(o.op, plus).pass) << o.name;
    }
    Subspace bm{{Expr(1), z, zp(3)}, "z", Expr(1)};
    Subspace bp{{zp(-1), z, z * z}, "z", Expr(1)};
    for (const auto& o : literature_ops(Family::B, Side::Minus, 3)) EXPECT_TRUE(check_invariant(o.op, bm).pass) << o.name;
    for (const auto& o : literature_ops(Family::B, Side::Plus, 3)) EXPECT_TRUE(check_invariant(o.op, bp).pass) << o.name;
    Subspace a{{Expr(1), z, z * z}, "z", Expr(1)};
    for (auto side : {Side::Minus, Side::Plus}) {
        for (const auto& o : literature_ops(Family::A, side, 2)) EXPECT_TRUE(check_invariant(o.op, a).pass) << o.name;
    }
}

TEST(Correspondence, TypeC) {
    auto j = [&](int i) { return monomial_op(Side::Minus, i, lam); };
    auto k = [&](int i) { return monomial_op(Side::Plus, i, lam); };
    auto lj = literature_ops(Family::C, Side::Minus, lam);
    auto lk = literature_ops(Family::C, Side::Plus, lam);
    EXPECT_EQ((lam - 1) * find_op(lj, "J0"), j(3) - j(5));
    EXPECT_EQ(find_op(lj, "J0-"), j(4));
    EXPECT_EQ(find_op(lj, "J00"), j(3));
    EXPECT_EQ(find_op(lj, "J+0"), j(7));
    EXPECT_EQ(find_op(lj, "J#-"), j(6));
    EXPECT_EQ(find_op(lj, "J#0"), j(8));
    EXPECT_EQ((lam - 1) * find_op(lk, "K0"), k(5) - k(3) + (lam - 1));
    EXPECT_EQ(find_op(lk, "K0-"), k(4));
    EXPECT_EQ(find_op(lk, "K00"), k(3));
    EXPECT_EQ(find_op(lk, "K+0"), k(7));
    EXPECT_EQ(find_op(lk, "K#-"), k(1));
    EXPECT_EQ(find_op(lk, "K#0"), k(2));
}

TEST(Correspondence, TypeCPlusIsConjugatedMinus) {
    const Expr l = q(5, 2);
    auto lj = literature_ops(Family::C, Side::Minus, 1 - l);
    auto lk = literature_ops(Family::C, Side::Plus, l);
    EXPECT_EQ(find_op(lk, "K0"), gauge_conjugate(z, find_op(lj, "J0")));
    for (const char* n : {"0-", "00", "+0", "#-", "#0"}) {
        EXPECT_EQ(find_op(lk, std::string("K") + n), gauge_conjugate(z, find_op(lj, std::string("J") + n))) << n;
    }
}

TEST(Correspondence, TypeB) {
    auto j = [&](int i) { return monomial_op(Side::Minus, i, Expr(3)); };
    auto lj = literature_ops(Family::B, Side::Minus, 3);
    EXPECT_EQ(Expr(2) * find_op(lj, "J0"), j(3) - j(5));
    EXPECT_EQ(find_op(lj, "J--"), j(2));
    EXPECT_EQ(find_op(lj, "J0-"), j(4));
    EXPECT_EQ(find_op(lj, "J00"), j(3));
    EXPECT_EQ(find_op(lj, "J+0"), j(7));
    EXPECT_EQ(find_op(lj, "J++"), j(6));
    EXPECT_EQ(find_op(lj, "J3+"), j(8));
}

TEST(Correspondence, TypeBPlusHoldsOnlyWithPrintedK5) {
    auto k = [&](int i) { return monomial_op(Side::Plus, i, Expr(3)); };
    auto lk = literature_ops(Family::B, Side::Plus, 3);
    const DiffOp k5_printed = op2(z * z, 0, 2);
    EXPECT_EQ(Expr(2) * find_op(lk, "K0"), k5_printed - k(3));
    EXPECT_EQ(find_op(lk, "K00"), k5_printed - Expr(2));
    EXPECT_EQ(Expr(2) * find_op(lk, "K0"), k(5) - k(3) + Expr(4));
    EXPECT_EQ(find_op(lk, "K00"), k(5) + Expr(2));
    EXPECT_EQ(find_op(lk, "K--"), k(2));
    EXPECT_EQ(find_op(lk, "K0-"), k(4));
    EXPECT_EQ(find_op(lk, "K+0"), k(7));
    EXPECT_EQ(find_op(lk, "K++"), k(6));
    EXPECT_EQ(find_op(lk, "K3+"), k(8));
}

TEST(Correspondence, TypeAArgumentIsTwo) {
    auto j2 = [&](int i) { return monomial_op(Side::Minus, i, Expr(2)); };
    auto j3 = [&](int i) { return monomial_op(Side::Minus, i, Expr(3)); };
    auto la = literature_ops(Family::A, Side::Minus, 2);
    EXPECT_EQ(find_op(la, "J-"), j2(2) - j2(4));
    EXPECT_EQ(find_op(la, "J0"), j2(3) - j2(5));
    EXPECT_EQ(find_op(la, "J+"), j2(6) - j2(7));
    EXPECT_EQ(find_op(la, "J--"), j2(1));
    EXPECT_EQ(find_op(la, "J0-"), j2(2));
    EXPECT_EQ(find_op(la, "J00"), j2(3));
    EXPECT_EQ(find_op(la, "J+0"), j2(6));
    EXPECT_EQ(find_op(la, "J++"), j2(8));
    // J~3 does not depend on lambda; the other two printed arguments do not fit.
    EXPECT_EQ(find_op(la, "J00"), j3(3));
    EXPECT_NE(find_op(la, "J+0"), j3(6));
    EXPECT_NE(find_op(la, "J++"), j3(8));
}

TEST(Correspondence, TypeAPlus) {
    auto k = [&](int i) { return monomial_op(Side::Plus, i, Expr(2)); };
    auto la = literature_ops(Family::A, Side::Plus, 2);
    EXPECT_EQ(find_op(la, "K-"), k(4) - k(2));
    EXPECT_EQ(find_op(la, "K0"), k(5) - k(3) + Expr(2));
    EXPECT_EQ(find_op(la, "K+"), k(7) - k(6));
    EXPECT_EQ(find_op(la, "K--"), k(1));
    EXPECT_EQ(find_op(la, "K0-"), k(4));
    EXPECT_EQ(find_op(la, "K00"), Expr(2) * k(5) - k(3) + Expr(2));
    EXPECT_EQ(find_op(la, "K+0"), k(7));
    EXPECT_EQ(find_op(la, "K++"), k(8));
}

TEST(LiteratureBasis, Examples) {
    HamiltonianCoefficients zero{0, 0, 0, 0, 0, 0, 0, 0, 0};
    auto value = [](const LiteratureExpansion& e, const std::string& p) {
        for (const auto& t : e.terms) {
            if (t.parameter == p) return t.value;
        }
        return Expr(99);
    };
    auto a = zero;
    a.c2 = 2;
    auto ea = expand_in_literature_basis(Family::A, a, 2);
    EXPECT_EQ(value(ea, "a++"), Expr(1));
    for (const auto& t : ea.terms) {
        if (t.parameter != "a++") EXPECT_TRUE(t.value.is_zero()) << t.parameter;
    }
    auto b = zero;
    b.a1 = 6;
    EXPECT_EQ(value(expand_in_literature_basis(Family::B, b, 3), "a--"), Expr(1));
    auto c = zero;
    c.b0 = -(lam - 1);
    EXPECT_EQ(value(expand_in_literature_basis(Family::C, c, lam), "a1"), Expr(1));
}

TEST(LiteratureBasis, ReproducesHamiltonianExactly) {
    auto h = HamiltonianCoefficients::symbolic();
    for (auto fam : {Family::A, Family::B}) {
        Expr l = family_lambda(fam, lam);
        EXPECT_EQ(expand_in_literature_basis(fam, h, l).assemble(), build_hamiltonian(Side::Minus, h, zp(l)));
    }
    for (const auto& l : {q(5, 2), q(-3, 2), Expr(4)}) {
        EXPECT_EQ(expand_in_literature_basis(Family::C, h, l).assemble(), build_hamiltonian(Side::Minus, h, zp(l)));
    }
}

TEST(LiteratureBasis, PrintedTypeBDiagonalCoefficientIsOffByC0) {
    HamiltonianCoefficients h{0, 0, 1, 0, 0, 0, 0, 0, 0};
    auto e = expand_in_literature_basis(Family::B, h, 3);
    Expr printed = (h.a2 - Expr(3) * h.b1 - Expr(2) * h.c0) / Expr(6);
    LiteratureExpansion swapped = e;
    for (auto& t : swapped.terms) {
        if (t.parameter == "a00") t.coefficient = -printed;
    }
    DiffOp target = build_hamiltonian(Side::Minus, h, zp(3));
    EXPECT_EQ(e.assemble(), target);
    EXPECT_NE(swapped.assemble(), target);
}

TEST(MissedOperators, IndependentOfLiterature) {
    auto with = [](std::vector<DiffOp> ops, const DiffOp& extra) {
        ops.push_back(extra);
        return ops;
    };
    auto names = [](const std::vector<NamedOp>& v) {
        std::vector<DiffOp> out{DiffOp::identity("z")};
        for (const auto& o : v) out.push_back(o.op);
        return out;
    };
    const Expr l = q(5, 2);
    Subspace cm{{Expr(1), z, zp(l)}, "z", Expr(1)};
    Subspace cp{{z, z * z, zp(2 - l)}, "z", Expr(1)};
    auto lc = names(literature_ops(Family::C, Side::Minus, l));
    auto lkc = names(literature_ops(Family::C, Side::Plus, l));
    int r = action_rank(lc, cm);
    int rk = action_rank(lkc, cp);
    EXPECT_EQ(r, 7);
    for (int i : {1, 2}) EXPECT_EQ(action_rank(with(lc, monomial_op(Side::Minus, i, l)), cm), r + 1) << i;
    for (int i : {6, 8}) EXPECT_EQ(action_rank(with(lkc, monomial_op(Side::Plus, i, l)), cp), rk + 1) << i;
    for (int i : {3, 4, 7}) EXPECT_EQ(action_rank(with(lc, monomial_op(Side::Minus, i, l)), cm), r) << i;

    Subspace bm{{Expr(1), z, zp(3)}, "z", Expr(1)};
    Subspace bp{{zp(-1), z, z * z}, "z", Expr(1)};
    auto lb = names(literature_ops(Family::B, Side::Minus, 3));
    auto lkb = names(literature_ops(Family::B, Side::Plus, 3));
    int rb = action_rank(lb, bm);
    int rkb = action_rank(lkb, bp);
    EXPECT_EQ(rb, 8);
    EXPECT_EQ(action_rank(with(lb, monomial_op(Side::Minus, 1, 3)), bm), rb + 1);
    EXPECT_EQ(action_rank(with(lkb, monomial_op(Side::Plus, 1, 3)), bp), rkb + 1);
}
