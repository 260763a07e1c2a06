#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qsusy/calculus.hpp"
#include "qsusy/errors.hpp"
#include "qsusy/eval.hpp"
#include "qsusy/parse.hpp"

using namespace qsusy;

namespace {

const Expr z = sym("z");

Expr P(const std::string& s) { return parse(s); }

/// Central-difference oracle for first derivatives.
double numeric_derivative(const Expr& e, double x, const Binding& b = {}) {
    const double h = 1e-5;
    return (evaluate(e, x + h, b) - evaluate(e, x - h, b)) / (2 * h);
}

const std::vector<std::string> kCorpus = {
    "z^3 + 2*z - 1",
    "(z + 1)^3/(z - 2)",
    "exp(2*z)*sin(z) + cos(z)^2",
    "log(z)*z^(5/2)",
    "z^(7/3) - 3/(z^2 + 1)",
    "tan(z/3) + sqrt(z)",
    "exp(-z^2/2)*(z^4 - 3*z)",
    "(2*z + 2)^(-2)*(z + 1)",
    "lambda*z^(lambda - 1) + nu*exp(nu*z)",
    "sin(z)*cos(z)/(1 + z)",
};

}  // namespace

TEST(Canonical, SumAndInverseCancel) {
    EXPECT_EQ(P("(1+z)*(1+z)^-1"), Expr(1));
    EXPECT_EQ(P("(1+z)^-2*(1+z)"), P("1/(1+z)"));
    EXPECT_EQ(P("(2*z+2)*(z+1)^(-1)"), Expr(2));
}

TEST(Canonical, ExpansionAndOrderIndependence) {
    EXPECT_EQ(P("(z+1)^2"), P("z^2 + 2*z + 1"));
    EXPECT_EQ(P("a*b*z"), P("z*b*a"));
    EXPECT_EQ(P("(a+b)*(a-b)"), P("a^2 - b^2"));
    EXPECT_EQ(P("z*z*z"), pow(z, Expr(3)));
}

TEST(Canonical, ExponentialsAndLogs) {
    EXPECT_EQ(P("exp(a)*exp(b)"), P("exp(a+b)"));
    EXPECT_EQ(P("exp(2*log(z))"), P("z^2"));
    EXPECT_EQ(P("exp(log(z)/2 + z)"), P("sqrt(z)*exp(z)"));
    EXPECT_EQ(P("log(exp(z))"), z);
    EXPECT_EQ(P("exp(0)"), Expr(1));
    EXPECT_EQ(P("log(1)"), Expr(0));
}

TEST(Canonical, NumericRadicals) {
    EXPECT_EQ(P("2^(1/2)*2^(1/2)"), Expr(2));
    EXPECT_EQ(P("4^(1/2)"), Expr(2));
    EXPECT_EQ(P("(9/4)^(-1/2)"), Expr(Rational(2, 3)));
    EXPECT_EQ(P("8^(2/3)"), Expr(4));
    EXPECT_EQ(P("2^(3/2)"), P("2*2^(1/2)"));
}

TEST(Canonical, PowersMerge) {
    EXPECT_EQ(P("z^a*z^b"), P("z^(a+b)"));
    EXPECT_EQ(P("(z^2)^3"), P("z^6"));
    EXPECT_EQ(P("z^lambda/z"), P("z^(lambda-1)"));
}

TEST(Canonical, TrigSymmetry) {
    EXPECT_EQ(P("sin(-z)"), P("-sin(z)"));
    EXPECT_EQ(P("cos(-2*z)"), P("cos(2*z)"));
    EXPECT_EQ(P("sin(0)"), Expr(0));
    EXPECT_EQ(P("cos(0)"), Expr(1));
}

TEST(Canonical, HashConsistentWithEquality) {
    for (const auto& s : kCorpus) {
        Expr a = P(s);
        Expr b = P(to_string(a));
        EXPECT_EQ(a, b) << s;
        EXPECT_EQ(a.hash(), b.hash()) << s;
    }
}

TEST(Printer, RoundTripIsIdempotent) {
    for (const auto& s : kCorpus) {
        Expr e = P(s);
        std::string once = to_string(e);
        EXPECT_EQ(to_string(P(once)), once) << s;
    }
}

TEST(Printer, ReadableForms) {
    EXPECT_EQ(to_string(P("1/f''")), "1/f''(z)");
    EXPECT_EQ(to_string(P("-3*z/2")), "-3*z/2");
    EXPECT_EQ(to_string(P("z^(1/2)")), "z^(1/2)");
    EXPECT_EQ(to_string(Expr(Rational(-7, 2))), "-7/2");
}

TEST(Parser, RejectsMalformedInput) {
    EXPECT_THROW(P("(z+1"), ParseError);
    EXPECT_THROW(P("z+"), ParseError);
    EXPECT_THROW(P("foo(z)"), ParseError);
    EXPECT_THROW(P("z $ 2"), ParseError);
    EXPECT_THROW(P("exp"), ParseError);
    try {
        P("z + * 3");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 4u);
    }
}

TEST(Parser, NumbersAreExact) {
    EXPECT_EQ(P("0.25"), Expr(Rational(1, 4)));
    EXPECT_EQ(P("1e-3"), Expr(Rational(1, 1000)));
    EXPECT_EQ(parse_rational("-7/2"), Rational(-7, 2));
}

TEST(Parser, OpaqueDerivatives) {
    Expr e = P("f''/f'''");
    EXPECT_EQ(e, Expr::function("f", 2, z) / Expr::function("f", 3, z));
    ParseOptions o;
    o.functions = {"W", "E"};
    o.variable = "q";
    Expr w = parse("W'(q) + E", o);
    EXPECT_EQ(w, Expr::function("W", 1, sym("q")) + Expr::function("E", 0, sym("q")));
}

TEST(Differentiate, MatchesFiniteDifferences) {
    Binding b;
    b.params = {{"lambda", 2.5}, {"nu", 0.7}};
    for (const auto& s : kCorpus) {
        Expr e = P(s);
        Expr d = differentiate(e, "z");
        for (double x : {0.6, 1.3, 2.2}) {
            double exact = evaluate(d, x, b);
            double approx = numeric_derivative(e, x, b);
            EXPECT_NEAR(exact, approx, 1e-6 * (1 + std::fabs(exact))) << s << " at " << x;
        }
    }
}

TEST(Differentiate, Linearity) {
    Expr a = P("z^3*exp(z)");
    Expr b = P("sin(z)/z");
    EXPECT_EQ(differentiate(a + b, "z"), differentiate(a, "z") + differentiate(b, "z"));
    EXPECT_EQ(differentiate(a * b, "z"), differentiate(a, "z") * b + a * differentiate(b, "z"));
}

TEST(Differentiate, OpaqueChainRule) {
    Expr e = Expr::function("f", 1, pow(z, Expr(2)));
    EXPECT_EQ(differentiate(e, "z"), Expr(2) * z * Expr::function("f", 2, pow(z, Expr(2))));
}

TEST(Substitute, OpaqueFunctionReplacement) {
    Expr e = P("f''/f'");
    Expr r = substitute_function(e, "f", pow(z, Expr(3)), "z");
    EXPECT_EQ(r, Expr(2) / z);
    Expr g = Expr::function("f", 1, pow(z, Expr(2)));
    EXPECT_EQ(substitute_function(g, "f", pow(z, Expr(3)), "z"), Expr(3) * pow(z, Expr(4)));
    EXPECT_EQ(substitute(P("a*z + b"), {{"a", Expr(2)}, {"b", z}}), Expr(3) * z);
}

TEST(Evaluate, Errors) {
    EXPECT_THROW(evaluate(P("a*z"), 1.0), EvalError);
    try {
        evaluate(P("1/(z-1)"), 1.0);
        FAIL();
    } catch (const EvalError& e) {
        EXPECT_EQ(e.kind(), EvalFailure::Pole);
    }
    try {
        evaluate(P("log(z)"), -1.0);
        FAIL();
    } catch (const EvalError& e) {
        EXPECT_EQ(e.kind(), EvalFailure::Domain);
    }
    EXPECT_NEAR(evaluate(P("z^(1/3)"), -8.0), -2.0, 1e-14);
}

TEST(Evaluate, BoundFunctions) {
    Binding b;
    b.functions["f"] = P("exp(2*z)");
    EXPECT_NEAR(evaluate(P("f''/f'"), 0.3, b), 2.0, 1e-14);
}

TEST(Evaluate, CanonicalAgreesWithSyntaxTree) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.5, 2.5);
    for (const auto& s : kCorpus) {
        ParseTree t = parse_tree(s);
        Expr e = to_expr(t);
        for (int i = 0; i < 5; ++i) {
            double x = u(rng);
            std::map<std::string, double> vals{{"z", x}, {"lambda", 2.5}, {"nu", 0.7}};
            Binding b;
            b.params = {{"lambda", 2.5}, {"nu", 0.7}};
            double raw = evaluate_tree(t, vals);
            double can = evaluate(e, x, b);
            EXPECT_NEAR(raw, can, 1e-12 * (1 + std::fabs(raw))) << s;
        }
    }
}

TEST(Compiled, BatchMatchesPointwise) {
    std::vector<double> xs;
    for (int i = 0; i < 37; ++i) xs.push_back(0.513 + 0.05 * i);
    Binding b;
    b.params = {{"lambda", 2.5}, {"nu", 0.7}};
    for (const auto& s : kCorpus) {
        Expr e = P(s);
        CompiledExpr c(e, b, "z");
        for (auto isa : {simd::Isa::Scalar, simd::Isa::Avx2}) {
            if (!simd::available(isa)) continue;
            auto ys = c.evaluate(xs, simd::kernels(isa));
            for (std::size_t i = 0; i < xs.size(); ++i) {
                double w = evaluate(e, xs[i], b);
                EXPECT_EQ(ys[i], w) << s << " isa " << simd::isa_name(isa);
            }
        }
    }
}

TEST(Compiled, PoleDetected) {
    CompiledExpr c(P("1/(z-1)"), {}, "z");
    std::vector<double> xs{0.5, 1.0, 1.5};
    EXPECT_THROW(c.evaluate(xs), EvalError);
}

TEST(Number, UnreducedRationalsAreCanonical) {
    EXPECT_EQ(Expr(Rational(12, 2)), Expr(6));
    EXPECT_EQ(Expr(Rational(-2, -4)), Expr(Rational(1, 2)));
    EXPECT_EQ(Expr(Rational(6, 3)).hash(), Expr(2).hash());
}
