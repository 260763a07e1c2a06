#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qsusy/errors.hpp"
#include "qsusy/models.hpp"
#include "qsusy/spectral.hpp"

using namespace qsusy;

namespace {

const Expr q = sym("q");
const Expr oscillator = q * q / Expr(2);

Binding bind(std::map<std::string, double> p) {
    Binding b;
    b.params = std::move(p);
    return b;
}

std::vector<double> window_points(const ModelSpec& m, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(m.q_lo + (m.q_hi - m.q_lo) * (i + 0.5) / n);
    return out;
}

}  // namespace

TEST(Grid, Validation) {
    EXPECT_THROW((Grid{0, 1, 199}.validate()), PreconditionError);
    EXPECT_THROW((Grid{1, 0, 400}.validate()), PreconditionError);
    EXPECT_NO_THROW((Grid{0, 1, 200}.validate()));
    EXPECT_DOUBLE_EQ((Grid{0, 1, 201}.h()), 0.005);
}

TEST(FdSpectrum, HarmonicOscillator) {
    FdSpectrum s = fd_spectrum(oscillator, Grid{-12, 12, 4000}, 3);
    ASSERT_EQ(s.eigenvalues.size(), 3u);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(s.eigenvalues[k], k + 0.5, 1e-4);
    ASSERT_EQ(s.error_estimates.size(), 3u);
    for (int k = 0; k < 3; ++k) EXPECT_LT(s.error_estimates[k], 1e-4);
}

TEST(FdSpectrum, ParticleInABox) {
    FdSpectrum s = fd_spectrum(Expr(0), Grid{0, M_PI, 1000}, 4);
    for (int k = 1; k <= 4; ++k) EXPECT_NEAR(s.eigenvalues[k - 1], k * k / 2.0, 1e-3);
}

TEST(FdSpectrum, RefinementWithinFourTimesEstimate) {
    for (int n : {400, 1000, 2000}) {
        FdSpectrum coarse = fd_spectrum(oscillator, Grid{-12, 12, n}, 4);
        FdSpectrum fine = fd_spectrum(oscillator, Grid{-12, 12, 2 * n - 1}, 4);
        for (int k = 0; k < 4; ++k) {
            EXPECT_LE(std::fabs(fine.eigenvalues[k] - coarse.eigenvalues[k]), 4.0 * coarse.error_estimates[k])
                << n << " " << k;
        }
    }
}

TEST(FdSpectrum, SingularNodes) {
    const Expr v = pow(q, Expr(-1));
    EXPECT_THROW(fd_spectrum(v, Grid{-1, 1, 401}, 2), PreconditionError);
    FdSpectrum s = fd_spectrum(v * v, Grid{-1, 1, 401}, 2, {}, "q", SingularNodes::Exclude);
    EXPECT_EQ(s.excluded_nodes, 1);
    EXPECT_THROW(fd_spectrum(oscillator, Grid{-1, 1, 401}, 0), PreconditionError);
}

TEST(SchrodingerResidual, GroundStateAndNegativeControl) {
    const Expr ground = exp(-q * q / Expr(2));
    const std::vector<double> probes{-2.0, -0.7, 0.3, 1.1, 2.4};
    EXPECT_LT(schrodinger_residual(oscillator, ground, 0.5, probes), 1e-15);
    const double bad = schrodinger_residual(oscillator, ground + Expr(Rational(1, 1000)) * q, 0.5, probes);
    EXPECT_GT(bad, 1e-4);
    EXPECT_LT(bad, 1e-2);
    EXPECT_GT(schrodinger_residual(oscillator, ground, 1.5, probes), 0.1);
    EXPECT_THROW(schrodinger_residual(pow(q, Expr(-1)), ground, 0.5, {0.0}), PreconditionError);
}

TEST(SchrodingerResidual, Example2AlgebraicEigenfunctions) {
    for (const Binding& b : {bind({{"alpha", 1.7}, {"nu", 0.6}, {"b0", -0.4}}),
                             bind({{"alpha", 0.9}, {"nu", -1.1}, {"b0", 0.7}})}) {
        ModelSpec m = build_example(2, b);
        for (Side side : {Side::Minus, Side::Plus}) {
            const Subspace& sector = side == Side::Minus ? m.sector_minus : m.sector_plus;
            const Expr& v = side == Side::Minus ? m.V_minus : m.V_plus;
            AlgebraicSpectrum s = algebraic_spectrum(m, side, m.plan());
            int real = 0;
            for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
                if (!s.real(i)) continue;
                ++real;
                const Expr psi = eigenfunction(s, sector, i);
                EXPECT_LT(schrodinger_residual(v, psi, s.eigenvalues[i].real(), window_points(m, 9), m.binding), 1e-7);
            }
            EXPECT_GT(real, 0);
        }
    }
}

TEST(Normalizability, Fixtures) {
    EXPECT_EQ(normalizability_probe(exp(-q * q), {}).verdict, Normalizability::Normalizable);
    EXPECT_EQ(normalizability_probe(exp(q * q), {}).verdict, Normalizability::Divergent);
    EXPECT_EQ(normalizability_probe(pow(Expr(1) + q * q, Expr(-1)), {}).verdict, Normalizability::Normalizable);
    EXPECT_EQ(normalizability_probe(pow(q, Expr(-1)), {0.0, 1.0}).verdict, Normalizability::Divergent);
    EXPECT_EQ(normalizability_probe(pow(q, Expr(Rational(-1, 4))), {0.0, 1.0}).verdict,
              Normalizability::Normalizable);
    // |psi|^2 = 1/q: every doubling shell carries the same weight.
    NormalizabilityReport border = normalizability_probe(pow(q, Expr(Rational(-1, 2))), {1.0, INFINITY});
    EXPECT_EQ(border.verdict, Normalizability::Inconclusive);
    EXPECT_NEAR(border.upper_ratios.back(), 1.0, 0.01);
    EXPECT_THROW(normalizability_probe(q, {1.0, 0.0}), PreconditionError);
}

TEST(Normalizability, Example1GrowingSectorElement) {
    const Expr al = sym("alpha"), nu = sym("nu"), b0 = sym("b0");
    const Expr psi = pow(q, (b0 - al) / (Expr(2) * al)) * exp(al * nu * q * q / Expr(2));
    for (const Binding& b : {bind({{"alpha", 1}, {"nu", 1}, {"b0", 5}}), bind({{"alpha", 0.7}, {"nu", 0.4}, {"b0", 0.2}}),
                             bind({{"alpha", -0.5}, {"nu", -2}, {"b0", 1}})}) {
        EXPECT_EQ(normalizability_probe(psi, {0.0, INFINITY}, b).verdict, Normalizability::Divergent);
    }
    // Opposite sign of alpha nu decays.
    EXPECT_EQ(normalizability_probe(psi, {0.0, INFINITY}, bind({{"alpha", 1}, {"nu", -1}, {"b0", 5}})).verdict,
              Normalizability::Normalizable);
}

TEST(TruncationPoint, GaussianTail) {
    const double t = truncation_point(exp(-q * q / Expr(2)), 0.0, 20.0);
    EXPECT_NEAR(t, std::sqrt(2.0 * std::log(1e8)), 0.02);
}

TEST(Agreement, NormalizableAlgebraicEigenvaluesAppearInFdSpectrum) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> pick(0.0, 1.0);
    int certified = 0;
    for (int draw = 0; draw < 6; ++draw) {
        const double alpha = 0.6 + pick(rng), nu = 0.5 + pick(rng), b0 = 3.0 * alpha + 2.0 * alpha * pick(rng);
        ModelSpec m = build_example(1, bind({{"alpha", alpha}, {"nu", nu}, {"b0", b0}}));
        AlgebraicSpectrum s = algebraic_spectrum(m, Side::Minus, m.plan());
        for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
            const Expr psi = eigenfunction(s, m.sector_minus, i);
            if (normalizability_probe(psi, {0.0, INFINITY}, m.binding).verdict != Normalizability::Normalizable) continue;
            ++certified;
            const double hi = truncation_point(psi, 1e-3, 30.0, m.binding);
            FdSpectrum fd = fd_spectrum(m.V_minus, Grid{1e-3, hi, 4000}, 6, m.binding);
            double gap = HUGE_VAL, tol = 1e-3;
            for (std::size_t k = 0; k < fd.eigenvalues.size(); ++k) {
                if (std::fabs(fd.eigenvalues[k] - s.eigenvalues[i].real()) < gap) {
                    gap = std::fabs(fd.eigenvalues[k] - s.eigenvalues[i].real());
                    tol = std::max(1e-3, 10.0 * fd.error_estimates[k]);
                }
            }
            EXPECT_LE(gap, tol) << "draw " << draw << " E = " << s.eigenvalues[i].real();
        }
    }
    EXPECT_GT(certified, 0);
}

TEST(Agreement, InnerCutoffSensitivityIsSmall) {
    ModelSpec m = build_example(1, bind({{"alpha", 1}, {"nu", 1}, {"b0", 5}}));
    FdSpectrum a = fd_spectrum(m.V_minus, Grid{1e-3, 10, 4000}, 3, m.binding);
    FdSpectrum b = fd_spectrum(m.V_minus, Grid{2e-3, 10, 4000}, 3, m.binding);
    for (int k = 0; k < 3; ++k) EXPECT_LT(std::fabs(a.eigenvalues[k] - b.eigenvalues[k]), 1e-4);
    EXPECT_NEAR(a.eigenvalues[0], 1.0, 1e-4);
}
