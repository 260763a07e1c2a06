#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsusy/diffop.hpp"
#include "qsusy/eval.hpp"
#include "qsusy/expr.hpp"
#include "qsusy/invariance.hpp"

namespace qsusy {

/// Wronskian of a and b: a' b - a b'.
Expr wronskian(const Expr& a, const Expr& b, const std::string& var);

/// Basis (phi1, phi2, phi3) with cached Wronskians W_{i,j} and W_{31,21}.
class WronskianFrame {
public:
    WronskianFrame(Expr phi1, Expr phi2, Expr phi3, std::string var = "u");

    const Expr& phi(int n) const { return phi_.at(n - 1); }
    const std::string& var() const { return var_; }
    /// W_{i,j} for i, j in 1..3.
    Expr W(int i, int j) const;
    const Expr& W21() const { return w21_; }
    const Expr& W31() const { return w31_; }
    const Expr& W32() const { return w32_; }
    const Expr& W3121() const { return w3121_; }

    /// Throws PreconditionError when W_{2,1} or W_{31,21} vanishes identically or at every sample point.
    void require_nondegenerate(const Binding& binding = {}, const SamplePlan& plan = {}) const;
    bool nondegenerate(const Binding& binding = {}, const SamplePlan& plan = {}) const;

    /// Same frame over the opaque functions prefix1, prefix2, prefix3 of var(); operators built on it
    /// stay compact and are evaluated through bind().
    WronskianFrame symbolic(const std::string& prefix = "phi") const;
    /// `base` with prefix1..prefix3 bound to this frame's basis.
    Binding bind(Binding base = {}, const std::string& prefix = "phi") const;

    /// Sampling window clear of the zeros of phi1, W_{2,1} and W_{31,21}.
    SamplePlan window(const SamplePlan& base = {}, const Binding& binding = {}) const;

    Subspace minus_space() const;
    /// phi1 / W_{31,21} <W_{2,1}, W_{3,1}, W_{3,2}>.
    Subspace plus_space() const;

private:
    std::array<Expr, 3> phi_;
    std::string var_;
    Expr w21_, w31_, w32_, w3121_;
};

/// f(u; alpha) = u^2 + 2(alpha - 1) u + (alpha - 1) alpha.
Expr f_alpha(const Expr& alpha, const std::string& var = "u");
/// phi_n(u; alpha), n = 1..3.
Expr x2_phi(int n, const Expr& alpha, const std::string& var = "u");
/// chi-bar_n(u; alpha), n = 1..3.
Expr x2b_chi(int n, const Expr& alpha, const std::string& var = "u");

WronskianFrame x2_frame(const Expr& alpha, const Binding& binding = {}, const std::string& var = "u");
Subspace x2_basis(const Expr& alpha, const Binding& binding = {}, const std::string& var = "u");
Subspace x2b_basis(const Expr& alpha, const Binding& binding = {}, const std::string& var = "u");

/// J'_i for i = 1..9 and K'_i for i = 0..8, as printed in terms of the frame Wronskians.
DiffOp wronskian_J(int i, const WronskianFrame& frame);
DiffOp wronskian_K(int i, const WronskianFrame& frame);
/// Same operators through phi1 J_i[z] phi1^{-1} and phi1^3 W21^{-2} K_i[z] W21^2 phi1^{-3}
/// with z = phi2/phi1, f(z) = phi3/phi1.
DiffOp conjugated_J(int i, const WronskianFrame& frame);
DiffOp conjugated_K(int i, const WronskianFrame& frame);

struct X2Supercharges {
    /// Minus component annihilating the frame span.
    DiffOp minus;
    /// Plus component annihilating plus_space().
    DiffOp plus;
};

/// Factorized forms without the u'(q)^3 prefactor.
X2Supercharges x2_supercharges(const WronskianFrame& frame);
/// z-space supercharges carried over by the conjugations and rescaled by z'(u)^3.
X2Supercharges x2_supercharges_conjugated(const WronskianFrame& frame);
/// The f_alpha factorized forms of the X2 frame.
X2Supercharges x2_supercharges_factored(const Expr& alpha, const std::string& var = "u");

enum class X2Side { J, K };
std::string to_string(X2Side s);

/// Printed differs from Corrected only in the 1/f tail of K4, where the printed polynomial
/// a^3 - 3a^2 + 8a - 16 stands in two places that need (a - 2)(a^2 - a + 4).
enum class X2Form { Corrected, Printed };

/// J_i^{(X2)}(alpha) or K_i^{(X2)}(alpha), i = 1..4.
DiffOp literature_x2(int i, X2Side side, const Expr& alpha, const std::string& var = "u",
                     X2Form form = X2Form::Corrected);

struct X2Coefficients {
    /// c[i-1][j] = C_{ij}(alpha), j = 0..8.
    std::array<std::array<Expr, 9>, 4> c;

    const Expr& at(int i, int j) const { return c.at(i - 1).at(j); }
    /// 4 x 9 numeric matrix (columns j = 0..8).
    Eigen::MatrixXd matrix(const Binding& binding = {}) const;
};

/// Constant coefficients C_{ij}(alpha); unlisted entries are 0.
X2Coefficients cij_coefficients(const Expr& alpha);

/// K'_i of the X2 frame at alpha - 3 conjugated by g = f_{alpha-3} f_alpha: g^{-1} K' g as printed,
/// or g K' g^{-1}, which is the direction that preserves <chi_1, chi_2, chi_3>(alpha).
enum class ConjugationDirection { Printed, Inverse };
DiffOp x2_tilde_K(int i, const Expr& alpha, ConjugationDirection dir, const std::string& var = "u");

/// Sampling window of `base` moved into the stretch of [-12, 12] nearest the origin that is clear of the real
/// zeros of `denominators` and at least 2 wide (or the widest one when none is).
SamplePlan clear_window(const std::vector<Expr>& denominators, const std::string& var, const SamplePlan& base = {},
                        const Binding& binding = {});
/// Window clear of the zeros of the X2 frame (at alpha and alpha - 3) and of f_alpha, f_{alpha-3}.
SamplePlan x2_plan(const Expr& alpha, const SamplePlan& base = {}, const Binding& binding = {});

struct X2Check {
    std::string name;
    X2Side side = X2Side::J;
    int index = 0;
    bool pass = false;
    bool skipped = false;
    /// Equivalence residual with the printed constant C_i0.
    double residual = 0.0;
    /// Same identity with the constant left free: the residual of the non-constant part
    /// and the constant that must be added to C_i0.
    double residual_mod_constant = 0.0;
    double constant_offset = 0.0;
    std::string reason;
};

/// One identity; throws PreconditionError for excluded alpha.
X2Check check_x2_identity(int i, X2Side side, const Expr& alpha, const SamplePlan& plan = {},
                          const Binding& binding = {});

/// Linear-combination identities for i = 1..4 on the requested sides.
/// Excluded alpha values are reported as skipped checks.
std::vector<X2Check> verify_x2_identities(const Expr& alpha, const SamplePlan& plan = {}, bool j_side = true,
                                          bool k_side = true, const Binding& binding = {});

/// Coefficient rows of four combinations of J'_1..J'_8 completing the C_{ij} rows to a basis.
Eigen::MatrixXd x2_complement(const Expr& alpha, const Binding& binding = {});

}  // namespace qsusy
