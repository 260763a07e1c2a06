#pragma once

#include <array>
#include <string>
#include <vector>

#include "qsusy/diffop.hpp"
#include "qsusy/expr.hpp"

namespace qsusy {

/// Minus side: operators J preserving <1, z, f>. Plus side: operators K preserving <1, f', zf'-f>/f''.
enum class Side { Minus, Plus };

/// The opaque function f(var), used to build operators for generic f.
Expr generic_f(const std::string& var = "z");

/// Throws PreconditionError when f'' vanishes identically.
void require_admissible(const Expr& f, const std::string& var = "z");

/// J_i for i = 1..9 (J9 = J5 - J3 + 1).
DiffOp build_J(int i, const Expr& f, const std::string& var = "z");
/// K_i for i = 0..8.
DiffOp build_K(int i, const Expr& f, const std::string& var = "z");
DiffOp build_op(Side side, int i, const Expr& f, const std::string& var = "z");

/// K_i rebuilt from J[w] with w = f'(z), f(w) = zf' - f, conjugated by f''.
DiffOp dual_from_J(int j, const Expr& f, const std::string& var = "z");
/// Index j of the J operator whose dual is K_i.
int dual_index(int i);

/// Constants (c2, c1, c0, b2, b1, b0, a2, a1, a0) fixing the action on the minus sector.
struct HamiltonianCoefficients {
    Expr c2, c1, c0, b2, b1, b0, a2, a1, a0;

    std::array<Expr, 9> as_array() const { return {c2, c1, c0, b2, b1, b0, a2, a1, a0}; }
    static HamiltonianCoefficients from_array(const std::array<Expr, 9>& v);
    static HamiltonianCoefficients symbolic();
};

/// Coefficient functions A, B, C of H = -A d^2 - B d - C on the minus side.
struct ABC {
    Expr A, B, C;
};
ABC coefficient_functions(const HamiltonianCoefficients& h, const Expr& f, const std::string& var = "z");

/// Linear combination of J_i (Side::Minus) or K_i (Side::Plus).
DiffOp build_hamiltonian(Side side, const HamiltonianCoefficients& h, const Expr& f, const std::string& var = "z");
/// -A d^2 - B d - C from the invariance conditions.
DiffOp build_H_minus_direct(const HamiltonianCoefficients& h, const Expr& f, const std::string& var = "z");
/// Plus-side partner from A, Q = B + A'/2, C and w2 = -f'''/f''.
DiffOp build_H_plus_direct(const HamiltonianCoefficients& h, const Expr& f, const std::string& var = "z");

/// Kernel-defining supercharge components: P- = d^3 - (f'''/f'') d^2, P+ = -d^2 (d + f'''/f'').
DiffOp supercharge(Side side, const Expr& f, const std::string& var = "z");
std::vector<Expr> sector_basis(Side side, const Expr& f, const std::string& var = "z");

/// Integration constants C1..C8 of the coupled A, Q system.
using IntegrationConstants = std::array<Expr, 8>;
HamiltonianCoefficients from_integration_constants(const IntegrationConstants& c);
/// Inverse of from_integration_constants; exact only on the surface a2 = -c0 - b1.
IntegrationConstants to_integration_constants(const HamiltonianCoefficients& h);

// ---- monomial specialisation f = z^lambda ----

enum class Family { A, B, C };

/// Normalised monomial operators J~_i (Side::Minus) or K~_i (Side::Plus), i = 1..8.
DiffOp monomial_op(Side side, int i, const Expr& lambda, const std::string& var = "z");
std::vector<DiffOp> monomial_family(Side side, const Expr& lambda, const std::string& var = "z");
/// Factor n_i with monomial_op(side, i) = n_i * build_op(side, i, z^lambda).
Expr monomial_normalization(int i, const Expr& lambda);
/// f(z) of the family: z^lambda for C, z^3 for B, z^2 for A.
Expr family_f(Family family, const Expr& lambda, const std::string& var = "z");
Expr family_lambda(Family family, const Expr& lambda);
/// Hard exclusions: lambda in {0, 1} makes the family degenerate.
void require_lambda(const Expr& lambda);
/// Values the literature also excludes; returned so callers can warn.
bool lambda_is_flagged(const Rational& lambda);

struct NamedOp {
    std::string name;
    DiffOp op;
};

/// Operators of the classical type A, B, C quasi-solvable literature.
std::vector<NamedOp> literature_ops(Family family, Side side, const Expr& lambda, const std::string& var = "z");
const DiffOp& find_op(const std::vector<NamedOp>& ops, const std::string& name);

/// One term of a Hamiltonian expanded in a literature basis.
struct BasisTerm {
    std::string name;
    /// Literature parameter name ("a++", "b0", ...) or empty for a bare monomial operator.
    std::string parameter;
    /// Value of the literature parameter.
    Expr value;
    /// Signed multiplier of `op` in the expansion.
    Expr coefficient;
    DiffOp op;
};

/// Rewrites the minus-side Hamiltonian for f = z^lambda in the literature operators of the family
/// (plus monomial operators the literature set lacks). The sum of coefficient*op plus `constant`
/// reproduces build_hamiltonian.
struct LiteratureExpansion {
    std::vector<BasisTerm> terms;
    Expr constant;
    DiffOp assemble(const std::string& var = "z") const;
};
LiteratureExpansion expand_in_literature_basis(Family family, const HamiltonianCoefficients& h, const Expr& lambda,
                                               const std::string& var = "z");

}  // namespace qsusy
