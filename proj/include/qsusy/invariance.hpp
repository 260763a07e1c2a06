#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <optional>
#include <utility>
#include <vector>

#include "qsusy/diffop.hpp"
#include "qsusy/eval.hpp"
#include "qsusy/expr.hpp"

namespace qsusy {

/// Finite-dimensional function space spanned by gauge * basis[i].
struct Subspace {
    std::vector<Expr> basis;
    std::string var = "z";
    Expr gauge = Expr(1);

    std::vector<Expr> elements() const;
    std::size_t dim() const { return basis.size(); }
};

struct SamplePlan {
    int fit = 12;
    int holdout = 6;
    std::uint64_t seed = 1;
    /// Radius around a candidate point that must also evaluate cleanly.
    double exclusion = 1e-3;
    double tol = 1e-9;
    double cond_ceiling = 1e10;
    double lo = 0.5;
    double hi = 2.5;
};

struct Verdict {
    bool pass = false;
    /// Largest relative residual per basis element over fit and holdout points.
    std::vector<double> residuals;
    /// Column i holds the coordinates of op(b_i); filled when pass.
    Eigen::MatrixXd matrix;
    double condition = 0.0;
    std::string diagnostics;

    double max_residual() const;
};

/// Uniform doubles in [lo, hi) from a seeded 64-bit Mersenne twister.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed);
    double uniform(double lo, double hi);
    std::uint64_t next() { return rng_(); }

private:
    std::mt19937_64 rng_;
};

/// Draws `count` points in [plan.lo, plan.hi] at which `probe` (and probe at x +- exclusion) succeeds.
/// `probe` signals a bad point by throwing EvalError or returning false.
std::vector<double> sample_points(const SamplePlan& plan, int count, std::uint64_t stream,
                                  const std::function<bool(double)>& probe);

/// CompiledExpr whose unbound symbols are reported as PreconditionError.
CompiledExpr compile_bound(const Expr& e, const Binding& binding, const std::string& var);

/// Numeric action of an operator on one function: values of sum_k c_k psi^(k) and of sum_k |c_k psi^(k)|.
class AppliedOp {
public:
    AppliedOp(const DiffOp& op, const Expr& psi, const Binding& binding);
    /// Returns false when any term fails to evaluate at x.
    bool evaluate(double x, double& value, double& scale) const;

private:
    /// Coefficient and derivative of psi for each order.
    std::vector<std::pair<CompiledExpr, CompiledExpr>> terms_;
};

Verdict check_invariant(const DiffOp& op, const Subspace& space, const SamplePlan& plan = {},
                        const Binding& binding = {});
Verdict check_annihilates(const DiffOp& op, const Subspace& space, const SamplePlan& plan = {},
                          const Binding& binding = {});
/// Throws PreconditionError when op does not preserve the space.
Eigen::MatrixXd restricted_matrix(const DiffOp& op, const Subspace& space, const SamplePlan& plan = {},
                                  const Binding& binding = {});

/// Condition number of the column-normalised sample matrix of the space at plan points.
double basis_condition(const Subspace& space, const SamplePlan& plan = {}, const Binding& binding = {});

/// Numerical rank of the sampled elements of the space, columns normalised.
int span_rank(const Subspace& space, const SamplePlan& plan = {}, const Binding& binding = {}, double rel_tol = 1e-9);
/// True when both spaces span the same functions at the sample points.
bool same_span(const Subspace& a, const Subspace& b, const SamplePlan& plan = {}, const Binding& binding = {});

struct Equivalence {
    bool equal = false;
    /// True when decided by canonical coefficient equality.
    bool exact = false;
    double residual = 0.0;
};

/// Coefficient-wise comparison in exact arithmetic at rational points; empty when a coefficient
/// cannot be evaluated exactly at one of them.
std::optional<bool> ops_agree_exactly(const DiffOp& a, const DiffOp& b, const std::vector<Rational>& points,
                                      const Binding& binding = {});
/// Canonical coefficient equality, falling back to probes {1, x, x^2, e^(x/3), sin x} at plan.fit points.
Equivalence ops_equivalent(const DiffOp& a, const DiffOp& b, const Binding& binding = {}, const SamplePlan& plan = {});

/// Highest order whose coefficient is not zero, canonically or numerically at sample points.
int effective_order(const DiffOp& op, const Binding& binding = {}, const SamplePlan& plan = {});

/// Rank of the sampled action of the operators on the space, appended basis-wise:
/// each operator contributes the vector of op(b_i)(x_j) over all i, j.
int action_rank(const std::vector<DiffOp>& ops, const Subspace& space, const SamplePlan& plan = {},
                const Binding& binding = {}, double rel_tol = 1e-9);

struct CommutatorCheck {
    int i = 0;
    int j = 0;
    Equivalence result;
    std::string anchor;
};

/// [J_i, J_j] against the tabulated right-hand side in terms of J1, J4, J9, for all 28 pairs.
std::vector<CommutatorCheck> verify_commutator_table(const Expr& f, const SamplePlan& plan = {},
                                                     const Binding& binding = {});
/// Tabulated right-hand side for [J_i, J_j], i < j.
DiffOp commutator_rhs(int i, int j, const Expr& f, const std::string& var = "z");

struct ClosureReport {
    /// Orders of [J-, J0], [J+, J0], [J+, J-].
    int orders[3] = {0, 0, 0};
    bool second_order = false;
    bool first_order_generators = false;
    /// sl(2) relations [J-,J0] = J-/2, [J+,J0] = -J+/2, [J+,J-] = -2 J0 + 1.
    bool closed = false;
    DiffOp jm, j0, jp;
};

ClosureReport check_lie_closure(const Expr& alpha_m, const Expr& alpha_0, const Expr& alpha_p, const Expr& f,
                                const Binding& binding = {}, const SamplePlan& plan = {});

struct FirstOrderSearch {
    /// Dimension of the solution space restricted to a != 0.
    int solutions = 0;
    /// Coefficients of a (degree 0..4) and b for one solution, if any.
    std::vector<double> a, b;
};

/// Searches for a(z) d + b(z), a and b polynomials of degree <= degree, a != 0, preserving the space.
FirstOrderSearch search_first_order_invariant(const Subspace& space, int degree = 4, const SamplePlan& plan = {},
                                              const Binding& binding = {});

}  // namespace qsusy
