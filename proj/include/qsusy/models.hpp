#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qsusy/diffop.hpp"
#include "qsusy/eval.hpp"
#include "qsusy/expr.hpp"
#include "qsusy/families.hpp"
#include "qsusy/invariance.hpp"

namespace qsusy {

enum class ModelKind { Example1, Example2, Example3, Custom };

std::string to_string(ModelKind k);

/// A type B 3-fold SUSY model in physical q-space together with its z-space data.
///
/// Expressions are symbolic in the model parameters (alpha, beta, nu, b0);
/// `binding` supplies their numeric values.
struct ModelSpec {
    ModelKind kind = ModelKind::Custom;
    Binding binding;
    std::string q = "q";
    std::string z = "z";

    Expr z_of_q;
    Expr E, F, W;
    Expr f;

    /// Hamiltonian parameters of the gauged operator; absent for custom models.
    std::optional<HamiltonianCoefficients> coefficients;
    Expr A, B, C, Q;

    /// Exponents of the gauge factors e^{-W3^-}, e^{-W3^+}.
    Expr gauge_minus, gauge_plus;
    Expr V_minus, V_plus;
    /// Sectors as printed for the example, in q.
    Subspace sector_minus, sector_plus;

    /// Sampling window inside the physical domain.
    double q_lo = 0.5;
    double q_hi = 2.5;

    SamplePlan plan(const SamplePlan& base = {}) const;
    std::vector<std::string> parameters() const;
};

/// Builds example 1, 2 or 3 with the given parameter values.
ModelSpec build_example(int id, const Binding& bind);

struct CustomModel {
    Expr W, E, F;
    Expr z_of_q;
    Expr f;
    Expr gauge_minus, gauge_plus;
    double q_lo = 0.5;
    double q_hi = 2.5;
};

/// Model assembled from W, E, F; potentials from potential_pair and sectors from solvable_sector.
ModelSpec build_custom(const CustomModel& m, const Binding& bind = {});

/// V^- and V^+ of the intertwining condition.
std::pair<Expr, Expr> potential_pair(const Expr& W, const Expr& E, const Expr& F, const std::string& var = "q");

/// F1 and F2 in q from W, E, F.
std::pair<Expr, Expr> f1f2(const Expr& W, const Expr& E, const Expr& F, const std::string& var = "q");

/// Integrated F~1, F~2 in z from integration constants C1..C5.
std::pair<Expr, Expr> f1f2_from_constants(const std::array<Expr, 5>& c, const Expr& f, const std::string& var = "z");

/// Left-hand sides of the two z-space conditions on F~1, F~2, split into additive terms.
std::pair<std::vector<Expr>, std::vector<Expr>> z_condition_terms(const Expr& F1, const Expr& F2, const Expr& f,
                                                                  const std::string& var = "z");
/// Left-hand sides of the two q-space conditions, split into additive terms.
std::pair<std::vector<Expr>, std::vector<Expr>> q_condition_terms(const Expr& W, const Expr& E, const Expr& F,
                                                                  const std::string& var = "q");

/// max |sum t_i| / (1 + sum |t_i|) over the points.
double relative_residual(const std::vector<Expr>& terms, const std::vector<double>& points, const Binding& binding,
                         const std::string& var);

/// H = -1/2 d^2 + V in q.
DiffOp hamiltonian(const ModelSpec& m, Side side);
/// P3^- = (d + W - E - F)(d + W)(d + W + E) in q, expanded.
DiffOp supercharge_q(const ModelSpec& m);
/// Formal transpose P3^+ = (-d + W + E)(-d + W)(-d + W - E - F).
DiffOp supercharge_q_transposed(const ModelSpec& m);

struct IntertwiningResidual {
    double cond2 = 0.0;
    double cond3 = 0.0;
    /// F1, F2 from W, E, F against their integrated forms at z(q).
    double f1 = 0.0;
    double f2 = 0.0;
    /// (P3^- H^- - H^+ P3^-) and (P3^+ H^+ - H^- P3^+) on probe functions.
    double intertwining = 0.0;
    /// E, F, A, Q defining relations with z(q).
    double consistency = 0.0;

    double max() const;
};

IntertwiningResidual verify_susy_conditions(const ModelSpec& m, const SamplePlan& plan = {});

/// e^{W3^-} H^- e^{-W3^-} against the z-space operator rewritten in q; returns the equivalence residual.
Equivalence gauge_consistency(const ModelSpec& m, Side side, const SamplePlan& plan = {});

/// Sector of H^side derived from the z-space space and the gauge factor.
Subspace solvable_sector(const ModelSpec& m, Side side);

struct AlgebraicSpectrum {
    std::vector<std::complex<double>> eigenvalues;
    /// Column i: coordinates of the i-th eigenfunction in the sector basis.
    Eigen::MatrixXcd vectors;
    std::vector<double> residuals;
    bool defective = false;
    std::string diagnostics;

    double max_residual() const;
    bool real(std::size_t i, double tol = 1e-9) const;
};

/// Eigen-decomposition of the restricted matrix of op on the space, with per-eigenfunction residuals.
AlgebraicSpectrum spectrum_on(const DiffOp& op, const Subspace& space, const SamplePlan& plan = {},
                              const Binding& binding = {});
AlgebraicSpectrum algebraic_spectrum(const ModelSpec& m, Side side, const SamplePlan& plan = {});

/// Real eigenfunction i assembled as an expression (coefficients rounded to doubles).
Expr eigenfunction(const AlgebraicSpectrum& s, const Subspace& space, std::size_t i);

}  // namespace qsusy
