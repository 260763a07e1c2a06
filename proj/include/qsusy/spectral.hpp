#pragma once

#include <limits>
#include <string>
#include <vector>

#include "qsusy/eval.hpp"
#include "qsusy/expr.hpp"

namespace qsusy {

/// Uniform grid on [lo, hi] with Dirichlet ends; the n - 2 interior nodes carry the unknowns.
struct Grid {
    double lo = 0.0;
    double hi = 1.0;
    int n = 1000;

    double h() const { return (hi - lo) / (n - 1); }
    double node(int i) const { return lo + h() * i; }
    /// Throws PreconditionError unless n >= 200 and lo < hi.
    void validate() const;
};

enum class SingularNodes { Error, Exclude };

struct FdSpectrum {
    std::vector<double> eigenvalues;
    /// Richardson estimate |E(h) - E(2h)| / 3 per eigenvalue; empty when the half grid is too coarse.
    std::vector<double> error_estimates;
    int excluded_nodes = 0;
};

/// Lowest k eigenvalues of -1/2 d^2 + V by second-order central differences.
FdSpectrum fd_spectrum(const Expr& V, const Grid& grid, int k, const Binding& binding = {},
                       const std::string& var = "q", SingularNodes policy = SingularNodes::Error);

/// max over probes of |-1/2 psi'' + V psi - E psi| / (1 + |E psi|).
double schrodinger_residual(const Expr& V, const Expr& psi, double E, const std::vector<double>& probes,
                            const Binding& binding = {}, const std::string& var = "q");

enum class Normalizability { Normalizable, Divergent, Inconclusive };
std::string to_string(Normalizability n);

struct Domain {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

struct NormalizabilityReport {
    Normalizability verdict = Normalizability::Inconclusive;
    Normalizability lower = Normalizability::Inconclusive;
    Normalizability upper = Normalizability::Inconclusive;
    /// Tail ratios of successive truncation shells at each end.
    std::vector<double> lower_ratios, upper_ratios;
    /// Integral of |psi|^2 over the innermost truncation.
    double core = 0.0;
};

/// Integrates |psi|^2 over a ladder of truncations approaching each end and classifies by tail growth.
NormalizabilityReport normalizability_probe(const Expr& psi, const Domain& domain, const Binding& binding = {},
                                            const std::string& var = "q");

/// Smallest hi in (lo, hi_max] beyond which |psi| stays below rel times its maximum on the scan.
double truncation_point(const Expr& psi, double lo, double hi_max, const Binding& binding = {},
                        const std::string& var = "q", double rel = 1e-8);

}  // namespace qsusy
