#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsusy/errors.hpp"
#include "qsusy/eval.hpp"
#include "qsusy/expr.hpp"
#include "qsusy/report.hpp"

namespace qsusy {

/// Invalid suite configuration; the CLI maps it to exit status 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// families | commutators | lie-closure | models | x2 | spectrum
const std::vector<std::string>& suite_names();

struct SuiteConfig {
    /// Empty selects every suite.
    std::vector<std::string> suites;
    Binding binding;
    /// Overrides the default residual tolerance of the sampled checks.
    std::optional<double> tol;
    std::string format = "json";
    std::uint64_t seed = 1;
    /// Single f(z) replacing the default f sets of the families and commutators suites.
    std::optional<std::string> f;
    /// X2 parameters, parsed as expressions ("5/2", "-3").
    std::vector<std::string> alphas;
    /// 0 runs every example.
    int example = 0;

    /// Throws ConfigError.
    void validate() const;
    nlohmann::json to_json() const;
};

/// Runs the selected suites; configuration errors are thrown before any check runs.
Report run_suite(const SuiteConfig& config);

/// Check generators, one family per acceptance item.
namespace checks {

struct Context {
    std::uint64_t seed = 1;
    std::optional<double> tol;
    double tolerance(double fallback) const { return tol.value_or(fallback); }
};

/// z^(5/2), z^3, z^2, e^z, e^(-2z), log z, sin z, z^4 + z and a seeded cubic.
std::vector<Expr> invariance_f_set(std::uint64_t seed);
std::vector<Expr> commutator_f_set();
std::vector<Expr> x2_default_alphas();

std::vector<CheckResult> invariance(const std::vector<Expr>& fs, const Context& ctx);
std::vector<CheckResult> kernels(const std::vector<Expr>& fs, const Context& ctx);
std::vector<CheckResult> construction(const Context& ctx, int draws = 50);
std::vector<CheckResult> commutators(const std::vector<Expr>& fs, const Context& ctx);
std::vector<CheckResult> lie_closure(const Context& ctx, int sweep = 100);
std::vector<CheckResult> monomials(const Context& ctx);
std::vector<CheckResult> missed_operators(const Context& ctx);
/// Random admissible draws per example unless `binding` is given.
std::vector<CheckResult> models(const std::vector<int>& examples, const Context& ctx, int draws = 5,
                                const std::optional<Binding>& binding = std::nullopt);
std::vector<CheckResult> spectrum(const Context& ctx, const std::optional<Binding>& binding = std::nullopt);
std::vector<CheckResult> x2(const std::vector<Expr>& alphas, const Context& ctx);
std::vector<CheckResult> factored(const Context& ctx);

}  // namespace checks

}  // namespace qsusy
