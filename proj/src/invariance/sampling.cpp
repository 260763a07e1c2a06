#include <cmath>

#include "qsusy/calculus.hpp"
#include "qsusy/errors.hpp"
#include "qsusy/invariance.hpp"

namespace qsusy {

Sampler::Sampler(std::uint64_t seed) : rng_(seed) {}

double Sampler::uniform(double lo, double hi) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

std::vector<double> sample_points(const SamplePlan& plan, int count, std::uint64_t stream,
                                  const std::function<bool(double)>& probe) {
    if (count < 0) throw PreconditionError("negative sample count");
    Sampler rng(plan.seed * 0x9E3779B97F4A7C15ULL + stream);
    auto ok = [&](double x) {
        try {
            return probe(x);
        } catch (const EvalError&) {
            return false;
        }
    };
    std::vector<double> out;
    const int budget = 200 * (count + 1);
    for (int tries = 0; tries < budget && static_cast<int>(out.size()) < count; ++tries) {
        double x = rng.uniform(plan.lo, plan.hi);
        if (ok(x) && ok(x - plan.exclusion) && ok(x + plan.exclusion)) out.push_back(x);
    }
    if (static_cast<int>(out.size()) < count) {
        throw PreconditionError("could not find " + std::to_string(count) + " regular sample points in [" +
                                std::to_string(plan.lo) + ", " + std::to_string(plan.hi) + "]");
    }
    return out;
}

CompiledExpr compile_bound(const Expr& e, const Binding& binding, const std::string& var) {
    try {
        return CompiledExpr(e, binding, var);
    } catch (const EvalError& err) {
        if (err.kind() == EvalFailure::Unbound) throw PreconditionError(err.what());
        throw;
    }
}

AppliedOp::AppliedOp(const DiffOp& op, const Expr& psi, const Binding& binding) {
    Expr deriv = binding.functions.empty() ? psi : bind_functions(psi, binding, op.var());
    int at = 0;
    for (const auto& [k, c] : op.coefficients()) {
        while (at < k) {
            deriv = differentiate(deriv, op.var());
            ++at;
        }
        terms_.push_back({compile_bound(c, binding, op.var()), compile_bound(deriv, binding, op.var())});
    }
}

bool AppliedOp::evaluate(double x, double& value, double& scale) const {
    value = 0.0;
    scale = 0.0;
    try {
        for (const auto& t : terms_) {
            double v = t.first.evaluate(x) * t.second.evaluate(x);
            if (!(std::fabs(v) < 1e12)) return false;
            value += v;
            scale += std::fabs(v);
        }
    } catch (const EvalError&) {
        return false;
    }
    return true;
}

}  // namespace qsusy
