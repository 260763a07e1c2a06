#include "qsusy/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qsusy/calculus.hpp"
#include "qsusy/errors.hpp"
#include "qsusy/invariance.hpp"

namespace qsusy {

void Grid::validate() const {
    if (n < 200) throw PreconditionError("grid needs at least 200 points");
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw PreconditionError("grid needs finite lo < hi");
}

namespace {

std::vector<double> lowest(const Expr& V, const Grid& g, int k, const Binding& binding, const std::string& var,
                           SingularNodes policy, int& excluded) {
    CompiledExpr v = compile_bound(V, binding, var);
    const double h = g.h(), off = -0.5 / (h * h);
    std::vector<int> kept;
    std::vector<double> diag;
    excluded = 0;
    for (int i = 1; i < g.n - 1; ++i) {
        double val = std::nan("");
        try {
            val = v.evaluate(g.node(i));
        } catch (const EvalError&) {
        }
        if (!std::isfinite(val)) {
            if (policy == SingularNodes::Error) {
                throw PreconditionError("potential singular at grid node q = " + std::to_string(g.node(i)));
            }
            ++excluded;
            continue;
        }
        kept.push_back(i);
        diag.push_back(1.0 / (h * h) + val);
    }
    const auto m = static_cast<Eigen::Index>(diag.size());
    if (m < k) throw PreconditionError("fewer retained nodes than requested eigenvalues");
    Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(diag.data(), m);
    Eigen::VectorXd s(std::max<Eigen::Index>(m - 1, 0));
    for (Eigen::Index j = 0; j + 1 < m; ++j) {
        s(j) = kept[static_cast<std::size_t>(j) + 1] == kept[static_cast<std::size_t>(j)] + 1 ? off : 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, s, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConditioningError("tridiagonal eigensolver did not converge", 0.0);
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + k);
    return out;
}

}  // namespace

FdSpectrum fd_spectrum(const Expr& V, const Grid& grid, int k, const Binding& binding, const std::string& var,
                       SingularNodes policy) {
    grid.validate();
    if (k < 1) throw PreconditionError("requested eigenvalue count must be positive");
    FdSpectrum out;
    out.eigenvalues = lowest(V, grid, k, binding, var, policy, out.excluded_nodes);
    Grid coarse = grid;
    coarse.n = (grid.n + 1) / 2;
    if (coarse.n - 2 >= k && coarse.n >= 50) {
        int skipped = 0;
        std::vector<double> c = lowest(V, coarse, k, binding, var, SingularNodes::Exclude, skipped);
        const double h2 = grid.h() * grid.h(), H2 = coarse.h() * coarse.h();
        for (int i = 0; i < k; ++i) out.error_estimates.push_back(std::fabs(c[i] - out.eigenvalues[i]) * h2 / (H2 - h2));
    }
    return out;
}

double schrodinger_residual(const Expr& V, const Expr& psi, double E, const std::vector<double>& probes,
                            const Binding& binding, const std::string& var) {
    const Expr lhs = Expr(Rational(-1, 2)) * differentiate(psi, var, 2) + V * psi;
    CompiledExpr l = compile_bound(lhs, binding, var), p = compile_bound(psi, binding, var);
    double worst = 0.0;
    for (double x : probes) {
        double a = 0.0, b = 0.0;
        try {
            a = l.evaluate(x);
            b = p.evaluate(x);
        } catch (const EvalError& e) {
            throw PreconditionError("probe at a singularity, q = " + std::to_string(x) + ": " + e.what());
        }
        worst = std::max(worst, std::fabs(a - E * b) / (1.0 + std::fabs(E * b)));
    }
    return worst;
}

std::string to_string(Normalizability n) {
    switch (n) {
        case Normalizability::Normalizable: return "normalizable";
        case Normalizability::Divergent: return "divergent";
        default: return "inconclusive";
    }
}

namespace {

constexpr int kShells = 10;

Normalizability classify(const std::vector<double>& tails, double core, std::vector<double>& ratios) {
    for (double t : tails) {
        if (!std::isfinite(t)) return Normalizability::Divergent;
    }
    ratios.clear();
    for (std::size_t i = 0; i + 1 < tails.size(); ++i) {
        ratios.push_back(tails[i] > 0.0 ? tails[i + 1] / tails[i] : (tails[i + 1] > 0.0 ? HUGE_VAL : 0.0));
    }
    const double scale = std::max(core, 1e-300);
    if (tails.back() <= 1e-15 * scale && tails[tails.size() - 2] <= 1e-12 * scale) return Normalizability::Normalizable;
    const auto last = ratios.end() - 3;
    bool below = std::all_of(last, ratios.end(), [](double r) { return r <= 0.9; });
    bool above = std::all_of(last, ratios.end(), [](double r) { return r >= 1.1; });
    if (below) return Normalizability::Normalizable;
    if (above) return Normalizability::Divergent;
    return Normalizability::Inconclusive;
}

}  // namespace

NormalizabilityReport normalizability_probe(const Expr& psi, const Domain& domain, const Binding& binding,
                                            const std::string& var) {
    if (!(domain.lo < domain.hi)) throw PreconditionError("domain needs lo < hi");
    CompiledExpr p = compile_bound(psi, binding, var);
    auto density = [&](double x) {
        try {
            double v = p.evaluate(x);
            return v * v;
        } catch (const EvalError& e) {
            if (e.kind() == EvalFailure::NonFinite || e.kind() == EvalFailure::Pole) return HUGE_VAL;
            throw;
        }
    };
    double err = 0.0;
    auto integrate = [&](double a, double b) {
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(density, a, b, 15, 1e-10, &err);
    };
    const bool lo_inf = std::isinf(domain.lo), hi_inf = std::isinf(domain.hi);
    double centre = 0.0;
    if (!lo_inf && !hi_inf) centre = 0.5 * (domain.lo + domain.hi);
    else if (!lo_inf) centre = domain.lo + 1.0;
    else if (!hi_inf) centre = domain.hi - 1.0;
    // Truncation points approaching each end: doubling distances for infinite ends, halving gaps for finite ones.
    auto ladder = [&](double end, bool infinite, double dir) {
        std::vector<double> x;
        for (int k = 0; k <= kShells; ++k) {
            x.push_back(infinite ? centre + dir * std::ldexp(1.0, k) : end - (end - centre) * std::ldexp(1.0, -k - 1));
        }
        return x;
    };
    const std::vector<double> up = ladder(domain.hi, hi_inf, 1.0), down = ladder(domain.lo, lo_inf, -1.0);

    NormalizabilityReport r;
    r.core = integrate(down.front(), up.front());
    if (!std::isfinite(r.core)) {
        r.verdict = r.lower = r.upper = Normalizability::Divergent;
        return r;
    }
    // An interior singularity shows up as a quadrature that does not settle.
    const bool core_settled = err <= 1e-6 * std::max(r.core, 1e-300);
    std::vector<double> tu, td;
    for (int k = 0; k < kShells; ++k) {
        tu.push_back(integrate(up[k], up[k + 1]));
        td.push_back(integrate(down[k + 1], down[k]));
    }
    r.upper = classify(tu, r.core, r.upper_ratios);
    r.lower = classify(td, r.core, r.lower_ratios);
    if (r.upper == Normalizability::Divergent || r.lower == Normalizability::Divergent) {
        r.verdict = Normalizability::Divergent;
    } else if (core_settled && r.upper == Normalizability::Normalizable && r.lower == Normalizability::Normalizable) {
        r.verdict = Normalizability::Normalizable;
    }
    return r;
}

double truncation_point(const Expr& psi, double lo, double hi_max, const Binding& binding, const std::string& var,
                        double rel) {
    if (!(lo < hi_max)) throw PreconditionError("truncation scan needs lo < hi_max");
    CompiledExpr p = compile_bound(psi, binding, var);
    constexpr int n = 4000;
    std::vector<double> v(n + 1, 0.0);
    double peak = 0.0;
    for (int i = 0; i <= n; ++i) {
        try {
            v[i] = std::fabs(p.evaluate(lo + (hi_max - lo) * i / n));
        } catch (const EvalError&) {
            v[i] = HUGE_VAL;
        }
        if (std::isfinite(v[i])) peak = std::max(peak, v[i]);
    }
    int last = n;
    while (last > 0 && std::isfinite(v[last]) && v[last] < rel * peak) --last;
    return lo + (hi_max - lo) * std::min(last + 1, n) / n;
}

}  // namespace qsusy
