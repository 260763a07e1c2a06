#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "qsusy/calculus.hpp"
#include "qsusy/errors.hpp"
#include "qsusy/invariance.hpp"

namespace qsusy {

std::vector<Expr> Subspace::elements() const {
    std::vector<Expr> out;
    out.reserve(basis.size());
    for (const auto& b : basis) out.push_back(gauge * b);
    return out;
}

double Verdict::max_residual() const {
    double m = 0.0;
    for (double r : residuals) m = std::max(m, r);
    return m;
}

namespace {

struct SampledSpace {
    std::vector<CompiledExpr> values;
    std::vector<AppliedOp> images;

    SampledSpace(const DiffOp* op, const Subspace& space, const Binding& binding) {
        if (op && op->var() != space.var) {
            throw PreconditionError("operator variable '" + op->var() + "' does not match space variable '" +
                                    space.var + "'");
        }
        if (space.basis.empty()) throw PreconditionError("empty subspace");
        for (const auto& e : space.elements()) {
            values.push_back(compile_bound(e, binding, space.var));
            if (op) images.emplace_back(*op, e, binding);
        }
    }

    bool probe(double x) const {
        for (const auto& v : values) {
            if (!(std::fabs(v.evaluate(x)) < 1e12)) return false;
        }
        double a, s;
        for (const auto& im : images) {
            if (!im.evaluate(x, a, s)) return false;
        }
        return true;
    }
};

std::vector<double> plan_points(const SamplePlan& plan, int count, std::uint64_t stream,
                                const std::function<bool(double)>& probe) {
    return sample_points(plan, count, stream, [&](double x) {
        try {
            return probe(x);
        } catch (const EvalError& e) {
            if (e.kind() == EvalFailure::Unbound) throw PreconditionError(e.what());
            throw;
        }
    });
}

double condition_of(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return std::numeric_limits<double>::infinity();
    double lo = s(s.size() - 1);
    return lo > 0.0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

Eigen::VectorXd column_norms(const Eigen::MatrixXd& m) {
    Eigen::VectorXd n = m.colwise().norm().transpose();
    for (Eigen::Index i = 0; i < n.size(); ++i) {
        if (n(i) == 0.0) n(i) = 1.0;
    }
    return n;
}

}  // namespace

Verdict check_invariant(const DiffOp& op, const Subspace& space, const SamplePlan& plan, const Binding& binding) {
    const auto d = static_cast<Eigen::Index>(space.dim());
    if (plan.fit < static_cast<int>(d) + 2) throw PreconditionError("sample plan needs at least dim + 2 fit points");
    SampledSpace s(&op, space, binding);
    auto probe = [&](double x) { return s.probe(x); };
    std::vector<double> fit = plan_points(plan, plan.fit, 0, probe);
    std::vector<double> hold = plan_points(plan, plan.holdout, 1, probe);
    std::vector<double> all = fit;
    all.insert(all.end(), hold.begin(), hold.end());
    const auto m = static_cast<Eigen::Index>(all.size());
    const auto mf = static_cast<Eigen::Index>(fit.size());

    Eigen::MatrixXd basis(m, d);
    Eigen::MatrixXd image(m, d);
    Eigen::MatrixXd scale(m, d);
    for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            basis(r, c) = s.values[static_cast<std::size_t>(c)].evaluate(all[static_cast<std::size_t>(r)]);
            s.images[static_cast<std::size_t>(c)].evaluate(all[static_cast<std::size_t>(r)], image(r, c), scale(r, c));
        }
    }
    Eigen::MatrixXd fitb = basis.topRows(mf);
    Eigen::VectorXd norms = column_norms(fitb);
    Eigen::MatrixXd normalized = fitb * norms.cwiseInverse().asDiagonal();

    Verdict v;
    v.condition = condition_of(normalized);
    if (!(v.condition <= plan.cond_ceiling)) {
        throw ConditioningError("basis sample matrix is ill-conditioned", v.condition);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(normalized, Eigen::ComputeThinU | Eigen::ComputeThinV);
    v.matrix.resize(d, d);
    v.residuals.assign(static_cast<std::size_t>(d), 0.0);
    for (Eigen::Index c = 0; c < d; ++c) {
        Eigen::VectorXd coords = svd.solve(image.col(c).head(mf)).cwiseQuotient(norms);
        v.matrix.col(c) = coords;
        Eigen::VectorXd fitted = basis * coords;
        double worst = 0.0;
        for (Eigen::Index r = 0; r < m; ++r) {
            worst = std::max(worst, std::fabs(image(r, c) - fitted(r)) / (1.0 + scale(r, c)));
        }
        v.residuals[static_cast<std::size_t>(c)] = worst;
    }
    v.pass = v.max_residual() <= plan.tol;
    if (!v.pass) {
        auto worst = std::max_element(v.residuals.begin(), v.residuals.end()) - v.residuals.begin();
        v.diagnostics = "image of basis element " + std::to_string(worst) + " leaves the space (residual " +
                        std::to_string(v.max_residual()) + ")";
    }
    return v;
}

Verdict check_annihilates(const DiffOp& op, const Subspace& space, const SamplePlan& plan, const Binding& binding) {
    SampledSpace s(&op, space, binding);
    auto probe = [&](double x) { return s.probe(x); };
    std::vector<double> all = plan_points(plan, plan.fit, 0, probe);
    std::vector<double> hold = plan_points(plan, plan.holdout, 1, probe);
    all.insert(all.end(), hold.begin(), hold.end());
    Verdict v;
    v.residuals.assign(space.dim(), 0.0);
    for (std::size_t c = 0; c < space.dim(); ++c) {
        for (double x : all) {
            double val, sc;
            s.images[c].evaluate(x, val, sc);
            v.residuals[c] = std::max(v.residuals[c], std::fabs(val) / (1.0 + sc));
        }
    }
    v.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(space.dim()), static_cast<Eigen::Index>(space.dim()));
    v.pass = v.max_residual() <= plan.tol;
    if (!v.pass) v.diagnostics = "operator does not annihilate the space (residual " + std::to_string(v.max_residual()) + ")";
    return v;
}

Eigen::MatrixXd restricted_matrix(const DiffOp& op, const Subspace& space, const SamplePlan& plan,
                                  const Binding& binding) {
    Verdict v = check_invariant(op, space, plan, binding);
    if (!v.pass) throw PreconditionError("operator does not preserve the space: " + v.diagnostics);
    return v.matrix;
}

double basis_condition(const Subspace& space, const SamplePlan& plan, const Binding& binding) {
    SampledSpace s(nullptr, space, binding);
    std::vector<double> pts = plan_points(plan, plan.fit, 0, [&](double x) { return s.probe(x); });
    Eigen::MatrixXd m(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(space.dim()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            m(r, c) = s.values[static_cast<std::size_t>(c)].evaluate(pts[static_cast<std::size_t>(r)]);
        }
    }
    return condition_of(m * column_norms(m).cwiseInverse().asDiagonal());
}

int span_rank(const Subspace& space, const SamplePlan& plan, const Binding& binding, double rel_tol) {
    SampledSpace s(nullptr, space, binding);
    const int n = std::max(plan.fit + plan.holdout, static_cast<int>(space.dim()) + 2);
    std::vector<double> pts = plan_points(plan, n, 6, [&](double x) { return s.probe(x); });
    Eigen::MatrixXd m(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(space.dim()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            m(r, c) = s.values[static_cast<std::size_t>(c)].evaluate(pts[static_cast<std::size_t>(r)]);
        }
    }
    m = m * column_norms(m).cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > rel_tol * sv(0)) ++rank;
    }
    return rank;
}

bool same_span(const Subspace& a, const Subspace& b, const SamplePlan& plan, const Binding& binding) {
    if (a.var != b.var) throw PreconditionError("spaces use different variables");
    Subspace joint{a.elements(), a.var, Expr(1)};
    for (const auto& e : b.elements()) joint.basis.push_back(e);
    Subspace sa{a.elements(), a.var, Expr(1)}, sb{b.elements(), b.var, Expr(1)};
    const int ra = span_rank(sa, plan, binding);
    return ra == span_rank(sb, plan, binding) && ra == span_rank(joint, plan, binding);
}

Equivalence ops_equivalent(const DiffOp& a, const DiffOp& b, const Binding& binding, const SamplePlan& plan) {
    if (a.var() != b.var()) throw PreconditionError("operators act on different variables");
    Equivalence out;
    if (a == b || (a - b).is_zero()) {
        out.equal = out.exact = true;
        return out;
    }
    const Expr x = sym(a.var());
    const std::vector<Expr> probes{Expr(1), x, x * x, exp(x / Expr(3)), sin(x)};
    std::vector<AppliedOp> pa, pb;
    for (const auto& p : probes) {
        pa.emplace_back(a, p, binding);
        pb.emplace_back(b, p, binding);
    }
    auto ok = [&](double t) {
        double v, s;
        for (std::size_t i = 0; i < probes.size(); ++i) {
            if (!pa[i].evaluate(t, v, s) || !pb[i].evaluate(t, v, s)) return false;
        }
        return true;
    };
    for (double t : plan_points(plan, plan.fit, 2, ok)) {
        for (std::size_t i = 0; i < probes.size(); ++i) {
            double va, sa, vb, sb;
            pa[i].evaluate(t, va, sa);
            pb[i].evaluate(t, vb, sb);
            out.residual = std::max(out.residual, std::fabs(va - vb) / (1.0 + sa + sb));
        }
    }
    out.equal = out.residual <= plan.tol;
    return out;
}

std::optional<bool> ops_agree_exactly(const DiffOp& a, const DiffOp& b, const std::vector<Rational>& points,
                                      const Binding& binding) {
    if (a.var() != b.var()) throw PreconditionError("operators act on different variables");
    if (points.empty()) throw PreconditionError("no comparison points");
    std::set<int> orders;
    for (const auto& [k, c] : a.coefficients()) orders.insert(k);
    for (const auto& [k, c] : b.coefficients()) orders.insert(k);
    bool same = true;
    for (const auto& q : points) {
        for (int k : orders) {
            auto va = evaluate_exact(a.coeff(k), q, binding, a.var());
            auto vb = evaluate_exact(b.coeff(k), q, binding, b.var());
            if (!va || !vb) return std::nullopt;
            same = same && *va == *vb;
        }
    }
    return same;
}

int effective_order(const DiffOp& op, const Binding& binding, const SamplePlan& plan) {
    if (op.is_zero()) return -1;
    std::vector<std::pair<int, CompiledExpr>> coeffs;
    for (const auto& [k, c] : op.coefficients()) coeffs.emplace_back(k, compile_bound(c, binding, op.var()));
    auto ok = [&](double t) {
        for (const auto& [k, c] : coeffs) {
            if (!(std::fabs(c.evaluate(t)) < 1e12)) return false;
        }
        return true;
    };
    std::vector<double> pts = plan_points(plan, plan.fit, 3, ok);
    std::vector<double> peak(coeffs.size(), 0.0);
    double overall = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        for (double t : pts) peak[i] = std::max(peak[i], std::fabs(coeffs[i].second.evaluate(t)));
        overall = std::max(overall, peak[i]);
    }
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        if (peak[i] > 1e-10 * (1.0 + overall)) return coeffs[i].first;
    }
    return -1;
}

int action_rank(const std::vector<DiffOp>& ops, const Subspace& space, const SamplePlan& plan,
                const Binding& binding, double rel_tol) {
    if (ops.empty()) return 0;
    std::vector<std::vector<AppliedOp>> images(ops.size());
    const auto elems = space.elements();
    for (std::size_t i = 0; i < ops.size(); ++i) {
        for (const auto& e : elems) images[i].emplace_back(ops[i], e, binding);
    }
    auto ok = [&](double t) {
        double v, s;
        for (const auto& row : images) {
            for (const auto& im : row) {
                if (!im.evaluate(t, v, s)) return false;
            }
        }
        return true;
    };
    std::vector<double> pts = plan_points(plan, plan.fit + plan.holdout, 4, ok);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(ops.size()), static_cast<Eigen::Index>(elems.size() * pts.size()));
    for (std::size_t i = 0; i < ops.size(); ++i) {
        Eigen::Index col = 0;
        for (const auto& im : images[i]) {
            for (double t : pts) {
                double v, s;
                im.evaluate(t, v, s);
                m(static_cast<Eigen::Index>(i), col++) = v;
            }
        }
        double n = m.row(static_cast<Eigen::Index>(i)).norm();
        if (n > 0.0) m.row(static_cast<Eigen::Index>(i)) /= n;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > rel_tol * sv(0)) ++rank;
    }
    return rank;
}

FirstOrderSearch search_first_order_invariant(const Subspace& space, int degree, const SamplePlan& plan,
                                              const Binding& binding) {
    const auto elems = space.elements();
    const int d = static_cast<int>(elems.size());
    const int np = degree + 1;
    const int unknowns = 2 * np + d * d;
    std::vector<CompiledExpr> val, der;
    for (const auto& e : elems) {
        val.push_back(compile_bound(e, binding, space.var));
        der.push_back(compile_bound(differentiate(bind_functions(e, binding, space.var), space.var), binding, space.var));
    }
    auto ok = [&](double t) {
        for (int i = 0; i < d; ++i) {
            if (!(std::fabs(val[static_cast<std::size_t>(i)].evaluate(t)) < 1e12) ||
                !(std::fabs(der[static_cast<std::size_t>(i)].evaluate(t)) < 1e12)) {
                return false;
            }
        }
        return true;
    };
    std::vector<double> pts = plan_points(plan, 3 * unknowns, 5, ok);
    Eigen::MatrixXd sys(static_cast<Eigen::Index>(pts.size()) * d, unknowns);
    sys.setZero();
    Eigen::Index row = 0;
    for (double t : pts) {
        std::vector<double> bv(static_cast<std::size_t>(d)), dv(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            bv[static_cast<std::size_t>(i)] = val[static_cast<std::size_t>(i)].evaluate(t);
            dv[static_cast<std::size_t>(i)] = der[static_cast<std::size_t>(i)].evaluate(t);
        }
        for (int i = 0; i < d; ++i, ++row) {
            double tp = 1.0;
            for (int p = 0; p < np; ++p, tp *= t) {
                sys(row, p) = tp * dv[static_cast<std::size_t>(i)];
                sys(row, np + p) = tp * bv[static_cast<std::size_t>(i)];
            }
            for (int j = 0; j < d; ++j) sys(row, 2 * np + j * d + i) = -bv[static_cast<std::size_t>(j)];
        }
    }
    Eigen::VectorXd norms = column_norms(sys);
    Eigen::MatrixXd normalized = sys * norms.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(normalized, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    std::vector<Eigen::Index> null_cols;
    for (Eigen::Index i = 0; i < unknowns; ++i) {
        double s = i < sv.size() ? sv(i) : 0.0;
        if (s <= 1e-8 * sv(0)) null_cols.push_back(i);
    }
    FirstOrderSearch out;
    if (null_cols.empty()) return out;
    Eigen::MatrixXd apart(np, static_cast<Eigen::Index>(null_cols.size()));
    for (std::size_t k = 0; k < null_cols.size(); ++k) {
        apart.col(static_cast<Eigen::Index>(k)) = svd.matrixV().col(null_cols[k]).head(np);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> asvd(apart, Eigen::ComputeFullV);
    const auto& as = asvd.singularValues();
    for (Eigen::Index i = 0; i < as.size(); ++i) {
        if (as(i) > 1e-6) ++out.solutions;
    }
    if (out.solutions > 0) {
        Eigen::VectorXd mix = Eigen::VectorXd::Zero(unknowns);
        Eigen::VectorXd w = asvd.matrixV().col(0);
        for (std::size_t k = 0; k < null_cols.size(); ++k) {
            mix += w(static_cast<Eigen::Index>(k)) * svd.matrixV().col(null_cols[k]);
        }
        mix = mix.cwiseQuotient(norms);
        double lead = 0.0;
        for (int p = 0; p < np; ++p) lead = std::fabs(mix(p)) > std::fabs(lead) ? mix(p) : lead;
        for (int p = 0; p < np; ++p) {
            out.a.push_back(mix(p) / lead);
            out.b.push_back(mix(np + p) / lead);
        }
    }
    return out;
}

}  // namespace qsusy
