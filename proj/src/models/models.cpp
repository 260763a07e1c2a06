#include "qsusy/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qsusy/calculus.hpp"
#include "qsusy/errors.hpp"

namespace qsusy {

namespace {

const Expr half(Rational(1, 2));

double param(const Binding& b, const std::string& name) {
    auto it = b.params.find(name);
    if (it == b.params.end()) throw PreconditionError("model parameter '" + name + "' is not bound");
    return it->second;
}

Expr dq(const Expr& e, const std::string& q, int k = 1) { return differentiate(e, q, k); }

void fill_z_functions(ModelSpec& m) {
    ABC abc = coefficient_functions(*m.coefficients, m.f, m.z);
    m.A = abc.A;
    m.B = abc.B;
    m.C = abc.C;
    m.Q = abc.B + differentiate(abc.A, m.z) / Expr(2);
}

ModelSpec example1(const Binding& bind) {
    const double a = param(bind, "alpha"), n = param(bind, "nu");
    param(bind, "b0");
    if (a == 0.0 || n == 0.0) throw PreconditionError("example 1 needs alpha != 0 and nu != 0");
    ModelSpec m;
    m.kind = ModelKind::Example1;
    m.binding = bind;
    const Expr q = sym("q"), z = sym("z"), al = sym("alpha"), nu = sym("nu"), b0 = sym("b0");
    const Expr k = (al + b0) / (Expr(2) * al);
    m.z_of_q = al * q * q;
    m.f = exp(nu * z);
    m.E = pow(q, Expr(-1));
    m.F = Expr(2) * al * nu * q;
    m.W = al * nu * q - k / q;

    HamiltonianCoefficients h{0, 0, 0, 0, 0, 0, 0, 0, 0};
    h.c0 = (Expr(2) * al - b0) * nu / Expr(3);
    h.b1 = h.c0 - Expr(2) * al * nu;
    h.b0 = b0;
    h.a2 = h.c0 + b0 * nu;
    m.coefficients = h;
    fill_z_functions(m);

    auto gauge = [&](int s) {
        return (Expr(2) * al + Expr(s) * (al + b0)) / (Expr(2) * al) * log(q) - Expr(s) * al * nu / Expr(2) * q * q;
    };
    m.gauge_minus = gauge(-1);
    m.gauge_plus = gauge(1);
    auto potential = [&](int s) {
        const Expr sg(s);
        return al * al * nu * nu / Expr(2) * q * q +
               (b0 + al + sg * Expr(2) * al) * (b0 + al + sg * Expr(4) * al) / (Expr(8) * al * al * q * q) -
               (b0 + al - sg * Expr(3) * al) * nu / Expr(6);
    };
    m.V_minus = potential(-1);
    m.V_plus = potential(1);
    m.sector_minus = {{Expr(1), q * q, exp(al * nu * q * q)}, "q",
                      pow(q, (b0 - al) / (Expr(2) * al)) * exp(-al * nu / Expr(2) * q * q)};
    m.sector_plus = {{Expr(1), q * q, exp(-al * nu * q * q)}, "q",
                     pow(q, -(Expr(3) * al + b0) / (Expr(2) * al)) * exp(al * nu / Expr(2) * q * q)};
    m.q_lo = 0.4;
    m.q_hi = 1.6;
    return m;
}

ModelSpec example2(const Binding& bind) {
    const double a = param(bind, "alpha"), n = param(bind, "nu");
    param(bind, "b0");
    if (!(a > 0.0) || n == 0.0) throw PreconditionError("example 2 needs alpha > 0 and nu != 0");
    ModelSpec m;
    m.kind = ModelKind::Example2;
    m.binding = bind;
    const Expr q = sym("q"), z = sym("z"), al = sym("alpha"), nu = sym("nu"), b0 = sym("b0");
    const Expr s = sqrt(al);
    const Expr u = exp(s * q);
    m.z_of_q = u;
    m.f = exp(nu * z);
    m.E = s;
    m.F = s * nu * u;
    m.W = s * nu / Expr(2) * u - b0 / s * exp(-s * q);

    HamiltonianCoefficients h{0, 0, 0, 0, 0, 0, 0, 0, 0};
    h.c1 = al * nu / Expr(2);
    h.c0 = (al - Expr(2) * b0 * nu) / Expr(6);
    h.b1 = h.c0 - al / Expr(2);
    h.b0 = b0;
    h.a2 = h.c0 + b0 * nu;
    m.coefficients = h;
    fill_z_functions(m);

    auto gauge = [&](int sg) {
        return s * q - Expr(sg) * nu / Expr(2) * u - Expr(sg) * b0 / al * exp(-s * q);
    };
    m.gauge_minus = gauge(-1);
    m.gauge_plus = gauge(1);
    auto potential = [&](int sg) {
        const Expr g(sg);
        return al * nu * nu / Expr(8) * exp(Expr(2) * s * q) + b0 * b0 / (Expr(2) * al) * exp(Expr(-2) * s * q) +
               g * al * nu / Expr(4) * u + g * Expr(3) * b0 / Expr(2) * exp(-s * q) + (Expr(2) * al - b0 * nu) / Expr(6);
    };
    m.V_minus = potential(-1);
    m.V_plus = potential(1);
    m.sector_minus = {{Expr(1), u, exp(nu * u)}, "q", exp(-s * q - nu / Expr(2) * u - b0 / al * exp(-s * q))};
    m.sector_plus = {{Expr(1), u, exp(-nu * u)}, "q", exp(-s * q + nu / Expr(2) * u + b0 / al * exp(-s * q))};
    m.q_lo = -0.8;
    m.q_hi = 0.8;
    return m;
}

ModelSpec example3(const Binding& bind) {
    const double a = param(bind, "alpha"), b = param(bind, "beta"), n = param(bind, "nu");
    param(bind, "b0");
    if (!(a * b > 0.0)) throw PreconditionError("example 3 needs alpha * beta > 0");
    if (n == 0.0) throw PreconditionError("example 3 needs nu != 0");
    ModelSpec m;
    m.kind = ModelKind::Example3;
    m.binding = bind;
    const Expr q = sym("q"), z = sym("z"), al = sym("alpha"), be = sym("beta"), nu = sym("nu"), b0 = sym("b0");
    const Expr ab = al * be;
    const Expr s = sqrt(ab);
    const Expr th = s * nu * q;
    const Expr t = tan(th / Expr(2));
    const Expr k = (Expr(2) * b0 + ab * nu) / (Expr(4) * ab * nu);
    // Integrating dz / sqrt(2A) = dq fixes the scale of tan inside the logarithm.
    m.z_of_q = Expr(2) / nu * log(sqrt(be / al) * t);
    m.f = exp(nu * z);
    m.E = -s * nu * cos(th) / sin(th);
    m.F = Expr(2) * s * nu / sin(th);
    m.W = s * nu / (Expr(2) * sin(th)) - (Expr(2) * b0 + ab * nu) / (Expr(4) * s) * sin(th);

    HamiltonianCoefficients h{0, 0, 0, 0, 0, 0, 0, 0, 0};
    h.b2 = -al * al * nu / Expr(2);
    h.a0 = be * be * nu * nu / Expr(2);
    h.c0 = -nu * (b0 + ab * nu) / Expr(3);
    h.b1 = h.c0;
    h.b0 = b0;
    h.a2 = h.c0 + b0 * nu + ab * nu * nu;
    m.coefficients = h;
    fill_z_functions(m);

    auto gauge = [&](int sg) {
        const Expr g(sg);
        return -log(sin(th)) - g * half * log(t) - g * k * cos(th);
    };
    m.gauge_minus = gauge(-1);
    m.gauge_plus = gauge(1);
    const Expr w = Expr(2) * b0 + ab * nu;
    auto potential = [&](int sg) {
        const Expr g(sg);
        return w * w / (Expr(32) * ab) * pow(sin(th), Expr(2)) + ab * nu * nu / (Expr(8) * pow(sin(th), Expr(2))) +
               (Expr(2) * b0 - Expr(7) * ab * nu) * nu / Expr(24) - g * Expr(3) * w * nu / Expr(8) * cos(th) +
               g * ab * nu * nu / Expr(4) * cos(th) / pow(sin(th), Expr(2));
    };
    m.V_minus = potential(-1);
    m.V_plus = potential(1);
    const Expr sh = sin(th / Expr(2)), ch = cos(th / Expr(2));
    m.sector_minus = {{Expr(1), log(t), pow(t, Expr(2))}, "q",
                      pow(sh, half) * pow(ch, Expr(Rational(3, 2))) * exp(-k * cos(th))};
    m.sector_plus = {{Expr(1), log(t), pow(t, Expr(-2))}, "q",
                     pow(sh, Expr(Rational(3, 2))) * pow(ch, half) * exp(k * cos(th))};
    const double period = std::numbers::pi / (std::sqrt(a * b) * n);
    m.q_lo = std::min(0.15 * period, 0.85 * period);
    m.q_hi = std::max(0.15 * period, 0.85 * period);
    return m;
}

std::vector<double> model_points(const ModelSpec& m, const SamplePlan& plan, int count, std::uint64_t stream,
                                 const std::vector<Expr>& exprs) {
    std::vector<CompiledExpr> c;
    for (const auto& e : exprs) c.push_back(compile_bound(e, m.binding, m.q));
    return sample_points(plan, count, stream, [&](double x) {
        for (const auto& e : c) {
            if (!std::isfinite(e.evaluate(x))) return false;
        }
        return true;
    });
}

}  // namespace

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::Example1: return "example1";
        case ModelKind::Example2: return "example2";
        case ModelKind::Example3: return "example3";
        case ModelKind::Custom: return "custom";
    }
    return "custom";
}

SamplePlan ModelSpec::plan(const SamplePlan& base) const {
    SamplePlan p = base;
    p.lo = q_lo;
    p.hi = q_hi;
    return p;
}

std::vector<std::string> ModelSpec::parameters() const {
    switch (kind) {
        case ModelKind::Example1:
        case ModelKind::Example2: return {"alpha", "nu", "b0"};
        case ModelKind::Example3: return {"alpha", "beta", "nu", "b0"};
        case ModelKind::Custom: break;
    }
    std::vector<std::string> out;
    for (const auto& [k, v] : binding.params) out.push_back(k);
    return out;
}

ModelSpec build_example(int id, const Binding& bind) {
    switch (id) {
        case 1: return example1(bind);
        case 2: return example2(bind);
        case 3: return example3(bind);
        default: throw PreconditionError("unknown example " + std::to_string(id));
    }
}

ModelSpec build_custom(const CustomModel& c, const Binding& bind) {
    ModelSpec m;
    m.kind = ModelKind::Custom;
    m.binding = bind;
    m.W = c.W;
    m.E = c.E;
    m.F = c.F;
    m.z_of_q = c.z_of_q;
    m.f = c.f;
    m.gauge_minus = c.gauge_minus;
    m.gauge_plus = c.gauge_plus;
    auto [vm, vp] = potential_pair(c.W, c.E, c.F, m.q);
    m.V_minus = vm;
    m.V_plus = vp;
    m.q_lo = c.q_lo;
    m.q_hi = c.q_hi;
    m.sector_minus = solvable_sector(m, Side::Minus);
    m.sector_plus = solvable_sector(m, Side::Plus);
    return m;
}

std::pair<Expr, Expr> potential_pair(const Expr& W, const Expr& E, const Expr& F, const std::string& var) {
    const Expr common = half * W * W - (Expr(2) * dq(E, var) - E * E) / Expr(3) -
                        (Expr(2) * dq(F, var) + Expr(2) * W * F - Expr(2) * E * F - F * F) / Expr(6);
    const Expr split = half * (Expr(3) * dq(W, var) - dq(F, var));
    return {common - split, common + split};
}

std::pair<Expr, Expr> f1f2(const Expr& W, const Expr& E, const Expr& F, const std::string& var) {
    const Expr s = dq(F, var) - Expr(2) * W * F + Expr(2) * E * F + F * F;
    return {dq(W, var) + E * W - s / Expr(4), dq(E, var) + E * E + s / Expr(2)};
}

std::pair<Expr, Expr> f1f2_from_constants(const std::array<Expr, 5>& c, const Expr& f, const std::string& var) {
    const Expr z = sym(var);
    const Expr f1 = differentiate(f, var);
    return {c[0] * (z * f1 - Expr(2) * f) + c[1] * f1 + c[2] * z + c[3],
            Expr(-6) * (c[0] * z * f1 + c[1] * f1 - c[2] * z - c[4])};
}

std::pair<std::vector<Expr>, std::vector<Expr>> z_condition_terms(const Expr& F1, const Expr& F2, const Expr& f,
                                                                  const std::string& var) {
    auto d = [&](const Expr& e, int k = 1) { return differentiate(e, var, k); };
    const Expr f2 = d(f, 2), f3 = d(f, 3), f4 = d(f, 4);
    const Expr r3 = f3 / f2, r4 = f4 / f2;
    std::vector<Expr> c2{d(F1, 2), -half * r3 * d(F1), r3 * d(F2) / Expr(12)};
    std::vector<Expr> c3{d(F2, 3),
                         Expr(Rational(-3, 2)) * r3 * d(F2, 2),
                         Expr(3) * r4 * d(F1),
                         Expr(Rational(-9, 2)) * r3 * r3 * d(F1),
                         -half * r4 * d(F2),
                         Expr(Rational(3, 4)) * r3 * r3 * d(F2)};
    return {c2, c3};
}

std::pair<std::vector<Expr>, std::vector<Expr>> q_condition_terms(const Expr& W, const Expr& E, const Expr& F,
                                                                  const std::string& var) {
    auto [F1, F2] = f1f2(W, E, F, var);
    auto d = [&](const Expr& e, int k = 1) { return differentiate(e, var, k); };
    const Expr g1 = d(F1), g2 = d(F2);
    std::vector<Expr> c2{d(g1), -E * g1, -half * F * g1, F * g2 / Expr(12)};
    // (d - 2E - 3F/2)(g2' - E g2) + 3/2 (2F' - 2EF - F^2)(g1 - g2/6)
    const Expr inner = d(g2) - E * g2;
    const Expr mix = Expr(2) * d(F) - Expr(2) * E * F - F * F;
    std::vector<Expr> c3{d(inner), Expr(-2) * E * inner, Expr(Rational(-3, 2)) * F * inner,
                         Expr(Rational(3, 2)) * mix * g1, Expr(Rational(-1, 4)) * mix * g2};
    return {c2, c3};
}

double relative_residual(const std::vector<Expr>& terms, const std::vector<double>& points, const Binding& binding,
                         const std::string& var) {
    std::vector<CompiledExpr> c;
    for (const auto& t : terms) c.push_back(compile_bound(t, binding, var));
    double worst = 0.0;
    for (double x : points) {
        double sum = 0.0, scale = 0.0;
        for (const auto& e : c) {
            const double v = e.evaluate(x);
            sum += v;
            scale += std::fabs(v);
        }
        worst = std::max(worst, std::fabs(sum) / (1.0 + scale));
    }
    return worst;
}

DiffOp hamiltonian(const ModelSpec& m, Side side) {
    return DiffOp({{2, -half}, {0, side == Side::Minus ? m.V_minus : m.V_plus}}, m.q);
}

DiffOp supercharge_q(const ModelSpec& m) { return expand_factored({m.W - m.E - m.F, m.W, m.W + m.E}, m.q); }

DiffOp supercharge_q_transposed(const ModelSpec& m) {
    return -expand_factored({-m.W - m.E, -m.W, -m.W + m.E + m.F}, m.q);
}

double IntertwiningResidual::max() const { return std::max({cond2, cond3, f1, f2, intertwining, consistency}); }

IntertwiningResidual verify_susy_conditions(const ModelSpec& m, const SamplePlan& base) {
    const SamplePlan plan = m.plan(base);
    IntertwiningResidual r;
    auto [c2, c3] = q_condition_terms(m.W, m.E, m.F, m.q);
    std::vector<Expr> all = c2;
    all.insert(all.end(), c3.begin(), c3.end());
    const std::vector<double> pts = model_points(m, plan, plan.fit + plan.holdout, 8, all);
    r.cond2 = relative_residual(c2, pts, m.binding, m.q);
    r.cond3 = relative_residual(c3, pts, m.binding, m.q);

    const Expr zq = m.z_of_q;
    auto at_q = [&](const Expr& e) { return substitute(e, m.z, zq); };
    const Expr z1 = dq(zq, m.q), z2 = dq(zq, m.q, 2);
    const Expr f2 = at_q(differentiate(m.f, m.z, 2)), f3 = at_q(differentiate(m.f, m.z, 3));
    r.consistency = std::max(relative_residual({m.E, -z2 / z1}, pts, m.binding, m.q),
                             relative_residual({m.F, -f3 * z1 / f2}, pts, m.binding, m.q));

    if (m.coefficients) {
        r.consistency = std::max({r.consistency, relative_residual({Expr(2) * at_q(m.A), -z1 * z1}, pts, m.binding, m.q),
                                  relative_residual({at_q(m.Q), z1 * m.W}, pts, m.binding, m.q)});
        auto ic = to_integration_constants(*m.coefficients);
        auto [t1, t2] = f1f2_from_constants({ic[0], ic[1], ic[2], ic[3], ic[4]}, m.f, m.z);
        auto [F1, F2] = f1f2(m.W, m.E, m.F, m.q);
        r.f1 = relative_residual({F1, -at_q(t1)}, pts, m.binding, m.q);
        r.f2 = relative_residual({F2, -at_q(t2)}, pts, m.binding, m.q);
    }

    const DiffOp hm = hamiltonian(m, Side::Minus), hp = hamiltonian(m, Side::Plus);
    const DiffOp pm = supercharge_q(m), pp = supercharge_q_transposed(m);
    r.intertwining = std::max(ops_equivalent(pm * hm, hp * pm, m.binding, plan).residual,
                              ops_equivalent(pp * hp, hm * pp, m.binding, plan).residual);
    return r;
}

Equivalence gauge_consistency(const ModelSpec& m, Side side, const SamplePlan& base) {
    if (!m.coefficients) throw PreconditionError("model has no z-space coefficients");
    const Expr g = exp(side == Side::Minus ? m.gauge_minus : m.gauge_plus);
    DiffOp gauged = gauge_conjugate(g, hamiltonian(m, side));
    DiffOp zop = change_variable(build_hamiltonian(side, *m.coefficients, m.f, m.z), m.q, m.z_of_q);
    return ops_equivalent(gauged, zop, m.binding, m.plan(base));
}

Subspace solvable_sector(const ModelSpec& m, Side side) {
    Subspace s;
    s.var = m.q;
    for (const auto& b : sector_basis(side, m.f, m.z)) s.basis.push_back(substitute(b, m.z, m.z_of_q));
    s.gauge = exp(-(side == Side::Minus ? m.gauge_minus : m.gauge_plus));
    return s;
}

double AlgebraicSpectrum::max_residual() const {
    double r = 0.0;
    for (double v : residuals) r = std::max(r, v);
    return r;
}

bool AlgebraicSpectrum::real(std::size_t i, double tol) const {
    if (std::fabs(eigenvalues[i].imag()) > tol * (1.0 + std::abs(eigenvalues[i]))) return false;
    const auto col = vectors.col(static_cast<Eigen::Index>(i));
    return col.imag().norm() <= tol * (1.0 + col.norm());
}

AlgebraicSpectrum spectrum_on(const DiffOp& op, const Subspace& space, const SamplePlan& plan, const Binding& binding) {
    const Eigen::MatrixXd mat = restricted_matrix(op, space, plan, binding);
    Eigen::EigenSolver<Eigen::MatrixXd> es(mat);
    if (es.info() != Eigen::Success) throw ConditioningError("eigen-decomposition failed", 0.0);
    const Eigen::VectorXcd values = es.eigenvalues();
    const Eigen::MatrixXcd vectors = es.eigenvectors();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
    for (Eigen::Index i = 0; i < values.size(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (values(a).real() != values(b).real()) return values(a).real() < values(b).real();
        return values(a).imag() < values(b).imag();
    });

    AlgebraicSpectrum out;
    out.vectors.resize(vectors.rows(), vectors.cols());
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.eigenvalues.push_back(values(order[i]));
        Eigen::VectorXcd v = vectors.col(order[i]);
        // Fix the phase so real eigenvectors come out real.
        Eigen::Index big = 0;
        v.cwiseAbs().maxCoeff(&big);
        if (std::abs(v(big)) > 0.0) v /= v(big) / std::abs(v(big));
        out.vectors.col(static_cast<Eigen::Index>(i)) = v;
    }
    // Rounding splits a Jordan block into a cluster of nearly equal eigenvalues; merge clusters and
    // compare algebraic and geometric multiplicities.
    const double mnorm = std::max(1.0, mat.norm());
    for (std::size_t i = 0; i < out.eigenvalues.size();) {
        std::size_t j = i + 1;
        while (j < out.eigenvalues.size() && std::abs(out.eigenvalues[j] - out.eigenvalues[i]) < 1e-6 * mnorm) ++j;
        if (j - i > 1) {
            std::complex<double> mean = 0.0;
            for (std::size_t k = i; k < j; ++k) mean += out.eigenvalues[k];
            mean /= static_cast<double>(j - i);
            if (std::fabs(mean.imag()) < 1e-6 * mnorm) mean = mean.real();
            for (std::size_t k = i; k < j; ++k) out.eigenvalues[k] = mean;
            Eigen::MatrixXcd shifted = mat.cast<std::complex<double>>();
            shifted.diagonal().array() -= mean;
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
            const auto& sv = svd.singularValues();
            long kernel = 0;
            for (Eigen::Index k = 0; k < sv.size(); ++k) {
                if (sv(k) <= 1e-8 * mnorm) ++kernel;
            }
            if (kernel < static_cast<long>(j - i)) {
                out.defective = true;
                out.diagnostics += "eigenvalue " + std::to_string(mean.real()) + " has algebraic multiplicity " +
                                   std::to_string(j - i) + " but geometric multiplicity " + std::to_string(kernel) +
                                   " (Jordan block); ";
                // Only the genuine eigenvector is meaningful: reuse it for the whole cluster.
                Eigen::VectorXcd v = svd.matrixV().col(sv.size() - 1);
                for (std::size_t k = i; k < j; ++k) out.vectors.col(static_cast<Eigen::Index>(k)) = v;
            }
        }
        i = j;
    }

    const auto elems = space.elements();
    std::vector<CompiledExpr> values_at;
    std::vector<AppliedOp> images;
    for (const auto& e : elems) {
        values_at.push_back(compile_bound(e, binding, space.var));
        images.emplace_back(op, e, binding);
    }
    auto ok = [&](double x) {
        double v, s;
        for (std::size_t j = 0; j < elems.size(); ++j) {
            if (!std::isfinite(values_at[j].evaluate(x)) || !images[j].evaluate(x, v, s)) return false;
        }
        return true;
    };
    const std::vector<double> pts = sample_points(plan, plan.fit + plan.holdout, 7, ok);
    for (std::size_t i = 0; i < out.eigenvalues.size(); ++i) {
        const auto v = out.vectors.col(static_cast<Eigen::Index>(i));
        const std::complex<double> lam = out.eigenvalues[i];
        double worst = 0.0, scale = 0.0;
        for (double x : pts) {
            std::complex<double> psi = 0.0, hpsi = 0.0;
            for (std::size_t j = 0; j < elems.size(); ++j) {
                double hv, hs;
                images[j].evaluate(x, hv, hs);
                psi += v(static_cast<Eigen::Index>(j)) * values_at[j].evaluate(x);
                hpsi += v(static_cast<Eigen::Index>(j)) * hv;
            }
            worst = std::max(worst, std::abs(hpsi - lam * psi));
            scale = std::max(scale, std::abs(hpsi) + std::abs(lam * psi) + std::abs(psi));
        }
        out.residuals.push_back(scale > 0.0 ? worst / scale : worst);
    }
    return out;
}

AlgebraicSpectrum algebraic_spectrum(const ModelSpec& m, Side side, const SamplePlan& plan) {
    return spectrum_on(hamiltonian(m, side), side == Side::Minus ? m.sector_minus : m.sector_plus, m.plan(plan),
                       m.binding);
}

Expr eigenfunction(const AlgebraicSpectrum& s, const Subspace& space, std::size_t i) {
    if (i >= s.eigenvalues.size()) throw PreconditionError("eigenfunction index out of range");
    if (!s.real(i)) throw PreconditionError("eigenfunction is not real");
    const auto elems = space.elements();
    Expr out;
    for (std::size_t j = 0; j < elems.size(); ++j) {
        const double c = s.vectors(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)).real();
        if (c != 0.0) out = out + Expr(Rational(c)) * elems[j];
    }
    return out;
}

}  // namespace qsusy
