#include "qsusy/x2.hpp"

#include <cmath>
#include <optional>

#include "qsusy/calculus.hpp"
#include "qsusy/errors.hpp"
#include "qsusy/families.hpp"

namespace qsusy {

namespace {

Expr inv(const Expr& e) { return pow(e, Expr(-1)); }

Expr d1(const Expr& e, const std::string& v) { return differentiate(e, v); }

DiffOp op2(const Expr& c2, const Expr& c1, const Expr& c0, const std::string& v) {
    return DiffOp({{2, c2}, {1, c1}, {0, c0}}, v);
}

DiffOp first(const Expr& shift, const std::string& v) { return DiffOp({{1, Expr(1)}, {0, shift}}, v); }

DiffOp mult(const Expr& c, const std::string& v) { return DiffOp::multiply(c, v); }

std::optional<Rational> numeric(const Expr& e, const Binding& binding) {
    if (e.is_number()) return e.number();
    if (e.kind() == Kind::Symbol) {
        auto it = binding.params.find(e.name());
        if (it != binding.params.end()) return Rational(it->second);
    }
    return std::nullopt;
}

bool equals(const Expr& alpha, long v, const Binding& binding = {}) {
    auto a = numeric(alpha, binding);
    return a && *a == Rational(v);
}

/// Largest |e| over sample points, or -1 when it cannot be evaluated anywhere.
double peak(const Expr& e, const std::string& var, const Binding& binding, const SamplePlan& plan) {
    CompiledExpr c = compile_bound(e, binding, var);
    double best = -1.0;
    int seen = 0;
    for (int k = 0; k <= 4 * (plan.fit + plan.holdout); ++k) {
        double x = plan.lo + (plan.hi - plan.lo) * (k + 0.5) / (4.0 * (plan.fit + plan.holdout) + 1.0);
        try {
            double v = c.evaluate(x);
            if (!std::isfinite(v)) continue;
            best = std::max(best, std::fabs(v));
            ++seen;
        } catch (const EvalError&) {
        }
    }
    return seen == 0 ? -1.0 : best;
}

}  // namespace

Expr wronskian(const Expr& a, const Expr& b, const std::string& var) { return d1(a, var) * b - a * d1(b, var); }

WronskianFrame::WronskianFrame(Expr phi1, Expr phi2, Expr phi3, std::string var)
    : phi_{std::move(phi1), std::move(phi2), std::move(phi3)}, var_(std::move(var)) {
    w21_ = wronskian(phi_[1], phi_[0], var_);
    w31_ = wronskian(phi_[2], phi_[0], var_);
    w32_ = wronskian(phi_[2], phi_[1], var_);
    w3121_ = wronskian(w31_, w21_, var_);
}

Expr WronskianFrame::W(int i, int j) const {
    if (i < 1 || i > 3 || j < 1 || j > 3) throw PreconditionError("Wronskian index out of range");
    return wronskian(phi(i), phi(j), var_);
}

bool WronskianFrame::nondegenerate(const Binding& binding, const SamplePlan& plan) const {
    for (const Expr* w : {&w21_, &w3121_}) {
        if (w->is_zero()) return false;
        double p = peak(*w, var_, binding, plan);
        if (p >= 0.0 && p < 1e-12) return false;
    }
    return true;
}

void WronskianFrame::require_nondegenerate(const Binding& binding, const SamplePlan& plan) const {
    if (!nondegenerate(binding, plan)) {
        throw PreconditionError("degenerate Wronskian frame: W_{2,1} or W_{31,21} vanishes identically");
    }
}

WronskianFrame WronskianFrame::symbolic(const std::string& prefix) const {
    const Expr x = sym(var_);
    return {Expr::function(prefix + "1", 0, x), Expr::function(prefix + "2", 0, x), Expr::function(prefix + "3", 0, x),
            var_};
}

Binding WronskianFrame::bind(Binding base, const std::string& prefix) const {
    for (int n = 0; n < 3; ++n) base.functions[prefix + std::to_string(n + 1)] = phi_[n];
    return base;
}

SamplePlan WronskianFrame::window(const SamplePlan& base, const Binding& binding) const {
    return clear_window({phi_[0], w21_, w3121_}, var_, base, binding);
}

Subspace WronskianFrame::minus_space() const { return {{phi_[0], phi_[1], phi_[2]}, var_, Expr(1)}; }

Subspace WronskianFrame::plus_space() const { return {{w21_, w31_, w32_}, var_, phi_[0] * inv(w3121_)}; }

Expr f_alpha(const Expr& alpha, const std::string& var) {
    Expr u = sym(var);
    return u * u + Expr(2) * (alpha - 1) * u + (alpha - 1) * alpha;
}

Expr x2_phi(int n, const Expr& a, const std::string& var) {
    if (n < 1 || n > 3) throw PreconditionError("phi_n defined for n = 1..3");
    Expr u = sym(var);
    return (a + n - 2) * pow(u, Expr(n + 1)) + Expr(2) * (a + n - 1) * (a - 1) * pow(u, Expr(n)) +
           (a + n) * (a - 1) * a * pow(u, Expr(n - 1));
}

Expr x2b_chi(int n, const Expr& a, const std::string& var) {
    if (n < 1 || n > 3) throw PreconditionError("chi_n defined for n = 1..3");
    Expr u = sym(var);
    return (a - n) * (a - n + 1) * pow(u, Expr(n + 1)) +
           Expr(2) * (a - n - 1) * (a - n + 1) * (a - 1) * pow(u, Expr(n)) +
           (a - n - 1) * (a - n) * (a - 1) * a * pow(u, Expr(n - 1));
}

WronskianFrame x2_frame(const Expr& alpha, const Binding& binding, const std::string& var) {
    WronskianFrame fr(x2_phi(1, alpha, var), x2_phi(2, alpha, var), x2_phi(3, alpha, var), var);
    fr.require_nondegenerate(binding);
    return fr;
}

Subspace x2_basis(const Expr& alpha, const Binding& binding, const std::string& var) {
    return x2_frame(alpha, binding, var).minus_space();
}

Subspace x2b_basis(const Expr& alpha, const Binding& binding, const std::string& var) {
    Subspace s{{x2b_chi(1, alpha, var), x2b_chi(2, alpha, var), x2b_chi(3, alpha, var)}, var, Expr(1)};
    for (const auto& b : s.basis) {
        if (b.is_zero()) throw PreconditionError("degenerate chi basis: an element vanishes identically");
    }
    WronskianFrame fr(s.basis[0], s.basis[1], s.basis[2], var);
    fr.require_nondegenerate(binding);
    return s;
}

DiffOp wronskian_J(int i, const WronskianFrame& fr) {
    if (i < 1 || i > 9) throw PreconditionError("J'_i defined for i = 1..9");
    const std::string& v = fr.var();
    const Expr &p1 = fr.phi(1), &p2 = fr.phi(2), &p3 = fr.phi(3);
    const Expr p1d = d1(p1, v), p1dd = d1(p1d, v);
    const Expr w21 = fr.W21(), w21d = d1(w21, v);
    const Expr inv31 = inv(fr.W3121());
    DiffOp L = op2(Expr(1), -w21d * inv(w21), (w21d * p1d - w21 * p1dd) * inv(w21 * p1), v);
    DiffOp tail = first(-p1d * inv(p1), v);
    auto lead = [&](const Expr& w) { return w * p1 * p1 * inv31 * L; };
    DiffOp j1 = lead(w21);
    auto j4 = [&] { return lead(fr.W31()) - p1 * p1 * inv(w21) * tail; };
    auto j9 = [&] { return lead(fr.W32()) - p2 * p1 * inv(w21) * tail + Expr(1); };
    switch (i) {
        case 1: return j1;
        case 2: return p2 * inv(p1) * j1;
        case 3: return p3 * inv(p1) * j1;
        case 4: return j4();
        case 5: return p2 * inv(p1) * j4();
        case 6: return p3 * inv(p1) * j4();
        case 7: return p2 * inv(p1) * j9();
        case 8: return p3 * inv(p1) * j9();
        default: return j9();
    }
}

DiffOp wronskian_K(int i, const WronskianFrame& fr) {
    if (i < 0 || i > 8) throw PreconditionError("K'_i defined for i = 0..8");
    const std::string& v = fr.var();
    const Expr &p1 = fr.phi(1), &p2 = fr.phi(2), &p3 = fr.phi(3);
    const Expr p1d = d1(p1, v), p1dd = d1(p1d, v);
    const Expr w21 = fr.W21(), w21d = d1(w21, v), w21dd = d1(w21d, v);
    const Expr w = fr.W3121(), wd = d1(w, v), wdd = d1(wd, v);
    const Expr r1 = p1d * inv(p1), rw = wd * inv(w), r21 = w21d * inv(w21);
    DiffOp k0 = w21 * w21 * inv(w) * first(-r1 - r21 + rw, v);
    if (i == 0) return k0;
    DiffOp k1 = w21 * p1 * p1 * inv(w) *
                op2(Expr(1), -(Expr(2) * r1 - rw),
                    -p1dd * inv(p1) - w21dd * inv(w21) + wdd * inv(w) + Expr(2) * r1 * r1 - (r1 - r21 + rw) * rw, v);
    auto k2 = [&] { return p2 * inv(p1) * k1 - k0; };
    auto k3 = [&] { return p3 * inv(p1) * k1 - fr.W31() * inv(w21) * k0 + Expr(1); };
    const Expr s31 = fr.W31() * inv(w21), s32 = fr.W32() * inv(w21);
    switch (i) {
        case 1: return k1;
        case 2: return k2();
        case 3: return k3();
        case 4: return s31 * k1;
        case 5: return s31 * k2();
        case 6: return s31 * k3();
        case 7: return s32 * k2();
        default: return s32 * k3();
    }
}

namespace {

DiffOp carry(const DiffOp& zop, const WronskianFrame& fr) {
    return change_variable(zop, fr.var(), fr.phi(2) * inv(fr.phi(1)), {{"f", fr.phi(3) * inv(fr.phi(1))}});
}

}  // namespace

DiffOp conjugated_J(int i, const WronskianFrame& fr) {
    return gauge_conjugate(fr.phi(1), carry(build_J(i, generic_f("z"), "z"), fr));
}

DiffOp conjugated_K(int i, const WronskianFrame& fr) {
    const Expr g = pow(fr.phi(1), Expr(3)) * pow(fr.W21(), Expr(-2));
    return gauge_conjugate(g, carry(build_K(i, generic_f("z"), "z"), fr));
}

X2Supercharges x2_supercharges(const WronskianFrame& fr) {
    const std::string& v = fr.var();
    const Expr r1 = d1(fr.phi(1), v) * inv(fr.phi(1));
    const Expr r21 = d1(fr.W21(), v) * inv(fr.W21());
    const Expr rw = d1(fr.W3121(), v) * inv(fr.W3121());
    DiffOp minus = expand_factored({r1 + r21 - rw, r1 - r21, -r1}, v);
    DiffOp plus = -expand_factored({r1, -r1 + r21, -r1 - r21 + rw}, v);
    return {minus, plus};
}

X2Supercharges x2_supercharges_conjugated(const WronskianFrame& fr) {
    const Expr zp = fr.W21() * pow(fr.phi(1), Expr(-2));
    const Expr scale = pow(zp, Expr(3));
    DiffOp minus = gauge_conjugate(fr.phi(1), carry(supercharge(Side::Minus, generic_f("z"), "z"), fr));
    const Expr g = pow(fr.phi(1), Expr(3)) * pow(fr.W21(), Expr(-2));
    DiffOp plus = gauge_conjugate(g, carry(supercharge(Side::Plus, generic_f("z"), "z"), fr));
    return {scale * minus, scale * plus};
}

X2Supercharges x2_supercharges_factored(const Expr& a, const std::string& v) {
    auto f = [&](int k) { return f_alpha(a + k, v); };
    auto lg = [&](int k) { return d1(f(k), v) * inv(f(k)); };
    DiffOp minus = f(0) * inv(f(2)) * first(-lg(3), v) * (f(2) * inv(f(1)) * first(-lg(2), v)) *
                   (f(1) * inv(f(0)) * first(-lg(1), v));
    DiffOp plus = first(lg(1), v) * mult(f(1) * inv(f(0)), v) * first(lg(2), v) * mult(f(2) * inv(f(1)), v) *
                  first(lg(3), v) * mult(f(0) * inv(f(2)), v);
    return {minus, plus};
}

std::string to_string(X2Side s) { return s == X2Side::J ? "J" : "K"; }

DiffOp literature_x2(int i, X2Side side, const Expr& a, const std::string& v, X2Form form) {
    if (i < 1 || i > 4) throw PreconditionError("literature X2 operators defined for i = 1..4");
    if (side == X2Side::J && i == 4 && equals(a, -1)) throw PreconditionError("J4^(X2) divides by 2(alpha + 1)");
    if (side == X2Side::K && i == 4 && equals(a, 2)) throw PreconditionError("K4^(X2) divides by 2(alpha - 2)");
    const Expr u = sym(v);
    const Expr fi = inv(f_alpha(a, v));
    const Expr u2 = u * u, u3 = u2 * u;
    const DiffOp dm1 = first(Expr(-1), v);
    if (side == X2Side::J) {
        switch (i) {
            case 1:
                return op2(u, -(u - a + 3), Expr(0), v) + Expr(4) * (a - 1) * (u + a) * fi * dm1;
            case 2:
                return op2(u2 + (a + 2) * (a - 1), -(u2 + Expr(4) * u + (a - 1) * (Expr(3) * a + 2)), Expr(4) * u,
                           v) -
                       Expr(8) * (a - 1) * (a * u + a * a - 1) * fi * dm1;
            case 3:
                return op2((u + Expr(2) * a + 2) * u2,
                           (a - 5) * u2 + (Expr(3) * a * a + a - 8) * u + Expr(4) * (a + 4) * (a - 1),
                           -Expr(4) * (a - 2) * u, v) -
                       Expr(4) * (a - 1) * ((a * a + Expr(3) * a - 8) * u + (a + 4) * (a - 1) * a) * fi * dm1;
            default: {
                const Expr a2 = a * a, a3 = a2 * a, a4 = a3 * a;
                DiffOp twice =
                    op2((Expr(2) * (a + 1) * u + Expr(3) * a2 + Expr(7) * a + 6) * u3,
                        -(Expr(12) * (a + 1) * u3 + (Expr(3) * a3 + Expr(8) * a2 + Expr(15) * a + 22) * u2 +
                          (a - 1) * (Expr(7) * a3 + Expr(27) * a2 + Expr(10) * a - 16) * u +
                          Expr(2) * (a - 1) * (a4 + Expr(8) * a3 + Expr(29) * a2 - Expr(6) * a - 40)),
                        Expr(24) * (a + 1) * u2 + Expr(4) * (a - 1) * (Expr(3) * a2 + Expr(2) * a - 4) * u, v) +
                    Expr(4) * (a - 1) * (a - 1) *
                        ((a3 + Expr(9) * a2 - Expr(22) * a - 40) * u + (a3 + Expr(9) * a2 - Expr(6) * a - 20) * a) *
                        fi * dm1;
                return inv(Expr(2) * (a + 1)) * twice;
            }
        }
    }
    switch (i) {
        case 1:
            return op2(u, u - a - 3, Expr(0), v) +
                   Expr(4) * fi * DiffOp({{1, (a - 1) * (u + a)}, {0, a * (u + a - 1)}}, v);
        case 2:
            return op2(u2 + (a - 1) * (a - 4), u2 - Expr(6) * u + (a - 1) * (Expr(3) * a - 8), -Expr(4) * u, v) -
                   Expr(8) * (a - 1) * fi *
                       DiffOp({{1, (a - 3) * u + (a - 1) * (a - 2)}, {0, (a - 2) * u + a * a - Expr(3) * a + 4}}, v);
        case 3:
            return op2((u + Expr(2) * a - 4) * u2,
                       -((a + 3) * u2 + (Expr(3) * a * a - Expr(5) * a - 4) * u - Expr(4) * (a - 1) * (a - 2)),
                       Expr(4) * a * u, v) -
                   Expr(4) * (a - 1) * fi *
                       DiffOp({{1, (a * a - Expr(3) * a + 4) * u + a * (a - 1) * (a - 2)},
                               {0, a * ((a - 2) * u + a * (a - 3))}},
                              v);
        default: {
            const Expr a2 = a * a, a3 = a2 * a, a4 = a3 * a;
            const Expr p = a3 - Expr(3) * a2 + Expr(8) * a - 16;
            const Expr pt = form == X2Form::Printed ? p : (a - 2) * (a2 - a + 4);
            DiffOp twice =
                op2((Expr(2) * (a - 2) * u + Expr(3) * a2 - Expr(11) * a + 12) * u3,
                    -(Expr(12) * (a - 2) * u3 - (Expr(3) * a3 - Expr(36) * a2 + Expr(97) * a - 84) * u2 -
                      (a - 1) * (Expr(7) * a3 - Expr(49) * a2 + Expr(112) * a - 80) * u -
                      Expr(2) * (a - 1) * (a4 - Expr(11) * a3 + Expr(32) * a2 - Expr(36) * a + 16)),
                    Expr(24) * (a - 2) * u2 - Expr(4) * (Expr(3) * a3 - Expr(27) * a2 + Expr(64) * a - 48) * u, v) +
                Expr(4) * (a - 1) * fi *
                    DiffOp({{1, (a - 1) * (p * u + a * pt)}, {0, a * (pt * u + a * (a - 1) * (a2 - Expr(3) * a + 4))}},
                           v);
            return inv(Expr(2) * (a - 2)) * twice;
        }
    }
}

Eigen::MatrixXd X2Coefficients::matrix(const Binding& binding) const {
    Eigen::MatrixXd m(4, 9);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 9; ++j) m(i, j) = evaluate(c[i][j], 0.0, binding, "alpha");
    }
    return m;
}

X2Coefficients cij_coefficients(const Expr& a) {
    if (equals(a, -1)) throw PreconditionError("C_ij(alpha) undefined at alpha = -1");
    if (equals(a, 0)) throw PreconditionError("C_2j(alpha) undefined at alpha = 0");
    X2Coefficients x;
    for (auto& row : x.c) row.fill(Expr(0));
    const Expr a2 = a * a, a3 = a2 * a;
    const Expr ia = inv(a), ia1 = inv(a + 1);
    auto& c1 = x.c[0];
    c1[2] = Expr(2) * (a + 3);
    c1[3] = Expr(-2);
    c1[4] = -(a + 2);
    c1[5] = Expr(1);
    c1[0] = Expr(-2);
    auto& c2 = x.c[1];
    c2[1] = Expr(2) * (a + 3) * (a + 2) * (a - 1) * ia1;
    c2[2] = -Expr(2) * (a - 1) * (Expr(3) * a2 + Expr(12) * a + 13) * ia1;
    c2[3] = Expr(2) * (a2 - Expr(3) * a - 2) * ia * ia1;
    c2[4] = (a + 2) * (a - 1) * (Expr(3) * a2 + Expr(6) * a + 4) * ia * ia1;
    c2[5] = Expr(4) * (a + 2) * ia * ia1;
    c2[6] = -a * ia1;
    c2[7] = Expr(2) * (a - 1) * ia;
    c2[0] = Expr(2) * (a - 2) * (a - 1) * ia;
    auto& c3 = x.c[2];
    c3[3] = Expr(2) * (Expr(3) * a2 + Expr(7) * a + 6);
    c3[5] = -(Expr(3) * a2 + Expr(5) * a + 4);
    c3[6] = a;
    c3[7] = -Expr(2) * (a - 1);
    c3[0] = Expr(4) * (a + 4) * (a - 1);
    auto& c4 = x.c[3];
    c4[2] = -Expr(2) * a * (a + 3) * (a + 3) * (a - 1);
    c4[3] = -(a - 1) * (Expr(7) * a3 + Expr(31) * a2 + Expr(54) * a + 36) * ia1;
    c4[4] = a * (a + 3) * (a + 2) * (a + 2) * (a - 1) * ia1;
    c4[5] = (a - 1) * (Expr(7) * a3 + Expr(31) * a2 + Expr(54) * a + 48) * inv(Expr(2) * (a + 1));
    c4[6] = -(Expr(3) * a3 - Expr(5) * a2 - Expr(14) * a - 8) * inv(Expr(2) * (a + 1));
    c4[7] = (a - 1) * (Expr(3) * a2 + a - 12) * ia1;
    c4[8] = Expr(2) * (a - 1) * ia1;
    c4[0] = -Expr(4) * (a - 1) * (a3 + Expr(7) * a2 - 10) * ia1;
    return x;
}

DiffOp x2_tilde_K(int i, const Expr& alpha, ConjugationDirection dir, const std::string& var) {
    const Expr base = alpha - 3;
    WronskianFrame fr = x2_frame(base, {}, var);
    const Expr g = f_alpha(base, var) * f_alpha(alpha, var);
    DiffOp k = wronskian_K(i, fr);
    return gauge_conjugate(dir == ConjugationDirection::Printed ? inv(g) : g, k);
}

SamplePlan clear_window(const std::vector<Expr>& denominators, const std::string& var, const SamplePlan& base,
                        const Binding& binding) {
    constexpr int n = 2401;
    constexpr double lo = -12.0, hi = 12.0;
    auto at = [](int k) { return lo + (hi - lo) * k / (n - 1); };
    std::vector<char> good(n, 1);
    for (const auto& den : denominators) {
        if (den.is_zero() || !depends_on(den, var)) continue;
        CompiledExpr c = compile_bound(den, binding, var);
        std::vector<double> v(n, 0.0);
        double peak_abs = 0.0;
        for (int k = 0; k < n; ++k) {
            try {
                v[k] = c.evaluate(at(k));
            } catch (const EvalError&) {
                v[k] = std::nan("");
            }
            if (std::isfinite(v[k])) peak_abs = std::max(peak_abs, std::fabs(v[k]));
        }
        for (int k = 0; k < n; ++k) {
            if (!std::isfinite(v[k]) || std::fabs(v[k]) < 1e-6 * peak_abs) good[k] = 0;
            if (k + 1 < n && std::isfinite(v[k]) && std::isfinite(v[k + 1]) && v[k] * v[k + 1] < 0) {
                good[k] = 0;
                good[k + 1] = 0;
            }
        }
    }
    std::vector<std::pair<int, int>> runs;
    int longest = 0;
    for (int k = 0; k < n;) {
        if (!good[k]) {
            ++k;
            continue;
        }
        int j = k;
        while (j < n && good[j]) ++j;
        runs.emplace_back(k, j - k);
        longest = std::max(longest, j - k);
        k = j;
    }
    // Among stretches at least 2 wide (or the longest), take the one nearest the origin.
    const int wide = std::min(longest, static_cast<int>(2.0 / (hi - lo) * (n - 1)));
    int best_start = -1, best_len = 0;
    double best_mid = 0.0;
    for (const auto& [start, len] : runs) {
        if (len < wide || len == 0) continue;
        const double m = std::fabs(0.5 * (at(start) + at(start + len - 1)));
        if (best_start < 0 || m < best_mid) {
            best_start = start;
            best_len = len;
            best_mid = m;
        }
    }
    SamplePlan plan = base;
    if (best_start < 0) return plan;
    const double a = at(best_start), b = at(best_start + best_len - 1);
    const double mid = 0.5 * (a + b);
    const double half = std::min(0.3 * (b - a), 1.5);
    if (half <= 0.05) return plan;
    plan.lo = mid - half;
    plan.hi = mid + half;
    return plan;
}

SamplePlan x2_plan(const Expr& alpha, const SamplePlan& base, const Binding& binding) {
    std::vector<Expr> dens;
    for (const Expr& a : {alpha, alpha - 3}) {
        WronskianFrame fr(x2_phi(1, a), x2_phi(2, a), x2_phi(3, a));
        dens.insert(dens.end(), {fr.phi(1), fr.W21(), fr.W3121()});
    }
    for (int k = -3; k <= 3; ++k) dens.push_back(f_alpha(alpha + k));
    return clear_window(dens, "u", base, binding);
}

X2Check check_x2_identity(int i, X2Side side, const Expr& alpha, const SamplePlan& base, const Binding& binding) {
    if (i < 1 || i > 4) throw PreconditionError("identities defined for i = 1..4");
    X2Check out;
    out.side = side;
    out.index = i;
    out.name = to_string(side) + std::to_string(i) + "^(X2) identity at alpha = " + to_string(alpha);
    const Expr shifted = side == X2Side::J ? alpha : alpha - 3;
    if ((i == 2 || i == 4) && equals(shifted, -1, binding)) {
        throw PreconditionError("C_" + std::to_string(i) + "j undefined: division by alpha + 1");
    }
    if (i == 2 && equals(shifted, 0, binding)) throw PreconditionError("C_2j undefined: division by alpha");
    DiffOp lhs = literature_x2(i, side, alpha);
    static const X2Coefficients generic = cij_coefficients(sym("alpha"));
    auto coeff = [&](int j) { return substitute(generic.at(i, j), "alpha", shifted); };
    WronskianFrame fr = x2_frame(shifted, binding);
    const WronskianFrame sf = fr.symbolic();
    const Binding bound = fr.bind(binding);
    const SamplePlan plan = x2_plan(alpha, base, binding);
    DiffOp rhs(fr.var());
    for (int j = 1; j <= 8; ++j) {
        Expr c = coeff(j);
        if (c.is_zero()) continue;
        rhs = rhs + c * (side == X2Side::J ? wronskian_J(j, sf) : wronskian_K(j, sf));
    }
    if (side == X2Side::K) rhs = gauge_conjugate(f_alpha(shifted) * f_alpha(alpha), rhs);
    Equivalence e = ops_equivalent(lhs, rhs + coeff(0), bound, plan);
    out.pass = e.equal;
    out.residual = e.residual;

    DiffOp rest = lhs - rhs - coeff(0);
    const double mid = 0.5 * (plan.lo + plan.hi);
    out.constant_offset = rest.coefficients().count(0) ? evaluate(rest.coeff(0), mid, bound, fr.var()) : 0.0;
    Equivalence m = ops_equivalent(lhs, rhs + coeff(0) + Expr(Rational(out.constant_offset)), bound, plan);
    out.residual_mod_constant = m.residual;
    if (!out.pass) {
        out.reason = m.equal ? "holds up to an additive constant" : "operators differ beyond a constant";
    }
    return out;
}

std::vector<X2Check> verify_x2_identities(const Expr& alpha, const SamplePlan& plan, bool j_side, bool k_side,
                                          const Binding& binding) {
    std::vector<X2Check> out;
    for (X2Side side : {X2Side::J, X2Side::K}) {
        if ((side == X2Side::J && !j_side) || (side == X2Side::K && !k_side)) continue;
        for (int i = 1; i <= 4; ++i) {
            try {
                out.push_back(check_x2_identity(i, side, alpha, plan, binding));
            } catch (const PreconditionError& e) {
                X2Check s;
                s.side = side;
                s.index = i;
                s.name = to_string(side) + std::to_string(i) + "^(X2) identity at alpha = " + to_string(alpha);
                s.skipped = true;
                s.reason = e.what();
                out.push_back(s);
            }
        }
    }
    return out;
}

Eigen::MatrixXd x2_complement(const Expr& alpha, const Binding& binding) {
    Eigen::MatrixXd c = cij_coefficients(alpha).matrix(binding).rightCols(8);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (int k = 0; k < s.size(); ++k) rank += s(k) > 1e-10 * s(0) ? 1 : 0;
    return svd.matrixV().rightCols(8 - rank).transpose();
}

}  // namespace qsusy
