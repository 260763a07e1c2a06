#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

#include "numeric.hpp"
#include "qsusy/calculus.hpp"
#include "qsusy/errors.hpp"
#include "qsusy/eval.hpp"

namespace qsusy {

CompiledExpr::CompiledExpr(const Expr& expr, const Binding& binding, const std::string& var) {
    const Expr& e = expr;
    std::unordered_map<const Node*, int> memo;
    std::unordered_map<Expr, int, ExprHash> shared;
    // Bound functions are expanded per node and compiled as shared subprograms.
    std::vector<Expr> keep;
    auto emit = [this](Instr in) {
        code_.push_back(in);
        return static_cast<int>(code_.size()) - 1;
    };
    std::function<int(const Expr&)> go = [&](const Expr& x) -> int {
        auto it = memo.find(x.id());
        if (it != memo.end()) return it->second;
        if (auto same = shared.find(x); same != shared.end()) {
            memo.emplace(x.id(), same->second);
            return same->second;
        }
        int r = -1;
        switch (x.kind()) {
            case Kind::Number: r = emit({Op::Const, -1, -1, x.number().get_d(), 0}); break;
            case Kind::Symbol: {
                if (x.name() == var) {
                    r = emit({Op::Var});
                    break;
                }
                auto p = binding.params.find(x.name());
                if (p == binding.params.end()) throw EvalError(EvalFailure::Unbound, "unbound symbol '" + x.name() + "'");
                r = emit({Op::Const, -1, -1, p->second, 0});
                break;
            }
            case Kind::Func: {
                auto f = binding.functions.find(x.name());
                if (f == binding.functions.end()) {
                    throw EvalError(EvalFailure::Unbound, "unbound function '" + x.name() + "'");
                }
                keep.push_back(substitute_function(x, x.name(), f->second, var));
                r = go(keep.back());
                break;
            }
            case Kind::Add:
            case Kind::Mul: {
                const bool sum = x.kind() == Kind::Add;
                std::size_t start = x.operand(0).is_number() ? 1 : 0;
                r = go(x.operand(start));
                for (std::size_t i = start + 1; i < x.size(); ++i) {
                    int b = go(x.operand(i));
                    r = emit({sum ? Op::Add : Op::Mul, r, b});
                }
                if (start == 1) r = emit({sum ? Op::Shift : Op::Scale, r, -1, x.operand(0).number().get_d(), 0});
                break;
            }
            case Kind::Pow: {
                int b = go(x.operand(0));
                const Expr& ex = x.operand(1);
                if (ex.is_number() && is_integer(ex.number()) && abs(ex.number()) < 1000000) {
                    long k = ex.number().get_num().get_si();
                    unsigned ak = static_cast<unsigned>(k < 0 ? -k : k);
                    r = ak == 1 ? b : emit({Op::PowInt, b, -1, 0.0, ak});
                    if (k < 0) r = emit({Op::Recip, r});
                } else if (ex.is_number()) {
                    r = emit({Op::PowReal, b, -1, ex.number().get_d(),
                              static_cast<unsigned>(detail::rational_parity(ex.number()))});
                } else if (!depends_on(ex, var)) {
                    double c = qsusy::evaluate(ex, 0.0, binding, var);
                    r = emit({Op::PowReal, b, -1, c, 0});
                } else {
                    r = emit({Op::PowVar, b, go(ex)});
                }
                break;
            }
            case Kind::Exp: r = emit({Op::Exp, go(x.operand(0))}); break;
            case Kind::Log: r = emit({Op::Log, go(x.operand(0))}); break;
            case Kind::Sin: r = emit({Op::Sin, go(x.operand(0))}); break;
            case Kind::Cos: r = emit({Op::Cos, go(x.operand(0))}); break;
        }
        memo.emplace(x.id(), r);
        shared.emplace(x, r);
        return r;
    };
    result_ = go(e);
}

void CompiledExpr::evaluate(std::span<const double> xs, std::span<double> out, const simd::KernelTable& k) const {
    const std::size_t n = xs.size();
    if (out.size() != n) throw PreconditionError("output span size mismatch");
    if (code_.empty()) throw PreconditionError("evaluating an empty compiled expression");
    std::vector<std::vector<double>> reg(code_.size());
    for (std::size_t i = 0; i < code_.size(); ++i) {
        const Instr& in = code_[i];
        std::vector<double>& o = reg[i];
        o.resize(n);
        const double* a = in.a >= 0 ? reg[static_cast<std::size_t>(in.a)].data() : nullptr;
        const double* b = in.b >= 0 ? reg[static_cast<std::size_t>(in.b)].data() : nullptr;
        switch (in.op) {
            case Op::Const: std::fill(o.begin(), o.end(), in.c); break;
            case Op::Var: std::copy(xs.begin(), xs.end(), o.begin()); break;
            case Op::Add: k.add(a, b, o.data(), n); break;
            case Op::Mul: k.mul(a, b, o.data(), n); break;
            case Op::Scale: k.scale(in.c, a, o.data(), n); break;
            case Op::Shift: k.shift(in.c, a, o.data(), n); break;
            case Op::Recip:
                if (k.reciprocal(a, o.data(), n) < kPoleGuard) {
                    throw EvalError(EvalFailure::Pole, "pole: denominator vanishes");
                }
                break;
            case Op::PowInt: k.powi(a, in.k, o.data(), n); break;
            case Op::PowReal:
                for (std::size_t j = 0; j < n; ++j) o[j] = detail::rational_power(a[j], in.c, static_cast<int>(in.k));
                break;
            case Op::PowVar:
                for (std::size_t j = 0; j < n; ++j) o[j] = detail::real_power(a[j], b[j]);
                break;
            case Op::Exp:
                for (std::size_t j = 0; j < n; ++j) o[j] = std::exp(a[j]);
                break;
            case Op::Log:
                for (std::size_t j = 0; j < n; ++j) o[j] = detail::checked_log(a[j]);
                break;
            case Op::Sin:
                for (std::size_t j = 0; j < n; ++j) o[j] = std::sin(a[j]);
                break;
            case Op::Cos:
                for (std::size_t j = 0; j < n; ++j) o[j] = std::cos(a[j]);
                break;
        }
    }
    const auto& r = reg[static_cast<std::size_t>(result_)];
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(r[j])) throw EvalError(EvalFailure::NonFinite, "evaluation overflowed");
        out[j] = r[j];
    }
}

std::vector<double> CompiledExpr::evaluate(std::span<const double> xs, const simd::KernelTable& k) const {
    std::vector<double> out(xs.size());
    evaluate(xs, out, k);
    return out;
}

double CompiledExpr::evaluate(double x) const {
    double out = 0.0;
    evaluate(std::span<const double>(&x, 1), std::span<double>(&out, 1), simd::kernels(simd::Isa::Scalar));
    return out;
}

}  // namespace qsusy
