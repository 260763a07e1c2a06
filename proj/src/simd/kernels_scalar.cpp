#include <cmath>
#include <limits>

#include "qsusy/simd/kernels.hpp"

namespace qsusy::simd::detail {

namespace {

void add(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}
void sub(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}
void mul(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}
void scale(double c, const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = c * x[i];
}
void shift(double c, const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = c + x[i];
}
double reciprocal(const double* x, double* out, std::size_t n) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double a = std::fabs(x[i]);
        m = a < m ? a : m;
        out[i] = 1.0 / x[i];
    }
    return m;
}
void powi(const double* x, unsigned k, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double base = x[i];
        double r = 1.0;
        unsigned e = k;
        bool first = true;
        while (e) {
            if (e & 1u) {
                r = first ? base : r * base;
                first = false;
            }
            e >>= 1u;
            if (e) base = base * base;
        }
        out[i] = r;
    }
}
void accumulate_abs(const double* x, double* acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] + std::fabs(x[i]);
}
double max_abs(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double a = std::fabs(x[i]);
        if (a > m || std::isnan(a)) m = a;
        if (std::isnan(m)) return m;
    }
    return m;
}

constexpr double kPivotFloor = 1e-300;

void sturm_count4(const double* diag, const double* off2, std::size_t n, const double* shifts, int* counts) {
    for (int j = 0; j < 4; ++j) {
        double s = shifts[j];
        int c = 0;
        double q = diag[0] - s;
        if (std::fabs(q) < kPivotFloor) q = -kPivotFloor;
        if (q < 0) ++c;
        for (std::size_t i = 1; i < n; ++i) {
            q = (diag[i] - s) - off2[i - 1] / q;
            if (std::fabs(q) < kPivotFloor) q = -kPivotFloor;
            if (q < 0) ++c;
        }
        counts[j] = c;
    }
}

const KernelTable kScalar{"scalar", add, sub, mul, scale, shift, reciprocal, powi, accumulate_abs, max_abs, sturm_count4};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace qsusy::simd::detail
