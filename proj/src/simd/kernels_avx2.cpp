#include "qsusy/simd/kernels.hpp"

#if defined(QSUSY_BUILD_AVX2) && defined(__AVX2__)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace qsusy::simd::detail {

namespace {

inline __m256d vabs(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

void add(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] + b[i];
}
void sub(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] - b[i];
}
void mul(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}
void scale(double c, const double* x, double* out, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(vc, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = c * x[i];
}
void shift(double c, const double* x, double* out, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_add_pd(vc, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = c + x[i];
}
double reciprocal(const double* x, double* out, std::size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d vm = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        vm = _mm256_min_pd(vabs(v), vm);
        _mm256_storeu_pd(out + i, _mm256_div_pd(one, v));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vm);
    double m = lanes[0];
    for (int j = 1; j < 4; ++j) m = lanes[j] < m ? lanes[j] : m;
    for (; i < n; ++i) {
        double a = std::fabs(x[i]);
        m = a < m ? a : m;
        out[i] = 1.0 / x[i];
    }
    return m;
}
void powi(const double* x, unsigned k, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d base = _mm256_loadu_pd(x + i);
        __m256d r = _mm256_set1_pd(1.0);
        unsigned e = k;
        bool first = true;
        while (e) {
            if (e & 1u) {
                r = first ? base : _mm256_mul_pd(r, base);
                first = false;
            }
            e >>= 1u;
            if (e) base = _mm256_mul_pd(base, base);
        }
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) {
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
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), vabs(_mm256_loadu_pd(x + i))));
    }
    for (; i < n; ++i) acc[i] = acc[i] + std::fabs(x[i]);
}
double max_abs(const double* x, std::size_t n) {
    __m256d vm = _mm256_setzero_pd();
    __m256d nan = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = vabs(_mm256_loadu_pd(x + i));
        nan = _mm256_or_pd(nan, _mm256_cmp_pd(v, v, _CMP_UNORD_Q));
        vm = _mm256_max_pd(vm, v);
    }
    if (_mm256_movemask_pd(nan)) return std::numeric_limits<double>::quiet_NaN();
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vm);
    double m = lanes[0];
    for (int j = 1; j < 4; ++j) m = lanes[j] > m ? lanes[j] : m;
    for (; i < n; ++i) {
        double a = std::fabs(x[i]);
        if (std::isnan(a)) return a;
        m = a > m ? a : m;
    }
    return m;
}

constexpr double kPivotFloor = 1e-300;

void sturm_count4(const double* diag, const double* off2, std::size_t n, const double* shifts, int* counts) {
    const __m256d s = _mm256_loadu_pd(shifts);
    const __m256d floor = _mm256_set1_pd(kPivotFloor);
    const __m256d neg_floor = _mm256_set1_pd(-kPivotFloor);
    const __m256d zero = _mm256_setzero_pd();
    __m256i c = _mm256_setzero_si256();
    __m256d q = _mm256_sub_pd(_mm256_set1_pd(diag[0]), s);
    q = _mm256_blendv_pd(q, neg_floor, _mm256_cmp_pd(vabs(q), floor, _CMP_LT_OQ));
    c = _mm256_sub_epi64(c, _mm256_castpd_si256(_mm256_cmp_pd(q, zero, _CMP_LT_OQ)));
    for (std::size_t i = 1; i < n; ++i) {
        __m256d d = _mm256_sub_pd(_mm256_set1_pd(diag[i]), s);
        q = _mm256_sub_pd(d, _mm256_div_pd(_mm256_set1_pd(off2[i - 1]), q));
        q = _mm256_blendv_pd(q, neg_floor, _mm256_cmp_pd(vabs(q), floor, _CMP_LT_OQ));
        c = _mm256_sub_epi64(c, _mm256_castpd_si256(_mm256_cmp_pd(q, zero, _CMP_LT_OQ)));
    }
    alignas(32) long long lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), c);
    for (int j = 0; j < 4; ++j) counts[j] = static_cast<int>(lanes[j]);
}

const KernelTable kAvx2{"avx2", add, sub, mul, scale, shift, reciprocal, powi, accumulate_abs, max_abs, sturm_count4};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace qsusy::simd::detail

#else

namespace qsusy::simd::detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace qsusy::simd::detail

#endif
