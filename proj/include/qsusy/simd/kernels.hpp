#pragma once

#include <cstddef>
#include <string>

namespace qsusy::simd {

/// Batch kernels over contiguous double arrays. Every variant performs the same
/// IEEE operations in the same order, so results agree bit for bit.
struct KernelTable {
    const char* name;
    void (*add)(const double* a, const double* b, double* out, std::size_t n);
    void (*sub)(const double* a, const double* b, double* out, std::size_t n);
    void (*mul)(const double* a, const double* b, double* out, std::size_t n);
    void (*scale)(double c, const double* x, double* out, std::size_t n);
    void (*shift)(double c, const double* x, double* out, std::size_t n);
    /// out = 1/x; returns min |x| so callers can detect poles.
    double (*reciprocal)(const double* x, double* out, std::size_t n);
    /// out = x^k for k >= 1 by binary powering.
    void (*powi)(const double* x, unsigned k, double* out, std::size_t n);
    /// acc += |x|
    void (*accumulate_abs)(const double* x, double* acc, std::size_t n);
    double (*max_abs)(const double* x, std::size_t n);
    /// Counts negative pivots of T - shift_j for the symmetric tridiagonal T
    /// with diagonal `diag` and squared off-diagonal `off2` (length n-1).
    void (*sturm_count4)(const double* diag, const double* off2, std::size_t n, const double* shifts, int* counts);
};

enum class Isa { Scalar, Avx2 };

bool available(Isa isa);
const KernelTable& kernels(Isa isa);
/// Best available table; QSUSY_SIMD=scalar in the environment forces the reference.
const KernelTable& active();
std::string isa_name(Isa isa);

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();
}  // namespace detail

}  // namespace qsusy::simd
