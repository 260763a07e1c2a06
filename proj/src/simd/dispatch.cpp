#include <cstdlib>
#include <cstring>

#include "qsusy/errors.hpp"
#include "qsusy/simd/kernels.hpp"

namespace qsusy::simd {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

}  // namespace

bool available(Isa isa) {
    if (isa == Isa::Scalar) return true;
    return detail::avx2_table() != nullptr && cpu_has_avx2();
}

const KernelTable& kernels(Isa isa) {
    if (!available(isa)) throw PreconditionError("kernel variant " + isa_name(isa) + " is not available");
    if (isa == Isa::Avx2) return *detail::avx2_table();
    return detail::scalar_table();
}

const KernelTable& active() {
    static const KernelTable* chosen = [] {
        const char* env = std::getenv("QSUSY_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return &detail::scalar_table();
        return available(Isa::Avx2) ? detail::avx2_table() : &detail::scalar_table();
    }();
    return *chosen;
}

std::string isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace qsusy::simd
