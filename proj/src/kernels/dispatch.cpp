#include <atomic>
#include <cstdlib>
#include <string>

#include "dualcorr/kernels.hpp"

namespace dualcorr::kernels {

#ifndef DUALCORR_BUILD_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

bool cpu_supports_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const KernelTable* resolve_default() {
    if (const char* env = std::getenv("DUALCORR_KERNELS"); env && std::string(env) == "scalar")
        return &scalar_table();
    if (const KernelTable* t = avx2_table(); t && cpu_supports_avx2()) return t;
    return &scalar_table();
}

std::atomic<const KernelTable*>& selected() {
    static std::atomic<const KernelTable*> s{resolve_default()};
    return s;
}

}  // namespace

const KernelTable& active() { return *selected().load(std::memory_order_acquire); }

bool set_backend(Backend b) {
    if (b == Backend::scalar) {
        selected().store(&scalar_table(), std::memory_order_release);
        return true;
    }
    const KernelTable* t = avx2_table();
    if (!t || !cpu_supports_avx2()) return false;
    selected().store(t, std::memory_order_release);
    return true;
}

std::string_view backend_name() { return active().name; }

}  // namespace dualcorr::kernels
