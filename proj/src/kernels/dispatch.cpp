#include <atomic>
#include <cstdlib>
#include <string_view>

#include "hazardlens/error.hpp"
#include "hazardlens/kernels.hpp"

namespace hazardlens::kernels {
namespace {

Backend detect() noexcept {
    if (const char* env = std::getenv("HAZARDLENS_SIMD")) {
        const std::string_view choice(env);
        if (choice == "scalar") return Backend::scalar;
        if (choice == "avx2" && avx2_available()) return Backend::avx2;
    }
    return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() noexcept {
    static std::atomic<Backend> backend{detect()};
    return backend;
}

}  // namespace

bool avx2_available() noexcept {
#if defined(HAZARDLENS_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    static const bool available = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return available;
#else
    return false;
#endif
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void force_backend(Backend backend) {
    if (backend == Backend::avx2 && !avx2_available()) {
        throw DomainError("force_backend: AVX2 is not available on this CPU/build");
    }
    current().store(backend, std::memory_order_relaxed);
}

std::string_view backend_name(Backend backend) noexcept {
    return backend == Backend::avx2 ? "avx2" : "scalar";
}

#if defined(HAZARDLENS_HAVE_AVX2)
#define HAZARDLENS_DISPATCH(fn, ...)                                                     \
    (active_backend() == Backend::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define HAZARDLENS_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void polynomial_eval(std::span<const double> coeffs, std::span<const double> t,
                     std::span<double> out) {
    if (out.size() < t.size()) throw DomainError("polynomial_eval: output span too small");
    HAZARDLENS_DISPATCH(polynomial_eval, coeffs, t, out);
}

void exp_neg_scaled(double scale, std::span<const double> x, std::span<double> out) {
    if (out.size() < x.size()) throw DomainError("exp_neg_scaled: output span too small");
    HAZARDLENS_DISPATCH(exp_neg_scaled, scale, x, out);
}

Moments moments(std::span<const double> x) { return HAZARDLENS_DISPATCH(moments, x); }

#undef HAZARDLENS_DISPATCH

}  // namespace hazardlens::kernels
