#pragma once

// Batched inner loops with a scalar reference implementation and an AVX2
// variant. The active backend is chosen once at startup from CPUID and can be
// pinned with HAZARDLENS_SIMD=scalar|avx2 or force_backend().

#include <cstddef>
#include <span>
#include <string_view>

namespace hazardlens::kernels {

enum class Backend { scalar, avx2 };

struct Moments {
    double mean = 0.0;
    double sum_sq_dev = 0.0;  // sum of (x - mean)^2
};

bool avx2_available() noexcept;
Backend active_backend() noexcept;
void force_backend(Backend backend);
std::string_view backend_name(Backend backend) noexcept;

// out[i] = sum_j coeffs[j] * t[i]^j, Horner order, coefficients ascending.
void polynomial_eval(std::span<const double> coeffs, std::span<const double> t,
                     std::span<double> out);

// out[i] = exp(-scale * x[i]); survival from cumulative hazard.
void exp_neg_scaled(double scale, std::span<const double> x, std::span<double> out);

// Two-pass mean and centred sum of squares.
Moments moments(std::span<const double> x);

namespace scalar {
void polynomial_eval(std::span<const double> coeffs, std::span<const double> t,
                     std::span<double> out);
void exp_neg_scaled(double scale, std::span<const double> x, std::span<double> out);
Moments moments(std::span<const double> x);
}  // namespace scalar

namespace avx2 {
// Callers must check avx2_available() first.
void polynomial_eval(std::span<const double> coeffs, std::span<const double> t,
                     std::span<double> out);
void exp_neg_scaled(double scale, std::span<const double> x, std::span<double> out);
Moments moments(std::span<const double> x);
}  // namespace avx2

}  // namespace hazardlens::kernels
