// Compiled with -mavx2 -mfma -ffp-contract=off. Only reached through the
// dispatcher after a CPUID check.

#include <immintrin.h>

#include <array>
#include <cstdint>

#include "hazardlens/kernels.hpp"

namespace hazardlens::kernels::avx2 {
namespace {

constexpr std::size_t kLanes = 4;

// exp(y) for a vector of doubles: y = n ln2 + r with |r| <= ln2/2, degree-13
// Taylor polynomial for e^r, then scaling by 2^n split into two factors so
// that results in the subnormal range round once.
__m256d exp_pd(__m256d y) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180559945286227e-01);
    const __m256d ln2_lo = _mm256_set1_pd(2.31904681384629955842e-17);
    const __m256d hi_cut = _mm256_set1_pd(709.782712893384);
    const __m256d lo_cut = _mm256_set1_pd(-745.1332191019412);

    const __m256d nan_mask = _mm256_cmp_pd(y, y, _CMP_UNORD_Q);
    const __m256d over_mask = _mm256_cmp_pd(y, hi_cut, _CMP_GT_OQ);
    const __m256d under_mask = _mm256_cmp_pd(y, lo_cut, _CMP_LT_OQ);
    const __m256d x = _mm256_max_pd(_mm256_min_pd(y, hi_cut), lo_cut);

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);

    static constexpr std::array<double, 14> inv_factorial = {
        1.0,
        1.0,
        1.0 / 2.0,
        1.0 / 6.0,
        1.0 / 24.0,
        1.0 / 120.0,
        1.0 / 720.0,
        1.0 / 5040.0,
        1.0 / 40320.0,
        1.0 / 362880.0,
        1.0 / 3628800.0,
        1.0 / 39916800.0,
        1.0 / 479001600.0,
        1.0 / 6227020800.0};
    __m256d p = _mm256_set1_pd(inv_factorial[13]);
    for (int k = 12; k >= 0; --k) {
        p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(inv_factorial[static_cast<std::size_t>(k)]));
    }

    const __m256d n1 = _mm256_floor_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)));
    const __m256d n2 = _mm256_sub_pd(n, n1);
    const __m256d magic = _mm256_set1_pd(6755399441055744.0);  // 1.5 * 2^52
    const __m256i magic_bits = _mm256_castpd_si256(magic);
    const __m256i bias = _mm256_set1_epi64x(1023);
    auto pow2 = [&](__m256d k) {
        const __m256i ki = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(k, magic)), magic_bits);
        return _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(ki, bias), 52));
    };
    __m256d result = _mm256_mul_pd(_mm256_mul_pd(p, pow2(n1)), pow2(n2));

    result = _mm256_blendv_pd(result, _mm256_set1_pd(__builtin_inf()), over_mask);
    result = _mm256_blendv_pd(result, _mm256_setzero_pd(), under_mask);
    result = _mm256_blendv_pd(result, y, nan_mask);
    return result;
}

double horizontal_sum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

__m256d horner(std::span<const double> coeffs, __m256d t) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = coeffs.size(); j-- > 0;) {
        acc = _mm256_add_pd(_mm256_mul_pd(acc, t), _mm256_set1_pd(coeffs[j]));
    }
    return acc;
}

}  // namespace

void polynomial_eval(std::span<const double> coeffs, std::span<const double> t,
                     std::span<double> out) {
    const std::size_t n = t.size();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        _mm256_storeu_pd(out.data() + i, horner(coeffs, _mm256_loadu_pd(t.data() + i)));
    }
    if (i < n) {
        alignas(32) std::array<double, kLanes> buf{};
        for (std::size_t k = 0; i + k < n; ++k) buf[k] = t[i + k];
        _mm256_store_pd(buf.data(), horner(coeffs, _mm256_load_pd(buf.data())));
        for (std::size_t k = 0; i + k < n; ++k) out[i + k] = buf[k];
    }
}

void exp_neg_scaled(double scale, std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size();
    const __m256d neg_scale = _mm256_set1_pd(-scale);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d y = _mm256_mul_pd(neg_scale, _mm256_loadu_pd(x.data() + i));
        _mm256_storeu_pd(out.data() + i, exp_pd(y));
    }
    if (i < n) {
        alignas(32) std::array<double, kLanes> buf{};
        for (std::size_t k = 0; i + k < n; ++k) buf[k] = x[i + k];
        _mm256_store_pd(buf.data(), exp_pd(_mm256_mul_pd(neg_scale, _mm256_load_pd(buf.data()))));
        for (std::size_t k = 0; i + k < n; ++k) out[i + k] = buf[k];
    }
}

Moments moments(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x.data() + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x.data() + i + kLanes));
    }
    double sum = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) sum += x[i];
    const double mean = sum / static_cast<double>(n);

    const __m256d vmean = _mm256_set1_pd(mean);
    acc0 = _mm256_setzero_pd();
    acc1 = _mm256_setzero_pd();
    i = 0;
    for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), vmean);
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i + kLanes), vmean);
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
    }
    double ss = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        ss += d * d;
    }
    return {mean, ss};
}

}  // namespace hazardlens::kernels::avx2
